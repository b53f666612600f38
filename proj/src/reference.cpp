#include "stefanlab/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace stefanlab {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

double similarity_integral(double A) { return kSqrtPi * std::erf(0.5 * A); }

double similarity_boundary_value(double A) {
    return 0.5 * A * std::exp(0.25 * A * A) * similarity_integral(A);
}

SimilarityConstant neumann_similarity_A(double u0, double tol) {
    if (u0 < 0.0) throw std::invalid_argument("neumann_similarity_A: u0 must be nonnegative");
    if (!(tol > 0.0)) throw std::invalid_argument("neumann_similarity_A: tol must be positive");
    SimilarityConstant sc;
    sc.u0 = u0;
    if (u0 == 0.0) return sc;
    // f is strictly increasing with f(0)=0; expand the bracket then bisect.
    double lo = 0.0, hi = 1.0;
    while (similarity_boundary_value(hi) < u0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 0.5 * tol * std::max(1.0, lo); ++i) {
        const double mid = 0.5 * (lo + hi);
        (similarity_boundary_value(mid) < u0 ? lo : hi) = mid;
    }
    sc.A = 0.5 * (lo + hi);
    sc.residual = similarity_boundary_value(sc.A) - u0;
    return sc;
}

double dirichlet_similarity_profile(const SimilarityConstant& sc, double t, double x) {
    if (!(t > 0.0)) throw std::invalid_argument("dirichlet_similarity_profile: t must be positive");
    if (x < 0.0 || x > sc.A * std::sqrt(t)) return 0.0;
    const double eta = x / std::sqrt(t);
    return sc.u0 * (1.0 - similarity_integral(eta) / similarity_integral(sc.A));
}

double dirichlet_similarity_profile(double u0, double t, double x) {
    return dirichlet_similarity_profile(neumann_similarity_A(u0, 1e-12), t, x);
}

double DecaySupersolution::sigma(double t) const { return 2.0 * s0 * (2.0 - std::exp(-alpha * t)); }

double DecaySupersolution::sigma_dot(double t) const { return 2.0 * s0 * alpha * std::exp(-alpha * t); }

double DecaySupersolution::value(double t, double x) const {
    const double sig = sigma(t);
    if (x < 0.0 || x > sig) return 0.0;
    return epsilon * std::exp(-alpha * t) * V(x / sig);
}

double DecaySupersolution::value_x(double t, double x) const {
    const double sig = sigma(t);
    const double y = x / sig;
    return epsilon * std::exp(-alpha * t) * (-2.0 * y - 1.0) / sig;
}

double DecaySupersolution::interior_margin(double t, double x) const {
    const double sig = sigma(t);
    const double y = x / sig;
    const double e = epsilon * std::exp(-alpha * t);
    const double vt = e * (-alpha * V(y) - x * sigma_dot(t) / (sig * sig) * (-2.0 * y - 1.0));
    const double vxx = e * (-2.0) / (sig * sig);
    return vt - vxx;
}

double DecaySupersolution::flux_margin(double t) const {
    const double e = epsilon * std::exp(-alpha * t);
    return e / sigma(t) - std::pow(2.0 * e, p);
}

double DecaySupersolution::stefan_margin(double t) const {
    return sigma_dot(t) + value_x(t, sigma(t));
}

double DecaySupersolution::front_value(double t) const {
    return epsilon * std::exp(-alpha * t) * V(1.0);
}

DecaySupersolution decay_supersolution(double s0, double p) {
    if (!(s0 > 0.0) || !(p > 1.0))
        throw std::invalid_argument("decay_supersolution: need s0 > 0 and p > 1");
    DecaySupersolution sup;
    sup.s0 = s0;
    sup.p = p;
    sup.epsilon = std::min(1.0 / 24.0, std::pow(2.0, -(p + 2.0) / (p - 1.0)) *
                                           std::pow(s0, -1.0 / (p - 1.0)));
    sup.alpha = 1.0 / (24.0 * s0 * s0);  // inside the admissible band [1/(32 s0^2), 1/(16 s0^2)]
    return sup;
}

double decay_smallness_delta(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("decay_smallness_delta: p must exceed 1");
    return 1.25 * std::min(1.0 / 24.0, std::pow(2.0, -(p + 2.0) / (p - 1.0)));
}

}  // namespace stefanlab
