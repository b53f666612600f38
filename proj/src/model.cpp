#include "stefanlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefanlab {

double InitialProfile::value_at(double xq) const {
    if (x.empty() || xq < x.front() || xq > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    if (it == x.begin()) return phi.front();
    if (it == x.end()) return phi.back();
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double x0 = x[i - 1], x1 = x[i];
    const double w = (xq - x0) / (x1 - x0);
    return (1.0 - w) * phi[i - 1] + w * phi[i];
}

double InitialProfile::l1_norm() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        acc += 0.5 * (phi[i] + phi[i - 1]) * (x[i] - x[i - 1]);
    return acc;
}

double InitialProfile::linf_norm() const {
    double m = 0.0;
    for (double v : phi) m = std::max(m, std::abs(v));
    return m;
}

void ProblemSpec::validate(bool for_run) const {
    if (!(p > 1.0)) throw invalid_spec_error("p must exceed 1");
    if (!(s0 > 0.0)) throw invalid_spec_error("s0 must be positive");
    if (for_run && !(lambda > 0.0)) throw invalid_spec_error("lambda must be positive for a run");
    if (lambda < 0.0) throw invalid_spec_error("lambda must be nonnegative");
    if (bc.kind == BcMode::Kind::DirichletConstant && bc.u0 < 0.0)
        throw invalid_spec_error("Dirichlet boundary value must be nonnegative");
    if (profile.kind == InitialProfileSpec::Kind::Linear && !(profile.amplitude > 0.0))
        throw invalid_spec_error("linear profile amplitude must be positive");
}

InitialProfile make_initial_linear(double s0, double amplitude) {
    if (!(s0 > 0.0)) throw invalid_spec_error("make_initial_linear: s0 must be positive");
    if (!(amplitude > 0.0)) throw invalid_spec_error("make_initial_linear: amplitude must be positive");
    InitialProfile prof;
    prof.x = {0.0, s0};
    prof.phi = {amplitude * s0, 0.0};
    prof.lipschitz_bound = amplitude;
    prof.monotone = true;
    return prof;
}

std::vector<std::string> validate_profile(const InitialProfile& profile, double s0) {
    std::vector<std::string> violations;
    if (profile.x.size() < 2 || profile.x.size() != profile.phi.size()) {
        violations.push_back("malformed sample arrays");
        return violations;
    }
    if (profile.x.front() != 0.0) violations.push_back("abscissae must start at 0");
    if (std::abs(profile.x.back() - s0) > 1e-12 * std::max(1.0, s0))
        violations.push_back("abscissae must end at s0");
    for (std::size_t i = 1; i < profile.x.size(); ++i)
        if (!(profile.x[i] > profile.x[i - 1])) {
            violations.push_back("abscissae not strictly increasing");
            break;
        }
    bool negative = false;
    for (double v : profile.phi) negative = negative || (v < 0.0);
    if (negative) violations.push_back("negativity");
    if (profile.phi.back() != 0.0) violations.push_back("endpoint nonzero");
    if (profile.linf_norm() == 0.0) violations.push_back("identically zero");
    // Slope of the pw-linear interpolant against the declared bound.
    double max_slope = 0.0;
    for (std::size_t i = 1; i < profile.x.size(); ++i)
        max_slope = std::max(max_slope, std::abs(profile.phi[i] - profile.phi[i - 1]) /
                                            (profile.x[i] - profile.x[i - 1]));
    if (max_slope > profile.lipschitz_bound * (1.0 + 1e-12))
        violations.push_back("Lipschitz bound exceeded");
    return violations;
}

InitialProfile scale_profile(const InitialProfile& profile, double lambda) {
    if (!(lambda > 0.0)) throw invalid_spec_error("scale_profile: lambda must be positive");
    InitialProfile out = profile;
    for (double& v : out.phi) v *= lambda;
    out.lipschitz_bound *= lambda;
    return out;
}

InitialProfile realize_profile(const InitialProfileSpec& spec, double s0) {
    if (spec.kind == InitialProfileSpec::Kind::Linear)
        return make_initial_linear(s0, spec.amplitude);
    InitialProfile prof = spec.samples;
    prof.monotone = true;
    for (std::size_t i = 1; i < prof.phi.size(); ++i)
        prof.monotone = prof.monotone && (prof.phi[i] <= prof.phi[i - 1]);
    return prof;
}

}  // namespace stefanlab
