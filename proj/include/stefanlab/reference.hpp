#ifndef STEFANLAB_REFERENCE_HPP
#define STEFANLAB_REFERENCE_HPP

namespace stefanlab {

// Front-growth constant for the constant-Dirichlet Stefan problem:
// sigma(t) ~ A sqrt(t) where u0 = (A/2) e^{A^2/4} \int_0^A e^{-tau^2/4} dtau.
struct SimilarityConstant {
    double u0 = 0.0;
    double A = 0.0;
    double residual = 0.0;
};

// (A/2) e^{A^2/4} \int_0^A e^{-tau^2/4} dtau, evaluated via erf.
double similarity_boundary_value(double A);

// \int_0^A e^{-tau^2/4} dtau = sqrt(pi) erf(A/2).
double similarity_integral(double A);

SimilarityConstant neumann_similarity_A(double u0, double tol);

// Classical similarity solution with z(t,0)=u0 and front A*sqrt(t); 0 beyond the front.
double dirichlet_similarity_profile(double u0, double t, double x);
double dirichlet_similarity_profile(const SimilarityConstant& sc, double t, double x);

// Explicit decaying supersolution certifying global existence for small data:
// v(t,x) = eps e^{-alpha t} V(x/sigma(t)), sigma(t) = 2 s0 (2 - e^{-alpha t}),
// V(y) = -y^2 - y + 2.
struct DecaySupersolution {
    double s0 = 1.0;
    double p = 3.0;
    double epsilon = 0.0;
    double alpha = 0.0;

    double sigma(double t) const;
    double sigma_dot(double t) const;
    static double V(double y) { return -y * y - y + 2.0; }
    double value(double t, double x) const;       // v(t,x), 0 beyond sigma(t)
    double value_x(double t, double x) const;     // d v / dx

    // Differential-inequality margins; all must be >= 0 (to roundoff) on the domain.
    double interior_margin(double t, double x) const;  // dv/dt - d2v/dx2
    double flux_margin(double t) const;                // -v_x(t,0) - v(t,0)^p
    double stefan_margin(double t) const;              // sigma'(t) + v_x(t,sigma(t))
    double front_value(double t) const;                // v(t,sigma(t)), should be 0
};

DecaySupersolution decay_supersolution(double s0, double p);

// Smallness threshold: ||phi||_Linf <= delta(p) min{1, s0^{-1/(p-1)}} certifies
// global existence with exponential decay.
double decay_smallness_delta(double p);

}  // namespace stefanlab

#endif
