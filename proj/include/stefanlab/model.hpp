#ifndef STEFANLAB_MODEL_HPP
#define STEFANLAB_MODEL_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace stefanlab {

// Piecewise-linear initial datum phi on [0, s0], phi(s0) = 0.
struct InitialProfile {
    std::vector<double> x;    // 0 = x[0] < ... < x[K] = s0
    std::vector<double> phi;  // phi[k] >= 0
    double lipschitz_bound = 0.0;
    bool monotone = false;    // true iff samples are nonincreasing

    double value_at(double xq) const;  // linear interpolation, 0 outside [x0, xK]
    double l1_norm() const;            // trapezoid (exact for pw-linear data)
    double linf_norm() const;
    double domain_length() const { return x.empty() ? 0.0 : x.back(); }
};

struct InitialProfileSpec {
    enum class Kind { Linear, Samples };
    Kind kind = Kind::Linear;
    double amplitude = 1.0;   // Linear: phi(x) = amplitude * (s0 - x)
    InitialProfile samples;   // Samples
};

struct BcMode {
    enum class Kind { NonlinearFlux, DirichletConstant, NeumannZero };
    Kind kind = Kind::NonlinearFlux;
    double u0 = 0.0;  // DirichletConstant boundary value

    static BcMode nonlinear_flux() { return {Kind::NonlinearFlux, 0.0}; }
    static BcMode dirichlet(double u0) { return {Kind::DirichletConstant, u0}; }
    static BcMode neumann_zero() { return {Kind::NeumannZero, 0.0}; }
};

struct ProblemSpec {
    double p = 3.0;        // flux exponent, > 1
    double s0 = 1.0;       // initial interval length, > 0
    double lambda = 1.0;   // amplitude scale applied to the profile
    InitialProfileSpec profile;
    BcMode bc;

    // Throws std::invalid_argument on violated invariants.
    void validate(bool for_run = true) const;
};

class invalid_spec_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

InitialProfile make_initial_linear(double s0, double amplitude);

// All violated admissibility conditions (empty = ok).
std::vector<std::string> validate_profile(const InitialProfile& profile, double s0);

InitialProfile scale_profile(const InitialProfile& profile, double lambda);

// Realize a profile spec as samples on [0, s0].
InitialProfile realize_profile(const InitialProfileSpec& spec, double s0);

}  // namespace stefanlab

#endif
