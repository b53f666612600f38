#ifndef STEFANLAB_CLASSIFIER_HPP
#define STEFANLAB_CLASSIFIER_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/diagnostics.hpp"
#include "stefanlab/solver.hpp"

namespace stefanlab {

enum class Verdict { ExponentialDecay, SlowDecay, BlowUp, Undetermined };

const char* to_string(Verdict verdict);

struct ClassifierRules {
    double rate_min = 1e-2;          // per 1/s0^2, minimum decay slope of log u0
    double front_plateau_tol = 0.01; // relative front increase over the last half
    double front_growth_min = 0.2;
    std::size_t min_records = 50;
};

struct BlowupFit {
    bool ok = false;
    double t_blowup = 0.0;
    double exponent = 0.0;        // gamma in u0 ~ (T-t)^{-gamma}
    double exponent_ratio = 0.0;  // gamma / (1/(2(p-1)))
    double fit_residual = 0.0;    // rms residual of the log-log fit
    std::string note;
};

struct GrowthFit {
    bool ok = false;
    double beta = 0.0;            // slope of log s vs log t over the last decade
    double beta_stderr = 0.0;
    double flux_ratio_begin = 0.0;  // s / \int u0^p at the start of the last decade
    double flux_ratio_end = 0.0;    // ... at the final record
    std::string note;
};

struct ClassificationReport {
    Verdict verdict = Verdict::Undetermined;
    std::optional<double> decay_rate;       // alpha > 0 for exponential decay
    std::optional<BlowupFit> blowup;
    std::optional<double> front_limit;
    std::optional<GrowthFit> growth;
    std::optional<double> certificate_time;
    std::vector<std::string> flags;
};

ClassificationReport classify(const Trajectory& traj, const ClassifierRules& rules);

BlowupFit estimate_blowup(const Trajectory& traj, double p);

GrowthFit fit_growth_exponent(const Trajectory& traj);

class bad_bracket_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct BisectResult {
    double lambda_lo = 0.0;  // last non-blow-up lambda
    double lambda_hi = 0.0;  // first blow-up lambda
    std::vector<std::pair<double, Verdict>> log;
    std::vector<std::string> flags;
};

// Generic bisection on a blow-up predicate; the bracket always contains a flip.
BisectResult bisect_predicate(const std::function<bool(double)>& blows_up, double lambda_lo,
                              double lambda_hi, double tol);

BisectResult bisect_lambda(const ProblemSpec& spec_template, const NumericsConfig& numerics,
                           const ClassifierRules& rules, double lambda_lo, double lambda_hi,
                           double tol);

struct LowerBracket {
    bool computable = false;
    std::optional<double> certified_decay_max;  // largest lambda with a fired certificate
    std::optional<double> slow_decay_min;       // smallest lambda classified SlowDecay
    std::vector<std::pair<double, Verdict>> log;
    std::vector<std::string> flags;
};

LowerBracket bracket_lambda_lower(const ProblemSpec& spec_template,
                                  const NumericsConfig& numerics, const ClassifierRules& rules,
                                  const std::vector<double>& lambda_grid);

struct OrderingReport {
    bool computable = false;
    bool ordered = false;
    double max_violation_s = 0.0;
    double max_violation_u = 0.0;
    double violation_time = 0.0;
    double violation_x = 0.0;
    std::size_t common_checkpoints = 0;
};

// Comparison-principle audit: the larger-lambda run must dominate in both s and u.
OrderingReport compare_runs(const Trajectory& traj_small, const Trajectory& traj_big,
                            double eps_ord);

}  // namespace stefanlab

#endif
