#ifndef STEFANLAB_CLI_HPP
#define STEFANLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "stefanlab/classifier.hpp"
#include "stefanlab/config.hpp"
#include "stefanlab/diagnostics.hpp"

namespace stefanlab {

// Exit codes: blow-up is a successful scientific outcome, not an error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitConfigError = 4;
inline constexpr int kExitIoError = 5;

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
std::vector<DiagnosticsRecord> read_trajectory_csv(std::istream& in);

nlohmann::json classification_to_json(const ClassificationReport& report);

struct VerifyCheck {
    std::string name;
    bool applicable = true;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

// Identity suite at the config's resolution: mass balance, energy identity,
// energy lower bound, supersolution containment, similarity-solution match.
VerifyReport verify_identities(const RunConfig& config);

int cmd_simulate(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_sweep(const RunConfig& config, const std::vector<double>& lambdas, int jobs);
int cmd_bisect(const RunConfig& config, double lambda_lo, double lambda_hi, double tol);
int cmd_convergence(const RunConfig& config, int levels);
int cmd_selfsimilar(double u0, double tol, const std::string& json_path);

}  // namespace stefanlab

#endif
