#ifndef STEFANLAB_DIAGNOSTICS_HPP
#define STEFANLAB_DIAGNOSTICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "stefanlab/model.hpp"

namespace stefanlab {

enum class RunStatus { ReachedHorizon, BlowUpDetected, DecayCertified, NumericalFailure };

const char* to_string(RunStatus status);

struct DiagnosticsRecord {
    double t = 0.0;
    double s = 0.0;
    double sdot = 0.0;
    double u0 = 0.0;      // boundary value u(t,0)
    double linf = 0.0;
    double l1 = 0.0;
    double energy = 0.0;
    double dt = 0.0;      // accepted step at record time
    int newton_iters = 0;

    // Per-step accumulators carried along the run (not part of the CSV row).
    double flux_integral = 0.0;   // \int_0^t u(tau,0)^p dtau
    double sdot3_integral = 0.0;  // \int_0^t (s')^3 dtau
    double dissipation = 0.0;     // \int_0^t \int |du/dt|^2 dx dtau
};

struct Checkpoint {
    double t = 0.0;
    double s = 0.0;
    std::vector<double> v;        // values on the uniform immobilized grid y_j = j/N
    double flux_integral = 0.0;
    double sdot3_integral = 0.0;
    double dissipation = 0.0;
};

struct Trajectory {
    ProblemSpec spec;
    std::vector<DiagnosticsRecord> records;
    std::vector<Checkpoint> checkpoints;
    RunStatus status = RunStatus::ReachedHorizon;
    double t_final = 0.0;
    double phi_l1 = 0.0;                       // ||lambda*phi||_L1 at t=0
    std::optional<double> certificate_time;    // first time decay_certificate fired
    std::optional<double> failure_time;        // NumericalFailure only
};

// E(s,u) = 1/2 \int |du/dx|^2 dx - u(0)^{p+1}/(p+1) on the immobilized grid.
// Centered differences interior, 3-point one-sided at both boundaries.
double energy(std::span<const double> v, double s, double p);

double mass_balance_residual(const Trajectory& traj, std::size_t k);

// |LHS - RHS| of the dissipation identity between checkpoints k1 <= k2.
std::optional<double> energy_identity_residual(const Trajectory& traj, std::size_t k1,
                                               std::size_t k2);

struct BlowupCriterion {
    bool predicts_blowup = false;  // advisory; assumes the Lipschitz regularity hypothesis
    double energy = 0.0;
    double threshold = 0.0;
    double margin = 0.0;           // threshold - energy
};

BlowupCriterion blowup_criterion(double s0, const InitialProfile& profile, double p);

// (pi^2/256) l1^3 / (s + l1)^4; energies of global solutions must stay above this.
double energy_lower_bound(double l1, double s);
double energy_lower_bound(const DiagnosticsRecord& record);

bool decay_certificate(const DiagnosticsRecord& record, double p);
bool decay_certificate(double linf, double s, double p);

struct RescaledProfile {
    double lambda = 0.0;
    std::vector<double> y;
    std::vector<double> value;  // lambda^{1/(p-1)} u(t_hat, lambda * y)
};

std::optional<RescaledProfile> rescaled_profile(const Trajectory& traj, double t_hat, double M,
                                                double p);

}  // namespace stefanlab

#endif
