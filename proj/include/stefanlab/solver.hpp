#ifndef STEFANLAB_SOLVER_HPP
#define STEFANLAB_SOLVER_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stefanlab/diagnostics.hpp"
#include "stefanlab/model.hpp"

namespace stefanlab {

// One time slice on the boundary-immobilized grid y_j = j/N, v_j ~ u(t, y_j s).
struct SolverState {
    double t = 0.0;
    double s = 0.0;
    double sdot = 0.0;
    std::vector<double> v;
    double dt_next = 0.0;
    long step_count = 0;
    int newton_iters_last = 0;

    int n() const { return static_cast<int>(v.size()) - 1; }
};

enum class AdvectionScheme { Upwind, Centered };
enum class FrontCoupling { Picard, MonolithicNewton };

struct MmsConfig {
    std::function<double(double, double)> source;          // f(t, x)
    std::function<double(double)> boundary_value;          // Dirichlet value at x = 0
    bool freeze_front = true;
};

struct StepOptions {
    double newton_tol = 1e-12;
    int newton_max_iters = 50;
    double theta = 1.0;  // 1 = implicit Euler, 0.5 = trapezoidal
    AdvectionScheme advection = AdvectionScheme::Upwind;
    FrontCoupling front_coupling = FrontCoupling::Picard;
    int picard_max_sweeps = 25;
    double picard_tol = 1e-10;  // front residual tolerance, relative to s0
    std::optional<MmsConfig> mms;
};

struct PdeCoefficients {
    double diffusion = 0.0;          // 1/s^2
    std::vector<double> advection;   // a_j = y_j * sdot / s
};

PdeCoefficients transform_pde_coefficients(const SolverState& state);

enum class StepError { NewtonDiverged, PositivityLost };

struct StepFailure {
    StepError code;
    std::string detail;
};

using StepResult = std::variant<SolverState, StepFailure>;

StepResult step(const SolverState& state, double dt, const ProblemSpec& spec,
                const StepOptions& opts);

struct StepControl {
    double dt_min = 1e-12;
    double dt_max = 1e-3;
    double c_safety = 0.5;
    double c_bu = 0.1;
    double u_floor = 1e-8;
    double p = 3.0;
};

double adapt_dt(const SolverState& state, const StepControl& ctrl);

struct NumericsConfig {
    int n = 400;
    double theta = 1.0;
    double dt_max = 0.0;   // 0 -> default 1e-3 * s0^2
    double dt_min = 1e-12;
    double u_max = 1e6;
    double horizon = 1.0;
    double c_safety = 0.5;
    double c_bu = 0.1;
    double u_floor = 1e-8;
    double record_interval = 0.01;
    std::vector<double> checkpoint_times;
    bool stop_on_certificate = true;
    int max_retries = 20;
    AdvectionScheme advection = AdvectionScheme::Upwind;
    FrontCoupling front_coupling = FrontCoupling::Picard;
    int picard_max_sweeps = 25;
    double picard_tol = 1e-10;
    double newton_tol = 1e-12;
    int newton_max_iters = 50;
    std::optional<MmsConfig> mms;
};

SolverState initial_state(const ProblemSpec& spec, int n);

Trajectory run(const ProblemSpec& spec, const NumericsConfig& numerics);

}  // namespace stefanlab

#endif
