#include "stefanlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stefanlab {

namespace {

// Thomas algorithm; lower/diag/upper indexed 0..n-1, overwrites rhs with the solution.
void solve_tridiag(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs1,
                   std::vector<double>& rhs2) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs1[i] -= m * rhs1[i - 1];
        rhs2[i] -= m * rhs2[i - 1];
    }
    rhs1[n - 1] /= diag[n - 1];
    rhs2[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs1[i] = (rhs1[i] - upper[i] * rhs1[i + 1]) / diag[i];
        rhs2[i] = (rhs2[i] - upper[i] * rhs2[i + 1]) / diag[i];
    }
}

// Spatial operator L v = v_yy / s^2 + a(y) v_y at interior node j.
double apply_operator(const std::vector<double>& v, int j, double h, double diffusion,
                      double a, AdvectionScheme adv) {
    const double vyy = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
    double vy;
    if (adv == AdvectionScheme::Centered)
        vy = (v[j + 1] - v[j - 1]) / (2.0 * h);
    else if (a >= 0.0)
        vy = (v[j + 1] - v[j]) / h;  // upwind: grid-relative transport is leftward
    else
        vy = (v[j] - v[j - 1]) / h;
    return diffusion * vyy + a * vy;
}

struct BoundarySolve {
    double beta = 0.0;
    int newton_iters = 0;
    bool ok = true;
    std::string detail;
};

// Solve beta^p = C beta + D for the boundary value, choosing the root continuous
// from the heat flow (the small root when two exist).
BoundarySolve solve_flux_boundary(double C, double D, double p, double beta_init,
                                  double tol, int max_iters) {
    BoundarySolve out;
    auto g = [&](double b) { return std::pow(b, p) - C * b - D; };
    auto gp = [&](double b) { return (b > 0.0 ? p * std::pow(b, p - 1.0) : 0.0) - C; };

    if (C <= 0.0) {
        out.ok = false;
        out.detail = "nonpositive boundary response coefficient";
        return out;
    }
    const double beta_star = std::pow(C / p, 1.0 / (p - 1.0));
    double lo, hi;
    if (D > 0.0) {
        // g(0) < 0 and g decreases to beta_star: unique root beyond beta_star.
        lo = beta_star;
        hi = std::max(2.0 * beta_star, 1.0);
        while (g(hi) < 0.0 && hi < 1e300) hi *= 2.0;
    } else {
        // g(0) >= 0; the physical root (if any) lies in [0, beta_star].
        if (g(beta_star) > 0.0) {
            out.ok = false;
            out.detail = "flux boundary equation has no root (blow-up within step)";
            return out;
        }
        lo = 0.0;
        hi = beta_star;
    }
    double b = std::clamp(beta_init, lo, hi);
    for (int it = 0; it < max_iters; ++it) {
        const double gb = g(b);
        const double scale = std::max(1.0, C * std::abs(b) + std::abs(D));
        if (std::abs(gb) <= tol * scale) {
            out.beta = b;
            out.newton_iters = it;
            return out;
        }
        if ((gb > 0.0) == (D > 0.0))
            hi = std::min(hi, b);
        else
            lo = std::max(lo, b);
        const double d = gp(b);
        double next = (d != 0.0) ? b - gb / d : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        b = next;
    }
    out.ok = false;
    out.detail = "boundary Newton did not converge";
    return out;
}

struct LinearSolveOut {
    std::vector<double> v;  // full grid 0..N
    double beta = 0.0;
    double sdot = 0.0;
    int newton_iters = 0;
    bool ok = true;
    std::string detail;
};

// One implicit solve at frozen front data (s_imp, sdot_imp).
LinearSolveOut implicit_solve(const SolverState& state, double dt, const ProblemSpec& spec,
                              const StepOptions& opts, const std::vector<double>& rhs_explicit,
                              double s_imp, double sdot_imp, double t_new) {
    LinearSolveOut out;
    const int n = state.n();
    const double h = 1.0 / n;
    const double theta = opts.theta;
    const double diffusion = 1.0 / (s_imp * s_imp);
    const std::size_t m = static_cast<std::size_t>(n - 1);  // unknowns v_1..v_{N-1}

    std::vector<double> lower(m), diag(m), upper(m), w(m), z(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const int j = static_cast<int>(i) + 1;
        const double a = (static_cast<double>(j) * h) * sdot_imp / s_imp;
        const double cd = dt * theta * diffusion / (h * h);
        double cl, cdg, cu;
        if (opts.advection == AdvectionScheme::Centered) {
            const double ca = dt * theta * a / (2.0 * h);
            cl = -cd + ca;
            cdg = 1.0 + 2.0 * cd;
            cu = -cd - ca;
        } else if (a >= 0.0) {
            const double ca = dt * theta * a / h;
            cl = -cd;
            cdg = 1.0 + 2.0 * cd + ca;
            cu = -cd - ca;
        } else {
            const double ca = dt * theta * a / h;
            cl = -cd + ca;
            cdg = 1.0 + 2.0 * cd - ca;
            cu = -cd;
        }
        lower[i] = cl;
        diag[i] = cdg;
        upper[i] = cu;
        w[i] = rhs_explicit[static_cast<std::size_t>(j)];
    }
    // Boundary parameters: v_0 = beta (unknown), v_N = 0.
    z[0] = -lower[0];  // response of the interior solve to beta = 1
    solve_tridiag(lower, diag, upper, w, z);

    const double w1 = w[0], w2 = (m > 1) ? w[1] : 0.0;
    const double z1 = z[0], z2 = (m > 1) ? z[1] : 0.0;

    double beta = 0.0;
    const BcMode::Kind bc = (opts.mms && opts.mms->boundary_value)
                                ? BcMode::Kind::DirichletConstant
                                : spec.bc.kind;
    switch (bc) {
        case BcMode::Kind::DirichletConstant:
            beta = (opts.mms && opts.mms->boundary_value) ? opts.mms->boundary_value(t_new)
                                                          : spec.bc.u0;
            break;
        case BcMode::Kind::NeumannZero: {
            // (-3 v0 + 4 v1 - v2) / (2h) = 0
            const double denom = 3.0 - 4.0 * z1 + z2;
            beta = (4.0 * w1 - w2) / denom;
            break;
        }
        case BcMode::Kind::NonlinearFlux: {
            // (3 v0 - 4 v1 + v2) / (2 h s) = v0^p
            const double C = (3.0 - 4.0 * z1 + z2) / (2.0 * h * s_imp);
            const double D = (-4.0 * w1 + w2) / (2.0 * h * s_imp);
            const BoundarySolve bs = solve_flux_boundary(C, D, spec.p, std::max(state.v[0], 0.0),
                                                         opts.newton_tol, opts.newton_max_iters);
            if (!bs.ok) {
                out.ok = false;
                out.detail = bs.detail;
                return out;
            }
            beta = bs.beta;
            out.newton_iters = bs.newton_iters;
            break;
        }
    }

    out.v.assign(static_cast<std::size_t>(n) + 1, 0.0);
    out.v[0] = beta;
    for (std::size_t i = 0; i < m; ++i) out.v[i + 1] = w[i] + beta * z[i];
    out.v[static_cast<std::size_t>(n)] = 0.0;
    out.beta = beta;
    // Stefan speed from the 3-point one-sided gradient at y = 1 (v_N = 0).
    out.sdot = (4.0 * out.v[static_cast<std::size_t>(n - 1)] -
                out.v[static_cast<std::size_t>(n - 2)]) /
               (2.0 * h * s_imp);
    return out;
}

}  // namespace

PdeCoefficients transform_pde_coefficients(const SolverState& state) {
    if (!(state.s > 0.0)) throw std::runtime_error("transform_pde_coefficients: corrupted state, s <= 0");
    PdeCoefficients c;
    c.diffusion = 1.0 / (state.s * state.s);
    const int n = state.n();
    c.advection.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        c.advection[static_cast<std::size_t>(j)] = (static_cast<double>(j) / n) * state.sdot / state.s;
    return c;
}

StepResult step(const SolverState& state, double dt, const ProblemSpec& spec,
                const StepOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (!(state.s > 0.0)) throw std::runtime_error("step: corrupted state, s <= 0");
    const int n = state.n();
    const double h = 1.0 / n;
    const double theta = opts.theta;
    const double t_new = state.t + dt;
    const bool freeze = opts.mms && opts.mms->freeze_front;

    // Explicit part evaluated with old-time coefficients.
    std::vector<double> rhs(static_cast<std::size_t>(n) + 1, 0.0);
    const double diffusion_old = 1.0 / (state.s * state.s);
    for (int j = 1; j < n; ++j) {
        const double a = (static_cast<double>(j) * h) * (freeze ? 0.0 : state.sdot) / state.s;
        double r = state.v[static_cast<std::size_t>(j)];
        if (theta < 1.0)
            r += dt * (1.0 - theta) *
                 apply_operator(state.v, j, h, diffusion_old, a, opts.advection);
        if (opts.mms && opts.mms->source) {
            const double x = static_cast<double>(j) * h * state.s;
            r += dt * (theta * opts.mms->source(t_new, x) +
                       (1.0 - theta) * opts.mms->source(state.t, x));
        }
        rhs[static_cast<std::size_t>(j)] = r;
    }

    double s_new = state.s;
    double sdot_new = freeze ? 0.0 : state.sdot;
    LinearSolveOut sol;

    if (freeze) {
        sol = implicit_solve(state, dt, spec, opts, rhs, state.s, 0.0, t_new);
        if (!sol.ok) return StepFailure{StepError::NewtonDiverged, sol.detail};
        sdot_new = 0.0;
    } else if (opts.front_coupling == FrontCoupling::Picard) {
        double s_imp = state.s + dt * state.sdot;
        double sdot_imp = state.sdot;
        bool converged = false;
        for (int sweep = 0; sweep < opts.picard_max_sweeps; ++sweep) {
            sol = implicit_solve(state, dt, spec, opts, rhs, s_imp, sdot_imp, t_new);
            if (!sol.ok) return StepFailure{StepError::NewtonDiverged, sol.detail};
            sdot_new = sol.sdot;
            s_new = state.s + dt * (theta * sdot_new + (1.0 - theta) * state.sdot);
            if (std::abs(s_new - s_imp) <= opts.picard_tol * spec.s0) {
                converged = true;
                break;
            }
            s_imp = s_new;
            sdot_imp = sdot_new;
        }
        if (!converged)
            return StepFailure{StepError::NewtonDiverged, "front Picard iteration did not converge"};
    } else {
        // Secant iteration on the scalar front residual F(s) = s_cand(s) - s.
        auto evaluate = [&](double s_imp) {
            const double sdot_imp = (s_imp - state.s) / dt;
            sol = implicit_solve(state, dt, spec, opts, rhs, s_imp, sdot_imp, t_new);
            if (!sol.ok) return std::numeric_limits<double>::quiet_NaN();
            sdot_new = sol.sdot;
            s_new = state.s + dt * (theta * sdot_new + (1.0 - theta) * state.sdot);
            return s_new - s_imp;
        };
        double sa = state.s + dt * state.sdot;
        double fa = evaluate(sa);
        if (std::isnan(fa)) return StepFailure{StepError::NewtonDiverged, sol.detail};
        bool converged = std::abs(fa) <= opts.picard_tol * spec.s0;
        double sb = sa + (std::abs(fa) > 0.0 ? fa : 1e-8 * spec.s0);
        for (int it = 0; !converged && it < opts.newton_max_iters; ++it) {
            const double fb = evaluate(sb);
            if (std::isnan(fb)) return StepFailure{StepError::NewtonDiverged, sol.detail};
            if (std::abs(fb) <= opts.picard_tol * spec.s0) {
                converged = true;
                break;
            }
            const double denom = fb - fa;
            double next = (denom != 0.0) ? sb - fb * (sb - sa) / denom : sb + fb;
            if (!(next > 0.0)) next = 0.5 * (sb + state.s);
            sa = sb;
            fa = fb;
            sb = next;
        }
        if (!converged)
            return StepFailure{StepError::NewtonDiverged, "monolithic front Newton did not converge"};
    }

    // Positivity: reject beyond roundoff, clamp roundoff-level undershoots.
    double linf = 0.0, vmin = 0.0;
    for (double v : sol.v) {
        linf = std::max(linf, std::abs(v));
        vmin = std::min(vmin, v);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (vmin < -10.0 * eps * std::max(linf, 1.0))
        return StepFailure{StepError::PositivityLost, "negative values after solve"};
    for (double& v : sol.v) v = std::max(v, 0.0);

    SolverState next;
    next.t = t_new;
    next.v = std::move(sol.v);
    next.sdot = sdot_new;
    next.newton_iters_last = sol.newton_iters;
    next.step_count = state.step_count + 1;
    if (!freeze && s_new < state.s) {
        // Monotonicity guard; genuine retreat (beyond tolerance) is a flagged clamp.
        next.s = state.s;
        next.sdot = 0.0;
    } else {
        next.s = freeze ? state.s : s_new;
    }
    next.dt_next = state.dt_next;
    return next;
}

double adapt_dt(const SolverState& state, const StepControl& ctrl) {
    const int n = state.n();
    const double dx = state.s / n;
    const double dt_cfl = 0.5 * dx * dx;
    const double u0 = std::max(state.v.empty() ? 0.0 : state.v[0], ctrl.u_floor);
    const double dt_bu = ctrl.c_bu * std::pow(u0, -2.0 * (ctrl.p - 1.0));
    const double dt = ctrl.c_safety * std::min(dt_cfl, dt_bu);
    return std::clamp(dt, ctrl.dt_min, ctrl.dt_max);
}

SolverState initial_state(const ProblemSpec& spec, int n) {
    spec.validate();
    const InitialProfile phi = realize_profile(spec.profile, spec.s0);
    SolverState state;
    state.s = spec.s0;
    state.v.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = spec.s0 * static_cast<double>(j) / n;
        state.v[static_cast<std::size_t>(j)] = spec.lambda * phi.value_at(x);
    }
    state.v[static_cast<std::size_t>(n)] = 0.0;
    return state;
}

namespace {

double l1_of(const std::vector<double>& v, double s) {
    const std::size_t n = v.size() - 1;
    double acc = 0.5 * (v[0] + v[n]);
    for (std::size_t j = 1; j < n; ++j) acc += v[j];
    return acc * s / static_cast<double>(n);
}

double linf_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

DiagnosticsRecord make_record(const SolverState& st, const ProblemSpec& spec, double dt) {
    DiagnosticsRecord r;
    r.t = st.t;
    r.s = st.s;
    r.sdot = st.sdot;
    r.u0 = st.v[0];
    r.linf = linf_of(st.v);
    r.l1 = l1_of(st.v, st.s);
    r.energy = energy(st.v, st.s, spec.p);
    r.dt = dt;
    r.newton_iters = st.newton_iters_last;
    return r;
}

}  // namespace

Trajectory run(const ProblemSpec& spec, const NumericsConfig& numerics) {
    spec.validate();
    Trajectory traj;
    traj.spec = spec;

    const double dt_max = numerics.dt_max > 0.0 ? numerics.dt_max : 1e-3 * spec.s0 * spec.s0;
    StepControl ctrl{numerics.dt_min, dt_max, numerics.c_safety,
                     numerics.c_bu, numerics.u_floor, spec.p};

    StepOptions opts;
    opts.newton_tol = numerics.newton_tol;
    opts.newton_max_iters = numerics.newton_max_iters;
    opts.theta = numerics.theta;
    opts.advection = numerics.advection;
    opts.front_coupling = numerics.front_coupling;
    opts.picard_max_sweeps = numerics.picard_max_sweeps;
    opts.picard_tol = numerics.picard_tol;
    opts.mms = numerics.mms;

    SolverState state = initial_state(spec, numerics.n);
    traj.phi_l1 = l1_of(state.v, state.s);

    std::vector<double> checkpoints = numerics.checkpoint_times;
    std::sort(checkpoints.begin(), checkpoints.end());
    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= 0.0) ++next_cp;

    double flux_acc = 0.0, sdot3_acc = 0.0, diss_acc = 0.0;

    auto snapshot_checkpoint = [&](const SolverState& st) {
        Checkpoint cp;
        cp.t = st.t;
        cp.s = st.s;
        cp.v = st.v;
        cp.flux_integral = flux_acc;
        cp.sdot3_integral = sdot3_acc;
        cp.dissipation = diss_acc;
        traj.checkpoints.push_back(std::move(cp));
    };

    auto push_record = [&](const SolverState& st, double dt) {
        DiagnosticsRecord r = make_record(st, spec, dt);
        r.flux_integral = flux_acc;
        r.sdot3_integral = sdot3_acc;
        r.dissipation = diss_acc;
        traj.records.push_back(r);
    };

    push_record(state, 0.0);
    if (next_cp < checkpoints.size() && checkpoints[next_cp] == 0.0) {
        snapshot_checkpoint(state);
        ++next_cp;
    }

    const double horizon = numerics.horizon;
    double next_record = numerics.record_interval;
    double dt_prev = dt_max;
    const int n = numerics.n;
    const double h = 1.0 / n;
    const double time_eps = 1e-12 * std::max(1.0, horizon);

    traj.status = RunStatus::ReachedHorizon;
    while (state.t < horizon - time_eps) {
        double dt = std::min(adapt_dt(state, ctrl), 2.0 * dt_prev);
        dt = std::min(dt, horizon - state.t);
        if (next_cp < checkpoints.size()) dt = std::min(dt, checkpoints[next_cp] - state.t);
        if (numerics.record_interval > 0.0) dt = std::min(dt, next_record - state.t);
        dt = std::max(dt, numerics.dt_min);

        SolverState accepted;
        bool ok = false;
        int retries = 0;
        std::string fail_detail;
        while (!ok) {
            StepResult res = step(state, dt, spec, opts);
            if (auto* st = std::get_if<SolverState>(&res)) {
                accepted = std::move(*st);
                ok = true;
            } else {
                fail_detail = std::get<StepFailure>(res).detail;
                if (++retries > numerics.max_retries) break;
                dt *= 0.5;
                if (dt < numerics.dt_min) dt = numerics.dt_min;
            }
        }
        if (!ok) {
            // A step that stays unsolvable at the dt floor while the boundary
            // value exceeds u_max is the discrete blow-up signature.
            if (state.v[0] >= numerics.u_max) {
                traj.status = RunStatus::BlowUpDetected;
            } else {
                traj.status = RunStatus::NumericalFailure;
                traj.failure_time = state.t;
            }
            push_record(state, dt);
            break;
        }

        // Incremental identity accumulators (per accepted step, trapezoid in time).
        const double u0_old = state.v[0], u0_new = accepted.v[0];
        flux_acc += 0.5 * dt * (std::pow(u0_old, spec.p) + std::pow(u0_new, spec.p));
        const double sd = (accepted.s - state.s) / dt;
        sdot3_acc += dt * sd * sd * sd;
        {
            const double sbar = 0.5 * (state.s + accepted.s);
            double acc = 0.0;
            for (int j = 0; j <= n; ++j) {
                const std::size_t k = static_cast<std::size_t>(j);
                const double vbar_y =
                    (j == 0)
                        ? (-3.0 * (state.v[0] + accepted.v[0]) + 4.0 * (state.v[1] + accepted.v[1]) -
                           (state.v[2] + accepted.v[2])) /
                              (4.0 * h)
                    : (j == n)
                        ? (3.0 * (state.v[k] + accepted.v[k]) -
                           4.0 * (state.v[k - 1] + accepted.v[k - 1]) +
                           (state.v[k - 2] + accepted.v[k - 2])) /
                              (4.0 * h)
                        : ((state.v[k + 1] + accepted.v[k + 1]) -
                           (state.v[k - 1] + accepted.v[k - 1])) /
                              (4.0 * h);
                const double dudt =
                    (accepted.v[k] - state.v[k]) / dt - (static_cast<double>(j) * h) * sd / sbar * vbar_y;
                acc += ((j == 0 || j == n) ? 0.5 : 1.0) * dudt * dudt;
            }
            diss_acc += dt * acc * h * sbar;
        }

        dt_prev = dt;
        state = std::move(accepted);
        state.dt_next = std::min(adapt_dt(state, ctrl), 2.0 * dt);

        bool hit_record = numerics.record_interval > 0.0 && state.t >= next_record - time_eps;
        if (hit_record) {
            push_record(state, dt);
            while (next_record <= state.t + time_eps) next_record += numerics.record_interval;
        } else if (state.v[0] >= 1.0 &&
                   state.v[0] >= 1.01 * traj.records.back().u0) {
            // Densify output while the boundary value ramps up: fixed-interval
            // records alone would miss the short final growth phase.
            push_record(state, dt);
            hit_record = true;
        }
        if (next_cp < checkpoints.size() && state.t >= checkpoints[next_cp] - time_eps) {
            snapshot_checkpoint(state);
            ++next_cp;
        }

        if (spec.bc.kind == BcMode::Kind::NonlinearFlux && !opts.mms &&
            !traj.certificate_time && decay_certificate(linf_of(state.v), state.s, spec.p)) {
            traj.certificate_time = state.t;
            if (numerics.stop_on_certificate) {
                traj.status = RunStatus::DecayCertified;
                if (!hit_record) push_record(state, dt);
                break;
            }
        }
        if (state.v[0] >= numerics.u_max && state.dt_next <= numerics.dt_min * (1.0 + 1e-9)) {
            traj.status = RunStatus::BlowUpDetected;
            if (!hit_record) push_record(state, dt);
            break;
        }
        if (state.t >= horizon - time_eps) {
            if (!hit_record) push_record(state, dt);
            break;
        }
    }
    traj.t_final = state.t;
    return traj;
}

}  // namespace stefanlab
