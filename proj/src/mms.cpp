#include "stefanlab/mms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stefanlab/solver.hpp"

namespace stefanlab {

namespace {

double fit_order(const std::vector<double>& res, const std::vector<double>& err) {
    const std::size_t n = res.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(res[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double integrate_fixed_dt(const ProblemSpec& spec, const StepOptions& opts, SolverState state,
                          double dt, double t_end,
                          const std::function<double(double, double)>& exact) {
    const long steps = std::lround(t_end / dt);
    for (long i = 0; i < steps; ++i) {
        StepResult res = step(state, dt, spec, opts);
        auto* st = std::get_if<SolverState>(&res);
        if (!st) throw std::runtime_error("mms: step failed");
        state = std::move(*st);
    }
    const int n = state.n();
    double linf = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double x = state.s * j / n;
        linf = std::max(linf, std::abs(state.v[static_cast<std::size_t>(j)] - exact(state.t, x)));
    }
    return linf;
}

}  // namespace

ConvergenceStudy mms_temporal_study(double theta, int levels, int n, double t_end) {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.s0 = 1.0;
    spec.lambda = 1.0;
    spec.bc = BcMode::dirichlet(0.0);  // overridden by the manufactured boundary value

    auto exact = [](double t, double x) { return std::exp(-t) * (1.0 - x); };
    MmsConfig mms;
    mms.freeze_front = true;
    mms.source = [&](double t, double x) { return -std::exp(-t) * (1.0 - x); };
    mms.boundary_value = [](double t) { return std::exp(-t); };

    StepOptions opts;
    opts.theta = theta;
    opts.mms = mms;

    SolverState init;
    init.s = spec.s0;
    init.v.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) init.v[static_cast<std::size_t>(j)] = exact(0.0, spec.s0 * j / n);

    ConvergenceStudy study;
    double dt = t_end / 8.0;
    for (int lvl = 0; lvl < levels; ++lvl, dt *= 0.5) {
        study.resolution.push_back(dt);
        study.error.push_back(integrate_fixed_dt(spec, opts, init, dt, t_end, exact));
    }
    study.order = fit_order(study.resolution, study.error);
    return study;
}

ConvergenceStudy mms_spatial_study(double theta, int levels, int n_coarse, double t_end) {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.s0 = 1.0;
    spec.lambda = 1.0;
    spec.bc = BcMode::dirichlet(0.0);

    const double pi = std::numbers::pi;
    auto exact = [&](double t, double x) { return std::exp(-t) * std::sin(pi * x); };
    MmsConfig mms;
    mms.freeze_front = true;
    mms.source = [&](double t, double x) {
        return (pi * pi - 1.0) * std::exp(-t) * std::sin(pi * x);
    };
    mms.boundary_value = [](double) { return 0.0; };

    StepOptions opts;
    opts.theta = theta;
    opts.mms = mms;

    ConvergenceStudy study;
    int n = n_coarse;
    for (int lvl = 0; lvl < levels; ++lvl, n *= 2) {
        SolverState init;
        init.s = spec.s0;
        init.v.resize(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j)
            init.v[static_cast<std::size_t>(j)] = exact(0.0, spec.s0 * j / n);
        const double h = spec.s0 / n;
        // dt = h^2 keeps the temporal error at or below the spatial order.
        const double dt = t_end / std::ceil(t_end / (h * h));
        study.resolution.push_back(h);
        study.error.push_back(integrate_fixed_dt(spec, opts, init, dt, t_end, exact));
    }
    study.order = fit_order(study.resolution, study.error);
    return study;
}

}  // namespace stefanlab
