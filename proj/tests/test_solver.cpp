#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stefanlab/solver.hpp"

#include <cmath>
#include <numbers>

using namespace stefanlab;

namespace {

ProblemSpec ramp_spec(double lambda, double p = 3.0, double s0 = 1.0) {
    ProblemSpec spec;
    spec.p = p;
    spec.s0 = s0;
    spec.lambda = lambda;
    return spec;
}

}  // namespace

TEST_CASE("initial state samples the scaled ramp on the unit grid") {
    const SolverState st = initial_state(ramp_spec(0.5), 8);
    CHECK(st.t == 0.0);
    CHECK(st.s == 1.0);
    CHECK(st.n() == 8);
    for (int j = 0; j <= 8; ++j)
        CHECK(st.v[static_cast<std::size_t>(j)] ==
              doctest::Approx(0.5 * (1.0 - j / 8.0)).epsilon(1e-14));
}

TEST_CASE("immobilized coefficients: diffusion 1/s^2, advection y*sdot/s") {
    SolverState st;
    st.s = 2.0;
    st.sdot = 0.5;
    st.v.assign(5, 0.0);  // n = 4
    const PdeCoefficients c = transform_pde_coefficients(st);
    CHECK(c.diffusion == doctest::Approx(0.25));
    REQUIRE(c.advection.size() == 5);
    for (int j = 0; j <= 4; ++j)
        CHECK(c.advection[static_cast<std::size_t>(j)] ==
              doctest::Approx((j / 4.0) * 0.5 / 2.0).epsilon(1e-14));
}

TEST_CASE("adaptive step size formula and clamping") {
    SolverState st;
    st.s = 1.0;
    st.v.assign(101, 0.0);  // n = 100 -> dt_cfl = 1/(2*100^2) = 5e-5
    st.v[0] = 2.0;

    StepControl ctrl;
    ctrl.dt_min = 1e-12;
    ctrl.dt_max = 1e-3;
    ctrl.c_safety = 1.0;
    ctrl.c_bu = 0.1;
    ctrl.u_floor = 1e-8;
    ctrl.p = 3.0;

    // CFL term 5e-5 beats the blow-up term 0.1 * 2^-4 = 6.25e-3.
    CHECK(adapt_dt(st, ctrl) == doctest::Approx(5e-5).epsilon(1e-12));

    // Large boundary value: blow-up term 0.1 * 10^-4 = 1e-5 governs.
    st.v[0] = 10.0;
    CHECK(adapt_dt(st, ctrl) == doctest::Approx(1e-5).epsilon(1e-12));

    // Clamps to dt_max when both terms are large.
    st.v[0] = 1e-9;  // below u_floor -> floor applies, term is huge
    ctrl.c_safety = 1e9;
    CHECK(adapt_dt(st, ctrl) == ctrl.dt_max);

    // Clamps to dt_min when the state is extreme.
    st.v[0] = 1e6;
    ctrl.c_safety = 1e-30;
    CHECK(adapt_dt(st, ctrl) == ctrl.dt_min);
}

TEST_CASE("frozen-front cosine mode decays at the separation-of-variables rate") {
    // With a zero-flux left boundary and a pinned front, u = cos(pi x / (2 s0))
    // * exp(-(pi/(2 s0))^2 t) solves the heat equation exactly.
    const double s0 = 1.0;
    const int n = 200;
    const double mu = std::numbers::pi / (2.0 * s0);

    ProblemSpec spec = ramp_spec(1.0, 3.0, s0);
    spec.bc = BcMode::neumann_zero();
    spec.profile.kind = InitialProfileSpec::Kind::Samples;
    InitialProfile prof;
    for (int k = 0; k <= 400; ++k) {
        const double x = s0 * k / 400.0;
        prof.x.push_back(x);
        prof.phi.push_back(std::cos(mu * x));
    }
    prof.phi.back() = 0.0;
    prof.lipschitz_bound = 2.0;
    spec.profile.samples = prof;

    NumericsConfig nm;
    nm.n = n;
    nm.horizon = 0.5;
    nm.dt_max = 1e-4;
    nm.c_safety = 1e9;
    nm.theta = 0.5;
    nm.record_interval = 0.1;
    nm.stop_on_certificate = false;
    MmsConfig mms;
    mms.freeze_front = true;
    nm.mms = mms;

    const Trajectory traj = run(spec, nm);
    REQUIRE(traj.status == RunStatus::ReachedHorizon);
    const auto& r = traj.records.back();
    CHECK(r.s == doctest::Approx(s0).epsilon(1e-14));
    const double exact = std::exp(-mu * mu * r.t);
    CHECK(r.u0 == doctest::Approx(exact).epsilon(5e-4));
}

TEST_CASE("one step with shrinking dt approaches the identity map") {
    // The unit ramp is flux-compatible at x = 0 (slope 1, value 1, 1^p = 1), so
    // the first implicit step has no boundary-layer jump and must vanish with dt.
    const ProblemSpec spec = ramp_spec(1.0);
    const SolverState st = initial_state(spec, 64);
    StepOptions opts;

    double prev_move = 1e300;
    for (double dt : {1e-4, 1e-5, 1e-6, 1e-7}) {
        const StepResult res = step(st, dt, spec, opts);
        const auto* next = std::get_if<SolverState>(&res);
        REQUIRE(next != nullptr);
        double move = std::abs(next->s - st.s);
        for (std::size_t j = 0; j < st.v.size(); ++j)
            move = std::max(move, std::abs(next->v[j] - st.v[j]));
        CHECK(move < prev_move);
        prev_move = move;
    }
    CHECK(prev_move < 1e-5);
}

TEST_CASE("Picard and monolithic front couplings agree to coupling tolerance") {
    const ProblemSpec spec = ramp_spec(1.0);
    const SolverState st = initial_state(spec, 128);

    StepOptions picard;
    StepOptions newton;
    newton.front_coupling = FrontCoupling::MonolithicNewton;

    const auto a = std::get<SolverState>(step(st, 1e-4, spec, picard));
    const auto b = std::get<SolverState>(step(st, 1e-4, spec, newton));
    CHECK(a.s == doctest::Approx(b.s).epsilon(1e-9));
    for (std::size_t j = 0; j < a.v.size(); ++j)
        CHECK(a.v[j] == doctest::Approx(b.v[j]).epsilon(1e-8));
}

TEST_CASE("decay run: positivity, boundedness, and a monotone front") {
    ProblemSpec spec = ramp_spec(0.5);
    NumericsConfig nm;
    nm.n = 100;
    nm.horizon = 2.0;
    nm.dt_max = 1e-3;
    nm.c_safety = 1e9;
    nm.record_interval = 0.01;
    nm.stop_on_certificate = false;
    for (double t = 0.25; t <= 2.0; t += 0.25) nm.checkpoint_times.push_back(t);

    const Trajectory traj = run(spec, nm);
    REQUIRE(traj.status == RunStatus::ReachedHorizon);

    double prev_s = 0.0;
    for (const auto& r : traj.records) {
        CHECK(r.s >= prev_s);           // Stefan condition never retracts the front
        CHECK(r.linf <= 0.5 + 1e-12);   // maximum principle: no new interior maxima
        CHECK(r.u0 >= 0.0);
        prev_s = r.s;
    }
    for (const auto& cp : traj.checkpoints)
        for (double vj : cp.v) CHECK(vj >= 0.0);
}

TEST_CASE("runs are deterministic") {
    ProblemSpec spec = ramp_spec(0.8);
    NumericsConfig nm;
    nm.n = 64;
    nm.horizon = 0.5;
    nm.dt_max = 1e-3;
    nm.record_interval = 0.01;
    nm.stop_on_certificate = false;

    const Trajectory a = run(spec, nm);
    const Trajectory b = run(spec, nm);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].t == b.records[k].t);
        CHECK(a.records[k].s == b.records[k].s);
        CHECK(a.records[k].u0 == b.records[k].u0);
        CHECK(a.records[k].energy == b.records[k].energy);
    }
}

TEST_CASE("terminal status depends on the boundary ceiling crossing u_max") {
    // The same growing run either certifies blow-up (ceiling above u_max) or
    // reports a numerical failure (u_max out of reach for this grid).
    auto run_with_umax = [](double u_max) {
        ProblemSpec spec = ramp_spec(2.0);
        NumericsConfig nm;
        nm.n = 100;
        nm.horizon = 5.0;
        nm.dt_max = 1e-4;
        nm.u_max = u_max;
        nm.record_interval = 1e-3;
        return run(spec, nm);
    };

    const Trajectory detected = run_with_umax(5.0);
    CHECK(detected.status == RunStatus::BlowUpDetected);
    CHECK(detected.records.back().u0 >= 5.0);
    CHECK(!detected.failure_time.has_value());

    const Trajectory failed = run_with_umax(1e6);
    CHECK(failed.status == RunStatus::NumericalFailure);
    CHECK(failed.failure_time.has_value());
    CHECK(failed.records.back().u0 < 1e6);
}

TEST_CASE("blow-up detection is resolution-consistent in time") {
    auto final_time = [](int n) {
        ProblemSpec spec = ramp_spec(2.0);
        NumericsConfig nm;
        nm.n = n;
        nm.horizon = 5.0;
        nm.dt_max = 1e-4;
        nm.u_max = 5.0;
        nm.record_interval = 1e-3;
        const Trajectory traj = run(spec, nm);
        REQUIRE(traj.status == RunStatus::BlowUpDetected);
        return traj.t_final;
    };
    const double coarse = final_time(200);
    const double fine = final_time(400);
    CHECK(std::abs(fine - coarse) / fine < 0.05);
}
