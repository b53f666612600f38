#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stefanlab/classifier.hpp"

#include <cmath>
#include <vector>

using namespace stefanlab;

namespace {

Trajectory synthetic(double p = 3.0, double s0 = 1.0) {
    Trajectory traj;
    traj.spec.p = p;
    traj.spec.s0 = s0;
    traj.spec.lambda = 1.0;
    traj.status = RunStatus::ReachedHorizon;
    return traj;
}

DiagnosticsRecord rec(double t, double u0, double s, double flux_integral = 1.0) {
    DiagnosticsRecord r;
    r.t = t;
    r.u0 = u0;
    r.linf = u0;
    r.s = s;
    r.flux_integral = flux_integral;
    return r;
}

}  // namespace

TEST_CASE("golden: u0 = e^{-t} with a flat front classifies as exponential decay") {
    Trajectory traj = synthetic();
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.1 * k;
        traj.records.push_back(rec(t, std::exp(-t), 1.5));
    }
    traj.t_final = 10.0;

    const ClassificationReport rep = classify(traj, ClassifierRules{});
    CHECK(rep.verdict == Verdict::ExponentialDecay);
    REQUIRE(rep.decay_rate.has_value());
    CHECK(*rep.decay_rate == doctest::Approx(1.0).epsilon(1e-6));
    REQUIRE(rep.front_limit.has_value());
    CHECK(*rep.front_limit == doctest::Approx(1.5));
}

TEST_CASE("golden: u0 = (1-t)^{-1/4} recovers T = 1 and gamma = 1/4 to six digits") {
    Trajectory traj = synthetic(3.0);
    traj.status = RunStatus::BlowUpDetected;
    // 40 samples log-spaced into the singularity: u0 runs from 10 to ~31.6.
    for (int k = 0; k < 40; ++k) {
        const double rem = 1e-4 * std::pow(1e-2, k / 39.0);  // 1e-4 -> 1e-6
        const double t = 1.0 - rem;
        traj.records.push_back(rec(t, std::pow(rem, -0.25), 1.0 + t));
    }
    traj.t_final = traj.records.back().t;

    const BlowupFit fit = estimate_blowup(traj, 3.0);
    REQUIRE(fit.ok);
    CHECK(fit.t_blowup == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(fit.exponent == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(fit.exponent_ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.fit_residual < 1e-8);

    const ClassificationReport rep = classify(traj, ClassifierRules{});
    CHECK(rep.verdict == Verdict::BlowUp);
    REQUIRE(rep.blowup.has_value());
    CHECK(rep.blowup->t_blowup == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("golden: u0 = (2-t)^{-1/2} recovers T = 2 and gamma = 1/2") {
    Trajectory traj = synthetic(2.0);
    traj.status = RunStatus::BlowUpDetected;
    for (int k = 0; k < 30; ++k) {
        const double rem = 1e-2 * std::pow(1e-2, k / 29.0);  // u0: 10 -> 100
        traj.records.push_back(rec(2.0 - rem, std::pow(rem, -0.5), 2.0));
    }
    traj.t_final = traj.records.back().t;

    const BlowupFit fit = estimate_blowup(traj, 2.0);
    REQUIRE(fit.ok);
    CHECK(fit.t_blowup == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.exponent_ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("blow-up fit refuses short or non-monotone tails") {
    Trajectory traj = synthetic();
    traj.status = RunStatus::BlowUpDetected;
    for (int k = 0; k < 10; ++k) traj.records.push_back(rec(0.1 * k, 20.0 + k, 1.0));
    CHECK(!estimate_blowup(traj, 3.0).ok);

    for (int k = 10; k < 40; ++k) traj.records.push_back(rec(0.1 * k, 30.0 + k, 1.0));
    traj.records[35].u0 = 11.0;  // break monotonicity inside the tail
    const BlowupFit fit = estimate_blowup(traj, 3.0);
    CHECK(!fit.ok);
    CHECK(fit.note == "non-monotone tail");
}

TEST_CASE("golden: s = t^{0.4} recovers the growth exponent exactly") {
    Trajectory traj = synthetic();
    for (int k = 0; k <= 400; ++k) {
        const double t = 0.25 * k;
        const double s = t > 0.0 ? std::pow(t, 0.4) : 1e-3;
        traj.records.push_back(rec(t, 0.1, s, /*flux_integral=*/s));
    }
    traj.t_final = 100.0;

    const GrowthFit fit = fit_growth_exponent(traj);
    REQUIRE(fit.ok);
    CHECK(fit.beta == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(fit.flux_ratio_end == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.flux_ratio_begin == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("growth fit requires a genuinely unbounded front") {
    Trajectory traj = synthetic();
    for (int k = 0; k <= 100; ++k) traj.records.push_back(rec(0.1 * k, 0.1, 2.0));
    const GrowthFit fit = fit_growth_exponent(traj);
    CHECK(!fit.ok);
    CHECK(fit.note == "insufficient front growth");
}

TEST_CASE("slow decay verdict: shrinking amplitude with a growing front") {
    Trajectory traj = synthetic();
    for (int k = 0; k <= 200; ++k) {
        const double t = 0.5 * k;
        const double s = std::pow(1.0 + t, 0.45);
        traj.records.push_back(rec(t, 0.5 * std::pow(1.0 + t, -0.2), s, s));
    }
    traj.t_final = 100.0;

    const ClassificationReport rep = classify(traj, ClassifierRules{});
    CHECK(rep.verdict == Verdict::SlowDecay);
    REQUIRE(rep.growth.has_value());
    CHECK(rep.growth->ok);
    CHECK(rep.growth->beta == doctest::Approx(0.45).epsilon(0.02));
}

TEST_CASE("numerical failure and short trajectories stay unclassified") {
    Trajectory failed = synthetic();
    failed.status = RunStatus::NumericalFailure;
    failed.records.push_back(rec(0.0, 1.0, 1.0));
    CHECK(classify(failed, ClassifierRules{}).verdict == Verdict::Undetermined);

    Trajectory tiny = synthetic();
    for (int k = 0; k < 5; ++k) tiny.records.push_back(rec(0.1 * k, 1.0, 1.0));
    const ClassificationReport rep = classify(tiny, ClassifierRules{});
    CHECK(rep.verdict == Verdict::Undetermined);
    REQUIRE(!rep.flags.empty());
}

TEST_CASE("certificate short-circuits classification regardless of record count") {
    Trajectory traj = synthetic();
    traj.status = RunStatus::DecayCertified;
    traj.certificate_time = 0.7;
    traj.records.push_back(rec(0.0, 0.5, 1.0));
    traj.records.push_back(rec(0.7, 0.01, 1.2));
    CHECK(classify(traj, ClassifierRules{}).verdict == Verdict::ExponentialDecay);
}

TEST_CASE("bisection on a synthetic predicate pins the flip point") {
    int calls = 0;
    const auto pred = [&calls](double lambda) {
        ++calls;
        return lambda >= 1.0;
    };
    const BisectResult res = bisect_predicate(pred, 0.0, 3.0, 1e-3);
    CHECK(res.lambda_hi - res.lambda_lo <= 1e-3);
    CHECK(res.lambda_lo < 1.0);
    CHECK(res.lambda_hi >= 1.0);
    CHECK(calls >= 12);

    CHECK_THROWS_AS(bisect_predicate(pred, 2.0, 3.0, 1e-3), bad_bracket_error);
    CHECK_THROWS_AS(bisect_predicate(pred, 0.1, 0.2, 1e-3), bad_bracket_error);
    CHECK_THROWS_AS(bisect_predicate(pred, 1.0, 0.5, 1e-3), bad_bracket_error);
}

TEST_CASE("ordering audit accepts dominated runs and flags injected violations") {
    const auto make = [](double amp, double s) {
        Trajectory traj = synthetic();
        for (double t : {1.0, 2.0}) {
            Checkpoint cp;
            cp.t = t;
            cp.s = s;
            for (int j = 0; j <= 50; ++j)
                cp.v.push_back(amp * (1.0 - static_cast<double>(j) / 50));
            traj.checkpoints.push_back(cp);
        }
        return traj;
    };

    const Trajectory small = make(0.5, 1.0);
    const Trajectory big = make(1.2, 1.2);  // u_big(x) >= u_small(x) on [0, 1]

    OrderingReport rep = compare_runs(small, big, 1e-8);
    CHECK(rep.computable);
    CHECK(rep.common_checkpoints == 2);
    CHECK(rep.ordered);

    Trajectory bumped = small;
    bumped.checkpoints[1].v[10] = 2.0;  // above the dominating run
    rep = compare_runs(bumped, big, 1e-8);
    CHECK(rep.computable);
    CHECK(!rep.ordered);
    CHECK(rep.max_violation_u > 0.5);
    CHECK(rep.violation_time == doctest::Approx(2.0));

    // Disjoint checkpoint times -> not comparable.
    Trajectory shifted = make(0.5, 1.0);
    for (auto& cp : shifted.checkpoints) cp.t += 10.0;
    CHECK(!compare_runs(shifted, big, 1e-8).computable);
}
