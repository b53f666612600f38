#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stefanlab/model.hpp"

#include <algorithm>
#include <cmath>

using namespace stefanlab;

TEST_CASE("linear ramp construction") {
    const InitialProfile p = make_initial_linear(1.0, 1.0);
    CHECK(p.value_at(0.0) == doctest::Approx(1.0));
    CHECK(p.value_at(1.0) == doctest::Approx(0.0));
    CHECK(p.l1_norm() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.monotone);
    CHECK(p.lipschitz_bound == doctest::Approx(1.0));

    const InitialProfile q = make_initial_linear(2.0, 0.5);
    CHECK(q.value_at(0.0) == doctest::Approx(1.0));
    CHECK(q.l1_norm() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_initial_linear(1.0, 0.0), invalid_spec_error);
    CHECK_THROWS_AS(make_initial_linear(-1.0, 1.0), invalid_spec_error);
}

TEST_CASE("profile validation catches each admissibility violation") {
    CHECK(validate_profile(make_initial_linear(1.0, 1.0), 1.0).empty());

    InitialProfile zero;
    zero.x = {0.0, 1.0};
    zero.phi = {0.0, 0.0};
    auto v = validate_profile(zero, 1.0);
    CHECK(std::find(v.begin(), v.end(), "identically zero") != v.end());

    InitialProfile bad_end;
    bad_end.x = {0.0, 1.0};
    bad_end.phi = {1.0, 0.1};
    bad_end.lipschitz_bound = 1.0;
    v = validate_profile(bad_end, 1.0);
    CHECK(std::find(v.begin(), v.end(), "endpoint nonzero") != v.end());

    InitialProfile negative;
    negative.x = {0.0, 0.5, 1.0};
    negative.phi = {1.0, -0.1, 0.0};
    negative.lipschitz_bound = 3.0;
    v = validate_profile(negative, 1.0);
    CHECK(std::find(v.begin(), v.end(), "negativity") != v.end());

    InitialProfile steep;
    steep.x = {0.0, 0.5, 1.0};
    steep.phi = {1.0, 0.9, 0.0};
    steep.lipschitz_bound = 1.0;  // actual slope 1.8 on the last panel
    v = validate_profile(steep, 1.0);
    CHECK(std::find(v.begin(), v.end(), "Lipschitz bound exceeded") != v.end());
}

TEST_CASE("scale_profile homogeneity and composition") {
    const InitialProfile p = make_initial_linear(1.0, 1.0);
    const InitialProfile p2 = scale_profile(p, 2.0);
    CHECK(p2.value_at(0.0) == doctest::Approx(2.0));
    CHECK(p2.lipschitz_bound == doctest::Approx(2.0));
    CHECK(p2.monotone);

    const InitialProfile same = scale_profile(p, 1.0);
    for (std::size_t i = 0; i < p.phi.size(); ++i) CHECK(same.phi[i] == p.phi[i]);

    CHECK(scale_profile(p, 3.7).l1_norm() == doctest::Approx(1.85).epsilon(1e-12));

    // multiplicativity: scale(scale(phi,a),b) == scale(phi,a*b) to machine precision
    const InitialProfile ab = scale_profile(scale_profile(p, 1.7), 2.3);
    const InitialProfile prod = scale_profile(p, 1.7 * 2.3);
    for (std::size_t i = 0; i < ab.phi.size(); ++i)
        CHECK(ab.phi[i] == doctest::Approx(prod.phi[i]).epsilon(1e-15));

    CHECK_THROWS_AS(scale_profile(p, 0.0), invalid_spec_error);
    CHECK_THROWS_AS(scale_profile(p, -1.0), invalid_spec_error);
}

TEST_CASE("validated linear ramps for a family of parameters") {
    for (double s0 : {0.3, 1.0, 2.5})
        for (double a : {0.1, 1.0, 4.0}) {
            const InitialProfile p = make_initial_linear(s0, a);
            CHECK(validate_profile(p, s0).empty());
            CHECK(p.l1_norm() == doctest::Approx(a * s0 * s0 / 2.0).epsilon(1e-12));
        }
}

TEST_CASE("problem spec invariants") {
    ProblemSpec spec;
    spec.p = 3.0;
    spec.s0 = 1.0;
    spec.lambda = 1.0;
    CHECK_NOTHROW(spec.validate());

    ProblemSpec bad = spec;
    bad.p = 1.0;
    CHECK_THROWS_AS(bad.validate(), invalid_spec_error);
    bad = spec;
    bad.s0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), invalid_spec_error);
    bad = spec;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), invalid_spec_error);
    CHECK_NOTHROW(bad.validate(false));  // lambda = 0 allowed for sweeps
}

TEST_CASE("sampled profiles get a computed monotone flag") {
    InitialProfileSpec spec;
    spec.kind = InitialProfileSpec::Kind::Samples;
    spec.samples.x = {0.0, 0.5, 1.0};
    spec.samples.phi = {0.5, 1.0, 0.0};
    spec.samples.lipschitz_bound = 2.0;
    CHECK_FALSE(realize_profile(spec, 1.0).monotone);

    spec.samples.phi = {1.0, 0.5, 0.0};
    CHECK(realize_profile(spec, 1.0).monotone);
}
