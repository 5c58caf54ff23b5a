#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "seebeck/analytic.hpp"
#include "seebeck/functional.hpp"
#include "seebeck/profile.hpp"
#include "test_util.hpp"

using namespace seebeck;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("three-segment family construction", "[analytic]") {
    SECTION("q at the top of its range removes the lower plateau") {
        const PiecewiseProfile pw = three_segment_profile(1.0, SeebeckBounds(1.0, 2.0));
        REQUIRE(pw.segments().size() == 2);
        REQUIRE(pw.segments()[0].is_hyperbolic());
        REQUIRE(pw.segments()[0].to == 0.5);
        REQUIRE(pw.value_at(0.0) == 1.0);  // q/(1-0) = s_lo
        REQUIRE(pw.value_at(0.75) == 2.0);
    }
    SECTION("interior q gives all three segments") {
        const PiecewiseProfile pw = three_segment_profile(0.5, SeebeckBounds(1.0, 2.0));
        REQUIRE(pw.segments().size() == 3);
        REQUIRE(pw.segments()[0].to == 0.5);
        REQUIRE(pw.segments()[1].is_hyperbolic());
        REQUIRE(pw.segments()[1].to == 0.75);
        REQUIRE(pw.value_at(0.25) == 1.0);
        REQUIRE_THAT(pw.value_at(0.625), WithinRel(4.0 / 3.0, 1e-15));
        REQUIRE(pw.value_at(0.9) == 2.0);
    }
    SECTION("equal bounds collapse the middle segment") {
        const PiecewiseProfile pw = three_segment_profile(0.5, SeebeckBounds(1.0, 1.0));
        for (double x : {0.0, 0.3, 0.5, 0.7, 1.0}) REQUIRE(pw.value_at(x) == 1.0);
    }
    SECTION("q outside (0, s_lo] is rejected") {
        const SeebeckBounds bounds(1.0, 2.0);
        REQUIRE_THROWS_AS(three_segment_profile(0.0, bounds), std::invalid_argument);
        REQUIRE_THROWS_AS(three_segment_profile(-0.5, bounds), std::invalid_argument);
        REQUIRE_THROWS_AS(three_segment_profile(1.5, bounds), std::invalid_argument);
        REQUIRE_THROWS_AS(three_segment_profile(std::nan(""), bounds), std::invalid_argument);
    }
}

TEST_CASE("optimal profile breakpoints", "[analytic]") {
    SECTION("bounds (1,2)") {
        const ThreeSegmentParams p = three_segment_params(0.5, SeebeckBounds(1.0, 2.0));
        REQUIRE(p.x0 == 0.5);
        REQUIRE(p.x1 == 0.75);
        const SampledProfile sp = sample_piecewise(optimal_profile(SeebeckBounds(1.0, 2.0)), 4);
        REQUIRE(sp.values()[0] == 1.0);
        REQUIRE(sp.values()[1] == 1.0);
        REQUIRE(sp.values()[2] == 4.0 / 3.0);  // 0.5 / (1 - 0.625)
        REQUIRE(sp.values()[3] == 2.0);
    }
    SECTION("bounds (2,8)") {
        const ThreeSegmentParams p = three_segment_params(1.0, SeebeckBounds(2.0, 8.0));
        REQUIRE(p.x0 == 0.5);
        REQUIRE(p.x1 == 0.875);
        const PiecewiseProfile pw = optimal_profile(SeebeckBounds(2.0, 8.0));
        REQUIRE(pw.segments()[1].is_hyperbolic());
        REQUIRE(std::get<HyperbolicSegment>(pw.segments()[1].shape).q == 1.0);
    }
    SECTION("degenerate bounds give the constant profile") {
        const PiecewiseProfile pw = optimal_profile(SeebeckBounds(3.0, 3.0));
        for (double x : {0.0, 0.5, 1.0}) REQUIRE(pw.value_at(x) == 3.0);
    }
}

TEST_CASE("analytic integrals", "[analytic]") {
    SECTION("frozen values at q = 1/2, bounds (1,2)") {
        const AnalyticIntegrals i = analytic_integrals(0.5, SeebeckBounds(1.0, 2.0));
        REQUIRE_THAT(i.integral_s, WithinRel(1.0 + 0.5 * std::log(2.0), 1e-15));
        REQUIRE_THAT(i.integral_weighted_sq, WithinRel(0.5 + 0.25 * std::log(2.0), 1e-15));
    }
    SECTION("degenerate bounds") {
        const AnalyticIntegrals i = analytic_integrals(1.0, SeebeckBounds(3.0, 3.0));
        REQUIRE(i.integral_s == 3.0);
        REQUIRE(i.integral_weighted_sq == 4.5);
    }
    SECTION("agree with exact segment integration across the family") {
        std::mt19937_64 rng(47);
        for (int trial = 0; trial < 40; ++trial) {
            const SeebeckBounds bounds = testutil::random_bounds(rng);
            const double q = testutil::uniform(rng, 0.05, 1.0) * bounds.lo();
            const AnalyticIntegrals i = analytic_integrals(q, bounds);
            const FunctionalValue fv = eval_piecewise(three_segment_profile(q, bounds));
            REQUIRE_THAT(i.integral_s, WithinRel(std::sqrt(2.0 * fv.numerator), 1e-12));
            REQUIRE_THAT(i.integral_weighted_sq, WithinRel(fv.denominator, 1e-12));
        }
    }
}

TEST_CASE("f restricted to the family", "[analytic]") {
    const SeebeckBounds unit_e(1.0, std::exp(1.0));
    SECTION("frozen values") {
        REQUIRE_THAT(f_of_q(0.5, unit_e), WithinRel(1.5, 1e-12));
        REQUIRE_THAT(f_of_q(1.0, unit_e), WithinRel(4.0 / 3.0, 1e-12));
        REQUIRE(f_of_q(0.7, SeebeckBounds(2.0, 2.0)) == 1.0);
    }
    SECTION("two evaluation routes agree") {
        std::mt19937_64 rng(53);
        for (int trial = 0; trial < 40; ++trial) {
            const SeebeckBounds bounds = testutil::random_bounds(rng);
            const double q = testutil::uniform(rng, 0.05, 1.0) * bounds.lo();
            const AnalyticIntegrals i = analytic_integrals(q, bounds);
            const double via_integrals = 0.5 * i.integral_s * i.integral_s / i.integral_weighted_sq;
            REQUIRE_THAT(f_of_q(q, bounds), WithinRel(via_integrals, 1e-12));
            REQUIRE_THAT(f_of_q(q, bounds),
                         WithinRel(eval_piecewise(three_segment_profile(q, bounds)).ratio, 1e-12));
        }
    }
}

TEST_CASE("derivative of f", "[analytic]") {
    SECTION("vanishes exactly at q = s_lo/2") {
        std::mt19937_64 rng(59);
        for (int trial = 0; trial < 20; ++trial) {
            const SeebeckBounds bounds = testutil::random_bounds(rng);
            REQUIRE(df_dq(0.5 * bounds.lo(), bounds) == 0.0);
        }
    }
    SECTION("negative at the top of the range") {
        REQUIRE(df_dq(1.0, SeebeckBounds(1.0, 2.0)) < 0.0);
        REQUIRE(df_dq(0.75, SeebeckBounds(1.0, 4.0)) < 0.0);
    }
    SECTION("positive below s_lo/2") {
        REQUIRE(df_dq(0.25, SeebeckBounds(1.0, 2.0)) > 0.0);
    }
    SECTION("matches central finite differences of f") {
        std::mt19937_64 rng(61);
        for (int trial = 0; trial < 20; ++trial) {
            const SeebeckBounds bounds = testutil::random_bounds(rng);
            if (bounds.degenerate()) continue;
            for (double frac : {0.1, 0.2, 0.3, 0.4, 0.65, 0.8, 0.95}) {
                const double q = frac * bounds.lo();
                const double h = 1e-5 * bounds.lo();
                const double fd =
                    (f_of_q(q + h, bounds) - f_of_q(q - h, bounds)) / (2.0 * h);
                REQUIRE_THAT(df_dq(q, bounds), WithinRel(fd, 1e-8));
            }
        }
    }
}

TEST_CASE("maximum of F", "[analytic]") {
    SECTION("frozen values") {
        REQUIRE_THAT(f_max(SeebeckBounds(1.0, std::exp(2.0))), WithinAbs(2.0, 1e-12));
        REQUIRE(f_max(SeebeckBounds(5.0, 5.0)) == 1.0);
        REQUIRE_THAT(f_max(SeebeckBounds(1.0, 2.0)), WithinAbs(1.3465735902799727, 1e-15));
    }
    SECTION("coincides with f at q = s_lo/2") {
        std::mt19937_64 rng(67);
        for (int trial = 0; trial < 50; ++trial) {
            const SeebeckBounds bounds = testutil::random_bounds(rng);
            REQUIRE(testutil::ulp_distance(f_max(bounds), f_of_q(0.5 * bounds.lo(), bounds)) <= 4);
        }
    }
    SECTION("beats the whole family on a dense q grid") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 10; ++trial) {
            const SeebeckBounds bounds = testutil::random_bounds(rng);
            const double best = f_of_q(0.5 * bounds.lo(), bounds);
            for (int k = 1; k <= 200; ++k) {
                // k/200 first, so that k = 200 gives exactly s_lo
                const double q = bounds.lo() * (static_cast<double>(k) / 200.0);
                REQUIRE(best >= f_of_q(q, bounds) * (1.0 - 1e-15));
            }
        }
    }
}

TEST_CASE("profiles are continuous at both breakpoints", "[analytic][property]") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        const SeebeckBounds bounds = testutil::random_bounds(rng);
        const double q = testutil::uniform(rng, 0.02, 1.0) * bounds.lo();
        const PiecewiseProfile pw = three_segment_profile(q, bounds);
        REQUIRE(pw.max_breakpoint_jump() <= 1e-12 * bounds.hi());
    }
}

TEST_CASE("stationarity on the middle segment of the optimum", "[analytic]") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 20; ++trial) {
        const SeebeckBounds bounds = testutil::random_bounds(rng);
        if (bounds.ratio() < 1.1) continue;
        const double q = 0.5 * bounds.lo();
        const ThreeSegmentParams p = three_segment_params(q, bounds);
        const PiecewiseProfile pw = three_segment_profile(q, bounds);
        for (int k = 1; k < 10; ++k) {
            const double x = p.x0 + (p.x1 - p.x0) * static_cast<double>(k) / 10.0;
            REQUIRE_THAT((1.0 - x) * pw.value_at(x), WithinRel(q, 1e-12));
        }
        // at the optimum the stationarity constant equals D/A
        const AnalyticIntegrals i = analytic_integrals(q, bounds);
        REQUIRE_THAT(i.integral_weighted_sq / i.integral_s, WithinRel(q, 1e-12));
    }
}

TEST_CASE("solution family is invariant under bound scaling", "[analytic][property]") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 30; ++trial) {
        const SeebeckBounds bounds = testutil::random_bounds(rng);
        const ThreeSegmentParams p = three_segment_params(0.5 * bounds.lo(), bounds);
        for (double c : {1e-3, 2.0, 1e3}) {
            const SeebeckBounds scaled(c * bounds.lo(), c * bounds.hi());
            const ThreeSegmentParams ps = three_segment_params(0.5 * scaled.lo(), scaled);
            REQUIRE(ps.x0 == p.x0);  // q/s_lo = 1/2 exactly, for any scale
            REQUIRE(testutil::ulp_distance(ps.x1, p.x1) <= 4);
            REQUIRE_THAT(f_max(scaled), WithinRel(f_max(bounds), 1e-14));

            const PiecewiseProfile pw = three_segment_profile(0.5 * bounds.lo(), bounds);
            const PiecewiseProfile pws = three_segment_profile(0.5 * scaled.lo(), scaled);
            for (double x : {0.1, 0.4, 0.6, 0.9})
                REQUIRE(testutil::ulp_distance(pws.value_at(x), c * pw.value_at(x)) <= 8);
        }
    }
}

TEST_CASE("midpoint sampling converges to the exact functional", "[analytic][property]") {
    const struct {
        SeebeckBounds bounds;
        double q;
    } cases[] = {
        {SeebeckBounds(1.0, 2.0), 0.5},    // the optimum
        {SeebeckBounds(1.0, 10.0), 0.5},   // the optimum, wide bounds
        {SeebeckBounds(1.0, 2.0), 0.3},    // an off-optimal family member
    };
    for (const auto& tc : cases) {
        const PiecewiseProfile pw = three_segment_profile(tc.q, tc.bounds);
        const double exact = eval_piecewise(pw).ratio;
        double prev_err = -1.0;
        for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
            const double err =
                std::abs(eval_sampled(sample_piecewise(pw, n), EvalScheme::ExactCell).ratio -
                         exact);
            if (prev_err >= 0.0) REQUIRE(prev_err >= 1.8 * err);
            prev_err = err;
        }
    }
}
