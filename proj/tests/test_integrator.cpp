#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pileup/analysis.hpp"
#include "pileup/integrator.hpp"

using namespace pileup;

namespace {
const std::vector<double> kTwoBodyX{0.0, 1.0};
const std::vector<int> kTwoBodyS{-1, 1};

// r(t) = sqrt(1 - 4t) for a = 1, r0 = 1
double two_body_gap(double t) { return std::sqrt(1.0 - 4.0 * t); }
}  // namespace

TEST_CASE("step cap limits the first step") {
    InteractionLaw law(1.0);
    StepController ctrl;
    ctrl.gap_cap_kappa = 0.1;
    auto st = adaptive_step(law, kTwoBodyX, kTwoBodyS, 0.0, 1.0, 10.0, ctrl);
    CHECK(st.h_used <= 0.1 * 1.0 + 1e-15);
}

TEST_CASE("accepted local error estimates stay within tolerance") {
    InteractionLaw law(1.0);
    StepController ctrl;
    ctrl.collision_gap_epsilon = 1e-4;
    auto seg = integrate_segment(law, kTwoBodyX, kTwoBodyS, 0.0, 1.0, ctrl);
    CHECK(seg.stop_reason == StopReason::GapBelowEpsilon);

    // replay the accepted steps; each scaled error estimate must be <= 1
    for (std::size_t k = 0; k + 1 < seg.samples.size(); ++k) {
        double h = seg.samples[k + 1].t - seg.samples[k].t;
        auto st = adaptive_step(law, seg.samples[k].x, kTwoBodyS, seg.samples[k].t,
                                h, 1.0, ctrl);
        CHECK(st.error_estimate <= 1.0);
    }
}

TEST_CASE("two-body stop time matches the closed form") {
    InteractionLaw law(1.0);
    StepController ctrl;
    ctrl.collision_gap_epsilon = 1e-4;
    auto seg = integrate_segment(law, kTwoBodyX, kTwoBodyS, 0.0, 1.0, ctrl);
    CHECK(seg.stop_reason == StopReason::GapBelowEpsilon);
    // gap eps is reached at t = 0.25 - eps^2/4
    double t_eps = 0.25 - 1e-8 / 4.0;
    CHECK(seg.t_end == doctest::Approx(t_eps).scale(1.0).epsilon(1e-6));
    // trajectory matches r(t) = sqrt(1-4t); near the collision the comparison
    // is relative since the collision-time error is amplified as 1/r
    for (const auto& s : seg.samples) {
        double r = s.x[1] - s.x[0];
        if (s.t <= 0.225)
            CHECK(r == doctest::Approx(two_body_gap(s.t)).scale(1.0).epsilon(1e-8));
        else
            CHECK(r == doctest::Approx(two_body_gap(s.t)).epsilon(1e-5));
    }
}

TEST_CASE("single particle under zero force stays put") {
    InteractionLaw law(1.0);
    StepController ctrl;
    std::vector<double> x{0.7};
    std::vector<int> s{1};
    auto seg = integrate_segment(law, x, s, 0.0, 1.0, ctrl);
    CHECK(seg.stop_reason == StopReason::ReachedT);
    CHECK(seg.samples.back().x[0] == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("same-sign particles only spread") {
    InteractionLaw law(1.0);
    StepController ctrl;
    std::vector<double> x{0.0, 0.3, 0.7, 1.2};
    std::vector<int> s{1, 1, 1, 1};
    auto seg = integrate_segment(law, x, s, 0.0, 0.1, ctrl);
    CHECK(seg.stop_reason == StopReason::ReachedT);
    std::vector<double> prev_gaps(3, 0.0);
    for (const auto& sm : seg.samples) {
        for (std::size_t i = 0; i < 3; ++i) {
            double g = sm.x[i + 1] - sm.x[i];
            CHECK(g >= prev_gaps[i] - 1e-12);
            prev_gaps[i] = g;
        }
    }
    // cross-check the endpoint against the fixed-step reference
    auto ref = reference_integrate(law, x, s, 0.0, 0.1, 1e-5);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(seg.samples.back().x[i] ==
              doctest::Approx(ref.samples.back().x[i]).scale(1.0).epsilon(1e-7));
}

TEST_CASE("ordering is preserved at all accepted steps (symmetric triple)") {
    InteractionLaw law(1.0);
    StepController ctrl;
    ctrl.collision_gap_epsilon = 1e-5;
    std::vector<double> x{-1.0, 0.0, 1.0};
    std::vector<int> s{1, -1, 1};
    auto seg = integrate_segment(law, x, s, 0.0, 2.0, ctrl);
    CHECK(seg.stop_reason == StopReason::GapBelowEpsilon);
    for (const auto& sm : seg.samples) {
        CHECK(sm.x[0] < sm.x[1]);
        CHECK(sm.x[1] < sm.x[2]);
        // center particle pinned by symmetry
        CHECK(std::abs(sm.x[1]) < 1e-12);
    }
}

TEST_CASE("reference integrator agrees with adaptive and with the closed form") {
    InteractionLaw law(1.0);
    StepController ctrl;
    auto adaptive = integrate_segment(law, kTwoBodyX, kTwoBodyS, 0.0, 0.2, ctrl);
    auto ref = reference_integrate(law, kTwoBodyX, kTwoBodyS, 0.0, 0.2, 1e-6);
    CHECK(adaptive.stop_reason == StopReason::ReachedT);

    for (int i = 0; i < 2; ++i)
        CHECK(adaptive.samples.back().x[i] ==
              doctest::Approx(ref.samples.back().x[i]).scale(1.0).epsilon(1e-6));

    double r_exact = two_body_gap(0.2);
    double r_ref = ref.samples.back().x[1] - ref.samples.back().x[0];
    CHECK(r_ref == doctest::Approx(r_exact).scale(1.0).epsilon(1e-8));
}

TEST_CASE("reference integrator center particle stationary") {
    InteractionLaw law(1.0);
    std::vector<double> x{-1.0, 0.0, 1.0};
    std::vector<int> s{1, -1, 1};
    auto ref = reference_integrate(law, x, s, 0.0, 0.2, 1e-4);
    for (const auto& sm : ref.samples) CHECK(std::abs(sm.x[1]) < 1e-12);
}

TEST_CASE("tightening tolerances reduces the error") {
    InteractionLaw law(1.0);
    auto sup_error = [&](double rel_tol) {
        StepController ctrl;
        ctrl.rel_tol = rel_tol;
        ctrl.abs_tol = rel_tol * 1e-3;
        ctrl.gap_cap_kappa = 10.0;  // let the error control, not the cap, bind
        ctrl.h_max = 0.05;
        auto seg = integrate_segment(law, kTwoBodyX, kTwoBodyS, 0.0, 0.2, ctrl);
        double worst = 0.0;
        for (const auto& sm : seg.samples) {
            double r = sm.x[1] - sm.x[0];
            worst = std::max(worst, std::abs(r - two_body_gap(sm.t)));
        }
        return worst;
    };
    double e1 = sup_error(1e-6);
    double e2 = sup_error(2.5e-7);
    CHECK(e2 < e1 / 2.0);  // quartering rel_tol at least halves the error
}

TEST_CASE("step cap active in the last decade of gap decay") {
    InteractionLaw law(1.0);
    StepController ctrl;
    ctrl.collision_gap_epsilon = 1e-5;
    auto seg = integrate_segment(law, kTwoBodyX, kTwoBodyS, 0.0, 1.0, ctrl);
    for (std::size_t k = 0; k + 1 < seg.samples.size(); ++k) {
        double r = seg.samples[k].x[1] - seg.samples[k].x[0];
        if (r > 1e-4) continue;  // last decade before the stopping layer
        double h = seg.samples[k + 1].t - seg.samples[k].t;
        CHECK(h <= ctrl.gap_cap_kappa * r * r + 4e-15);  // slack: t rounding
    }
}

TEST_CASE("sum of positions conserved with g = 0") {
    InteractionLaw law(1.5, RegularPart::sine(0.2, 3.0));
    StepController ctrl;
    ctrl.collision_gap_epsilon = 1e-5;
    std::vector<double> x{-1.1, -0.2, 0.4, 1.3};
    std::vector<int> s{1, -1, 1, -1};
    auto seg = integrate_segment(law, x, s, 0.0, 0.5, ctrl);
    double m0 = x[0] + x[1] + x[2] + x[3];
    for (const auto& sm : seg.samples) {
        double m = sm.x[0] + sm.x[1] + sm.x[2] + sm.x[3];
        CHECK(std::abs(m - m0) <= 1e-9);
    }
}

TEST_CASE("unordered initial state rejected") {
    InteractionLaw law(1.0);
    StepController ctrl;
    std::vector<double> x{1.0, 0.0};
    std::vector<int> s{-1, 1};
    CHECK_THROWS_AS(integrate_segment(law, x, s, 0.0, 1.0, ctrl),
                    std::invalid_argument);
}

TEST_CASE("dense interpolation stays close to the closed form") {
    InteractionLaw law(1.0);
    StepController ctrl;
    ctrl.gap_cap_kappa = 0.01;
    auto seg = integrate_segment(law, kTwoBodyX, kTwoBodyS, 0.0, 0.2, ctrl);
    for (int k = 1; k < 20; ++k) {
        double t = 0.01 * k;
        auto x = interpolate_segment(seg, t);
        CHECK(x[1] - x[0] == doctest::Approx(two_body_gap(t)).scale(1.0).epsilon(1e-6));
    }
}
