#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pileup/analysis.hpp"
#include "pileup/collisions.hpp"

using namespace pileup;

TEST_CASE("two-body closed form") {
    auto s0 = two_body_closed_form(1.0, 1.0, 0.5, 0.0);
    CHECK(s0.tau1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s0.r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s0.x_left == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(s0.x_right == doctest::Approx(1.0).epsilon(1e-15));

    auto s1 = two_body_closed_form(1.0, 1.0, 0.5, 0.1875);
    CHECK(s1.r == doctest::Approx(0.5).epsilon(1e-14));  // sqrt(1 - 4t)

    CHECK(two_body_tau1(2.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(collapse_prefactor(1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(collapse_prefactor(2.0) == doctest::Approx(std::cbrt(6.0)).epsilon(1e-14));

    CHECK_THROWS_AS(two_body_closed_form(1.0, 1.0, 0.0, 0.3), std::domain_error);
    CHECK_THROWS_AS(two_body_closed_form(-1.0, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("exponent fit recovers exact power laws") {
    const double tau = 0.25;
    std::vector<std::pair<double, double>> s;
    for (int k = 0; k < 30; ++k) {
        double dt = 1e-4 * std::pow(10.0, 2.0 * k / 29.0);  // 2 decades
        s.push_back({tau - dt, 2.0 * std::sqrt(dt)});
    }
    auto fit = fit_holder_exponent(s, tau, 0.5);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fit.prefactor == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.residual == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.target == 0.5);

    std::vector<std::pair<double, double>> c;
    for (int k = 0; k < 20; ++k) {
        double dt = 1e-3 * std::pow(10.0, k / 19.0);
        c.push_back({tau - dt, std::cbrt(6.0 * dt)});
    }
    auto f3 = fit_holder_exponent(c, tau);
    CHECK(f3.exponent == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("exponent fit rejects thin samples") {
    const double tau = 1.0;
    std::vector<std::pair<double, double>> few{{0.1, 0.9}, {0.2, 0.8}, {0.3, 0.7}};
    CHECK_THROWS_AS(fit_holder_exponent(few, tau), std::invalid_argument);

    std::vector<std::pair<double, double>> narrow;
    for (int k = 0; k < 15; ++k) narrow.push_back({0.5 + 1e-4 * k, 0.5});
    CHECK_THROWS_AS(fit_holder_exponent(narrow, tau), std::invalid_argument);
}

TEST_CASE("simulated two-body run reproduces exponent and bound constants") {
    InteractionLaw law(1.0);
    ParticleSystem sys({0.0, 1.0}, {-1, 1});
    StepController ctrl;
    auto traj = run_hybrid(law, sys, 1.0, ctrl);
    REQUIRE(traj.events.size() == 1);
    const auto& ev = traj.events[0];
    const auto& seg = traj.segments.back();

    auto base = default_fit_window(seg, ev.tau_hat, 1.0, ctrl.collision_gap_epsilon);
    FitWindow win{base.lo, 1000.0 * base.lo};
    auto samples = gap_samples_in_window(seg, 0, ev.tau_hat, win);
    REQUIRE(samples.size() >= 10);
    auto fit = fit_holder_exponent(samples, ev.tau_hat, 0.5);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.02));
    CHECK(fit.residual >= 0.999);
    CHECK(fit.prefactor == doctest::Approx(2.0).epsilon(0.02));

    auto upper = check_upper_bound(seg, ev, 1.0, win);
    REQUIRE(upper.size() == 1);
    CHECK(upper[0].pass);
    CHECK(upper[0].value == doctest::Approx(2.0).epsilon(0.02));

    auto lower = check_lower_bounds(seg, ev, 1.0, win);
    REQUIRE(lower.gaps.size() == 1);
    CHECK(lower.gaps[0].pass);
    CHECK(lower.gaps[0].value == doctest::Approx(2.0).epsilon(0.02));
    REQUIRE(lower.outer.size() == 2);
    for (const auto& f : lower.outer) {
        CHECK(f.pass);
        CHECK(f.value == doctest::Approx(1.0).epsilon(0.02));
    }

    auto ratio = check_gap_ratio_bound(seg, ev, 1.0, win);
    CHECK(ratio.vacuous);
    CHECK(ratio.pass);
}

TEST_CASE("symmetric triple bound constant and gap ratios") {
    // symmetric gaps obey dot r = -1/(2r), so r(t) = (tau - t)^(1/2)
    InteractionLaw law(1.0);
    ParticleSystem sys({-1.0, 0.0, 1.0}, {1, -1, 1});
    StepController ctrl;
    auto traj = run_hybrid(law, sys, 2.0, ctrl);
    REQUIRE(traj.events.size() == 1);
    const auto& ev = traj.events[0];
    REQUIRE(traj.segments.size() >= 2);
    const auto& seg = traj.segments[traj.segments.size() - 2];  // pre-collision

    auto base = default_fit_window(seg, ev.tau_hat, 1.0, ctrl.collision_gap_epsilon);
    FitWindow win{base.lo, 1000.0 * base.lo};
    auto upper = check_upper_bound(seg, ev, 1.0, win);
    REQUIRE(upper.size() == 2);
    for (const auto& f : upper) {
        CHECK(f.pass);
        CHECK(f.value == doctest::Approx(1.0).epsilon(0.05));
    }

    auto ratio = check_gap_ratio_bound(seg, ev, 1.0, win);
    CHECK(!ratio.vacuous);
    CHECK(ratio.b == doctest::Approx(0.5));
    CHECK(ratio.c0 == doctest::Approx(0.03125).epsilon(1e-12));
    // equal gaps: every admissible ratio is exactly 1
    CHECK(ratio.min_ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ratio.pass);
}

TEST_CASE("lemma ratio constant values") {
    CHECK(lemma_ratio_constant(1.0) == doctest::Approx(0.03125).epsilon(1e-14));
    CHECK(lemma_ratio_constant(2.0) == doctest::Approx(0.25).epsilon(1e-14));
    double b_half = 0.25;  // a = 0.5: b = a/2
    double expected = std::min(std::pow(b_half / 16.0, 2.0),
                               std::pow(b_half / 12.0, 1.0 / 1.5));
    CHECK(lemma_ratio_constant(0.5) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("differential inequalities hold on pure alternating runs") {
    InteractionLaw law(1.0);
    StepController ctrl;
    ctrl.collision_gap_epsilon = 1e-4;
    std::vector<double> x{0.0, 1.0};
    std::vector<int> s{-1, 1};
    auto seg = integrate_segment(law, x, s, 0.0, 1.0, ctrl);

    auto reps = check_differential_inequalities(seg, law);
    REQUIRE(reps.size() == 4);
    for (const auto& r : reps) {
        if (r.name == "pair_equal_upper") continue;  // no same-sign pair here
        CHECK(r.applicable);
        CHECK(r.checked > 0);
    }
    for (const auto& r : reps) CHECK(r.pass);

    // four-particle alternating state exercises the same-sign pair bound too
    std::vector<double> x4{-1.1, -0.2, 0.4, 1.3};
    std::vector<int> s4{1, -1, 1, -1};
    auto seg4 = integrate_segment(law, x4, s4, 0.0, 0.02, ctrl);
    auto reps4 = check_differential_inequalities(seg4, law);
    for (const auto& r : reps4) {
        CHECK(r.applicable);
        CHECK(r.checked > 0);
        CHECK(r.pass);
    }
}

TEST_CASE("differential inequalities are inapplicable without alternation") {
    InteractionLaw law(1.0);
    StepController ctrl;
    std::vector<double> x{0.0, 1.0};
    std::vector<int> s{1, 1};
    auto seg = integrate_segment(law, x, s, 0.0, 0.05, ctrl);
    for (const auto& r : check_differential_inequalities(seg, law)) {
        CHECK(!r.applicable);
        CHECK(r.pass);  // vacuously
    }
}

TEST_CASE("assembled remainder constant") {
    InteractionLaw pure(1.0);
    StepController ctrl;
    std::vector<double> x{0.0, 1.0};
    std::vector<int> s{-1, 1};
    auto seg = integrate_segment(pure, x, s, 0.0, 0.05, ctrl);
    CHECK(assembled_remainder_constant(pure, seg) == 0.0);

    InteractionLaw mixed(1.0, RegularPart::linear(0.5),
                         ExternalForce::constant(0.25));
    auto seg2 = integrate_segment(mixed, x, s, 0.0, 0.05, ctrl);
    double c = assembled_remainder_constant(mixed, seg2);
    CHECK(c > 0.0);
    // 2 * sup|g| + 2(n-1) * sup|f_reg| with n = 2 and spread <= 1
    CHECK(c <= 2.0 * 0.25 + 2.0 * 0.5 * 1.0 + 1e-12);
}

TEST_CASE("gap coordinates") {
    std::vector<double> x{0.0, 1.0, 3.0};
    auto [M, gaps] = to_gap_coordinates(x);
    CHECK(M == doctest::Approx(4.0).epsilon(1e-15));
    REQUIRE(gaps.size() == 2);
    CHECK(gaps[0] == doctest::Approx(1.0));
    CHECK(gaps[1] == doctest::Approx(2.0));

    auto back = from_gap_coordinates(M, gaps);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(back[i] - x[i]) <= 1e-12);

    std::vector<double> rnd{-2.31, -0.07, 0.881, 4.5};
    auto [M2, g2] = to_gap_coordinates(rnd);
    auto b2 = from_gap_coordinates(M2, g2);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(b2[i] - rnd[i]) <= 1e-12);

    std::vector<double> bad{1.0, -0.5};
    CHECK_THROWS_AS(from_gap_coordinates(0.0, bad), std::invalid_argument);
}

TEST_CASE("M Lipschitz bound") {
    StepController ctrl;
    {
        // zero external force: M is conserved, bound is 0
        InteractionLaw law(1.0);
        ParticleSystem sys({0.0, 1.0}, {-1, 1});
        auto traj = run_hybrid(law, sys, 0.2, ctrl);
        auto rep = check_M_lipschitz(traj, law);
        CHECK(rep.declared == 0.0);
        CHECK(rep.observed <= 1e-6);
        CHECK(rep.pass);
    }
    {
        // signs cancel for (-,+) under a constant force: dM/dt = 0
        InteractionLaw law(1.0, RegularPart::zero(), ExternalForce::constant(1.0));
        ParticleSystem sys({0.0, 1.0}, {-1, 1});
        auto traj = run_hybrid(law, sys, 0.1, ctrl);
        auto rep = check_M_lipschitz(traj, law);
        CHECK(rep.declared == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(rep.observed <= 1e-6);
        CHECK(rep.pass);
    }
    {
        // (+,-,+) under a constant unit force: dM/dt = 1
        InteractionLaw law(1.0, RegularPart::zero(), ExternalForce::constant(1.0));
        ParticleSystem sys({-1.0, 0.0, 1.0}, {1, -1, 1});
        auto traj = run_hybrid(law, sys, 0.1, ctrl);
        auto rep = check_M_lipschitz(traj, law);
        CHECK(rep.declared == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(rep.observed == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.pass);
    }
}
