#include "pileup/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <stdexcept>

namespace pileup {

double min_collision_epsilon(double a) {
    return std::pow(2.0 * (1.0 + a) * 1e-12, 1.0 / (1.0 + a));
}

StepController scenario_controller(double a) {
    StepController ctrl;
    ctrl.collision_gap_epsilon =
        std::max(ctrl.collision_gap_epsilon, min_collision_epsilon(a));
    return ctrl;
}

RunConfig make_random_scenario(double a, std::size_t n, unsigned long seed) {
    if (!(a > 0) || n < 1) throw std::invalid_argument("require a > 0 and n >= 1");

    // Mix (a, n, seed) so neighbouring grid cells get unrelated streams.
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(a));
    std::memcpy(&bits, &a, sizeof(bits));
    std::seed_seq sseq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(n),
                       static_cast<std::uint32_t>(bits),
                       static_cast<std::uint32_t>(bits >> 32)};
    std::mt19937_64 rng(sseq);

    RunConfig cfg;
    cfg.a = a;
    cfg.seed = static_cast<long>(seed);
    cfg.mode = "full";
    cfg.controller = scenario_controller(a);

    std::uniform_real_distribution<double> gap(0.4, 1.2);
    std::vector<double> x{0.0};
    for (std::size_t i = 1; i < n; ++i) x.push_back(x.back() + gap(rng));
    double shift = 0.5 * x.back();
    for (double& xi : x) xi -= shift;
    cfg.positions = std::move(x);

    int s = (rng() & 1) ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) {
        cfg.signs.push_back(s);
        s = -s;
    }

    // First collisions arrive on the two-body scale of the largest drawn gap.
    cfg.T = 6.0 * std::pow(1.2, 1.0 + a) / (2.0 * (1.0 + a));
    return cfg;
}

}  // namespace pileup
