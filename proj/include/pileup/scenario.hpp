#ifndef PILEUP_SCENARIO_HPP
#define PILEUP_SCENARIO_HPP

#include <cstddef>

#include "pileup/config.hpp"

namespace pileup {

// Smallest stopping-layer width for which the remaining time to collision,
// eps^(1+a)/(2(1+a)), stays well above the double-precision resolution of t.
double min_collision_epsilon(double a);

// Default controller with the stopping layer floored for the given exponent.
StepController scenario_controller(double a);

// Deterministic randomized scenario: n ordered particles with alternating
// signs, gaps drawn from a seeded generator, pure interaction, horizon long
// enough for the first collision wave.
RunConfig make_random_scenario(double a, std::size_t n, unsigned long seed);

}  // namespace pileup

#endif
