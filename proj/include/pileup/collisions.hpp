#ifndef PILEUP_COLLISIONS_HPP
#define PILEUP_COLLISIONS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pileup/integrator.hpp"
#include "pileup/system.hpp"

namespace pileup {

struct CollisionEvent {
    double tau_hat = 0.0;
    double tau_err = 0.0;  // extrapolation uncertainty estimate for tau_hat
    double location = 0.0;
    std::vector<std::size_t> members;  // original labels, ordered by position
    std::vector<int> member_signs;
    std::optional<std::size_t> survivor;  // present iff |members| is odd
};

struct HybridTrajectory {
    std::vector<TrajectorySegment> segments;
    std::vector<CollisionEvent> events;  // nondecreasing tau_hat
    ParticleSystem final_state;
    double T = 0.0;
};

struct AlternatingSignsViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IllConditionedFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Maximal runs of consecutive particles whose neighbor gaps are all below
// epsilon_cluster; singletons excluded. Indices refer to the packed vector x.
std::vector<std::vector<std::size_t>> detect_clusters(std::span<const double> x,
                                                      double epsilon_cluster);

// Least-squares fit of r^(1+a) against t (linear by the power-law collapse);
// returns the root of the fitted line. Requires >= 3 strictly decreasing
// samples and a negative fitted slope.
double estimate_collision_time(std::span<const std::pair<double, double>> gap_samples,
                               double a);

// Same fit, also reporting a (3 sigma) uncertainty for the extrapolated root.
std::pair<double, double> estimate_collision_time_with_error(
    std::span<const std::pair<double, double>> gap_samples, double a);

struct AnnihilationResult {
    std::vector<std::size_t> removed;
    std::optional<std::size_t> survivor;
};

// Sequential pair removal for one alternating-sign group. Even group: all
// removed. Odd group: the surviving label is the majority-sign member closest
// to the group's spatial center (lower label on ties).
AnnihilationResult annihilate(std::span<const int> group_signs,
                              std::span<const std::size_t> group_labels,
                              std::span<const double> group_positions);

// Full hybrid run: integrate / detect / extrapolate / annihilate until T.
// On an alternating-signs violation the stopping layer is refined (epsilon
// shrunk) before the violation is treated as fatal.
HybridTrajectory run_hybrid(const InteractionLaw& law, const ParticleSystem& initial,
                            double T, const StepController& ctrl);

}  // namespace pileup

#endif
