#ifndef PILEUP_INTEGRATOR_HPP
#define PILEUP_INTEGRATOR_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pileup/dynamics.hpp"
#include "pileup/interaction.hpp"

namespace pileup {

// Tolerances and step bounds for the adaptive integrator. The cap
// h <= kappa * (min gap)^(a+1) ties the step to the remaining
// time-to-collision scale of the power-law collapse.
struct StepController {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    double gap_cap_kappa = 0.05;
    double h_min = 1e-300;
    double h_max = 0.1;
    double collision_gap_epsilon = 1e-6;

    void validate() const {
        if (!(rel_tol > 0 && abs_tol > 0 && gap_cap_kappa > 0 && h_min > 0 &&
              h_max > 0 && collision_gap_epsilon > 0))
            throw std::invalid_argument("step controller fields must be positive");
        if (!(h_min < h_max))
            throw std::invalid_argument("require h_min < h_max");
    }
};

struct Sample {
    double t;
    std::vector<double> x;
    std::vector<double> v;  // analytic velocities at (t, x)
};

enum class StopReason { GapBelowEpsilon, ReachedT };

// Piecewise-smooth trajectory on one inter-collision interval.
struct TrajectorySegment {
    double t_begin = 0.0;
    double t_end = 0.0;
    std::vector<std::size_t> labels;  // original labels of the alive particles
    std::vector<int> signs;
    std::vector<Sample> samples;      // one per accepted step, strictly increasing t
    StopReason stop_reason = StopReason::ReachedT;
};

struct StepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepResult {
    std::vector<double> x;
    double t;
    double h_used;
    double error_estimate;  // scaled local error of the accepted step (<= 1)
    double h_next;          // suggested next step
};

// One accepted Dormand-Prince 5(4) step with the gap cap applied. Rejected
// trials (error too large, ordering lost, or a crossed singularity) halve h.
// Throws StepFailure if h drops below h_min or t stops advancing.
StepResult adaptive_step(const InteractionLaw& law,
                         std::span<const double> x, std::span<const int> sign,
                         double t, double h_try, double t_limit,
                         const StepController& ctrl,
                         std::span<const ForcingTerm> forcing = {});

// Integrate until min gap < collision_gap_epsilon or t = t_end.
TrajectorySegment integrate_segment(const InteractionLaw& law,
                                    std::span<const double> x, std::span<const int> sign,
                                    double t0, double t_end,
                                    const StepController& ctrl,
                                    std::span<const ForcingTerm> forcing = {},
                                    std::span<const std::size_t> labels = {});

// Fixed-step classical RK4 reference. Ground truth on short horizons away
// from collisions; no adaptivity, no stopping layer.
TrajectorySegment reference_integrate(const InteractionLaw& law,
                                      std::span<const double> x, std::span<const int> sign,
                                      double t0, double t_end, double fixed_h,
                                      std::span<const ForcingTerm> forcing = {},
                                      std::span<const std::size_t> labels = {});

// Cubic Hermite interpolation of a segment at time t (t inside the sampled range).
std::vector<double> interpolate_segment(const TrajectorySegment& seg, double t);

}  // namespace pileup

#endif
