#ifndef PILEUP_ANALYSIS_HPP
#define PILEUP_ANALYSIS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pileup/collisions.hpp"
#include "pileup/interaction.hpp"
#include "pileup/system.hpp"

namespace pileup {

// Closed-form two-body solution for the pure kernel, opposite signs, g = 0:
//   tau1 = r0^(1+a) / (2(1+a)),   r(t) = (2(1+a)(tau1 - t))^(1/(1+a)),
// positions symmetric about x_center. The collapse prefactor is
// c_a = (2(1+a))^(1/(1+a)).
struct TwoBodySolution {
    double tau1;
    double r;
    double x_left;
    double x_right;
};
TwoBodySolution two_body_closed_form(double a, double r0, double x_center, double t);

inline double two_body_tau1(double a, double r0) {
    return std::pow(r0, 1.0 + a) / (2.0 * (1.0 + a));
}
inline double collapse_prefactor(double a) {
    return std::pow(2.0 * (1.0 + a), 1.0 / (1.0 + a));
}

struct HolderFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double t_lo = 0.0, t_hi = 0.0;  // fit window in t
    double residual = 0.0;          // R^2 of the log-log regression
    double target = 0.0;            // 1/(1+a)
};

// Least-squares slope of log q against log(tau_hat - t). Requires >= 10
// samples spanning at least one decade of (tau_hat - t).
HolderFit fit_holder_exponent(std::span<const std::pair<double, double>> samples,
                              double tau_hat, double target = 0.0);

// Window in (tau_hat - t) used for exponent and constant fits: the last
// decade above the extrapolation layer, widened until it holds enough samples.
struct FitWindow {
    double lo = 0.0, hi = 0.0;  // bounds on tau_hat - t, lo < hi
};
FitWindow default_fit_window(const TrajectorySegment& seg, double tau_hat,
                             double a, double collision_gap_epsilon);

// (t, q) samples of one packed gap inside a window before tau_hat.
std::vector<std::pair<double, double>> gap_samples_in_window(
    const TrajectorySegment& seg, std::size_t gap_index, double tau_hat,
    const FitWindow& win);

// Latest segment whose alive labels contain every member of the event;
// that segment ends inside the event's stopping layer.
const TrajectorySegment& segment_for_event(const HybridTrajectory& traj,
                                           const CollisionEvent& ev);

// Two decades of tau_hat - t above the extrapolation layer, widened until
// the window holds at least 12 samples.
FitWindow event_fit_window(const TrajectorySegment& seg, double tau_hat,
                           double a, double collision_gap_epsilon);

struct EventGapFit {
    std::size_t event_index = 0;
    std::size_t gap_index = 0;  // packed gap index within the fitted segment
    HolderFit fit;
    bool ok = false;
    std::string error;
};

// Exponent fits for every colliding gap of every event, each against the
// target 1/(1+a).
std::vector<EventGapFit> fit_event_exponents(const HybridTrajectory& traj,
                                             double a,
                                             double collision_gap_epsilon);

// Fitted constant for one power-law bound, with half-window stability probe.
struct ConstantFit {
    std::size_t index = 0;      // packed gap (or member) index
    double value = 0.0;         // fitted constant over the full window
    double half_window_value = 0.0;
    bool stable = false;        // <10% drift on the half window
    bool pass = false;
};

// C_upper per colliding gap: max over the window of r_i / (tau-t)^(1/(1+a)).
std::vector<ConstantFit> check_upper_bound(const TrajectorySegment& seg,
                                           const CollisionEvent& ev, double a,
                                           const FitWindow& win);

// c_lower per colliding gap (min of the same ratio) and c_outer for the two
// outermost members, |x_k(t) - y| / (tau-t)^(1/(1+a)).
struct LowerBounds {
    std::vector<ConstantFit> gaps;
    std::vector<ConstantFit> outer;  // size 2 (left, right) when n >= 2
};
LowerBounds check_lower_bounds(const TrajectorySegment& seg, const CollisionEvent& ev,
                               double a, const FitWindow& win,
                               double floor = 1e-3);

// r_{ji} >= c0 * min(r_{i-1}, r_j) over the window, for all member pairs
// (j,i) != (n,1), with c0 = min((b/16)^(1/a), (b/12)^(1/(a+1))), b = min(1, a/2).
struct GapRatioReport {
    double b = 0.0;
    double c0 = 0.0;
    double min_ratio = 0.0;  // min over samples/pairs of r_ji / min(r_{i-1}, r_j)
    bool pass = false;
    bool vacuous = false;    // no valid pair (two-body)
};
GapRatioReport check_gap_ratio_bound(const TrajectorySegment& seg,
                                     const CollisionEvent& ev, double a,
                                     const FitWindow& win);
double lemma_ratio_constant(double a);  // c0(a)

// Differential-inequality checks along accepted steps. Gap velocities are
// evaluated analytically from the vector field, never by differencing.
struct InequalityReport {
    std::string name;
    bool applicable = false;
    bool pass = false;
    double worst_margin = 0.0;  // most negative slack observed (>= 0 is clean)
    std::size_t checked = 0;
};
std::vector<InequalityReport> check_differential_inequalities(
    const TrajectorySegment& seg, const InteractionLaw& law,
    std::span<const ForcingTerm> forcing = {}, double rel_tol = 1e-8);

// Assembled constant C bounding the forcing remainder in the lemmas.
double assembled_remainder_constant(const InteractionLaw& law,
                                    const TrajectorySegment& seg,
                                    std::span<const ForcingTerm> forcing = {});

// Linear bijection (x_1..x_n) <-> (M, r_1..r_{n-1}), M = sum x_i.
std::pair<double, std::vector<double>> to_gap_coordinates(std::span<const double> x);
std::vector<double> from_gap_coordinates(double M, std::span<const double> gaps);

struct LipschitzReport {
    double observed = 0.0;   // max |M(t)-M(s)| / |t-s|
    double declared = 0.0;   // bound from declared sup-norms
    bool pass = false;
};
LipschitzReport check_M_lipschitz(const HybridTrajectory& traj,
                                  const InteractionLaw& law);

}  // namespace pileup

#endif
