#ifndef PILEUP_DYNAMICS_HPP
#define PILEUP_DYNAMICS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pileup/interaction.hpp"
#include "pileup/system.hpp"

namespace pileup {

// dx_i/dt for a packed (alive-only) state. Full mode:
//   dx_i/dt = sum_{j != i} b_i b_j f(x_i - x_j) + b_i g(x_i).
// Reduced mode replaces b_i g(x_i) with F_i(t).
// The parallel version splits the outer loop over particles; each particle's
// pair sum is accumulated in the same order as the serial version, so the two
// agree bit for bit.
std::vector<double> velocity_field(const InteractionLaw& law,
                                   std::span<const double> x, std::span<const int> sign,
                                   double t,
                                   std::span<const ForcingTerm> forcing = {});

std::vector<double> velocity_field_serial(const InteractionLaw& law,
                                          std::span<const double> x, std::span<const int> sign,
                                          double t,
                                          std::span<const ForcingTerm> forcing = {});

inline std::vector<double> velocity_field(const InteractionLaw& law,
                                          const ParticleSystem& sys, double t) {
    auto xs = sys.alive_positions();
    auto ss = sys.alive_signs();
    std::vector<ForcingTerm> fs;
    if (sys.reduced) {
        for (std::size_t i = 0; i < sys.n_total(); ++i)
            if (sys.alive[i]) fs.push_back(sys.forcing[i]);
    }
    return velocity_field(law, xs, ss, t, fs);
}

// d r_i / dt for neighbor gap i (0-based, 0 <= i < n-1), built from the
// kernel decomposition
//   dot r_i = 2 b_i b_{i+1} f(r_i) + G_i(t) + sum_{k != i,i+1} c_k,
//   c_k = -b_i b_k g(r_ik; r_i)   if b_{i+1} = -b_i,
//   c_k =  b_i b_k h(r_ik; r_i)   if b_{i+1} =  b_i,
// with r_ik = x_i - x_k. Independent route from velocity_field; the two must
// agree to round-off.
double gap_velocity(const InteractionLaw& law,
                    std::span<const double> x, std::span<const int> sign,
                    double t, std::size_t i,
                    std::span<const ForcingTerm> forcing = {});

// Placement of the probe particle(s) x_kappa (and x_{kappa+1}) relative to
// the pair (x_i, x_j) whose distance r_ji is being driven.
enum class Placement { SingleLeft, SingleRight, PairLeft, PairRight };

// Sign (+1 / -1) of the exact contribution of a single outside particle, or
// of a neighboring opposite-sign pair, to dot r_{ji}. Pair placements take
// b_{kappa+1} = -b_kappa. Throws on a geometry that violates the placement.
int contribution_sign(const InteractionLaw& law, int b_i, int b_j, int b_kappa,
                      Placement placement, double x_i, double x_j,
                      double x_kappa, double x_kappa1 = 0.0);

}  // namespace pileup

#endif
