#include "pileup/collisions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pileup {

namespace {
constexpr double kClusterFactor = 10.0;   // epsilon_cluster = 10 * epsilon
constexpr int kMaxRefinements = 8;
constexpr std::size_t kFitSamples = 40;   // tail samples used for extrapolation
}  // namespace

std::vector<std::vector<std::size_t>> detect_clusters(std::span<const double> x,
                                                      double epsilon_cluster) {
    std::vector<std::vector<std::size_t>> groups;
    std::size_t i = 0;
    while (i + 1 < x.size()) {
        if (x[i + 1] - x[i] < epsilon_cluster) {
            std::vector<std::size_t> g{i, i + 1};
            std::size_t j = i + 1;
            while (j + 1 < x.size() && x[j + 1] - x[j] < epsilon_cluster) {
                ++j;
                g.push_back(j);
            }
            groups.push_back(std::move(g));
            i = j + 1;
        } else {
            ++i;
        }
    }
    return groups;
}

double estimate_collision_time(std::span<const std::pair<double, double>> gap_samples,
                               double a) {
    return estimate_collision_time_with_error(gap_samples, a).first;
}

std::pair<double, double> estimate_collision_time_with_error(
    std::span<const std::pair<double, double>> gap_samples, double a) {
    if (gap_samples.size() < 3)
        throw IllConditionedFit("need at least 3 gap samples");
    for (std::size_t k = 0; k + 1 < gap_samples.size(); ++k)
        if (!(gap_samples[k + 1].second < gap_samples[k].second))
            throw IllConditionedFit("gap samples must be strictly decreasing");

    // Fit w = r^(1+a) = alpha + beta * (t - t_ref); root at t_ref - alpha/beta.
    // Centering t avoids cancellation when the window is tiny relative to t.
    const double t_ref = gap_samples.back().first;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(gap_samples.size());
    for (const auto& [t, r] : gap_samples) {
        double u = t - t_ref;
        double w = std::pow(r, 1.0 + a);
        sx += u;
        sy += w;
        sxx += u * u;
        sxy += u * w;
    }
    double denom = m * sxx - sx * sx;
    if (denom == 0.0) throw IllConditionedFit("degenerate sample times");
    double beta = (m * sxy - sx * sy) / denom;
    double alpha = (sy - beta * sx) / m;
    if (!(beta < 0.0)) throw IllConditionedFit("fitted slope is nonnegative");
    double tau = t_ref - alpha / beta;
    if (!(tau > gap_samples.back().first))
        throw IllConditionedFit("extrapolated collision time is not in the future");

    // Propagate the residual scatter to the root: 3 sigma plus a rounding floor.
    double ss_res = 0.0;
    for (const auto& [t, r] : gap_samples) {
        double e = std::pow(r, 1.0 + a) - (alpha + beta * (t - t_ref));
        ss_res += e * e;
    }
    double sigma2 = ss_res / std::max(1.0, m - 2.0);
    double u_root = tau - t_ref;
    double var = (sigma2 / (beta * beta)) *
                 (1.0 / m + (u_root - sx / m) * (u_root - sx / m) * m / denom);
    double err = 3.0 * std::sqrt(std::max(var, 0.0)) +
                 64.0 * std::abs(tau) * std::numeric_limits<double>::epsilon();
    return {tau, err};
}

AnnihilationResult annihilate(std::span<const int> group_signs,
                              std::span<const std::size_t> group_labels,
                              std::span<const double> group_positions) {
    const std::size_t m = group_signs.size();
    if (m < 2 || group_labels.size() != m || group_positions.size() != m)
        throw std::invalid_argument("annihilation group is malformed");
    for (std::size_t k = 0; k + 1 < m; ++k)
        if (group_signs[k] == group_signs[k + 1]) {
            std::ostringstream os;
            os << "colliding group signs do not alternate at position " << k;
            throw AlternatingSignsViolation(os.str());
        }

    AnnihilationResult res;
    if (m % 2 == 0) {
        res.removed.assign(group_labels.begin(), group_labels.end());
        return res;
    }
    // Odd group: majority sign is that of the endpoints. Keep the
    // majority-sign member closest to the spatial center.
    const int majority = group_signs.front();
    const double center =
        0.5 * (group_positions.front() + group_positions.back());
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
        if (group_signs[k] != majority) continue;
        double d = std::abs(group_positions[k] - center);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    res.survivor = group_labels[best];
    for (std::size_t k = 0; k < m; ++k)
        if (k != best) res.removed.push_back(group_labels[k]);
    return res;
}

namespace {

// Tail of strictly decreasing cluster-width samples from a segment.
std::vector<std::pair<double, double>> width_samples(const TrajectorySegment& seg,
                                                     std::size_t first,
                                                     std::size_t last) {
    std::vector<std::pair<double, double>> out;
    const auto& s = seg.samples;
    std::size_t k = s.size();
    double prev = -std::numeric_limits<double>::infinity();
    while (k > 0 && out.size() < kFitSamples) {
        --k;
        double w = s[k].x[last] - s[k].x[first];
        if (!(w > prev)) break;  // walking backwards widths must increase
        out.push_back({s[k].t, w});
        prev = w;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

HybridTrajectory run_hybrid(const InteractionLaw& law, const ParticleSystem& initial,
                            double T, const StepController& ctrl) {
    if (!(T > 0)) throw std::invalid_argument("require T > 0");
    initial.validate();
    if (!initial.strictly_ordered())
        throw std::invalid_argument("initial positions must be strictly ordered");
    ctrl.validate();

    HybridTrajectory traj;
    traj.T = T;
    ParticleSystem sys = initial;
    StepController local = ctrl;
    double t = 0.0;
    int refinements = 0;

    while (t < T && sys.n_alive() > 0) {
        auto labels = sys.alive_labels();
        auto xs = sys.alive_positions();
        auto ss = sys.alive_signs();
        std::vector<ForcingTerm> fs;
        if (sys.reduced)
            for (std::size_t lab : labels) fs.push_back(sys.forcing[lab]);

        TrajectorySegment seg =
            integrate_segment(law, xs, ss, t, T, local, fs, labels);
        traj.segments.push_back(seg);

        const Sample& end = seg.samples.back();
        for (std::size_t k = 0; k < labels.size(); ++k) sys.x[labels[k]] = end.x[k];

        if (seg.stop_reason == StopReason::ReachedT) {
            t = T;
            break;
        }

        const double eps = local.collision_gap_epsilon;
        auto clusters = detect_clusters(end.x, kClusterFactor * eps);

        // Only clusters that contain a gap inside the stopping layer are due.
        std::vector<std::vector<std::size_t>> due;
        for (auto& g : clusters) {
            bool triggered = false;
            for (std::size_t k = 0; k + 1 < g.size(); ++k)
                if (end.x[g[k + 1]] - end.x[g[k]] < eps) triggered = true;
            if (triggered) due.push_back(std::move(g));
        }
        if (due.empty())
            throw std::runtime_error("stopping layer reached without a due cluster");

        // Validate signs before committing any event; on violation refine the
        // layer and keep integrating (a squeezed same-sign pair separates from
        // the true cluster at a smaller threshold).
        bool violation = false;
        for (const auto& g : due) {
            for (std::size_t k = 0; k + 1 < g.size(); ++k)
                if (ss[g[k]] == ss[g[k + 1]]) violation = true;
        }
        if (violation) {
            if (++refinements > kMaxRefinements) {
                std::ostringstream os;
                os << "alternating-signs violation persists after " << kMaxRefinements
                   << " refinements at t=" << end.t << "; positions:";
                for (double xv : end.x) os << ' ' << xv;
                os << "; signs:";
                for (int sv : ss) os << ' ' << sv;
                throw AlternatingSignsViolation(os.str());
            }
            local.collision_gap_epsilon *= 0.25;
            t = end.t;
            continue;
        }

        std::vector<CollisionEvent> batch;
        for (const auto& g : due) {
            CollisionEvent ev;
            for (std::size_t k : g) {
                ev.members.push_back(labels[k]);
                ev.member_signs.push_back(ss[k]);
            }
            ev.location = 0.5 * (end.x[g.front()] + end.x[g.back()]);

            auto samples = width_samples(seg, g.front(), g.back());
            try {
                auto [tau, terr] = estimate_collision_time_with_error(samples, law.a());
                ev.tau_hat = tau;
                ev.tau_err = terr;
            } catch (const IllConditionedFit&) {
                // fall back on the isolated-collapse timescale
                double w = end.x[g.back()] - end.x[g.front()];
                double dt = std::pow(w, law.a() + 1.0) / (2.0 * (law.a() + 1.0));
                ev.tau_hat = end.t + dt;
                ev.tau_err = dt;
            }

            std::vector<double> gx;
            for (std::size_t k : g) gx.push_back(end.x[k]);
            auto res = annihilate(ev.member_signs, ev.members, gx);
            ev.survivor = res.survivor;
            for (std::size_t lab : res.removed) {
                sys.alive[lab] = 0;
                sys.x[lab] = ev.location;
            }
            if (res.survivor) sys.x[*res.survivor] = ev.location;
            batch.push_back(std::move(ev));
        }
        std::sort(batch.begin(), batch.end(),
                  [](const CollisionEvent& a, const CollisionEvent& b) {
                      return a.tau_hat < b.tau_hat;
                  });
        double t_next = end.t;
        for (auto& ev : batch) {
            t_next = std::max(t_next, ev.tau_hat);
            traj.events.push_back(std::move(ev));
        }
        if (!sys.strictly_ordered())
            throw std::runtime_error("restarted system lost strict ordering");
        t = std::min(std::max(t_next, std::nextafter(end.t, T)), T);
    }

    traj.final_state = sys;
    return traj;
}

}  // namespace pileup
