#include "pileup/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace pileup {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order weights (7 stages, FSAL stage included)
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

bool strictly_increasing(std::span<const double> x) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1])) return false;
    return true;
}

double gap_cap(const InteractionLaw& law, std::span<const double> x,
               const StepController& ctrl) {
    if (x.size() < 2) return ctrl.h_max;
    double mg = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) mg = std::min(mg, x[i + 1] - x[i]);
    return std::min(ctrl.h_max, ctrl.gap_cap_kappa * std::pow(mg, law.a() + 1.0));
}

}  // namespace

StepResult adaptive_step(const InteractionLaw& law,
                         std::span<const double> x, std::span<const int> sign,
                         double t, double h_try, double t_limit,
                         const StepController& ctrl,
                         std::span<const ForcingTerm> forcing) {
    const std::size_t n = x.size();
    std::vector<double> y(x.begin(), x.end());
    std::vector<double> k1 = velocity_field(law, y, sign, t, forcing);

    double h = std::min({h_try, gap_cap(law, x, ctrl), t_limit - t});
    if (!(h > 0)) throw StepFailure("nonpositive step request");

    std::vector<double> tmp(n), y5(n);
    std::vector<double> k2, k3, k4, k5, k6, k7;

    while (true) {
        bool stage_ok = true;
        double err = 0.0;
        try {
            auto stage = [&](double ct, auto&&... terms) {
                for (std::size_t i = 0; i < n; ++i)
                    tmp[i] = y[i] + h * (... + (terms.first * terms.second[i]));
                return velocity_field(law, tmp, sign, t + ct * h, forcing);
            };
            using P = std::pair<double, const std::vector<double>&>;
            k2 = stage(c2, P{a21, k1});
            k3 = stage(c3, P{a31, k1}, P{a32, k2});
            k4 = stage(c4, P{a41, k1}, P{a42, k2}, P{a43, k3});
            k5 = stage(c5, P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
            k6 = stage(1.0, P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
            for (std::size_t i = 0; i < n; ++i)
                y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                    b5 * k5[i] + b6 * k6[i]);
            k7 = velocity_field(law, y5, sign, t + h, forcing);

            for (std::size_t i = 0; i < n; ++i) {
                double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                        e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                double sc = ctrl.abs_tol +
                            ctrl.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                double e = (y5[i] - y4) / sc;
                err += e * e;
            }
            err = std::sqrt(err / static_cast<double>(n));
        } catch (const std::domain_error&) {
            stage_ok = false;  // a trial stage crossed a singularity
        }

        if (stage_ok && err <= 1.0 && strictly_increasing(y5)) {
            double t_new = t + h;
            if (t_new == t)
                throw StepFailure("step no longer advances time (inside collision layer)");
            double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            double h_next = h * std::clamp(fac, 0.2, 5.0);
            return {std::move(y5), t_new, h, err, h_next};
        }

        double fac = stage_ok && err > 1.0
                         ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5)
                         : 0.5;
        h *= fac;
        if (h < ctrl.h_min)
            throw StepFailure("step size fell below h_min without acceptance");
        if (t + h == t)
            throw StepFailure("step no longer advances time (inside collision layer)");
    }
}

TrajectorySegment integrate_segment(const InteractionLaw& law,
                                    std::span<const double> x, std::span<const int> sign,
                                    double t0, double t_end,
                                    const StepController& ctrl,
                                    std::span<const ForcingTerm> forcing,
                                    std::span<const std::size_t> labels) {
    ctrl.validate();
    if (!(t0 < t_end)) throw std::invalid_argument("require t0 < t_end");
    if (!strictly_increasing(x))
        throw std::invalid_argument("initial positions must be strictly increasing");

    TrajectorySegment seg;
    seg.t_begin = t0;
    seg.signs.assign(sign.begin(), sign.end());
    if (labels.empty())
        for (std::size_t i = 0; i < x.size(); ++i) seg.labels.push_back(i);
    else
        seg.labels.assign(labels.begin(), labels.end());

    std::vector<double> y(x.begin(), x.end());
    double t = t0;
    seg.samples.push_back({t, y, velocity_field(law, y, sign, t, forcing)});

    if (x.size() < 2) {
        // gaps cannot close; integrate plainly to t_end
        if (x.empty()) {
            seg.t_end = t_end;
            seg.stop_reason = StopReason::ReachedT;
            seg.samples.back().t = t0;
            return seg;
        }
    }

    double h = std::min(ctrl.h_max, 1e-2 * (t_end - t0));
    h = std::min(h, gap_cap(law, y, ctrl));

    while (t < t_end) {
        if (y.size() >= 2 && min_gap(y) < ctrl.collision_gap_epsilon) {
            seg.t_end = t;
            seg.stop_reason = StopReason::GapBelowEpsilon;
            return seg;
        }
        StepResult st = adaptive_step(law, y, sign, t, h, t_end, ctrl, forcing);
        y = st.x;
        t = st.t;
        h = st.h_next;
        seg.samples.push_back({t, y, velocity_field(law, y, sign, t, forcing)});
    }
    seg.t_end = t;
    seg.stop_reason = StopReason::ReachedT;
    return seg;
}

TrajectorySegment reference_integrate(const InteractionLaw& law,
                                      std::span<const double> x, std::span<const int> sign,
                                      double t0, double t_end, double fixed_h,
                                      std::span<const ForcingTerm> forcing,
                                      std::span<const std::size_t> labels) {
    if (!(fixed_h > 0)) throw std::invalid_argument("fixed_h must be positive");
    if (!strictly_increasing(x))
        throw std::invalid_argument("initial positions must be strictly increasing");

    TrajectorySegment seg;
    seg.t_begin = t0;
    seg.signs.assign(sign.begin(), sign.end());
    if (labels.empty())
        for (std::size_t i = 0; i < x.size(); ++i) seg.labels.push_back(i);
    else
        seg.labels.assign(labels.begin(), labels.end());

    const std::size_t n = x.size();
    std::vector<double> y(x.begin(), x.end()), tmp(n);
    double t = t0;
    seg.samples.push_back({t, y, velocity_field(law, y, sign, t, forcing)});

    while (t < t_end) {
        double h = std::min(fixed_h, t_end - t);
        auto k1 = velocity_field(law, y, sign, t, forcing);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        auto k2 = velocity_field(law, tmp, sign, t + 0.5 * h, forcing);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        auto k3 = velocity_field(law, tmp, sign, t + 0.5 * h, forcing);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        auto k4 = velocity_field(law, tmp, sign, t + h, forcing);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
        if (!strictly_increasing(y))
            throw std::domain_error("reference step crossed a particle ordering violation");
        seg.samples.push_back({t, y, velocity_field(law, y, sign, t, forcing)});
    }
    seg.t_end = t;
    seg.stop_reason = StopReason::ReachedT;
    return seg;
}

std::vector<double> interpolate_segment(const TrajectorySegment& seg, double t) {
    const auto& s = seg.samples;
    if (s.empty()) throw std::invalid_argument("empty segment");
    if (t <= s.front().t) return s.front().x;
    if (t >= s.back().t) return s.back().x;
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double tt, const Sample& sm) { return tt < sm.t; });
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    double h = hi.t - lo.t;
    double u = (t - lo.t) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    double h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u);
    double h11 = u * u * (u - 1);
    std::vector<double> out(lo.x.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = h00 * lo.x[i] + h10 * h * lo.v[i] + h01 * hi.x[i] + h11 * h * hi.v[i];
    return out;
}

}  // namespace pileup
