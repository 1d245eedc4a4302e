#include "pileup/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace pileup {

TwoBodySolution two_body_closed_form(double a, double r0, double x_center, double t) {
    if (!(a > 0) || !(r0 > 0)) throw std::invalid_argument("require a > 0 and r0 > 0");
    double tau1 = two_body_tau1(a, r0);
    if (t > tau1) throw std::domain_error("t beyond the collision time");
    double r = std::pow(2.0 * (1.0 + a) * (tau1 - t), 1.0 / (1.0 + a));
    return {tau1, r, x_center - 0.5 * r, x_center + 0.5 * r};
}

HolderFit fit_holder_exponent(std::span<const std::pair<double, double>> samples,
                              double tau_hat, double target) {
    if (samples.size() < 10)
        throw std::invalid_argument("need at least 10 samples for an exponent fit");
    double dt_min = std::numeric_limits<double>::infinity(), dt_max = 0.0;
    for (const auto& [t, q] : samples) {
        if (!(q > 0)) throw std::invalid_argument("nonpositive sample value");
        if (!(t < tau_hat)) throw std::invalid_argument("sample at or beyond tau_hat");
        double dt = tau_hat - t;
        dt_min = std::min(dt_min, dt);
        dt_max = std::max(dt_max, dt);
    }
    if (!(dt_max >= 10.0 * dt_min))
        throw std::invalid_argument("samples span less than one decade of tau_hat - t");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double m = static_cast<double>(samples.size());
    for (const auto& [t, q] : samples) {
        double lx = std::log(tau_hat - t);
        double ly = std::log(q);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    double denom = m * sxx - sx * sx;
    double slope = (m * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / m;

    double ss_tot = syy - sy * sy / m;
    double ss_res = 0.0;
    for (const auto& [t, q] : samples) {
        double e = std::log(q) - (intercept + slope * std::log(tau_hat - t));
        ss_res += e * e;
    }
    double r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;

    HolderFit fit;
    fit.exponent = slope;
    fit.prefactor = std::exp(intercept);
    fit.t_lo = tau_hat - dt_max;
    fit.t_hi = tau_hat - dt_min;
    fit.residual = std::clamp(r2, 0.0, 1.0);
    fit.target = target;
    return fit;
}

FitWindow default_fit_window(const TrajectorySegment& seg, double tau_hat,
                             double a, double collision_gap_epsilon) {
    double t_eps = std::pow(collision_gap_epsilon, 1.0 + a) / (2.0 * (1.0 + a));
    double lo = std::max(10.0 * t_eps, tau_hat - seg.samples.back().t);
    double hi = 10.0 * lo;
    double hi_max = tau_hat - seg.samples.front().t;

    auto count = [&](double h) {
        std::size_t n = 0;
        for (const auto& s : seg.samples) {
            double dt = tau_hat - s.t;
            if (dt >= lo && dt <= h) ++n;
        }
        return n;
    };
    while (count(hi) < 12 && hi < hi_max) hi = std::min(hi * 10.0, hi_max);
    return {lo, hi};
}

std::vector<std::pair<double, double>> gap_samples_in_window(
    const TrajectorySegment& seg, std::size_t gap_index, double tau_hat,
    const FitWindow& win) {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : seg.samples) {
        double dt = tau_hat - s.t;
        if (dt >= win.lo && dt <= win.hi)
            out.push_back({s.t, s.x[gap_index + 1] - s.x[gap_index]});
    }
    return out;
}

const TrajectorySegment& segment_for_event(const HybridTrajectory& traj,
                                           const CollisionEvent& ev) {
    const TrajectorySegment* found = nullptr;
    for (const auto& seg : traj.segments) {
        bool all = true;
        for (std::size_t lab : ev.members) {
            if (std::find(seg.labels.begin(), seg.labels.end(), lab) ==
                seg.labels.end()) {
                all = false;
                break;
            }
        }
        if (all) found = &seg;
    }
    if (!found) throw std::invalid_argument("no segment contains all event members");
    return *found;
}

FitWindow event_fit_window(const TrajectorySegment& seg, double tau_hat,
                           double a, double collision_gap_epsilon) {
    double t_eps = std::pow(collision_gap_epsilon, 1.0 + a) / (2.0 * (1.0 + a));
    double lo = std::max(10.0 * t_eps, tau_hat - seg.samples.back().t);
    double hi_max = tau_hat - seg.samples.front().t;
    double hi = std::min(100.0 * lo, hi_max);
    auto count = [&](double h) {
        std::size_t n = 0;
        for (const auto& s : seg.samples) {
            double dt = tau_hat - s.t;
            if (dt >= lo && dt <= h) ++n;
        }
        return n;
    };
    while (count(hi) < 12 && hi < hi_max) hi = std::min(hi * 10.0, hi_max);
    return {lo, hi};
}

std::vector<EventGapFit> fit_event_exponents(const HybridTrajectory& traj,
                                             double a,
                                             double collision_gap_epsilon) {
    std::vector<EventGapFit> out;
    const double target = 1.0 / (1.0 + a);
    for (std::size_t e = 0; e < traj.events.size(); ++e) {
        const auto& ev = traj.events[e];
        const auto& seg = segment_for_event(traj, ev);
        FitWindow win = event_fit_window(seg, ev.tau_hat, a, collision_gap_epsilon);
        for (std::size_t m = 0; m + 1 < ev.members.size(); ++m) {
            EventGapFit row;
            row.event_index = e;
            std::size_t gi = 0;
            for (std::size_t k = 0; k < seg.labels.size(); ++k)
                if (seg.labels[k] == ev.members[m]) gi = k;
            row.gap_index = gi;
            try {
                auto samples = gap_samples_in_window(seg, gi, ev.tau_hat, win);
                row.fit = fit_holder_exponent(samples, ev.tau_hat, target);
                row.ok = true;
            } catch (const std::exception& ex) {
                row.error = ex.what();
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

namespace {

std::size_t packed_index(const TrajectorySegment& seg, std::size_t label) {
    for (std::size_t k = 0; k < seg.labels.size(); ++k)
        if (seg.labels[k] == label) return k;
    throw std::invalid_argument("event member not present in segment");
}

ConstantFit ratio_fit(const TrajectorySegment& seg, double tau_hat, double expo,
                      const FitWindow& win, bool take_max,
                      const std::function<double(const Sample&)>& q) {
    auto scan = [&](double hi) {
        double best = take_max ? 0.0 : std::numeric_limits<double>::infinity();
        for (const auto& s : seg.samples) {
            double dt = tau_hat - s.t;
            if (dt < win.lo || dt > hi) continue;
            double ratio = q(s) / std::pow(dt, expo);
            best = take_max ? std::max(best, ratio) : std::min(best, ratio);
        }
        return best;
    };
    ConstantFit fit;
    fit.value = scan(win.hi);
    fit.half_window_value = scan(win.lo + 0.5 * (win.hi - win.lo));
    fit.stable = fit.value > 0 && std::isfinite(fit.value) &&
                 std::abs(fit.value - fit.half_window_value) < 0.1 * fit.value;
    return fit;
}

}  // namespace

std::vector<ConstantFit> check_upper_bound(const TrajectorySegment& seg,
                                           const CollisionEvent& ev, double a,
                                           const FitWindow& win) {
    const double expo = 1.0 / (1.0 + a);
    std::vector<ConstantFit> out;
    for (std::size_t m = 0; m + 1 < ev.members.size(); ++m) {
        std::size_t i = packed_index(seg, ev.members[m]);
        ConstantFit fit = ratio_fit(seg, ev.tau_hat, expo, win, /*take_max=*/true,
                                    [i](const Sample& s) { return s.x[i + 1] - s.x[i]; });
        fit.index = i;
        fit.pass = std::isfinite(fit.value) && fit.stable;
        out.push_back(fit);
    }
    return out;
}

LowerBounds check_lower_bounds(const TrajectorySegment& seg, const CollisionEvent& ev,
                               double a, const FitWindow& win, double floor) {
    const double expo = 1.0 / (1.0 + a);
    LowerBounds lb;
    for (std::size_t m = 0; m + 1 < ev.members.size(); ++m) {
        std::size_t i = packed_index(seg, ev.members[m]);
        ConstantFit fit = ratio_fit(seg, ev.tau_hat, expo, win, /*take_max=*/false,
                                    [i](const Sample& s) { return s.x[i + 1] - s.x[i]; });
        fit.index = i;
        fit.pass = fit.value >= floor && fit.stable;
        lb.gaps.push_back(fit);
    }
    if (ev.members.size() >= 2) {
        const double y = ev.location;
        for (std::size_t which : {std::size_t{0}, ev.members.size() - 1}) {
            std::size_t k = packed_index(seg, ev.members[which]);
            ConstantFit fit = ratio_fit(seg, ev.tau_hat, expo, win, /*take_max=*/false,
                                        [k, y](const Sample& s) {
                                            return std::abs(s.x[k] - y);
                                        });
            fit.index = k;
            fit.pass = fit.value >= floor && fit.stable;
            lb.outer.push_back(fit);
        }
    }
    return lb;
}

double lemma_ratio_constant(double a) {
    double b = std::min(1.0, 0.5 * a);
    return std::min(std::pow(b / 16.0, 1.0 / a), std::pow(b / 12.0, 1.0 / (a + 1.0)));
}

GapRatioReport check_gap_ratio_bound(const TrajectorySegment& seg,
                                     const CollisionEvent& ev, double a,
                                     const FitWindow& win) {
    GapRatioReport rep;
    rep.b = std::min(1.0, 0.5 * a);
    rep.c0 = lemma_ratio_constant(a);

    const std::size_t m = ev.members.size();
    if (m < 3) {
        rep.vacuous = true;
        rep.pass = true;
        rep.min_ratio = std::numeric_limits<double>::infinity();
        return rep;
    }
    std::vector<std::size_t> p;
    for (std::size_t lab : ev.members) p.push_back(packed_index(seg, lab));

    double worst = std::numeric_limits<double>::infinity();
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& s : seg.samples) {
        double dt = ev.tau_hat - s.t;
        if (dt < win.lo || dt > win.hi) continue;
        for (std::size_t ii = 0; ii < m; ++ii) {
            for (std::size_t jj = ii + 1; jj < m; ++jj) {
                if (ii == 0 && jj == m - 1) continue;  // (j,i) = (n,1) excluded
                double rji = s.x[p[jj]] - s.x[p[ii]];
                double left = (ii > 0) ? s.x[p[ii]] - s.x[p[ii - 1]] : inf;
                double right = (jj + 1 < m) ? s.x[p[jj + 1]] - s.x[p[jj]] : inf;
                double ref = std::min(left, right);
                worst = std::min(worst, rji / ref);
            }
        }
    }
    rep.min_ratio = worst;
    rep.pass = worst >= rep.c0;
    return rep;
}

double assembled_remainder_constant(const InteractionLaw& law,
                                    const TrajectorySegment& seg,
                                    std::span<const ForcingTerm> forcing) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    for (const auto& s : seg.samples)
        for (double xv : s.x) {
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
        }
    if (!(xmin <= xmax)) return 0.0;
    double spread = xmax - xmin;
    double freg_sup = law.f_reg().bound_on(spread);
    double drive_sup = 0.0;
    if (!forcing.empty()) {
        for (const auto& F : forcing) drive_sup = std::max(drive_sup, F.bound());
    } else {
        drive_sup = law.g_ext().bound_on(xmin, xmax);
    }
    double n = static_cast<double>(seg.labels.size());
    return 2.0 * drive_sup + 2.0 * std::max(0.0, n - 1.0) * freg_sup;
}

std::vector<InequalityReport> check_differential_inequalities(
    const TrajectorySegment& seg, const InteractionLaw& law,
    std::span<const ForcingTerm> forcing, double rel_tol) {
    InequalityReport neighbor{"neighbor_gap_lower"};   // dot r_i >= -2 f(r_i) - C
    InequalityReport pure41{"pure_collapse_rate"};     // r_i^a dot r_i >= -2
    InequalityReport odd{"pair_opposite_upper"};       // b_i = -b_j upper bound
    InequalityReport even{"pair_equal_upper"};         // b_i = b_j upper bound
    for (auto* r : {&neighbor, &pure41, &odd, &even}) {
        r->pass = true;
        r->worst_margin = std::numeric_limits<double>::infinity();
    }

    const std::size_t n = seg.signs.size();
    bool alternating = n >= 1;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (seg.signs[i] == seg.signs[i + 1]) alternating = false;

    std::vector<InequalityReport> out;
    if (n < 2 || !alternating) {
        out = {neighbor, pure41, odd, even};
        return out;  // not applicable outside the alternating setting
    }

    const double C = assembled_remainder_constant(law, seg, forcing);
    bool pure_mode = law.pure() && C == 0.0;
    neighbor.applicable = odd.applicable = even.applicable = true;
    pure41.applicable = pure_mode;

    const double inf = std::numeric_limits<double>::infinity();
    auto f_or_zero = [&](const Sample& s, long gap) {
        // boundary convention: f(r_0) = f(r_n) = 0
        if (gap < 0 || gap + 1 >= static_cast<long>(n)) return 0.0;
        return law.f(s.x[gap + 1] - s.x[gap]);
    };
    auto record = [&](InequalityReport& rep, double slack, double scale) {
        ++rep.checked;
        double margin = slack / std::max(1.0, scale);
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -rel_tol) rep.pass = false;
    };

    for (const auto& s : seg.samples) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double ri = s.x[i + 1] - s.x[i];
            double rdot = s.v[i + 1] - s.v[i];
            double rhs = -2.0 * law.f(ri) - C;
            record(neighbor, rdot - rhs, std::max(std::abs(rdot), std::abs(rhs)));
            if (pure_mode) {
                double lhs = std::pow(ri, law.a()) * rdot;
                record(pure41, lhs - (-2.0), std::max(std::abs(lhs), 2.0));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double rji = s.x[j] - s.x[i];
                double rdot = s.v[j] - s.v[i];
                double fl = f_or_zero(s, static_cast<long>(i) - 1);
                double fr = f_or_zero(s, static_cast<long>(j));
                if (seg.signs[i] == -seg.signs[j]) {
                    double rhs = -2.0 * law.f(rji) + 2.0 * (fr + fl) + C;
                    record(odd, rhs - rdot, std::max(std::abs(rdot), std::abs(rhs)));
                } else {
                    double rhs = rji * law.f_deriv(rji, 1) + fr + fl + C;
                    record(even, rhs - rdot, std::max(std::abs(rdot), std::abs(rhs)));
                }
            }
        }
    }
    (void)inf;
    out = {neighbor, pure41, odd, even};
    return out;
}

std::pair<double, std::vector<double>> to_gap_coordinates(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("empty position vector");
    double M = 0.0;
    for (double xv : x) M += xv;
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) gaps.push_back(x[i + 1] - x[i]);
    return {M, std::move(gaps)};
}

std::vector<double> from_gap_coordinates(double M, std::span<const double> gaps) {
    for (double g : gaps)
        if (!(g > 0)) throw std::invalid_argument("gaps must be positive");
    const std::size_t n = gaps.size() + 1;
    // M = n x_1 + sum_j (n - j) r_j  (j = 1..n-1)
    double acc = 0.0;
    for (std::size_t j = 0; j < gaps.size(); ++j)
        acc += static_cast<double>(n - 1 - j) * gaps[j];
    double x1 = (M - acc) / static_cast<double>(n);
    std::vector<double> x{x1};
    for (double g : gaps) x.push_back(x.back() + g);
    return x;
}

LipschitzReport check_M_lipschitz(const HybridTrajectory& traj,
                                  const InteractionLaw& law) {
    LipschitzReport rep;
    for (const auto& seg : traj.segments) {
        const auto& s = seg.samples;
        if (s.size() < 2) continue;
        double duration = s.back().t - s.front().t;
        double dt_floor = std::max(1e-9, 1e-6 * duration);
        std::vector<double> M(s.size(), 0.0);
        for (std::size_t k = 0; k < s.size(); ++k)
            for (double xv : s[k].x) M[k] += xv;
        std::size_t j = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (j <= i) j = i + 1;
            while (j < s.size() && s[j].t - s[i].t < dt_floor) ++j;
            if (j >= s.size()) break;
            rep.observed = std::max(rep.observed,
                                    std::abs(M[j] - M[i]) / (s[j].t - s[i].t));
        }

        double declared = 0.0;
        if (traj.final_state.reduced) {
            for (std::size_t lab : seg.labels)
                declared += traj.final_state.forcing[lab].bound();
        } else if (!seg.samples.empty()) {
            double xmin = std::numeric_limits<double>::infinity();
            double xmax = -xmin;
            for (const auto& sm : s)
                for (double xv : sm.x) {
                    xmin = std::min(xmin, xv);
                    xmax = std::max(xmax, xv);
                }
            declared = static_cast<double>(seg.labels.size()) *
                       law.g_ext().bound_on(xmin, xmax);
        }
        rep.declared = std::max(rep.declared, declared);
    }
    rep.pass = rep.observed <= rep.declared + 1e-6 * (1.0 + rep.declared);
    return rep;
}

}  // namespace pileup
