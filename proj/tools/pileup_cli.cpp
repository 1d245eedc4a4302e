// Command-line front end: simulate | oracle | verify | sweep.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pileup/analysis.hpp"
#include "pileup/collisions.hpp"
#include "pileup/config.hpp"
#include "pileup/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pileup;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json event_to_json(const CollisionEvent& ev) {
    json j;
    j["tau"] = ev.tau_hat;
    j["tau_err"] = ev.tau_err;
    j["location"] = ev.location;
    j["members"] = ev.members;
    j["member_signs"] = ev.member_signs;
    j["survivor"] = ev.survivor ? json(*ev.survivor) : json(nullptr);
    return j;
}

StepController effective_controller(const RunConfig& cfg) {
    StepController ctrl = cfg.controller;
    // The stopping layer must leave a resolvable time-to-collision.
    ctrl.collision_gap_epsilon =
        std::max(ctrl.collision_gap_epsilon, min_collision_epsilon(cfg.a));
    return ctrl;
}

HybridTrajectory simulate(const RunConfig& cfg) {
    return run_hybrid(cfg.make_law(), cfg.make_system(), cfg.T,
                      effective_controller(cfg));
}

void write_trajectory_csv(const fs::path& path, const RunConfig& cfg,
                          const HybridTrajectory& traj) {
    const std::size_t n = cfg.positions.size();
    std::ofstream out(path);
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",alive_" << i;
    out << "\n";

    std::vector<double> pos = cfg.positions;
    std::vector<int> alive(n, 1);
    std::size_t next_event = 0;

    for (const auto& seg : traj.segments) {
        // Events strictly between segments: their members left the alive set.
        while (next_event < traj.events.size()) {
            const auto& ev = traj.events[next_event];
            bool all_present = true;
            for (std::size_t lab : ev.members)
                if (std::find(seg.labels.begin(), seg.labels.end(), lab) ==
                    seg.labels.end())
                    all_present = false;
            if (all_present) break;
            for (std::size_t k = 0; k < ev.members.size(); ++k) {
                std::size_t lab = ev.members[k];
                pos[lab] = ev.location;
                if (!ev.survivor || *ev.survivor != lab) alive[lab] = 0;
            }
            ++next_event;
        }
        auto emit = [&](double t, std::span<const double> x) {
            for (std::size_t k = 0; k < seg.labels.size(); ++k)
                pos[seg.labels[k]] = x[k];
            out << fmt17(t);
            for (std::size_t i = 0; i < n; ++i) out << ',' << fmt17(pos[i]);
            for (std::size_t i = 0; i < n; ++i) out << ',' << alive[i];
            out << "\n";
        };
        if (cfg.uniform_dt > 0.0 && seg.samples.size() > 1) {
            double t0 = seg.samples.front().t;
            double t1 = seg.samples.back().t;
            emit(t0, seg.samples.front().x);
            for (double t = std::ceil(t0 / cfg.uniform_dt) * cfg.uniform_dt;
                 t < t1; t += cfg.uniform_dt)
                if (t > t0) emit(t, interpolate_segment(seg, t));
            emit(t1, seg.samples.back().x);
        } else {
            for (const auto& s : seg.samples) emit(s.t, s.x);
        }
    }
}

void write_outputs(const fs::path& dir, const RunConfig& cfg,
                   const HybridTrajectory& traj, double wall_seconds) {
    fs::create_directories(dir);
    write_trajectory_csv(dir / "trajectory.csv", cfg, traj);

    json events = json::array();
    for (const auto& ev : traj.events) events.push_back(event_to_json(ev));
    std::ofstream(dir / "events.json") << events.dump(2) << "\n";

    json summary;
    const auto& fin = traj.final_state;
    summary["final_state"] = {{"positions", fin.x},
                              {"signs", fin.sign},
                              {"alive", fin.alive}};
    summary["event_count"] = traj.events.size();
    summary["T"] = traj.T;
    summary["wall_time_seconds"] = wall_seconds;
    std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
}

int load_or_fail(const std::string& path, RunConfig& cfg) {
    try {
        cfg = load_config_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    RunConfig cfg;
    if (int rc = load_or_fail(config_path, cfg)) return rc;
    try {
        auto start = std::chrono::steady_clock::now();
        auto traj = simulate(cfg);
        double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        write_outputs(out_dir, cfg, traj, wall);
    } catch (const std::exception& e) {
        std::cerr << "simulation failure: " << e.what() << "\n"
                  << "config: " << config_to_json(cfg).dump(2) << "\n";
        return 2;
    }
    return 0;
}

int cmd_oracle(double a, double r0, int grid) {
    if (!(a > 0) || !(r0 > 0) || grid < 1) {
        std::cerr << "error: require a > 0, r0 > 0, grid >= 1\n";
        return 1;
    }
    double tau1 = two_body_tau1(a, r0);
    std::cout << "tau1," << fmt17(tau1) << "\n";
    std::cout << "c_a," << fmt17(collapse_prefactor(a)) << "\n";
    std::cout << "t,r,x_left,x_right\n";
    for (int k = 0; k <= grid; ++k) {
        double t = tau1 * static_cast<double>(k) / grid;
        auto s = two_body_closed_form(a, r0, 0.0, t);
        std::cout << fmt17(t) << ',' << fmt17(s.r) << ',' << fmt17(s.x_left)
                  << ',' << fmt17(s.x_right) << "\n";
    }
    return 0;
}

// ---- verify ---------------------------------------------------------------

struct Check {
    std::string name;
    bool pass = false;
    json details;
};

void add_holder_checks(std::vector<Check>& checks, const HybridTrajectory& traj,
                       double a, double eps, double tol) {
    for (const auto& row : fit_event_exponents(traj, a, eps)) {
        Check c;
        c.name = "holder_fit_event_" + std::to_string(row.event_index) + "_gap_" +
                 std::to_string(row.gap_index);
        if (row.ok) {
            c.pass = std::abs(row.fit.exponent - row.fit.target) <= tol &&
                     row.fit.residual >= 0.999;
            c.details = {{"exponent", row.fit.exponent},
                         {"target", row.fit.target},
                         {"residual", row.fit.residual},
                         {"prefactor", row.fit.prefactor}};
        } else {
            c.pass = false;
            c.details = {{"error", row.error}};
        }
        checks.push_back(std::move(c));
    }
}

void add_bound_checks(std::vector<Check>& checks, const HybridTrajectory& traj,
                      double a, double eps) {
    for (std::size_t e = 0; e < traj.events.size(); ++e) {
        const auto& ev = traj.events[e];
        const auto& seg = segment_for_event(traj, ev);
        FitWindow win = event_fit_window(seg, ev.tau_hat, a, eps);
        std::string tag = "_event_" + std::to_string(e);

        Check up{"upper_bound" + tag};
        up.pass = true;
        json uvals = json::array();
        for (const auto& f : check_upper_bound(seg, ev, a, win)) {
            up.pass = up.pass && f.pass;
            uvals.push_back({{"gap", f.index}, {"C_upper", f.value},
                             {"stable", f.stable}});
        }
        up.details = {{"gaps", uvals}};
        checks.push_back(std::move(up));

        Check lo{"lower_bound" + tag};
        lo.pass = true;
        auto lb = check_lower_bounds(seg, ev, a, win);
        json lvals = json::array(), ovals = json::array();
        for (const auto& f : lb.gaps) {
            lo.pass = lo.pass && f.pass;
            lvals.push_back({{"gap", f.index}, {"c_lower", f.value},
                             {"stable", f.stable}});
        }
        for (const auto& f : lb.outer) {
            lo.pass = lo.pass && f.pass;
            ovals.push_back({{"member", f.index}, {"c_outer", f.value},
                             {"stable", f.stable}});
        }
        lo.details = {{"gaps", lvals}, {"outer", ovals}};
        checks.push_back(std::move(lo));

        Check gr{"gap_ratio" + tag};
        auto rep = check_gap_ratio_bound(seg, ev, a, win);
        gr.pass = rep.pass;
        gr.details = {{"c0", rep.c0}, {"min_ratio", rep.min_ratio},
                      {"vacuous", rep.vacuous}};
        checks.push_back(std::move(gr));
    }
}

void add_inequality_checks(std::vector<Check>& checks, const HybridTrajectory& traj,
                           const InteractionLaw& law) {
    for (std::size_t si = 0; si < traj.segments.size(); ++si) {
        const auto& seg = traj.segments[si];
        std::vector<ForcingTerm> fs;
        if (traj.final_state.reduced)
            for (std::size_t lab : seg.labels)
                fs.push_back(traj.final_state.forcing[lab]);
        for (const auto& rep : check_differential_inequalities(seg, law, fs)) {
            if (!rep.applicable) continue;
            Check c{"diff_ineq_seg_" + std::to_string(si) + "_" + rep.name};
            c.pass = rep.pass;
            c.details = {{"worst_margin", rep.worst_margin},
                         {"checked", rep.checked}};
            checks.push_back(std::move(c));
        }
    }
}

void add_conservation_check(std::vector<Check>& checks,
                            const HybridTrajectory& traj, const RunConfig& cfg) {
    if (cfg.mode != "full" || cfg.g_ext.kind != ExternalForce::Kind::Zero) return;
    Check c{"conservation_sum_x"};
    double worst = 0.0;
    for (const auto& seg : traj.segments) {
        if (seg.samples.empty()) continue;
        double m0 = 0.0;
        for (double xv : seg.samples.front().x) m0 += xv;
        for (const auto& s : seg.samples) {
            double m = 0.0;
            for (double xv : s.x) m += xv;
            worst = std::max(worst, std::abs(m - m0));
        }
    }
    c.pass = worst <= 1e-9;
    c.details = {{"max_drift", worst}};
    checks.push_back(std::move(c));
}

void add_kernel_property_check(std::vector<Check>& checks, double a) {
    Check c{"kernel_properties"};
    c.pass = true;
    InteractionLaw law(a);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> pos(1e-3, 5.0);
    for (int k = 0; k < 10000 && c.pass; ++k) {
        double x = pos(rng), y = pos(rng), rho = pos(rng);
        double lo = std::min(x, y), hi = std::max(x, y);
        if (std::abs(law.f(-x) + law.f(x)) > 1e-12 * std::abs(law.f(x)))
            c.pass = false;  // oddness
        if (lo < hi && !(law.f(hi) < law.f(lo))) c.pass = false;  // decreasing
        if (!(law.kernel_g(x, rho) > 0.0)) c.pass = false;
        double h = law.kernel_h(x, rho);
        double hb = law.f_deriv(rho + x, 1) * rho;
        if (!(h < hb && hb < 0.0)) c.pass = false;
    }
    checks.push_back(std::move(c));
}

void add_table_check(std::vector<Check>& checks, double a) {
    struct Row {
        Placement placement;
        int b_i, b_kappa, sign_odd, sign_even;
    };
    static const Row table[] = {
        {Placement::SingleLeft, +1, +1, -1, -1},
        {Placement::SingleRight, +1, +1, +1, -1},
        {Placement::SingleLeft, +1, -1, +1, +1},
        {Placement::SingleRight, +1, -1, -1, +1},
        {Placement::PairLeft, +1, -1, -1, -1},
        {Placement::PairRight, +1, -1, -1, +1},
        {Placement::PairLeft, +1, +1, +1, +1},
        {Placement::PairRight, +1, +1, +1, -1},
    };
    Check c{"table1_signs"};
    c.pass = true;
    InteractionLaw law(a);
    std::mt19937 rng(54321);
    std::uniform_real_distribution<double> gap(0.05, 3.0);
    for (const auto& row : table) {
        for (int rep = 0; rep < 200 && c.pass; ++rep) {
            double xi = 0.0, xj = gap(rng), xk = 0.0, xk1 = 0.0;
            switch (row.placement) {
                case Placement::SingleLeft: xk = xi - gap(rng); break;
                case Placement::SingleRight: xk = xj + gap(rng); break;
                case Placement::PairLeft:
                    xk1 = xi - gap(rng);
                    xk = xk1 - gap(rng);
                    break;
                case Placement::PairRight:
                    xk = xj + gap(rng);
                    xk1 = xk + gap(rng);
                    break;
            }
            if (contribution_sign(law, row.b_i, -row.b_i, row.b_kappa,
                                  row.placement, xi, xj, xk, xk1) != row.sign_odd)
                c.pass = false;
            if (contribution_sign(law, row.b_i, row.b_i, row.b_kappa,
                                  row.placement, xi, xj, xk, xk1) != row.sign_even)
                c.pass = false;
        }
    }
    checks.push_back(std::move(c));
}

int write_report(const fs::path& dir, double tol, std::vector<Check>& checks) {
    fs::create_directories(dir);
    bool all = true;
    json arr = json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        json j = {{"name", c.name}, {"pass", c.pass}};
        if (!c.details.is_null()) j["details"] = c.details;
        arr.push_back(std::move(j));
    }
    json report = {{"pass", all}, {"tolerance", tol}, {"checks", arr}};
    std::ofstream(dir / "report.json") << report.dump(2) << "\n";
    if (!all)
        for (const auto& c : checks)
            if (!c.pass) std::cerr << "check failed: " << c.name << "\n";
    return all ? 0 : 1;
}

// Re-fit exponents from previously written artifacts only.
int cmd_verify_fit_only(const std::string& out_dir, double a, double tol) {
    std::vector<Check> checks;
    if (!(a > 0)) {
        std::cerr << "error: --a is required (positive) in fit-only mode\n";
        return 1;
    }
    json events;
    std::vector<double> times;
    std::vector<std::vector<double>> xs;
    std::vector<std::vector<int>> alive;
    std::size_t n = 0;
    try {
        std::ifstream ein(fs::path(out_dir) / "events.json");
        if (!ein) throw std::runtime_error("cannot open events.json");
        ein >> events;

        std::ifstream tin(fs::path(out_dir) / "trajectory.csv");
        if (!tin) throw std::runtime_error("cannot open trajectory.csv");
        std::string line;
        if (!std::getline(tin, line)) throw std::runtime_error("empty trajectory.csv");
        n = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) / 2;
        while (std::getline(tin, line)) {
            std::istringstream ss(line);
            std::string cell;
            std::vector<double> row;
            while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
            if (row.size() != 1 + 2 * n)
                throw std::runtime_error("bad column count in trajectory.csv");
            times.push_back(row[0]);
            xs.push_back({row.begin() + 1, row.begin() + 1 + n});
            std::vector<int> al;
            for (std::size_t i = 0; i < n; ++i)
                al.push_back(static_cast<int>(row[1 + n + i]));
            alive.push_back(std::move(al));
        }
    } catch (const std::exception& e) {
        Check c{"artifact_parse"};
        c.pass = false;
        c.details = {{"error", e.what()}};
        checks.push_back(std::move(c));
        return write_report(out_dir, tol, checks);
    }

    const double target = 1.0 / (1.0 + a);
    for (std::size_t e = 0; e < events.size(); ++e) {
        double tau = events[e].value("tau", 0.0);
        std::vector<std::size_t> members =
            events[e]["members"].get<std::vector<std::size_t>>();
        for (std::size_t m = 0; m + 1 < members.size(); ++m) {
            Check c{"holder_fit_event_" + std::to_string(e) + "_gap_" +
                    std::to_string(members[m])};
            std::vector<std::pair<double, double>> samples;
            for (std::size_t r = 0; r < times.size(); ++r) {
                bool ok = times[r] < tau;
                for (std::size_t lab : members) ok = ok && alive[r][lab] == 1;
                if (ok)
                    samples.push_back(
                        {times[r], xs[r][members[m + 1]] - xs[r][members[m]]});
            }
            // keep the last decades before tau
            if (!samples.empty()) {
                double dt_min = tau - samples.back().first;
                double hi = 1000.0 * std::max(dt_min, 1e-300);
                std::erase_if(samples, [&](const auto& s) {
                    return tau - s.first > hi;
                });
            }
            try {
                auto fit = fit_holder_exponent(samples, tau, target);
                c.pass = std::abs(fit.exponent - target) <= tol &&
                         fit.residual >= 0.999;
                c.details = {{"exponent", fit.exponent},
                             {"target", target},
                             {"residual", fit.residual}};
            } catch (const std::exception& ex) {
                c.pass = false;
                c.details = {{"error", ex.what()}};
            }
            checks.push_back(std::move(c));
        }
    }
    return write_report(out_dir, tol, checks);
}

int cmd_verify(const std::string& config_path, const std::string& out_dir,
               double tol) {
    RunConfig cfg;
    if (int rc = load_or_fail(config_path, cfg)) return rc;
    HybridTrajectory traj;
    try {
        auto start = std::chrono::steady_clock::now();
        traj = simulate(cfg);
        double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        write_outputs(out_dir, cfg, traj, wall);
    } catch (const std::exception& e) {
        std::cerr << "simulation failure: " << e.what() << "\n"
                  << "config: " << config_to_json(cfg).dump(2) << "\n";
        return 2;
    }

    const double eps = effective_controller(cfg).collision_gap_epsilon;
    auto law = cfg.make_law();
    std::vector<Check> checks;
    add_holder_checks(checks, traj, cfg.a, eps, tol);
    add_bound_checks(checks, traj, cfg.a, eps);
    add_inequality_checks(checks, traj, law);
    {
        Check c{"m_lipschitz"};
        auto rep = check_M_lipschitz(traj, law);
        c.pass = rep.pass;
        c.details = {{"observed", rep.observed}, {"declared", rep.declared}};
        checks.push_back(std::move(c));
    }
    add_conservation_check(checks, traj, cfg);
    add_kernel_property_check(checks, cfg.a);
    add_table_check(checks, cfg.a);
    return write_report(out_dir, tol, checks);
}

// ---- sweep ----------------------------------------------------------------

struct GridSpec {
    std::vector<double> a_values{1.0};
    std::vector<std::size_t> n_values{2};
    std::size_t seeds = 1;
    bool empty = false;
};

GridSpec parse_grid(const std::string& spec) {
    GridSpec g;
    if (spec.empty()) {
        g.empty = true;
        return g;
    }
    std::istringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("grid entry '" + part + "' is not key=values");
        std::string key = part.substr(0, eq);
        std::vector<std::string> vals;
        std::istringstream vs(part.substr(eq + 1));
        std::string v;
        while (std::getline(vs, v, ',')) vals.push_back(v);
        if (vals.empty()) throw std::runtime_error("grid key '" + key + "' has no values");
        if (key == "a") {
            g.a_values.clear();
            for (const auto& s : vals) g.a_values.push_back(std::stod(s));
        } else if (key == "n") {
            g.n_values.clear();
            for (const auto& s : vals)
                g.n_values.push_back(static_cast<std::size_t>(std::stoul(s)));
        } else if (key == "seeds") {
            g.seeds = static_cast<std::size_t>(std::stoul(vals.at(0)));
        } else {
            throw std::runtime_error("unknown grid key '" + key + "'");
        }
    }
    return g;
}

struct SweepRow {
    double a;
    std::size_t n;
    long seed;
    std::size_t gap_index;
    double exponent;
    double residual;
};

struct CellResult {
    bool ok = true;
    std::string error;
    std::vector<SweepRow> rows;
};

int cmd_sweep(const std::string& template_path, const std::string& grid_spec,
              const std::string& out_dir, long base_seed) {
    GridSpec grid;
    try {
        grid = parse_grid(grid_spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    RunConfig tmpl;
    bool have_tmpl = false;
    if (!template_path.empty()) {
        if (int rc = load_or_fail(template_path, tmpl)) return rc;
        have_tmpl = true;
    }

    fs::create_directories(out_dir);
    struct Cell {
        double a;
        std::size_t n;
        long seed;
    };
    std::vector<Cell> cells;
    if (!grid.empty)
        for (double a : grid.a_values)
            for (std::size_t n : grid.n_values)
                for (std::size_t s = 0; s < grid.seeds; ++s)
                    cells.push_back({a, n, base_seed + static_cast<long>(s)});

    std::vector<CellResult> results(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (long ci = 0; ci < static_cast<long>(cells.size()); ++ci) {
        const Cell& cell = cells[ci];
        CellResult& res = results[ci];
        try {
            RunConfig cfg = make_random_scenario(
                cell.a, cell.n, static_cast<unsigned long>(cell.seed));
            if (have_tmpl) {
                cfg.controller = tmpl.controller;
                cfg.controller.collision_gap_epsilon =
                    std::max(cfg.controller.collision_gap_epsilon,
                             min_collision_epsilon(cell.a));
            }
            std::ostringstream name;
            name << "cell_a" << cell.a << "_n" << cell.n << "_s" << cell.seed;
            fs::path cell_dir = fs::path(out_dir) / name.str();

            auto start = std::chrono::steady_clock::now();
            auto traj = simulate(cfg);
            double wall = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
            write_outputs(cell_dir, cfg, traj, wall);

            double eps = effective_controller(cfg).collision_gap_epsilon;
            for (const auto& row : fit_event_exponents(traj, cell.a, eps)) {
                if (!row.ok) throw std::runtime_error("exponent fit: " + row.error);
                res.rows.push_back({cell.a, cell.n, cell.seed, row.gap_index,
                                    row.fit.exponent, row.fit.residual});
            }
        } catch (const std::exception& e) {
            res.ok = false;
            res.error = e.what();
        }
    }

    std::ofstream csv(fs::path(out_dir) / "sweep.csv");
    csv << "a,n,seed,gap_index,exponent,residual\n";
    bool all_ok = true;
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        if (!results[ci].ok) {
            all_ok = false;
            std::cerr << "cell a=" << cells[ci].a << " n=" << cells[ci].n
                      << " seed=" << cells[ci].seed
                      << " failed: " << results[ci].error << "\n";
            continue;
        }
        for (const auto& r : results[ci].rows)
            csv << fmt17(r.a) << ',' << r.n << ',' << r.seed << ',' << r.gap_index
                << ',' << fmt17(r.exponent) << ',' << fmt17(r.residual) << "\n";
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D signed-particle pile-up simulator and verification lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", grid_spec;
    double a = 0.0, r0 = 1.0, tol = 0.05;
    long seed = 0;
    int grid_n = 50;
    bool fit_only = false;

    auto* sim = app.add_subcommand("simulate", "run one configured simulation");
    sim->add_option("--config", config_path, "config file path")->required();
    sim->add_option("--out", out_dir, "output directory");

    auto* orc = app.add_subcommand("oracle", "print the closed-form two-body solution");
    orc->add_option("--a", a, "singularity exponent")->required();
    orc->add_option("--r0", r0, "initial gap");
    orc->add_option("--grid", grid_n, "number of sample intervals");

    auto* ver = app.add_subcommand("verify", "simulate and run all applicable checks");
    ver->add_option("--config", config_path, "config file path");
    ver->add_option("--out", out_dir, "output directory");
    ver->add_option("--tol", tol, "exponent tolerance");
    ver->add_option("--a", a, "exponent (fit-only mode)");
    ver->add_flag("--fit-only", fit_only, "re-fit existing artifacts in --out");

    auto* swp = app.add_subcommand("sweep", "run a parameter grid concurrently");
    swp->add_option("--config", config_path, "optional controller template");
    swp->add_option("--grid", grid_spec, "grid spec, e.g. a=0.5,1,2;n=2,4,6;seeds=10");
    swp->add_option("--out", out_dir, "output directory");
    swp->add_option("--seed", seed, "base seed");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (orc->parsed()) return cmd_oracle(a, r0, grid_n);
    if (ver->parsed()) {
        if (fit_only) return cmd_verify_fit_only(out_dir, a, tol);
        if (config_path.empty()) {
            std::cerr << "error: --config is required unless --fit-only\n";
            return 1;
        }
        return cmd_verify(config_path, out_dir, tol);
    }
    if (swp->parsed()) return cmd_sweep(config_path, grid_spec, out_dir, seed);
    return 1;
}
