#include "pileup/config.hpp"

#include <fstream>
#include <sstream>

namespace pileup {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number())
        fail(field, "missing or not a number");
    return j[field].get<double>();
}

RegularPart parse_f_reg(const json& j) {
    std::string type = j.value("type", "zero");
    if (type == "zero") return RegularPart::zero();
    if (type == "linear") return RegularPart::linear(require_number(j, "slope"));
    if (type == "cubic") return RegularPart::cubic(require_number(j, "coeff"));
    if (type == "sine")
        return RegularPart::sine(require_number(j, "amplitude"),
                                 require_number(j, "frequency"));
    fail("law.f_reg.type", "unknown type '" + type + "'");
}

json f_reg_to_json(const RegularPart& f) {
    switch (f.kind) {
        case RegularPart::Kind::Zero: return {{"type", "zero"}};
        case RegularPart::Kind::Linear: return {{"type", "linear"}, {"slope", f.p0}};
        case RegularPart::Kind::Cubic: return {{"type", "cubic"}, {"coeff", f.p0}};
        case RegularPart::Kind::Sine:
            return {{"type", "sine"}, {"amplitude", f.p0}, {"frequency", f.p1}};
    }
    return {{"type", "zero"}};
}

ExternalForce parse_g_ext(const json& j) {
    std::string type = j.value("type", "zero");
    if (type == "zero") return ExternalForce::zero();
    if (type == "constant") return ExternalForce::constant(require_number(j, "value"));
    if (type == "affine")
        return ExternalForce::affine(require_number(j, "slope"),
                                     require_number(j, "intercept"));
    if (type == "sine")
        return ExternalForce::sine(require_number(j, "amplitude"),
                                   require_number(j, "frequency"),
                                   require_number(j, "phase"));
    fail("law.g_ext.type", "unknown type '" + type + "'");
}

json g_ext_to_json(const ExternalForce& g) {
    switch (g.kind) {
        case ExternalForce::Kind::Zero: return {{"type", "zero"}};
        case ExternalForce::Kind::Constant: return {{"type", "constant"}, {"value", g.p0}};
        case ExternalForce::Kind::Affine:
            return {{"type", "affine"}, {"slope", g.p0}, {"intercept", g.p1}};
        case ExternalForce::Kind::Sine:
            return {{"type", "sine"}, {"amplitude", g.p0}, {"frequency", g.p1},
                    {"phase", g.p2}};
    }
    return {{"type", "zero"}};
}

ForcingTerm parse_forcing(const json& j) {
    std::string type = j.value("type", "zero");
    if (type == "zero") return ForcingTerm::zero();
    if (type == "constant") return ForcingTerm::constant(require_number(j, "value"));
    if (type == "sine")
        return ForcingTerm::sine(require_number(j, "amplitude"),
                                 require_number(j, "frequency"),
                                 require_number(j, "phase"));
    fail("forcing.type", "unknown type '" + type + "'");
}

json forcing_to_json(const ForcingTerm& F) {
    switch (F.kind) {
        case ForcingTerm::Kind::Zero: return {{"type", "zero"}};
        case ForcingTerm::Kind::Constant: return {{"type", "constant"}, {"value", F.p0}};
        case ForcingTerm::Kind::Sine:
            return {{"type", "sine"}, {"amplitude", F.p0}, {"frequency", F.p1},
                    {"phase", F.p2}};
    }
    return {{"type", "zero"}};
}

}  // namespace

ParticleSystem RunConfig::make_system() const {
    ParticleSystem sys(positions, signs);
    if (mode == "reduced") {
        sys.reduced = true;
        sys.forcing = forcing.empty()
                          ? std::vector<ForcingTerm>(positions.size(), ForcingTerm::zero())
                          : forcing;
        sys.validate();
    }
    return sys;
}

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    if (!j.contains("law") || !j["law"].is_object()) fail("law", "missing section");
    const json& law = j["law"];
    cfg.a = require_number(law, "a");
    if (!(cfg.a > 0)) fail("law.a", "must be positive");
    if (law.contains("f_reg")) cfg.f_reg = parse_f_reg(law["f_reg"]);
    if (law.contains("g_ext")) cfg.g_ext = parse_g_ext(law["g_ext"]);

    cfg.mode = j.value("mode", "full");
    if (cfg.mode != "full" && cfg.mode != "reduced")
        fail("mode", "must be 'full' or 'reduced'");

    if (!j.contains("positions") || !j["positions"].is_array())
        fail("positions", "missing or not an array");
    cfg.positions = j["positions"].get<std::vector<double>>();
    for (std::size_t i = 0; i + 1 < cfg.positions.size(); ++i)
        if (!(cfg.positions[i] < cfg.positions[i + 1]))
            fail("positions", "must be strictly increasing");

    if (!j.contains("signs") || !j["signs"].is_array())
        fail("signs", "missing or not an array");
    cfg.signs = j["signs"].get<std::vector<int>>();
    if (cfg.signs.size() != cfg.positions.size())
        fail("signs", "length does not match positions");
    for (int s : cfg.signs)
        if (s != 1 && s != -1) fail("signs", "entries must be +1 or -1");
    if (cfg.mode == "reduced") {
        for (std::size_t i = 0; i + 1 < cfg.signs.size(); ++i)
            if (cfg.signs[i] == cfg.signs[i + 1])
                fail("signs", "reduced mode requires alternating signs");
    }

    if (j.contains("forcing")) {
        if (!j["forcing"].is_array()) fail("forcing", "not an array");
        for (const auto& f : j["forcing"]) cfg.forcing.push_back(parse_forcing(f));
        if (cfg.forcing.size() != cfg.positions.size())
            fail("forcing", "length does not match positions");
    }

    cfg.T = require_number(j, "T");
    if (!(cfg.T > 0)) fail("T", "must be positive");

    if (j.contains("controller")) {
        const json& c = j["controller"];
        auto opt = [&](const char* name, double& dst) {
            if (c.contains(name)) dst = require_number(c, name);
        };
        opt("rel_tol", cfg.controller.rel_tol);
        opt("abs_tol", cfg.controller.abs_tol);
        opt("gap_cap_kappa", cfg.controller.gap_cap_kappa);
        opt("h_min", cfg.controller.h_min);
        opt("h_max", cfg.controller.h_max);
        opt("collision_gap_epsilon", cfg.controller.collision_gap_epsilon);
        try {
            cfg.controller.validate();
        } catch (const std::exception& e) {
            fail("controller", e.what());
        }
    }

    if (j.contains("uniform_dt")) cfg.uniform_dt = require_number(j, "uniform_dt");
    if (cfg.uniform_dt < 0) fail("uniform_dt", "must be nonnegative");
    if (j.contains("seed")) cfg.seed = j["seed"].get<long>();
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["law"] = {{"a", cfg.a},
                {"f_reg", f_reg_to_json(cfg.f_reg)},
                {"g_ext", g_ext_to_json(cfg.g_ext)}};
    j["mode"] = cfg.mode;
    j["positions"] = cfg.positions;
    j["signs"] = cfg.signs;
    if (!cfg.forcing.empty()) {
        json arr = json::array();
        for (const auto& F : cfg.forcing) arr.push_back(forcing_to_json(F));
        j["forcing"] = arr;
    }
    j["T"] = cfg.T;
    j["controller"] = {{"rel_tol", cfg.controller.rel_tol},
                       {"abs_tol", cfg.controller.abs_tol},
                       {"gap_cap_kappa", cfg.controller.gap_cap_kappa},
                       {"h_min", cfg.controller.h_min},
                       {"h_max", cfg.controller.h_max},
                       {"collision_gap_epsilon", cfg.controller.collision_gap_epsilon}};
    j["uniform_dt"] = cfg.uniform_dt;
    j["seed"] = cfg.seed;
    return j;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace pileup
