#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "pileup/config.hpp"

using namespace pileup;
using nlohmann::json;

namespace {

json minimal() {
    return json{{"law", {{"a", 1.0}}},
                {"positions", {0.0, 1.0}},
                {"signs", {-1, 1}},
                {"T", 1.0}};
}

void expect_error(const json& j, const std::string& field) {
    try {
        parse_config(j);
        FAIL("expected ConfigError for field '" << field << "'");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'" + field + "'") != std::string::npos);
    }
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    auto cfg = parse_config(minimal());
    CHECK(cfg.a == 1.0);
    CHECK(cfg.mode == "full");
    CHECK(cfg.f_reg.is_zero());
    CHECK(cfg.T == 1.0);
    CHECK(cfg.uniform_dt == 0.0);
    CHECK(cfg.seed == 0);
    auto sys = cfg.make_system();
    CHECK(sys.x == std::vector<double>{0.0, 1.0});
    CHECK(!sys.reduced);
    auto law = cfg.make_law();
    CHECK(law.pure());
}

TEST_CASE("round trip is lossless") {
    json j = minimal();
    j["law"]["a"] = 1.75;
    j["law"]["f_reg"] = {{"type", "sine"}, {"amplitude", 0.3}, {"frequency", 2.5}};
    j["law"]["g_ext"] = {{"type", "affine"}, {"slope", -0.2}, {"intercept", 0.7}};
    j["mode"] = "reduced";
    j["positions"] = {-0.5, 0.25, 1.5};
    j["signs"] = {1, -1, 1};
    j["forcing"] = {{{"type", "zero"}},
                    {{"type", "constant"}, {"value", 0.1}},
                    {{"type", "sine"}, {"amplitude", 0.2}, {"frequency", 3.0}, {"phase", 0.5}}};
    j["T"] = 2.5;
    j["controller"] = {{"rel_tol", 1e-9},    {"abs_tol", 1e-12},
                       {"gap_cap_kappa", 0.02}, {"h_min", 1e-200},
                       {"h_max", 0.2},       {"collision_gap_epsilon", 1e-5}};
    j["uniform_dt"] = 0.01;
    j["seed"] = 42;

    auto cfg = parse_config(j);
    json back = config_to_json(cfg);
    auto cfg2 = parse_config(back);
    CHECK(config_to_json(cfg2) == back);
    CHECK(back["law"]["a"] == 1.75);
    CHECK(back["controller"]["rel_tol"] == 1e-9);
    CHECK(back["forcing"][2]["phase"] == 0.5);
    CHECK(back["seed"] == 42);
    CHECK(cfg.make_system().reduced);
}

TEST_CASE("validation errors name the offending field") {
    {
        json j = minimal();
        j.erase("law");
        expect_error(j, "law");
    }
    {
        json j = minimal();
        j["law"]["a"] = -2.0;
        expect_error(j, "law.a");
    }
    {
        json j = minimal();
        j["law"].erase("a");
        expect_error(j, "a");
    }
    {
        json j = minimal();
        j["positions"] = {1.0, 0.0};
        expect_error(j, "positions");
    }
    {
        json j = minimal();
        j["signs"] = {-1, 2};
        expect_error(j, "signs");
    }
    {
        json j = minimal();
        j["signs"] = {-1};
        expect_error(j, "signs");
    }
    {
        json j = minimal();
        j["mode"] = "reduced";
        j["signs"] = {1, 1};
        expect_error(j, "signs");
    }
    {
        json j = minimal();
        j["mode"] = "semireduced";
        expect_error(j, "mode");
    }
    {
        json j = minimal();
        j["T"] = 0.0;
        expect_error(j, "T");
    }
    {
        json j = minimal();
        j["controller"] = {{"rel_tol", -1.0}};
        expect_error(j, "controller");
    }
    {
        json j = minimal();
        j["uniform_dt"] = -0.1;
        expect_error(j, "uniform_dt");
    }
    {
        json j = minimal();
        j["forcing"] = {{{"type", "zero"}}};
        expect_error(j, "forcing");
    }
    {
        json j = minimal();
        j["law"]["f_reg"] = {{"type", "quartic"}};
        expect_error(j, "law.f_reg.type");
    }
}

TEST_CASE("config file loading") {
    const std::string path = "test_config_tmp.json";
    {
        std::ofstream out(path);
        out << minimal().dump(2);
    }
    auto cfg = load_config_file(path);
    CHECK(cfg.a == 1.0);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_config_file("no_such_file.json"), ConfigError);

    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_config_file(path), ConfigError);
    std::remove(path.c_str());
}
