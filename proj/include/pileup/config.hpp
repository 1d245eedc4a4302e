#ifndef PILEUP_CONFIG_HPP
#define PILEUP_CONFIG_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "pileup/integrator.hpp"
#include "pileup/interaction.hpp"
#include "pileup/system.hpp"

namespace pileup {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One simulation run, parsed losslessly from / serialized back to JSON.
struct RunConfig {
    double a = 1.0;
    RegularPart f_reg = RegularPart::zero();
    ExternalForce g_ext = ExternalForce::zero();
    std::string mode = "full";  // "full" or "reduced"
    std::vector<double> positions;
    std::vector<int> signs;
    std::vector<ForcingTerm> forcing;  // reduced mode, one per particle
    double T = 1.0;
    StepController controller;
    double uniform_dt = 0.0;  // optional dense-output grid (0 = accepted steps only)
    long seed = 0;

    InteractionLaw make_law() const { return InteractionLaw(a, f_reg, g_ext); }
    ParticleSystem make_system() const;
};

RunConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config_file(const std::string& path);

}  // namespace pileup

#endif
