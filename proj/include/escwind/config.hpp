#pragma once

#include "escwind/aero.hpp"
#include "escwind/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace escwind::cli {

struct TurbineConfig {
    double air_density = 1.225;
    double rotor_radius = 63.0;
    double inertia = 0.0;
    double pitch_deg = 0.0;
    std::string cp_model = "analytic"; // analytic | table
    double lambda_opt = 7.55;
    double cp_opt = 0.482;
    double lambda_min = 1.0;
    double lambda_max = 16.0;
    std::string cp_table; // CSV path, relative to the config file

    // Validates and builds the physical parameters. Throws ConfigError or
    // CalibrationError.
    aero::TurbineParams build(const std::filesystem::path& base_dir = {}) const;

    bool operator==(const TurbineConfig&) const = default;
};

// A torque gain either in absolute units or as a multiple of K*.
struct GainSpec {
    double value = 1.0;
    bool relative = true;

    double resolve(double k_star) const noexcept { return relative ? value * k_star : value; }

    bool operator==(const GainSpec&) const = default;
};

struct ScenarioSpec {
    std::string name;
    sim::Objective objective = sim::Objective::aero;
    double wind_speed = 8.0;
    double omega_d = 0.1;
    double dither_amplitude = 1e5;
    double psi_deg = 0.0;
    double kappa = 4e4;
    std::optional<double> omega_h; // default ω_d/5
    std::optional<double> omega_l; // default 2ω_d
    double objective_scale = 1e-6;
    GainSpec k_init{1.0, true};
    double duration = 5000.0;
    double dt = 0.01;
    double esc_enable_time = 1000.0;
    std::size_t decimation = 100;
    std::optional<double> deriv_time_constant;
    double deriv_gain = 1.0;
    double noise_std = 0.0;
    double window_periods = 20.0;

    sim::Scenario build(double k_star, std::uint64_t noise_seed = 0) const;

    bool operator==(const ScenarioSpec&) const = default;
};

struct AnalysisSpec {
    double wind_speed = 8.0;
    std::vector<double> k_rel{0.96, 0.98, 1.0, 1.02, 1.04};
    double omega_min = 1e-6;
    double omega_max = 1e2;
    std::size_t omega_points = 200;
    std::vector<std::string> outputs{"P_r", "P_g"}; // P_r, P_g, P_hat_r; "none" in files
    double deriv_time_constant = 1e-2;
    double deriv_gain = 1.0;
    bool zero_locus = true;
    double zero_k_rel_min = 0.9;
    double zero_k_rel_max = 1.1;
    std::size_t zero_points = 41;

    void validate() const;

    bool operator==(const AnalysisSpec&) const = default;
};

struct Config {
    TurbineConfig turbine;
    std::vector<ScenarioSpec> scenarios;
    std::optional<AnalysisSpec> analysis;
    std::filesystem::path base_dir; // resolves relative paths; not serialized

    bool operator==(const Config& other) const {
        return turbine == other.turbine && scenarios == other.scenarios &&
               analysis == other.analysis;
    }
};

// Key-value text with `[turbine]`, `[scenario NAME]` and `[analysis]`
// sections and `#` comments. Sections and keys not listed above are
// rejected; errors carry the line number. Turbine keys that are not set keep
// the compiled-in defaults.
Config parse_config(std::string_view text, const std::string& source = "<config>");
Config load_config(const std::filesystem::path& path);
std::string serialize_config(const Config& config);

// The checked-in defaults (config/defaults.conf) embedded at build time.
std::string_view default_config_text() noexcept;
TurbineConfig default_turbine_config();
aero::TurbineParams default_turbine_params();

} // namespace escwind::cli
