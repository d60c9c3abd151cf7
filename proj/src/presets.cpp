#include "escwind/presets.hpp"

#include "escwind/linear.hpp"
#include "text_util.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>

namespace escwind::cli {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

ScenarioSpec base_scenario(std::string name, sim::Objective objective, double omega_d,
                           double psi_deg) {
    ScenarioSpec s;
    s.name = std::move(name);
    s.objective = objective;
    s.omega_d = omega_d;
    s.psi_deg = psi_deg;
    s.wind_speed = 8.0;
    s.dither_amplitude = 1e5;
    return s;
}

// Rounded to 0.01 deg so preset files stay readable.
double computed_psi_deg(const aero::TurbineParams& params, double omega_d) {
    const double psi = linear::compensation_angle(params, 8.0, omega_d, omega_d / 5.0);
    return std::round(psi * kRadToDeg * 100.0) / 100.0;
}

std::vector<PresetParameter> common_rows() {
    return {
        {"wind_speed", "8 m/s", Provenance::published},
        {"dither_amplitude", "1e5 Nm/(rad/s)^2", Provenance::published},
        {"omega_h, omega_l", "omega_d/5, 2*omega_d", Provenance::published},
        {"objective_scale", "1e-6 (J in MW)", Provenance::default_value},
        {"esc_enable_time", "1000 s", Provenance::published},
    };
}

Preset fig3() {
    Preset p{"fig3", "aero vs generator objective, omega_d = 0.1 rad/s, psi = 0", {}, {}};
    for (const auto objective : {sim::Objective::aero, sim::Objective::generator}) {
        auto s = base_scenario(std::string("fig3_") + std::string(sim::objective_name(objective)),
                               objective, 0.1, 0.0);
        s.kappa = 2e5;
        s.k_init = GainSpec{0.8, true};
        s.duration = 5000.0;
        p.config.scenarios.push_back(s);
    }
    p.parameters = common_rows();
    p.parameters.push_back({"omega_d", "0.1 rad/s", Provenance::published});
    p.parameters.push_back({"psi", "0 deg", Provenance::published});
    p.parameters.push_back({"kappa", "2e5", Provenance::default_value});
    p.parameters.push_back({"K_init", "0.8 K*", Provenance::default_value});
    p.parameters.push_back({"duration", "5000 s", Provenance::default_value});
    return p;
}

Preset fig4(const aero::TurbineParams& params, bool slow) {
    const double omega_d = slow ? 0.01 : 0.1;
    const double psi_c = computed_psi_deg(params, omega_d);
    Preset p{slow ? "fig4b" : "fig4a",
             std::string("phase-compensated ESC, omega_d = ") + fmt(omega_d) + " rad/s",
             {},
             {}};
    const auto add = [&](std::string suffix, sim::Objective objective, double psi) {
        auto s = base_scenario(p.name + "_" + suffix, objective, omega_d, psi);
        s.kappa = 4e4;
        s.k_init = GainSpec{0.8, true};
        if (slow) {
            s.duration = 80000.0;
            s.dt = 0.05;
            s.decimation = 20;
        } else {
            s.duration = 30000.0;
        }
        p.config.scenarios.push_back(s);
    };
    add("aero_comp", sim::Objective::aero, psi_c);
    add("aero_offset", sim::Objective::aero, psi_c + 30.0);
    add("generator_lag", sim::Objective::generator, psi_c - 5.0);
    add("generator_comp", sim::Objective::generator, psi_c);
    add("generator_lead", sim::Objective::generator, psi_c + 5.0);

    p.parameters = common_rows();
    p.parameters.push_back({"omega_d", fmt(omega_d) + " rad/s", Provenance::published});
    p.parameters.push_back({"psi_comp", fmt(psi_c) + " deg", Provenance::computed});
    p.parameters.push_back({"psi offsets", "aero +30 deg; generator -5/0/+5 deg",
                            Provenance::default_value});
    p.parameters.push_back({"kappa", "4e4", Provenance::default_value});
    p.parameters.push_back({"K_init", "0.8 K*", Provenance::default_value});
    p.parameters.push_back(
        {"duration", slow ? "80000 s" : "30000 s", Provenance::default_value});
    return p;
}

Preset fig5() {
    Preset p{"fig5", "zero locus of P_g(s) for K crossing K*", {}, {}};
    AnalysisSpec a;
    a.outputs.clear();
    a.zero_locus = true;
    a.zero_k_rel_min = 0.9;
    a.zero_k_rel_max = 1.1;
    a.zero_points = 41;
    p.config.analysis = a;
    p.parameters = {
        {"wind_speed", "8 m/s", Provenance::published},
        {"K range", "0.9 .. 1.1 K*, 41 points", Provenance::default_value},
    };
    return p;
}

Preset fig6() {
    Preset p{"fig6", "Bode plots of P_r(s) and P_g(s) around K*", {}, {}};
    AnalysisSpec a;
    a.outputs = {"P_r", "P_g"};
    a.zero_locus = false;
    p.config.analysis = a;
    p.parameters = {
        {"wind_speed", "8 m/s", Provenance::published},
        {"K set", "{0.96, 0.98, 1.0, 1.02, 1.04} K*", Provenance::published},
        {"omega range", "1e-6 .. 1e2 rad/s", Provenance::published},
        {"omega_points", "200", Provenance::default_value},
    };
    return p;
}

Preset fig7() {
    Preset p{"fig7", "Bode plot of the estimated aerodynamic power P_hat_r(s)", {}, {}};
    AnalysisSpec a;
    a.outputs = {"P_hat_r"};
    a.zero_locus = false;
    a.deriv_time_constant = 1e-2;
    a.deriv_gain = 1.0;
    p.config.analysis = a;
    p.parameters = {
        {"wind_speed", "8 m/s", Provenance::published},
        {"T_d", "1e-2 s", Provenance::published},
        {"K_d", "1", Provenance::published},
        {"K set", "{0.96, 0.98, 1.0, 1.02, 1.04} K*", Provenance::default_value},
        {"omega range", "1e-6 .. 1e2 rad/s", Provenance::default_value},
    };
    return p;
}

Preset fig8() {
    Preset p{"fig8", "ESC on the estimated aerodynamic power", {}, {}};
    const auto add = [&](std::string name, sim::Objective objective, double psi) {
        auto s = base_scenario(std::move(name), objective, 0.1, psi);
        s.kappa = 4e4;
        s.k_init = GainSpec{0.7, true};
        s.duration = 20000.0;
        s.dt = 0.005;
        s.decimation = 200;
        if (objective == sim::Objective::estimated) {
            s.deriv_time_constant = 1e-2;
            s.deriv_gain = 1.0;
        }
        p.config.scenarios.push_back(s);
    };
    add("fig8_aero", sim::Objective::aero, 0.0);
    add("fig8_estimated_m30", sim::Objective::estimated, -30.0);
    add("fig8_estimated_0", sim::Objective::estimated, 0.0);
    add("fig8_estimated_p30", sim::Objective::estimated, 30.0);
    p.parameters = common_rows();
    p.parameters.push_back({"omega_d", "0.1 rad/s", Provenance::published});
    p.parameters.push_back({"psi", "{-30, 0, 30} deg", Provenance::published});
    p.parameters.push_back({"kappa", "4e4", Provenance::published});
    p.parameters.push_back({"K_init", "0.7 K*", Provenance::published});
    p.parameters.push_back({"T_d, K_d", "1e-2 s, 1", Provenance::published});
    p.parameters.push_back({"dt", "0.005 s (must be < T_d)", Provenance::default_value});
    p.parameters.push_back({"duration", "20000 s", Provenance::default_value});
    return p;
}

std::string_view provenance_name(Provenance p) {
    switch (p) {
    case Provenance::published:
        return "published";
    case Provenance::default_value:
        return "default";
    case Provenance::computed:
        return "computed";
    }
    return "?";
}

} // namespace

std::vector<Preset> builtin_presets() {
    const auto params = default_turbine_params();
    auto presets = std::vector<Preset>{fig3(),  fig4(params, false), fig4(params, true), fig5(),
                                       fig6(),  fig7(),              fig8()};
    for (auto& p : presets) {
        p.config.turbine = default_turbine_config();
    }
    return presets;
}

std::optional<Preset> find_preset(std::string_view name) {
    for (auto& p : builtin_presets()) {
        if (p.name == name) {
            return p;
        }
    }
    return std::nullopt;
}

void print_presets(std::ostream& out) {
    for (const auto& p : builtin_presets()) {
        out << p.name << ": " << p.description << '\n';
        for (const auto& row : p.parameters) {
            out << "  " << std::left << std::setw(20) << row.name << std::setw(40) << row.value
                << '[' << provenance_name(row.source) << "]\n";
        }
        if (!p.config.scenarios.empty()) {
            out << "  scenarios:";
            for (const auto& s : p.config.scenarios) {
                out << ' ' << s.name;
            }
            out << '\n';
        }
        out << '\n';
    }
}

} // namespace escwind::cli
