#include "escwind/config.hpp"
#include "escwind/errors.hpp"

#include "support.hpp"

#include <doctest.h>

#include <string>

using namespace escwind::cli;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const escwind::ConfigError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("embedded defaults") {
    const auto t = default_turbine_config();
    CHECK(t.air_density == 1.225);
    CHECK(t.rotor_radius == 63.0);
    CHECK(t.inertia == 43784725.0);
    CHECK(t.lambda_opt == 7.55);
    CHECK(t.cp_opt == 0.482);
    CHECK(t.cp_model == "analytic");
    CHECK(default_config_text().find("[turbine]") != std::string_view::npos);

    const auto p = default_turbine_params();
    CHECK(p.cp_surface.optimum().lambda == doctest::Approx(7.55).epsilon(1e-10));
    CHECK(p.inertia == test_support::kInertia);
}

TEST_CASE("parse a full config") {
    const auto c = parse_config(R"(
# comment
[turbine]
rotor_radius = 60   # trailing comment

[scenario a]
objective = generator
omega_d = 0.05
psi_deg = -23
k_init = 1.5e6
deriv_time_constant = 0.01

[scenario b.2]
objective = estimated
deriv_time_constant = 0.02
dt = 0.005

[analysis]
k_rel = 0.9, 1.1
outputs = P_r, P_hat_r
zero_locus = false
)");
    CHECK(c.turbine.rotor_radius == 60.0);
    CHECK(c.turbine.air_density == 1.225);
    REQUIRE(c.scenarios.size() == 2);
    CHECK(c.scenarios[0].name == "a");
    CHECK(c.scenarios[0].objective == escwind::sim::Objective::generator);
    CHECK(c.scenarios[0].psi_deg == -23.0);
    CHECK(c.scenarios[0].k_init == GainSpec{1.5e6, false});
    CHECK(c.scenarios[1].k_init == GainSpec{1.0, true});
    CHECK(c.scenarios[1].deriv_time_constant == 0.02);
    REQUIRE(c.analysis);
    CHECK(c.analysis->k_rel == std::vector<double>{0.9, 1.1});
    CHECK(c.analysis->outputs == std::vector<std::string>{"P_r", "P_hat_r"});
    CHECK_FALSE(c.analysis->zero_locus);

    const auto scenario = c.scenarios[0].build(2e6, 0);
    CHECK(scenario.K_init == 1.5e6);
    CHECK(scenario.esc.omega_h == 0.05 / 5.0);
    CHECK(scenario.esc.omega_l == 2.0 * 0.05);
    CHECK(scenario.esc.psi == doctest::Approx(-23.0 * 3.14159265358979 / 180.0));
    CHECK(c.scenarios[1].build(2e6, 0).K_init == 2e6);
}

TEST_CASE("round trip through serialization") {
    const auto c = parse_config(R"(
[scenario x]
objective = estimated
deriv_time_constant = 0.01
dt = 0.005
omega_h = 0.03
noise_std = 10
k_init_rel = 0.7
[analysis]
omega_points = 50
)");
    const auto text = serialize_config(c);
    const auto back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
}

TEST_CASE("errors carry line numbers") {
    CHECK(error_line("[turbine]\nrotor_radus = 63\n") == 2);
    CHECK(error_line("[turbine]\nrotor_radius = 63\nrotor_radius = 64\n") == 3);
    CHECK(error_line("[turbine]\n\nair_density =\n") == 3);
    CHECK(error_line("[turbine]\nair_density = abc\n") == 2);
    CHECK(error_line("[turbine]\nair_density = 1.2.3\n") == 2);
    CHECK(error_line("air_density = 1.2\n") == 1);
    CHECK(error_line("[nope]\n") == 1);
    CHECK(error_line("[scenario]\n") == 1);
    CHECK(error_line("[scenario a b]\n") == 1);
    CHECK(error_line("[scenario a]\n[scenario a]\n") == 2);
    CHECK(error_line("[scenario a]\nobjective = torque\n") == 2);
    CHECK(error_line("[scenario a]\nk_init = 1e6\nk_init_rel = 0.8\n") == 3);
    CHECK(error_line("[analysis]\noutputs = P_x\n") == 2);
    CHECK(error_line("[analysis]\nzero_locus = maybe\n") == 2);
    CHECK(error_line("[turbine]\njust text\n") == 2);
    CHECK(error_line("[turbine\n") == 1);

    try {
        load_config(test_support::data_path("malformed.conf"));
        FAIL("expected ConfigError");
    } catch (const escwind::ConfigError& e) {
        CHECK(e.line() == 4);
        const std::string what = e.what();
        CHECK(what.find("malformed.conf: line 4: unknown key 'rotor_radus'") != std::string::npos);
    }
}

TEST_CASE("physical values are validated before any run") {
    auto c = parse_config("[turbine]\ninertia = -5\n");
    CHECK_THROWS_AS(c.turbine.build(), escwind::ConfigError);
    c = parse_config("[turbine]\ncp_opt = 0.7\n");
    CHECK_THROWS_AS(c.turbine.build(), escwind::CalibrationError);
    c = parse_config("[scenario s]\nduration = 500\n");
    CHECK_THROWS_AS(c.scenarios[0].build(2e6), escwind::ConfigError);
    c = parse_config("[scenario s]\nobjective = estimated\n");
    CHECK_THROWS_AS(c.scenarios[0].build(2e6), escwind::ConfigError);
    c = parse_config("[analysis]\nomega_min = 10\nomega_max = 1\n");
    CHECK_THROWS_AS(c.analysis->validate(), escwind::ConfigError);
}

TEST_CASE("tabulated surface path is relative to the config file") {
    const auto c = load_config(test_support::data_path("table.conf"));
    CHECK(c.turbine.cp_model == "table");
    const auto p = c.turbine.build(c.base_dir);
    CHECK(p.cp_surface.is_tabulated());
    CHECK_THROWS(c.turbine.build("/nonexistent"));
}
