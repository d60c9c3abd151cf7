#include "escwind/errors.hpp"
#include "escwind/sim.hpp"
#include "escwind/turbine.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace escwind::sim;
using escwind::aero::optimal_torque_gain;
using test_support::reference_turbine;

namespace {

Scenario base_scenario(double k_init) {
    Scenario s;
    s.name = "unit";
    s.esc = escwind::esc::EscConfig::with_default_filters(0.1, 1e5, 0.0, 4e4, 0.0);
    s.K_init = k_init;
    s.duration = 1500.0;
    s.esc_enable_time = 1000.0;
    s.dt = 0.01;
    s.decimation = 1;
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("open-loop equilibrium without dither or adaptation") {
    const auto p = reference_turbine();
    const double k = 0.9 * optimal_torque_gain(p);
    auto s = base_scenario(k);
    s.esc.amplitude = 0.0;
    s.esc.kappa = 0.0;
    s.duration = 2000.0;
    s.decimation = 100;
    const double target = escwind::turbine::steady_state(p, k, 8.0);
    s.omega_init = 1.05 * target;
    const auto trace = run_scenario(p, s);
    CHECK(trace.omega_r.back() == doctest::Approx(target).epsilon(1e-6));
    CHECK(trace.K_tilde.back() == k);
}

TEST_CASE("uniform grid and decimation") {
    const auto p = reference_turbine();
    auto s = base_scenario(optimal_torque_gain(p));
    s.decimation = 250;
    const auto trace = run_scenario(p, s);
    CHECK(trace.size() == 150000 / 250 + 1);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(trace.t[i] == doctest::Approx(2.5 * static_cast<double>(i)).epsilon(1e-12));
    }
    CHECK_FALSE(trace.has_estimate());
}

TEST_CASE("discrete power balance") {
    const auto p = reference_turbine();
    const double k_star = optimal_torque_gain(p);
    auto s = base_scenario(k_star);
    s.esc.kappa = 0.0;
    s.duration = 300.0;
    s.esc_enable_time = 0.0;
    s.omega_init = 0.8 * escwind::turbine::steady_state(p, k_star, 8.0);
    const auto tr = run_scenario(p, s);

    // ∫ I ω ω̇ dt = ΔE; ∫(P_r − P_g) dt with the gain held over each step.
    double net = 0.0;
    for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
        const double w0 = tr.omega_r[k];
        const double w1 = tr.omega_r[k + 1];
        const double pr = 0.5 * (tr.P_r[k] + tr.P_r[k + 1]);
        const double pg = 0.5 * tr.K_total[k] * (w0 * w0 * w0 + w1 * w1 * w1);
        net += (pr - pg) * s.dt;
    }
    const double kinetic = 0.5 * p.inertia *
                           (tr.omega_r.back() * tr.omega_r.back() - tr.omega_r[0] * tr.omega_r[0]);
    CHECK(kinetic > 0.0);
    CHECK(net == doctest::Approx(kinetic).epsilon(1e-3));
}

TEST_CASE("reruns are identical") {
    const auto p = reference_turbine();
    auto s = base_scenario(0.8 * optimal_torque_gain(p));
    const auto a = run_scenario(p, s);
    const auto b = run_scenario(p, s);
    CHECK(a.K_tilde == b.K_tilde);
    CHECK(a.omega_r == b.omega_r);
    CHECK(a.J == b.J);
}

TEST_CASE("noise is seeded") {
    const auto p = reference_turbine();
    auto s = base_scenario(0.8 * optimal_torque_gain(p));
    s.duration = 1100.0;
    s.noise_std = 1e3;
    s.noise_seed = 1;
    const auto a = run_scenario(p, s);
    const auto b = run_scenario(p, s);
    s.noise_seed = 2;
    const auto c = run_scenario(p, s);
    CHECK(a.J == b.J);
    CHECK(a.J != c.J);
    CHECK(a.P_r[0] != a.J[0]);
}

TEST_CASE("adaptation starts at the enable time") {
    const auto p = reference_turbine();
    auto s = base_scenario(0.8 * optimal_torque_gain(p));
    const auto tr = run_scenario(p, s);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.t[i] <= 1000.0) {
            REQUIRE(tr.K_tilde[i] == tr.K_tilde[0]);
        }
    }
    CHECK(tr.K_tilde.back() > tr.K_tilde[0]);
}

TEST_CASE("estimated objective records the estimate") {
    const auto p = reference_turbine();
    auto s = base_scenario(0.9 * optimal_torque_gain(p));
    s.objective = Objective::estimated;
    s.deriv = DerivConfig{1e-2, 1.0};
    s.dt = 0.005;
    const auto tr = run_scenario(p, s);
    REQUIRE(tr.has_estimate());
    CHECK(tr.P_hat_r.size() == tr.size());
    CHECK(tr.J == tr.P_hat_r);
    CHECK(tr.P_hat_r[0] == tr.P_g[0]);
    // The dither moves ω slowly, so the estimate stays close to the true power.
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        worst = std::max(worst, std::abs(tr.P_hat_r[i] - tr.P_r[i]) / tr.P_r[i]);
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("scenario validation") {
    const auto p = reference_turbine();
    auto s = base_scenario(optimal_torque_gain(p));
    CHECK_NOTHROW(s.validate());

    auto bad = s;
    bad.duration = 1000.0;
    CHECK_THROWS_AS(bad.validate(), escwind::ConfigError);
    bad = s;
    bad.esc_enable_time = -1.0;
    CHECK_THROWS_AS(bad.validate(), escwind::ConfigError);
    bad = s;
    bad.dt = 2.0;
    CHECK_THROWS_AS(bad.validate(), escwind::ConfigError);
    bad = s;
    bad.objective = Objective::estimated;
    CHECK_THROWS_AS(bad.validate(), escwind::ConfigError);
    bad.deriv = DerivConfig{1e-2, 1.0};
    CHECK_THROWS_AS(bad.validate(), escwind::ConfigError); // dt = T_d
    bad.dt = 0.005;
    CHECK_NOTHROW(bad.validate());
    bad = s;
    bad.K_init = 0.0;
    CHECK_THROWS_AS(bad.validate(), escwind::ConfigError);
}

TEST_CASE("runaway adaptation aborts with the failing time") {
    const auto p = reference_turbine();
    auto s = base_scenario(0.8 * optimal_torque_gain(p));
    s.esc.kappa = -1e9;
    s.duration = 5000.0;
    try {
        run_scenario(p, s);
        FAIL("expected a SimulationError");
    } catch (const escwind::SimulationError& e) {
        CHECK(e.time() >= 1000.0);
        CHECK(e.time() < 5000.0);
        CHECK(std::string(e.what()).find("t = ") == 0);
    }
}

TEST_CASE("convergence metric") {
    SimTrace tr;
    for (int i = 0; i <= 1000; ++i) {
        tr.t.push_back(i * 1.0);
        tr.K_tilde.push_back(5.0);
    }
    auto m = convergence_metric(tr, 5, 0.1, 4.0);
    CHECK(m.spread == 0.0);
    CHECK(m.mean == 5.0);
    CHECK(m.rel_deviation == doctest::Approx(0.25));
    CHECK(m.window == doctest::Approx(5 * 2 * std::numbers::pi / 0.1));
    CHECK_THROWS_AS(convergence_metric(tr, 20, 0.1, 4.0), std::invalid_argument);

    const auto p = reference_turbine();
    auto s = base_scenario(0.9 * optimal_torque_gain(p));
    s.esc.kappa = 0.0;
    const auto run = run_scenario(p, s);
    m = convergence_metric(run, 5, 0.1, optimal_torque_gain(p));
    CHECK(m.mean == s.K_init);
    CHECK(m.spread == 0.0);
}

TEST_CASE("trace CSV") {
    const auto p = reference_turbine();
    auto s = base_scenario(optimal_torque_gain(p));
    s.decimation = 1000;
    const auto tr = run_scenario(p, s);
    write_trace_csv(tr, test_support::scratch_path("trace_plain.csv"));
    const auto text = slurp(test_support::scratch_path("trace_plain.csv"));
    CHECK(text.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    // seven commas, empty P_hat_r between P_g and J
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
    CHECK(line.find(",,") != std::string::npos);

    write_trace_csv(tr, test_support::scratch_path("trace_plain_again.csv"));
    CHECK(slurp(test_support::scratch_path("trace_plain_again.csv")) == text);
}
