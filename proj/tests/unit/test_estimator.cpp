#include "escwind/errors.hpp"
#include "escwind/estimator.hpp"
#include "escwind/sim.hpp"
#include "escwind/turbine.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace escwind::estimator;
using escwind::aero::optimal_torque_gain;
using escwind::aero::rotor_power;
using test_support::reference_turbine;

TEST_CASE("exact estimate") {
    CHECK(estimated_aero_power_exact(4e7, 1.0, 0.0, 2e6) == 2e6);
    CHECK(estimated_aero_power_exact(0.0, 1.0, 0.3, 2e6) == 2e6);
    CHECK(estimated_aero_power_exact(2.0, 3.0, 0.5, 1.0) == 4.0);
}

TEST_CASE("exact estimate equals aerodynamic power at random operating points") {
    const auto p = reference_turbine();
    const double k_star = optimal_torque_gain(p);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> wind(5.0, 11.0);
    std::uniform_real_distribution<double> tsr(3.0, 12.0);
    std::uniform_real_distribution<double> gain(0.5, 1.5);
    for (int i = 0; i < 100; ++i) {
        const double v = wind(rng);
        const double omega = tsr(rng) * v / p.radius;
        const double k = gain(rng) * k_star;
        const double omega_dot = escwind::turbine::state_derivative(p, {omega}, {k, v});
        const double p_g = escwind::turbine::generator_power(k, omega);
        const double p_hat = estimated_aero_power_exact(p, omega, omega_dot, p_g);
        CHECK(p_hat == doctest::Approx(rotor_power(p, omega, v)).epsilon(1e-9));
    }
}

TEST_CASE("filter at rest outputs zero") {
    auto f = DerivFilter::at_rest(1e-2, 1.0, 0.95);
    for (int i = 0; i < 1000; ++i) {
        CHECK(deriv_filter_step(f, 0.95, 1e-3) == 0.0);
    }
    auto g = DerivFilter::at_rest(1e-2, 2.5, 0.95);
    CHECK(g.state == 2.5 * 0.95);
    CHECK(deriv_filter_step(g, 0.95, 1e-3) == 0.0);
}

TEST_CASE("ramp response settles to K_d times the slope") {
    for (const double gain : {1.0, 0.5}) {
        const double slope = 0.02;
        const double td = 1e-2;
        const double dt = 1e-3;
        auto f = DerivFilter::at_rest(td, gain, 1.0);
        double out = 0.0;
        for (int k = 1; k <= 1000; ++k) { // 100 T_d
            out = deriv_filter_step(f, 1.0 + slope * k * dt, dt);
        }
        CHECK(out == doctest::Approx(gain * slope).epsilon(0.01));
    }
}

TEST_CASE("sinusoid well below the filter corner is differentiated") {
    const double td = 1e-2;
    const double omega = 1.0;
    const double amp = 0.01;
    const double dt = 1e-3;
    auto f = DerivFilter::at_rest(td, 1.0, 0.0);
    double ys = 0, yc = 0;
    int n = 0;
    const long steps = std::lround(20 * 2 * std::numbers::pi / omega / dt);
    const long settle = steps / 2;
    for (long k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double y = deriv_filter_step(f, amp * std::sin(omega * t), dt);
        if (k > settle) {
            ys += y * std::sin(omega * t);
            yc += y * std::cos(omega * t);
            ++n;
        }
    }
    // y ≈ a sin + b cos with a = 2<y sin>, b = 2<y cos> over whole periods.
    const double a = 2.0 * ys / n;
    const double b = 2.0 * yc / n;
    CHECK(std::hypot(a, b) == doctest::Approx(omega * amp).epsilon(0.02));
    CHECK(std::atan2(b, a) * 180.0 / std::numbers::pi == doctest::Approx(90.0).epsilon(0.02));
}

TEST_CASE("step size must stay below the filter time constant") {
    auto f = DerivFilter::at_rest(1e-2, 1.0, 1.0);
    CHECK_THROWS_AS(deriv_filter_step(f, 1.0, 1e-2), escwind::ConfigError);
    CHECK_THROWS_AS(deriv_filter_step(f, 1.0, 0.0), escwind::ConfigError);
    CHECK_NOTHROW(deriv_filter_step(f, 1.0, 5e-3));
    DerivFilter bad;
    bad.time_constant = 0.0;
    CHECK_THROWS_AS(bad.validate(), escwind::ConfigError);
}

TEST_CASE("estimate at steady state equals both powers") {
    const auto p = reference_turbine();
    const double k = 0.9 * optimal_torque_gain(p);
    const double omega = escwind::turbine::steady_state(p, k, 8.0);
    auto f = DerivFilter::at_rest(1e-2, 1.0, omega);
    const double p_g = escwind::turbine::generator_power(k, omega);
    double p_hat = 0.0;
    for (int i = 0; i < 100; ++i) {
        p_hat = estimated_aero_power(f, p, omega, p_g, 5e-3);
    }
    CHECK(p_hat == p_g);
    CHECK(p_hat == doctest::Approx(rotor_power(p, omega, 8.0)).epsilon(1e-9));
}

TEST_CASE("estimation error shrinks with the filter time constant") {
    const auto p = reference_turbine();
    const double k_bar = optimal_torque_gain(p);
    const double omega0 = escwind::turbine::steady_state(p, k_bar, 8.0);
    const double dt = 1e-4;
    const auto trace = escwind::sim::run_open_loop(
        p, 8.0, [&](double t) { return k_bar * (1.0 + 0.05 * std::sin(0.5 * t)); }, omega0, 40.0,
        dt);

    std::vector<double> errors;
    for (const double td : {1e-1, 1e-2, 1e-3}) {
        auto f = DerivFilter::at_rest(td, 1.0, omega0);
        double worst = 0.0;
        for (std::size_t k = 1; k < trace.size(); ++k) {
            const double p_hat =
                estimated_aero_power(f, p, trace.omega_r[k], trace.P_g[k], dt);
            if (trace.t[k] > 20.0) {
                worst = std::max(worst, std::abs(p_hat - trace.P_r[k]));
            }
        }
        errors.push_back(worst);
    }
    CHECK(errors[1] < errors[0]);
    CHECK(errors[2] < errors[1]);
}
