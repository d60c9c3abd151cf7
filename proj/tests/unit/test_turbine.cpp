#include "escwind/errors.hpp"
#include "escwind/turbine.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace escwind::turbine;
using escwind::aero::optimal_torque_gain;
using escwind::aero::rotor_power;
using test_support::reference_turbine;

TEST_CASE("torque command and generator power") {
    CHECK(torque_command(2e6, 1.0) == 2e6);
    CHECK(torque_command(3e6, 0.0) == 0.0);
    CHECK(torque_command(1e6, 0.9) == doctest::Approx(8.1e5).epsilon(1e-14));
    CHECK(generator_power(2e6, 1.0) == 2e6);
    CHECK(generator_power(3e6, 0.0) == 0.0);
    CHECK(generator_power(1e6, 0.9) == doctest::Approx(7.29e5).epsilon(1e-14));
}

TEST_CASE("steady state at the optimal gain tracks the optimal tip-speed ratio") {
    const auto p = reference_turbine();
    const double k_star = optimal_torque_gain(p);
    const double omega = steady_state(p, k_star, 8.0);
    CHECK(omega == doctest::Approx(7.55 * 8.0 / 63.0).epsilon(1e-10));
    CHECK(steady_state(p, k_star, 10.0) == doctest::Approx(omega * 10.0 / 8.0).epsilon(1e-10));

    const double tau_scale = escwind::aero::rotor_torque(p, omega, 8.0);
    const double residual = state_derivative(p, {omega}, {k_star, 8.0}) * p.inertia;
    CHECK(std::abs(residual) < 1e-9 * tau_scale);
}

TEST_CASE("restoring derivative and inertia scaling") {
    auto p = reference_turbine();
    const double k = 0.9 * optimal_torque_gain(p);
    const double omega = steady_state(p, k, 8.0);
    CHECK(state_derivative(p, {omega * 1.05}, {k, 8.0}) < 0.0);
    CHECK(state_derivative(p, {omega * 0.95}, {k, 8.0}) > 0.0);
    CHECK(torque_balance_slope(p, omega, {k, 8.0}) < 0.0);

    const double d1 = state_derivative(p, {omega * 1.05}, {k, 8.0});
    p.inertia *= 2.0;
    CHECK(state_derivative(p, {omega * 1.05}, {k, 8.0}) == doctest::Approx(d1 / 2.0).epsilon(1e-14));
}

TEST_CASE("steady state agrees with a long time-marching run") {
    const auto p = reference_turbine();
    const double k = 0.96 * optimal_torque_gain(p);
    const double target = steady_state(p, k, 8.0);

    // Plain RK4 from a 10 % offset; the time constant is I/D0, about 60 s.
    double omega = 1.1 * target;
    const double dt = 0.1;
    const auto f = [&](double w) { return state_derivative(p, {w}, {k, 8.0}); };
    for (int i = 0; i < 30000; ++i) {
        const double k1 = f(omega);
        const double k2 = f(omega + 0.5 * dt * k1);
        const double k3 = f(omega + 0.5 * dt * k2);
        const double k4 = f(omega + dt * k3);
        omega += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    CHECK(omega == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("steady-state power balance and concavity around K*") {
    const auto p = reference_turbine();
    const double k_star = optimal_torque_gain(p);
    const auto power = [&](double k) { return rotor_power(p, steady_state(p, k, 8.0), 8.0); };
    for (const double rel : {0.6, 0.9, 1.0, 1.1, 1.4}) {
        const double k = rel * k_star;
        const double omega = steady_state(p, k, 8.0);
        CHECK(rotor_power(p, omega, 8.0) == doctest::Approx(generator_power(k, omega)).epsilon(1e-9));
    }
    const double h = 1e-3 * k_star;
    const double second = power(k_star + h) - 2.0 * power(k_star) + power(k_star - h);
    CHECK(second < 0.0);
    CHECK(power(k_star) > power(k_star + h));
    CHECK(power(k_star) > power(k_star - h));
}

TEST_CASE("no equilibrium inside the bracket") {
    const auto p = reference_turbine();
    // A gain this large stalls the rotor below the Cp domain.
    CHECK_THROWS_AS(steady_state(p, 50.0 * optimal_torque_gain(p), 8.0), escwind::SolverError);
}
