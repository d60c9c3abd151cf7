#pragma once

#include "escwind/aero.hpp"

namespace escwind::turbine {

using aero::TurbineParams;

struct TurbineState {
    double omega_r = 0.0; // rotor speed [rad/s]
};

struct ControlInput {
    double torque_gain = 0.0; // K [N m / (rad/s)^2]
    double wind_speed = 0.0;  // rotor-effective V [m/s]
};

// Kω² law; the generator tracks its set point exactly.
inline double torque_command(double torque_gain, double omega_r) noexcept {
    return torque_gain * omega_r * omega_r;
}

inline double generator_power(double torque_gain, double omega_r) noexcept {
    return torque_command(torque_gain, omega_r) * omega_r;
}

// dω_r/dt = (τ_r − Kω_r²) / I.
double state_derivative(const TurbineParams& params, TurbineState state, ControlInput input);

// Stable equilibrium rotor speed of the Kω² loop at constant wind.
//
// The bracket [0.2, 2.0]·λ*V/R (clipped to the Cp domain) is scanned for the
// crossing where τ_r − τ_g goes from positive to negative, which is the
// stable root; bisection brackets it and Newton polishes. Throws SolverError
// when no such crossing exists or the polished root is not stable.
double steady_state(const TurbineParams& params, double torque_gain, double wind_speed);

// ∂(τ_r − τ_g)/∂ω_r; negative at a stable equilibrium.
double torque_balance_slope(const TurbineParams& params, double omega_r, ControlInput input);

} // namespace escwind::turbine
