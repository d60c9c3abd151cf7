#pragma once

#include "escwind/cp_surface.hpp"

#include <numbers>

namespace escwind::aero {

// Physical constants of the rotor. The Cp surface is the fixed-pitch slice
// at `pitch`.
struct TurbineParams {
    double rho = 1.225;       // air density [kg/m^3]
    double radius = 63.0;     // rotor radius [m]
    double inertia = 0.0;     // rotor + drivetrain inertia [kg m^2]
    double pitch = 0.0;       // fixed pitch angle [rad]
    CpSurface cp_surface;

    double area() const noexcept { return std::numbers::pi * radius * radius; }

    // Throws ConfigError unless rho, radius and inertia are strictly positive.
    void validate() const;
};

// Available wind power ½ρAV³ [W]. Throws DomainError for V < 0.
double wind_power(const TurbineParams& params, double wind_speed);

// λ = ω_r R / V. Throws DomainError for V <= 0 or ω_r < 0.
double tip_speed_ratio(double omega_r, double radius, double wind_speed);

// τ_r = ½ρARV²·Cτ(λ) [N m]. Throws DomainError when λ leaves the Cp domain.
double rotor_torque(const TurbineParams& params, double omega_r, double wind_speed);

// P_r = Cp(λ)·P_w [W].
double rotor_power(const TurbineParams& params, double omega_r, double wind_speed);

// Torque gain that tracks (λ, Cp) in steady state: πρR⁵Cp / (2λ³).
double torque_gain(const TurbineParams& params, double lambda, double cp);

// K* = torque_gain at the maximizer (λ*, Cp*) of the Cp surface.
double optimal_torque_gain(const TurbineParams& params);

} // namespace escwind::aero
