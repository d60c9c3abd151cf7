#pragma once

#include "escwind/aero.hpp"

namespace escwind::estimator {

// Filtered numerical derivative ẋ_d = (K_d u_d − x_d)/T_d with input u_d = ω_r
// and state x_d = ω̂_r. The output (K_d u_d − x_d)/T_d realizes
// K_d s/(T_d s + 1) from ω_r to the acceleration estimate.
struct DerivFilter {
    double time_constant = 1e-2; // T_d [s]
    double gain = 1.0;           // K_d
    double state = 0.0;          // x_d = ω̂_r [rad/s]
    double prev_input = 0.0;     // u_d at the previous step

    // Filter at rest at the given rotor speed: x_d = K_d ω_r, zero output.
    static DerivFilter at_rest(double time_constant, double gain, double omega_r);

    // Throws ConfigError unless T_d > 0 and K_d > 0.
    void validate() const;
};

// P̂_r = I ω_r ω̇ + P_g.
double estimated_aero_power_exact(double inertia, double omega_r, double omega_dot,
                                  double generator_power) noexcept;
double estimated_aero_power_exact(const aero::TurbineParams& params, double omega_r,
                                  double omega_dot, double generator_power) noexcept;

// Advances the filter by one Tustin step and returns ω̇̂ at the new step.
// Throws ConfigError when dt <= 0 or dt >= T_d.
double deriv_filter_step(DerivFilter& filter, double omega_r, double dt);

// deriv_filter_step followed by estimated_aero_power_exact.
double estimated_aero_power(DerivFilter& filter, const aero::TurbineParams& params,
                            double omega_r, double generator_power, double dt);

} // namespace escwind::estimator
