#include "escwind/estimator.hpp"

#include "escwind/errors.hpp"

#include <cmath>
#include <string>

namespace escwind::estimator {

DerivFilter DerivFilter::at_rest(double time_constant, double gain, double omega_r) {
    DerivFilter f{time_constant, gain, gain * omega_r, omega_r};
    f.validate();
    return f;
}

void DerivFilter::validate() const {
    if (!(time_constant > 0.0) || !std::isfinite(time_constant)) {
        throw ConfigError("derivative filter time constant must be positive");
    }
    if (!(gain > 0.0) || !std::isfinite(gain)) {
        throw ConfigError("derivative filter gain must be positive");
    }
}

double estimated_aero_power_exact(double inertia, double omega_r, double omega_dot,
                                  double generator_power) noexcept {
    return inertia * omega_r * omega_dot + generator_power;
}

double estimated_aero_power_exact(const aero::TurbineParams& params, double omega_r,
                                  double omega_dot, double generator_power) noexcept {
    return estimated_aero_power_exact(params.inertia, omega_r, omega_dot, generator_power);
}

double deriv_filter_step(DerivFilter& filter, double omega_r, double dt) {
    if (!(dt > 0.0) || !(dt < filter.time_constant)) {
        throw ConfigError("derivative filter step " + std::to_string(dt) +
                          " s must satisfy 0 < dt < T_d = " +
                          std::to_string(filter.time_constant) + " s");
    }
    const double a = dt / (2.0 * filter.time_constant);
    filter.state = ((1.0 - a) * filter.state + a * filter.gain * (omega_r + filter.prev_input)) /
                   (1.0 + a);
    filter.prev_input = omega_r;
    return (filter.gain * omega_r - filter.state) / filter.time_constant;
}

double estimated_aero_power(DerivFilter& filter, const aero::TurbineParams& params,
                            double omega_r, double generator_power, double dt) {
    const double omega_dot = deriv_filter_step(filter, omega_r, dt);
    return estimated_aero_power_exact(params, omega_r, omega_dot, generator_power);
}

} // namespace escwind::estimator
