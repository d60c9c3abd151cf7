#include "escwind/aero.hpp"

#include "escwind/errors.hpp"

#include <cmath>
#include <string>

namespace escwind::aero {

void TurbineParams::validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ConfigError("air density must be positive");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ConfigError("rotor radius must be positive");
    }
    if (!(inertia > 0.0) || !std::isfinite(inertia)) {
        throw ConfigError("inertia must be positive");
    }
    if (!std::isfinite(pitch)) {
        throw ConfigError("pitch must be finite");
    }
}

double wind_power(const TurbineParams& params, double wind_speed) {
    if (!(wind_speed >= 0.0)) {
        throw DomainError("wind speed must be non-negative, got " + std::to_string(wind_speed));
    }
    return 0.5 * params.rho * params.area() * wind_speed * wind_speed * wind_speed;
}

double tip_speed_ratio(double omega_r, double radius, double wind_speed) {
    if (!(wind_speed > 0.0)) {
        throw DomainError("wind speed must be positive, got " + std::to_string(wind_speed));
    }
    if (!(omega_r >= 0.0)) {
        throw DomainError("rotor speed must be non-negative, got " + std::to_string(omega_r));
    }
    return omega_r * radius / wind_speed;
}

double rotor_torque(const TurbineParams& params, double omega_r, double wind_speed) {
    const double lambda = tip_speed_ratio(omega_r, params.radius, wind_speed);
    return 0.5 * params.rho * params.area() * params.radius * wind_speed * wind_speed *
           params.cp_surface.ctau(lambda);
}

double rotor_power(const TurbineParams& params, double omega_r, double wind_speed) {
    const double lambda = tip_speed_ratio(omega_r, params.radius, wind_speed);
    return params.cp_surface.cp(lambda) * wind_power(params, wind_speed);
}

double torque_gain(const TurbineParams& params, double lambda, double cp) {
    const double r2 = params.radius * params.radius;
    return std::numbers::pi * params.rho * r2 * r2 * params.radius * cp /
           (2.0 * lambda * lambda * lambda);
}

double optimal_torque_gain(const TurbineParams& params) {
    const auto& opt = params.cp_surface.optimum();
    return torque_gain(params, opt.lambda, opt.cp);
}

} // namespace escwind::aero
