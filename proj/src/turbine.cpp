#include "escwind/turbine.hpp"

#include "escwind/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace escwind::turbine {

double state_derivative(const TurbineParams& params, TurbineState state, ControlInput input) {
    const double tau_r = aero::rotor_torque(params, state.omega_r, input.wind_speed);
    return (tau_r - torque_command(input.torque_gain, state.omega_r)) / params.inertia;
}

double torque_balance_slope(const TurbineParams& params, double omega_r, ControlInput input) {
    const double v = input.wind_speed;
    const double lambda = aero::tip_speed_ratio(omega_r, params.radius, v);
    const double dtau_r = 0.5 * params.rho * params.area() * params.radius * params.radius * v *
                          params.cp_surface.dctau(lambda);
    return dtau_r - 2.0 * input.torque_gain * omega_r;
}

double steady_state(const TurbineParams& params, double torque_gain, double wind_speed) {
    if (!(torque_gain > 0.0) || !(wind_speed > 0.0)) {
        throw SolverError("steady state needs K > 0 and V > 0");
    }
    const auto& surface = params.cp_surface;
    const double omega_opt = surface.optimum().lambda * wind_speed / params.radius;
    const double to_omega = wind_speed / params.radius;
    const double lo = std::max(0.2 * omega_opt, surface.domain().min * to_omega);
    const double hi = std::min(2.0 * omega_opt, surface.domain().max * to_omega);

    const ControlInput input{torque_gain, wind_speed};
    const auto residual = [&](double omega) {
        return aero::rotor_torque(params, omega, wind_speed) - torque_command(torque_gain, omega);
    };

    // Scan from the top of the bracket down; the first sign change met from
    // above is the largest root, and it is stable when the residual is
    // positive just below it.
    constexpr int kScan = 400;
    const double step = (hi - lo) / kScan;
    double upper = hi;
    double r_upper = residual(upper);
    double lower = upper;
    bool found = false;
    for (int i = kScan - 1; i >= 0; --i) {
        lower = (i == 0) ? lo : lo + i * step;
        const double r_lower = residual(lower);
        if (r_lower > 0.0 && r_upper <= 0.0) {
            found = true;
            break;
        }
        upper = lower;
        r_upper = r_lower;
    }
    if (!found) {
        std::ostringstream msg;
        msg << "no stable equilibrium for K = " << torque_gain << ", V = " << wind_speed
            << " in bracket [" << lo << ", " << hi << "] rad/s";
        throw SolverError(msg.str());
    }

    // Bisection to a tight bracket, then bracketed Newton.
    for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lower + upper);
        if (residual(mid) > 0.0) {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    std::uintmax_t iterations = 50;
    const double omega = boost::math::tools::newton_raphson_iterate(
        [&](double w) {
            return std::make_pair(residual(w), torque_balance_slope(params, w, input));
        },
        0.5 * (lower + upper), lower, upper, std::numeric_limits<double>::digits - 4, iterations);

    if (!(torque_balance_slope(params, omega, input) < 0.0)) {
        std::ostringstream msg;
        msg << "equilibrium at omega = " << omega << " rad/s is not stable";
        throw SolverError(msg.str());
    }
    return omega;
}

} // namespace escwind::turbine
