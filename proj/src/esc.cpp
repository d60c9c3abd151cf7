#include "escwind/esc.hpp"

#include "escwind/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace escwind::esc {

double HighPassFilter::step(double input, double dt) {
    if (!primed_) {
        prev_input_ = input;
        output_ = 0.0;
        primed_ = true;
        return output_;
    }
    const double w = cutoff_ * dt;
    output_ = (2.0 * (input - prev_input_) + (2.0 - w) * output_) / (2.0 + w);
    prev_input_ = input;
    return output_;
}

double LowPassFilter::step(double input, double dt) {
    const double w = cutoff_ * dt;
    output_ = (w * (input + prev_input_) + (2.0 - w) * output_) / (2.0 + w);
    prev_input_ = input;
    return output_;
}

EscConfig EscConfig::with_default_filters(double omega_d, double amplitude, double psi,
                                          double kappa, double u0) {
    EscConfig c;
    c.omega_d = omega_d;
    c.amplitude = amplitude;
    c.psi = psi;
    c.kappa = kappa;
    c.omega_h = omega_d / 5.0;
    c.omega_l = 2.0 * omega_d;
    c.u0 = u0;
    return c;
}

void EscConfig::validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(omega_d) || !(omega_d > 0.0)) {
        throw ConfigError("dither frequency must be positive");
    }
    if (!finite(omega_h) || !(omega_h > 0.0)) {
        throw ConfigError("high-pass cut-in must be positive");
    }
    if (!finite(omega_l) || !(omega_l > 0.0)) {
        throw ConfigError("low-pass cut-off must be positive");
    }
    if (!finite(amplitude) || amplitude < 0.0) {
        throw ConfigError("dither amplitude must be non-negative");
    }
    if (!finite(psi) || !finite(kappa) || !finite(u0)) {
        throw ConfigError("ESC phase, gain and initial condition must be finite");
    }
    if (!finite(objective_scale) || !(objective_scale > 0.0)) {
        throw ConfigError("objective scale must be positive");
    }
}

double EscConfig::max_step() const noexcept {
    return 2.0 * std::numbers::pi / (50.0 * omega_d);
}

EscState EscState::initial(const EscConfig& config) {
    return EscState{HighPassFilter(config.omega_h), LowPassFilter(config.omega_l), config.u0,
                    0.0, 0.0};
}

double demodulate(double filtered, double t, double omega_d, double psi) noexcept {
    return filtered * std::sin(omega_d * t + psi);
}

double esc_command(const EscConfig& config, const EscState& state) noexcept {
    return state.integrator + config.amplitude * std::sin(config.omega_d * state.t);
}

double esc_step(const EscConfig& config, EscState& state, double objective, double dt,
                bool adapt) {
    if (!(dt > 0.0) || dt > config.max_step() * (1.0 + 1e-12)) {
        throw ConfigError("ESC step " + std::to_string(dt) +
                          " s outside (0, 2*pi/(50*omega_d)]");
    }
    if (!std::isfinite(objective)) {
        throw EscFault("non-finite objective sample at t = " + std::to_string(state.t) + " s");
    }
    const double filtered = state.highpass.step(objective * config.objective_scale, dt);
    state.demodulated = demodulate(filtered, state.t, config.omega_d, config.psi);
    const double gradient = state.lowpass.step(state.demodulated, dt);
    if (adapt) {
        state.integrator += dt * config.kappa * gradient;
    }
    if (!std::isfinite(state.integrator)) {
        throw EscFault("ESC integrator diverged at t = " + std::to_string(state.t) + " s");
    }
    state.t += dt;
    return esc_command(config, state);
}

} // namespace escwind::esc
