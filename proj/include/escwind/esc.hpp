#pragma once

namespace escwind::esc {

// First-order high-pass s/(s + ω_c), Tustin-discretized at the call's step.
// The first sample primes the filter (output 0) so a large DC level does not
// produce a start-up transient.
class HighPassFilter {
public:
    explicit HighPassFilter(double cutoff) : cutoff_(cutoff) {}

    double step(double input, double dt);

    double cutoff() const noexcept { return cutoff_; }
    double output() const noexcept { return output_; }

private:
    double cutoff_;
    double prev_input_ = 0.0;
    double output_ = 0.0;
    bool primed_ = false;
};

// First-order low-pass ω_c/(s + ω_c), Tustin-discretized, zero initial state.
class LowPassFilter {
public:
    explicit LowPassFilter(double cutoff) : cutoff_(cutoff) {}

    double step(double input, double dt);

    double cutoff() const noexcept { return cutoff_; }
    double output() const noexcept { return output_; }

private:
    double cutoff_;
    double prev_input_ = 0.0;
    double output_ = 0.0;
};

struct EscConfig {
    double omega_d = 0.1;        // dither frequency [rad/s]
    double amplitude = 1e5;      // dither amplitude, input units
    double psi = 0.0;            // demodulation phase [rad]
    double kappa = 4e4;          // integrator gain
    double omega_h = 0.02;       // high-pass cut-in [rad/s]
    double omega_l = 0.2;        // low-pass cut-off [rad/s]
    double u0 = 0.0;             // integrator initial condition
    // Objective samples are multiplied by this before filtering, so kappa is
    // expressed per MW of objective with the default.
    double objective_scale = 1e-6;

    // ω_H = ω_d/5 and ω_L = 2ω_d.
    static EscConfig with_default_filters(double omega_d, double amplitude, double psi,
                                          double kappa, double u0);

    // Throws ConfigError for non-positive frequencies, negative amplitude,
    // non-finite values.
    void validate() const;

    // Largest step giving at least 50 samples per dither period.
    double max_step() const noexcept;
};

struct EscState {
    HighPassFilter highpass;
    LowPassFilter lowpass;
    double integrator = 0.0; // ũ
    double t = 0.0;          // elapsed time [s]
    double demodulated = 0.0; // ξ, last demodulated sample

    static EscState initial(const EscConfig& config);
};

// filtered · sin(ω_d t + ψ)
double demodulate(double filtered, double t, double omega_d, double psi) noexcept;

// One controller sample: high-pass → demodulate → low-pass → ×κ → explicit
// Euler integration → dither. J is the objective measured at state.t. Returns
// the command u = ũ + A_d sin(ω_d t) for the new time state.t + dt. With
// `adapt` false the integrator is frozen (κ treated as 0) while the filters
// keep running.
//
// Throws EscFault on a non-finite sample, ConfigError when dt violates
// 0 < dt <= max_step().
double esc_step(const EscConfig& config, EscState& state, double objective, double dt,
                bool adapt = true);

// Command for the current state without advancing it.
double esc_command(const EscConfig& config, const EscState& state) noexcept;

} // namespace escwind::esc
