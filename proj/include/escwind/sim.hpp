#pragma once

#include "escwind/aero.hpp"
#include "escwind/esc.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace escwind::sim {

enum class Objective { aero, generator, estimated };

std::string_view objective_name(Objective objective) noexcept;
std::optional<Objective> parse_objective(std::string_view name) noexcept;

struct DerivConfig {
    double time_constant = 1e-2; // T_d [s]
    double gain = 1.0;           // K_d
};

struct Scenario {
    std::string name;
    Objective objective = Objective::aero;
    double wind_speed = 8.0;
    esc::EscConfig esc;
    std::optional<DerivConfig> deriv; // required for Objective::estimated
    double duration = 5000.0;
    double dt = 0.01;
    double esc_enable_time = 1000.0;
    double K_init = 0.0; // integrator start K̃₀; overrides esc.u0
    std::size_t decimation = 1;
    std::optional<double> omega_init; // default: steady state at K_init
    double noise_std = 0.0;           // Gaussian noise on J [W], off by default
    std::uint64_t noise_seed = 0;

    // Throws ConfigError when the scenario violates any module precondition.
    void validate() const;
};

// Time series sampled every `decimation` steps on a uniform grid. P_hat_r is
// empty unless the scenario uses the estimated objective.
struct SimTrace {
    std::vector<double> t;
    std::vector<double> omega_r;
    std::vector<double> K_total;
    std::vector<double> K_tilde;
    std::vector<double> P_r;
    std::vector<double> P_g;
    std::vector<double> P_hat_r;
    std::vector<double> J;

    std::size_t size() const noexcept { return t.size(); }
    bool has_estimate() const noexcept { return !P_hat_r.empty(); }
};

// Integrates the turbine with RK4 at step dt under the ESC-commanded gain
// (held constant over each step). The ESC samples every step and adapts only
// from esc_enable_time on; the dither runs throughout. Throws
// SimulationError (with the failing time) on a non-finite state, a domain
// error, or an ESC fault.
SimTrace run_scenario(const aero::TurbineParams& params, const Scenario& scenario);

// Open-loop run with a prescribed gain schedule K(t), evaluated inside the
// RK4 stages. Records t, omega_r, K_total, P_r and P_g every step.
SimTrace run_open_loop(const aero::TurbineParams& params, double wind_speed,
                       const std::function<double(double)>& gain_schedule, double omega_init,
                       double duration, double dt);

struct ConvergenceMetric {
    double mean = 0.0;          // mean K̃ over the window
    double spread = 0.0;        // max − min of K̃ over the window
    double rel_deviation = 0.0; // (mean − K_ref)/K_ref
    double window = 0.0;        // window length [s]
};

// Statistics of K̃ over the trailing `window_periods` whole dither periods.
// Throws std::invalid_argument if the trace is shorter than the window.
ConvergenceMetric convergence_metric(const SimTrace& trace, double window_periods,
                                     double omega_d, double K_ref);

// Header `t,omega_r,K_total,K_tilde,P_r,P_g,P_hat_r,J`; P_hat_r is left empty
// when the trace has no estimate.
void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path);

inline constexpr std::string_view kTraceHeader = "t,omega_r,K_total,K_tilde,P_r,P_g,P_hat_r,J";

} // namespace escwind::sim
