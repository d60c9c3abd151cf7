#include "escwind/sim.hpp"

#include "escwind/errors.hpp"
#include "escwind/estimator.hpp"
#include "escwind/turbine.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace escwind::sim {

namespace {

template <typename Deriv>
double rk4_step(const Deriv& f, double t, double x, double dt) {
    const double k1 = f(t, x);
    const double k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
    const double k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
    const double k4 = f(t + dt, x + dt * k3);
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::size_t step_count(double duration, double dt) {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

} // namespace

std::string_view objective_name(Objective objective) noexcept {
    switch (objective) {
    case Objective::aero:
        return "aero";
    case Objective::generator:
        return "generator";
    case Objective::estimated:
        return "estimated";
    }
    return "?";
}

std::optional<Objective> parse_objective(std::string_view name) noexcept {
    if (name == "aero") {
        return Objective::aero;
    }
    if (name == "generator") {
        return Objective::generator;
    }
    if (name == "estimated") {
        return Objective::estimated;
    }
    return std::nullopt;
}

void Scenario::validate() const {
    esc.validate();
    if (!(wind_speed > 0.0) || !std::isfinite(wind_speed)) {
        throw ConfigError(name + ": wind speed must be positive");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError(name + ": dt must be positive");
    }
    if (dt > esc.max_step() * (1.0 + 1e-12)) {
        throw ConfigError(name + ": dt exceeds 1/50 of the dither period");
    }
    if (!(esc_enable_time >= 0.0) || !(duration > esc_enable_time) || !std::isfinite(duration)) {
        throw ConfigError(name + ": need duration > esc_enable_time >= 0");
    }
    if (!(K_init > 0.0) || !std::isfinite(K_init)) {
        throw ConfigError(name + ": K_init must be positive");
    }
    if (decimation == 0) {
        throw ConfigError(name + ": decimation must be at least 1");
    }
    if (omega_init && !(*omega_init > 0.0)) {
        throw ConfigError(name + ": initial rotor speed must be positive");
    }
    if (!(noise_std >= 0.0)) {
        throw ConfigError(name + ": noise_std must be non-negative");
    }
    if (objective == Objective::estimated) {
        if (!deriv) {
            throw ConfigError(name + ": estimated objective needs a derivative filter");
        }
        estimator::DerivFilter{deriv->time_constant, deriv->gain, 0.0, 0.0}.validate();
        if (!(dt < deriv->time_constant)) {
            throw ConfigError(name + ": dt must be smaller than the derivative time constant");
        }
    }
}

SimTrace run_scenario(const aero::TurbineParams& params, const Scenario& scenario) {
    scenario.validate();

    esc::EscConfig esc_config = scenario.esc;
    esc_config.u0 = scenario.K_init;
    auto esc_state = esc::EscState::initial(esc_config);

    const double v = scenario.wind_speed;
    const double dt = scenario.dt;
    double omega = scenario.omega_init
                       ? *scenario.omega_init
                       : turbine::steady_state(params, scenario.K_init, v);

    std::optional<estimator::DerivFilter> filter;
    if (scenario.objective == Objective::estimated) {
        filter = estimator::DerivFilter::at_rest(scenario.deriv->time_constant,
                                                 scenario.deriv->gain, omega);
    }

    std::mt19937_64 rng(scenario.noise_seed);
    std::normal_distribution<double> noise(0.0, scenario.noise_std > 0.0 ? scenario.noise_std : 1.0);

    const std::size_t steps = step_count(scenario.duration, dt);
    SimTrace trace;
    const std::size_t rows = steps / scenario.decimation + 1;
    for (auto* col : {&trace.t, &trace.omega_r, &trace.K_total, &trace.K_tilde, &trace.P_r,
                      &trace.P_g, &trace.J}) {
        col->reserve(rows);
    }
    if (filter) {
        trace.P_hat_r.reserve(rows);
    }

    double gain = esc::esc_command(esc_config, esc_state);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        try {
            const double p_r = aero::rotor_power(params, omega, v);
            const double p_g = turbine::generator_power(gain, omega);
            double p_hat = 0.0;
            if (filter) {
                p_hat = estimator::estimated_aero_power(*filter, params, omega, p_g, dt);
            }
            double j = scenario.objective == Objective::aero        ? p_r
                       : scenario.objective == Objective::generator ? p_g
                                                                    : p_hat;
            if (scenario.noise_std > 0.0) {
                j += scenario.noise_std * noise(rng);
            }

            if (k % scenario.decimation == 0) {
                trace.t.push_back(t);
                trace.omega_r.push_back(omega);
                trace.K_total.push_back(gain);
                trace.K_tilde.push_back(esc_state.integrator);
                trace.P_r.push_back(p_r);
                trace.P_g.push_back(p_g);
                if (filter) {
                    trace.P_hat_r.push_back(p_hat);
                }
                trace.J.push_back(j);
            }
            if (k == steps) {
                break;
            }

            const bool adapt = t >= scenario.esc_enable_time;
            const double next_gain = esc::esc_step(esc_config, esc_state, j, dt, adapt);
            const auto f = [&](double, double w) {
                return turbine::state_derivative(params, {w}, {gain, v});
            };
            omega = rk4_step(f, t, omega, dt);
            gain = next_gain;
        } catch (const SimulationError&) {
            throw;
        } catch (const std::exception& e) {
            throw SimulationError(e.what(), t);
        }
        if (!std::isfinite(omega) || !(omega > 0.0)) {
            throw SimulationError("rotor speed became non-positive or non-finite", t + dt);
        }
    }
    return trace;
}

SimTrace run_open_loop(const aero::TurbineParams& params, double wind_speed,
                       const std::function<double(double)>& gain_schedule, double omega_init,
                       double duration, double dt) {
    if (!(dt > 0.0) || !(duration > 0.0)) {
        throw ConfigError("open-loop run needs dt > 0 and duration > 0");
    }
    const std::size_t steps = step_count(duration, dt);
    SimTrace trace;
    double omega = omega_init;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        try {
            const double gain = gain_schedule(t);
            trace.t.push_back(t);
            trace.omega_r.push_back(omega);
            trace.K_total.push_back(gain);
            trace.K_tilde.push_back(gain);
            trace.P_r.push_back(aero::rotor_power(params, omega, wind_speed));
            trace.P_g.push_back(turbine::generator_power(gain, omega));
            trace.J.push_back(trace.P_r.back());
            if (k == steps) {
                break;
            }
            const auto f = [&](double time, double w) {
                return turbine::state_derivative(params, {w}, {gain_schedule(time), wind_speed});
            };
            omega = rk4_step(f, t, omega, dt);
        } catch (const std::exception& e) {
            throw SimulationError(e.what(), t);
        }
        if (!std::isfinite(omega)) {
            throw SimulationError("rotor speed became non-finite", t + dt);
        }
    }
    return trace;
}

ConvergenceMetric convergence_metric(const SimTrace& trace, double window_periods,
                                     double omega_d, double K_ref) {
    if (trace.size() < 2) {
        throw std::invalid_argument("trace too short for a convergence metric");
    }
    if (!(window_periods > 0.0) || !(omega_d > 0.0)) {
        throw std::invalid_argument("window needs a positive period count and dither frequency");
    }
    const double window = std::round(window_periods) * 2.0 * std::numbers::pi / omega_d;
    const double t_end = trace.t.back();
    const double t_start = t_end - window;
    if (t_start < trace.t.front() - 1e-9) {
        throw std::invalid_argument("trace shorter than the requested window");
    }
    const auto first = std::lower_bound(trace.t.begin(), trace.t.end(), t_start - 1e-9);
    const auto offset = static_cast<std::size_t>(first - trace.t.begin());

    // Summed as offsets from the first sample so a flat window is exact.
    const double base = trace.K_tilde[offset];
    double sum = 0.0;
    double lo = base;
    double hi = lo;
    for (std::size_t i = offset; i < trace.size(); ++i) {
        sum += trace.K_tilde[i] - base;
        lo = std::min(lo, trace.K_tilde[i]);
        hi = std::max(hi, trace.K_tilde[i]);
    }
    ConvergenceMetric m;
    m.mean = base + sum / static_cast<double>(trace.size() - offset);
    m.spread = hi - lo;
    m.rel_deviation = (m.mean - K_ref) / K_ref;
    m.window = window;
    return m;
}

void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << kTraceHeader << '\n';
    const bool estimate = trace.has_estimate();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << detail::format_double(trace.t[i]) << ',' << detail::format_double(trace.omega_r[i])
            << ',' << detail::format_double(trace.K_total[i]) << ','
            << detail::format_double(trace.K_tilde[i]) << ',' << detail::format_double(trace.P_r[i])
            << ',' << detail::format_double(trace.P_g[i]) << ',';
        if (estimate) {
            out << detail::format_double(trace.P_hat_r[i]);
        }
        out << ',' << detail::format_double(trace.J[i]) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace escwind::sim
