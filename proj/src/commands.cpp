#include "escwind/commands.hpp"

#include "escwind/bode.hpp"
#include "escwind/errors.hpp"
#include "escwind/linear.hpp"
#include "escwind/presets.hpp"
#include "escwind/sim.hpp"
#include "text_util.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>
#include <vector>

namespace escwind::cli {

namespace fs = std::filesystem;
using detail::format_double;

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

struct RunOutcome {
    sim::SimTrace trace;
    std::optional<sim::ConvergenceMetric> metric;
    std::string status = "ok";
    bool finite = true;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

RunOutcome run_one(const aero::TurbineParams& params, const sim::Scenario& scenario,
                   double window_periods, double k_star) {
    RunOutcome outcome;
    try {
        outcome.trace = sim::run_scenario(params, scenario);
    } catch (const SimulationError& e) {
        outcome.status = std::string("failed: ") + e.what();
        outcome.finite = false;
        return outcome;
    }
    try {
        outcome.metric =
            sim::convergence_metric(outcome.trace, window_periods, scenario.esc.omega_d, k_star);
    } catch (const std::invalid_argument&) {
        outcome.status = "window_too_short";
    }
    return outcome;
}

std::string quote_gp(const std::string& s) {
    std::string out = "'";
    for (const char c : s) {
        out += c;
        if (c == '\'') {
            out += '\'';
        }
    }
    return out + "'";
}

void write_run_script(const Config& config, double k_star, const fs::path& path) {
    auto out = open_output(path);
    out << "# gnuplot script: K_tilde / K* for every scenario\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 't [s]'\n"
        << "set ylabel 'K_tilde / K*'\n"
        << "kstar = " << format_double(k_star) << '\n';
    if (config.scenarios.empty()) {
        return;
    }
    out << "plot ";
    for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
        const auto& name = config.scenarios[i].name;
        out << (i ? ", \\\n     " : "") << quote_gp(name + ".csv")
            << " using 1:($4/kstar) with lines title " << quote_gp(name);
    }
    out << '\n';
}

std::string k_label(double k_rel) { return format_double(k_rel) + "K*"; }

std::string_view classification_name(linear::PhaseClass c) {
    switch (c) {
    case linear::PhaseClass::minimum_phase:
        return "minimum_phase";
    case linear::PhaseClass::nonminimum_phase:
        return "nonminimum_phase";
    case linear::PhaseClass::marginal:
        return "marginal";
    }
    return "?";
}

} // namespace

int cmd_run(const Config& config, const fs::path& out_dir, const RunOptions& options,
            std::ostream* log) {
    const auto params = config.turbine.build(config.base_dir);
    const double k_star = aero::optimal_torque_gain(params);

    std::vector<sim::Scenario> scenarios;
    scenarios.reserve(config.scenarios.size());
    for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
        const std::uint64_t seed = options.seed.value_or(0) + i;
        scenarios.push_back(config.scenarios[i].build(k_star, seed));
    }

    fs::create_directories(out_dir);

    std::vector<RunOutcome> outcomes(scenarios.size());
    if (options.parallel && scenarios.size() > 1) {
        std::vector<std::future<RunOutcome>> futures;
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            futures.push_back(std::async(std::launch::async, run_one, std::cref(params),
                                         std::cref(scenarios[i]),
                                         config.scenarios[i].window_periods, k_star));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) {
            outcomes[i] = futures[i].get();
        }
    } else {
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            outcomes[i] = run_one(params, scenarios[i], config.scenarios[i].window_periods, k_star);
        }
    }

    auto summary = open_output(out_dir / "summary.csv");
    summary << kSummaryHeader << '\n';
    bool all_finite = true;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& spec = config.scenarios[i];
        const auto& outcome = outcomes[i];
        all_finite = all_finite && outcome.finite;
        if (outcome.finite) {
            sim::write_trace_csv(outcome.trace, out_dir / (spec.name + ".csv"));
        }
        const auto cell = [](std::optional<double> v) {
            return v ? format_double(*v) : std::string();
        };
        const auto& m = outcome.metric;
        std::optional<double> final_k;
        if (outcome.finite && outcome.trace.size() > 0) {
            final_k = outcome.trace.K_tilde.back();
        }
        summary << spec.name << ',' << sim::objective_name(spec.objective) << ','
                << format_double(spec.omega_d) << ',' << format_double(spec.psi_deg) << ','
                << format_double(spec.kappa) << ',' << format_double(scenarios[i].K_init) << ','
                << format_double(k_star) << ',' << cell(m ? std::optional(m->mean) : std::nullopt)
                << ',' << cell(m ? std::optional(m->spread) : std::nullopt) << ','
                << cell(m ? std::optional(m->rel_deviation) : std::nullopt) << ',' << cell(final_k)
                << ',';
        // Failure messages may contain commas.
        std::string status = outcome.status;
        for (auto& c : status) {
            if (c == ',' || c == '\n') {
                c = ';';
            }
        }
        summary << status << '\n';
        if (log) {
            *log << spec.name << ": " << outcome.status;
            if (m) {
                *log << ", K_tilde/K* = " << m->mean / k_star;
            }
            *log << '\n';
        }
    }
    write_run_script(config, k_star, out_dir / "run.gp");
    return all_finite ? 0 : 1;
}

int cmd_analyze(const Config& config, const fs::path& out_dir, std::ostream* log) {
    const auto params = config.turbine.build(config.base_dir);
    if (!config.analysis) {
        throw ConfigError("no [analysis] section", 0);
    }
    const auto& spec = *config.analysis;
    spec.validate();
    const double k_star = aero::optimal_torque_gain(params);
    const auto omegas = linear::log_space(spec.omega_min, spec.omega_max, spec.omega_points);

    fs::create_directories(out_dir);
    std::vector<std::string> bode_files;

    for (const auto& output : spec.outputs) {
        std::vector<linear::BodeCurve> curves;
        for (const double k_rel : spec.k_rel) {
            const double k = k_rel * k_star;
            linear::RationalTf tf;
            if (output == "P_hat_r") {
                const auto model = linear::linearize_augmented(
                    params, k, spec.wind_speed, spec.deriv_time_constant, spec.deriv_gain);
                tf = linear::estimated_power_tf(model);
            } else {
                const auto tfs =
                    linear::transfer_functions(linear::linearize(params, k, spec.wind_speed));
                tf = output == "P_r" ? tfs[0] : tfs[1];
            }
            curves.push_back({k_label(k_rel), linear::frequency_response(tf, omegas)});
        }
        const auto file = "bode_" + output + ".csv";
        linear::bode_export(curves, out_dir / file);
        bode_files.push_back(file);
        if (log) {
            *log << file << ": " << curves.size() << " curves x " << omegas.size()
                 << " frequencies\n";
        }
    }

    const bool zero_locus = spec.zero_locus;
    if (zero_locus) {
        auto out = open_output(out_dir / "zero_locus_P_g.csv");
        out << "K_rel,K,zero,classification\n";
        const std::size_t n = spec.zero_points;
        for (std::size_t i = 0; i < n; ++i) {
            const double k_rel = (spec.zero_k_rel_min * static_cast<double>(n - 1 - i) +
                                  spec.zero_k_rel_max * static_cast<double>(i)) /
                                 static_cast<double>(n - 1);
            const double k = k_rel * k_star;
            const auto tfs = linear::transfer_functions(linear::linearize(params, k, spec.wind_speed));
            const auto zero = linear::zero_of_pg(tfs[1]);
            // K_rel to 12 digits so grid values read as typed.
            char rel[32];
            std::snprintf(rel, sizeof rel, "%.12g", k_rel);
            out << rel << ',' << format_double(k) << ','
                << format_double(zero.location) << ',' << classification_name(zero.kind) << '\n';
        }
        if (log) {
            *log << "zero_locus_P_g.csv: " << n << " operating points\n";
        }
    }

    auto gp = open_output(out_dir / "analyze.gp");
    gp << "# gnuplot script: Bode plots and P_g zero locus\n"
       << "set datafile separator ','\n"
       << "set logscale x\n"
       << "set xlabel 'omega [rad/s]'\n";
    for (const auto& file : bode_files) {
        gp << "\n# " << file << "\n"
           << "set multiplot layout 2,1 title " << quote_gp(file) << '\n'
           << "set ylabel 'magnitude [dB]'\n"
           << "plot for [k in '" ;
        for (std::size_t i = 0; i < spec.k_rel.size(); ++i) {
            gp << (i ? " " : "") << k_label(spec.k_rel[i]);
        }
        gp << "'] " << quote_gp(file)
           << " using 1:(strcol(4) eq k ? $2 : NaN) with lines title k\n"
           << "set ylabel 'phase [deg]'\n"
           << "plot for [k in '";
        for (std::size_t i = 0; i < spec.k_rel.size(); ++i) {
            gp << (i ? " " : "") << k_label(spec.k_rel[i]);
        }
        gp << "'] " << quote_gp(file)
           << " using 1:(strcol(4) eq k ? $3 : NaN) with lines title k\n"
           << "unset multiplot\n";
    }
    if (zero_locus) {
        gp << "\n# zero_locus_P_g.csv\n"
           << "unset logscale x\n"
           << "set xlabel 'K / K*'\n"
           << "set ylabel 'zero of P_g [1/s]'\n"
           << "plot 'zero_locus_P_g.csv' using 1:3 with linespoints notitle\n";
    }
    return 0;
}

void cmd_presets(std::ostream& out) { print_presets(out); }

Config resolve_config(std::string_view name_or_path) {
    if (auto preset = find_preset(name_or_path)) {
        return preset->config;
    }
    const fs::path path{std::string(name_or_path)};
    if (!fs::exists(path)) {
        throw ConfigError("no preset or config file named '" + path.string() + "'", 0);
    }
    return load_config(path);
}

} // namespace escwind::cli
