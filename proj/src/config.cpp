#include "escwind/config.hpp"

#include "escwind/errors.hpp"
#include "text_util.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace escwind::cli {

namespace {

constexpr std::string_view kDefaultText =
#include "escwind/default_config.inc"
    ;

using Setter = std::function<void(std::string_view value, int line)>;
using KeyTable = std::map<std::string, Setter, std::less<>>;

double to_double(std::string_view key, std::string_view value, int line) {
    const auto v = detail::parse_double(value);
    if (!v || !std::isfinite(*v)) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" +
                              std::string(value) + "'",
                          line);
    }
    return *v;
}

std::size_t to_count(std::string_view key, std::string_view value, int line) {
    const double v = to_double(key, value, line);
    if (v < 0.0 || v != std::floor(v) || v > 1e12) {
        throw ConfigError("'" + std::string(key) + "' expects a non-negative integer", line);
    }
    return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view key, std::string_view value, int line) {
    if (value == "true") {
        return true;
    }
    if (value == "false") {
        return false;
    }
    throw ConfigError("'" + std::string(key) + "' expects true or false", line);
}

Setter number(double& target, std::string_view key) {
    return [&target, key](std::string_view v, int line) { target = to_double(key, v, line); };
}

Setter optional_number(std::optional<double>& target, std::string_view key) {
    return [&target, key](std::string_view v, int line) { target = to_double(key, v, line); };
}

Setter count(std::size_t& target, std::string_view key) {
    return [&target, key](std::string_view v, int line) { target = to_count(key, v, line); };
}

KeyTable turbine_keys(TurbineConfig& t) {
    KeyTable k;
    k["air_density"] = number(t.air_density, "air_density");
    k["rotor_radius"] = number(t.rotor_radius, "rotor_radius");
    k["inertia"] = number(t.inertia, "inertia");
    k["pitch_deg"] = number(t.pitch_deg, "pitch_deg");
    k["cp_model"] = [&t](std::string_view v, int line) {
        if (v != "analytic" && v != "table") {
            throw ConfigError("cp_model must be 'analytic' or 'table'", line);
        }
        t.cp_model = std::string(v);
    };
    k["lambda_opt"] = number(t.lambda_opt, "lambda_opt");
    k["cp_opt"] = number(t.cp_opt, "cp_opt");
    k["lambda_min"] = number(t.lambda_min, "lambda_min");
    k["lambda_max"] = number(t.lambda_max, "lambda_max");
    k["cp_table"] = [&t](std::string_view v, int) { t.cp_table = std::string(v); };
    return k;
}

KeyTable scenario_keys(ScenarioSpec& s, std::set<std::string>& seen_gain) {
    KeyTable k;
    k["objective"] = [&s](std::string_view v, int line) {
        const auto o = sim::parse_objective(v);
        if (!o) {
            throw ConfigError("objective must be aero, generator or estimated", line);
        }
        s.objective = *o;
    };
    k["wind_speed"] = number(s.wind_speed, "wind_speed");
    k["omega_d"] = number(s.omega_d, "omega_d");
    k["dither_amplitude"] = number(s.dither_amplitude, "dither_amplitude");
    k["psi_deg"] = number(s.psi_deg, "psi_deg");
    k["kappa"] = number(s.kappa, "kappa");
    k["omega_h"] = optional_number(s.omega_h, "omega_h");
    k["omega_l"] = optional_number(s.omega_l, "omega_l");
    k["objective_scale"] = number(s.objective_scale, "objective_scale");
    k["k_init"] = [&s, &seen_gain](std::string_view v, int line) {
        if (seen_gain.count("k_init_rel")) {
            throw ConfigError("k_init and k_init_rel are mutually exclusive", line);
        }
        seen_gain.insert("k_init");
        s.k_init = GainSpec{to_double("k_init", v, line), false};
    };
    k["k_init_rel"] = [&s, &seen_gain](std::string_view v, int line) {
        if (seen_gain.count("k_init")) {
            throw ConfigError("k_init and k_init_rel are mutually exclusive", line);
        }
        seen_gain.insert("k_init_rel");
        s.k_init = GainSpec{to_double("k_init_rel", v, line), true};
    };
    k["duration"] = number(s.duration, "duration");
    k["dt"] = number(s.dt, "dt");
    k["esc_enable_time"] = number(s.esc_enable_time, "esc_enable_time");
    k["decimation"] = count(s.decimation, "decimation");
    k["deriv_time_constant"] = optional_number(s.deriv_time_constant, "deriv_time_constant");
    k["deriv_gain"] = number(s.deriv_gain, "deriv_gain");
    k["noise_std"] = number(s.noise_std, "noise_std");
    k["window_periods"] = number(s.window_periods, "window_periods");
    return k;
}

KeyTable analysis_keys(AnalysisSpec& a) {
    KeyTable k;
    k["wind_speed"] = number(a.wind_speed, "wind_speed");
    k["k_rel"] = [&a](std::string_view v, int line) {
        a.k_rel.clear();
        for (const auto item : detail::split(v, ',')) {
            a.k_rel.push_back(to_double("k_rel", item, line));
        }
    };
    k["omega_min"] = number(a.omega_min, "omega_min");
    k["omega_max"] = number(a.omega_max, "omega_max");
    k["omega_points"] = count(a.omega_points, "omega_points");
    k["outputs"] = [&a](std::string_view v, int line) {
        a.outputs.clear();
        if (v == "none") {
            return;
        }
        for (const auto item : detail::split(v, ',')) {
            const auto name = detail::trim(item);
            if (name != "P_r" && name != "P_g" && name != "P_hat_r") {
                throw ConfigError("outputs must be drawn from P_r, P_g, P_hat_r", line);
            }
            a.outputs.emplace_back(name);
        }
    };
    k["deriv_time_constant"] = number(a.deriv_time_constant, "deriv_time_constant");
    k["deriv_gain"] = number(a.deriv_gain, "deriv_gain");
    k["zero_locus"] = [&a](std::string_view v, int line) {
        a.zero_locus = to_bool("zero_locus", v, line);
    };
    k["zero_k_rel_min"] = number(a.zero_k_rel_min, "zero_k_rel_min");
    k["zero_k_rel_max"] = number(a.zero_k_rel_max, "zero_k_rel_max");
    k["zero_points"] = count(a.zero_points, "zero_points");
    return k;
}

bool valid_name(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-' || c == '.';
        if (!ok) {
            return false;
        }
    }
    return true;
}

Config parse_with_base(std::string_view text, const TurbineConfig& base) {
    Config config;
    config.turbine = base;

    enum class Section { none, turbine, scenario, analysis };
    Section section = Section::none;
    KeyTable keys;
    std::set<std::string> seen_keys;
    std::set<std::string> seen_gain;
    std::set<std::string> scenario_names;
    bool turbine_seen = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        auto raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = (end == std::string_view::npos) ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        const auto line = detail::trim(raw);
        if (line.empty()) {
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("unterminated section header", line_no);
            }
            const auto header = detail::trim(line.substr(1, line.size() - 2));
            seen_keys.clear();
            seen_gain.clear();
            if (header == "turbine") {
                if (turbine_seen) {
                    throw ConfigError("duplicate [turbine] section", line_no);
                }
                turbine_seen = true;
                section = Section::turbine;
                keys = turbine_keys(config.turbine);
            } else if (header == "analysis") {
                if (config.analysis) {
                    throw ConfigError("duplicate [analysis] section", line_no);
                }
                section = Section::analysis;
                config.analysis.emplace();
                keys = analysis_keys(*config.analysis);
            } else if (header.substr(0, 8) == "scenario") {
                const auto name = detail::trim(header.substr(8));
                if (header.size() > 8 && header[8] != ' ' && header[8] != '\t') {
                    throw ConfigError("unknown section [" + std::string(header) + "]", line_no);
                }
                if (!valid_name(name)) {
                    throw ConfigError("scenario name must match [A-Za-z0-9_.-]+", line_no);
                }
                if (!scenario_names.insert(std::string(name)).second) {
                    throw ConfigError("duplicate scenario '" + std::string(name) + "'", line_no);
                }
                section = Section::scenario;
                config.scenarios.emplace_back();
                config.scenarios.back().name = std::string(name);
                keys = scenario_keys(config.scenarios.back(), seen_gain);
            } else {
                throw ConfigError("unknown section [" + std::string(header) + "]", line_no);
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value'", line_no);
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (section == Section::none) {
            throw ConfigError("key '" + std::string(key) + "' outside of any section", line_no);
        }
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
        }
        if (!seen_keys.insert(std::string(key)).second) {
            throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
        }
        if (value.empty()) {
            throw ConfigError("missing value for '" + std::string(key) + "'", line_no);
        }
        it->second(value, line_no);
    }
    return config;
}

std::string num(double v) { return detail::format_double(v); }

} // namespace

aero::TurbineParams TurbineConfig::build(const std::filesystem::path& base_dir) const {
    aero::LambdaDomain domain{lambda_min, lambda_max};
    auto surface = [&] {
        if (cp_model == "table") {
            if (cp_table.empty()) {
                throw ConfigError("cp_model = table requires cp_table");
            }
            std::filesystem::path p(cp_table);
            if (p.is_relative() && !base_dir.empty()) {
                p = base_dir / p;
            }
            return aero::CpSurface::from_csv(p);
        }
        return aero::CpSurface::calibrated(lambda_opt, cp_opt, domain);
    }();
    aero::TurbineParams params{air_density, rotor_radius, inertia,
                               pitch_deg * std::numbers::pi / 180.0, std::move(surface)};
    params.validate();
    return params;
}

sim::Scenario ScenarioSpec::build(double k_star, std::uint64_t noise_seed) const {
    sim::Scenario s;
    s.name = name;
    s.objective = objective;
    s.wind_speed = wind_speed;
    s.esc = esc::EscConfig::with_default_filters(omega_d, dither_amplitude,
                                                 psi_deg * std::numbers::pi / 180.0, kappa,
                                                 k_init.resolve(k_star));
    if (omega_h) {
        s.esc.omega_h = *omega_h;
    }
    if (omega_l) {
        s.esc.omega_l = *omega_l;
    }
    s.esc.objective_scale = objective_scale;
    s.duration = duration;
    s.dt = dt;
    s.esc_enable_time = esc_enable_time;
    s.K_init = k_init.resolve(k_star);
    s.decimation = decimation;
    if (deriv_time_constant) {
        s.deriv = sim::DerivConfig{*deriv_time_constant, deriv_gain};
    }
    s.noise_std = noise_std;
    s.noise_seed = noise_seed;
    if (!(window_periods >= 1.0)) {
        throw ConfigError(name + ": window_periods must be at least 1");
    }
    s.validate();
    return s;
}

void AnalysisSpec::validate() const {
    if (!(wind_speed > 0.0)) {
        throw ConfigError("analysis wind_speed must be positive");
    }
    if (k_rel.empty()) {
        throw ConfigError("analysis needs at least one k_rel value");
    }
    for (const double k : k_rel) {
        if (!(k > 0.0)) {
            throw ConfigError("k_rel values must be positive");
        }
    }
    if (!(omega_min > 0.0) || !(omega_max > omega_min) || omega_points < 2) {
        throw ConfigError("analysis needs 0 < omega_min < omega_max and omega_points >= 2");
    }
    if (!(deriv_time_constant > 0.0) || !(deriv_gain > 0.0)) {
        throw ConfigError("analysis derivative filter needs positive T_d and K_d");
    }
    if (zero_locus &&
        (!(zero_k_rel_min > 0.0) || !(zero_k_rel_max > zero_k_rel_min) || zero_points < 2)) {
        throw ConfigError("zero locus needs 0 < zero_k_rel_min < zero_k_rel_max, zero_points >= 2");
    }
}

std::string_view default_config_text() noexcept { return kDefaultText; }

TurbineConfig default_turbine_config() {
    static const TurbineConfig defaults = [] {
        const auto parsed = parse_with_base(kDefaultText, TurbineConfig{});
        if (!parsed.scenarios.empty() || parsed.analysis) {
            throw std::logic_error("defaults file must only contain [turbine]");
        }
        return parsed.turbine;
    }();
    return defaults;
}

aero::TurbineParams default_turbine_params() {
    return default_turbine_config().build();
}

Config parse_config(std::string_view text, const std::string& source) {
    try {
        return parse_with_base(text, default_turbine_config());
    } catch (const ConfigError& e) {
        throw ConfigError(e.message(), e.line(), source);
    }
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto config = parse_config(buf.str(), path.string());
    config.base_dir = path.parent_path();
    return config;
}

std::string serialize_config(const Config& config) {
    std::ostringstream out;
    const auto& t = config.turbine;
    out << "[turbine]\n"
        << "air_density = " << num(t.air_density) << '\n'
        << "rotor_radius = " << num(t.rotor_radius) << '\n'
        << "inertia = " << num(t.inertia) << '\n'
        << "pitch_deg = " << num(t.pitch_deg) << '\n'
        << "cp_model = " << t.cp_model << '\n'
        << "lambda_opt = " << num(t.lambda_opt) << '\n'
        << "cp_opt = " << num(t.cp_opt) << '\n'
        << "lambda_min = " << num(t.lambda_min) << '\n'
        << "lambda_max = " << num(t.lambda_max) << '\n';
    if (!t.cp_table.empty()) {
        out << "cp_table = " << t.cp_table << '\n';
    }

    for (const auto& s : config.scenarios) {
        out << "\n[scenario " << s.name << "]\n"
            << "objective = " << sim::objective_name(s.objective) << '\n'
            << "wind_speed = " << num(s.wind_speed) << '\n'
            << "omega_d = " << num(s.omega_d) << '\n'
            << "dither_amplitude = " << num(s.dither_amplitude) << '\n'
            << "psi_deg = " << num(s.psi_deg) << '\n'
            << "kappa = " << num(s.kappa) << '\n';
        if (s.omega_h) {
            out << "omega_h = " << num(*s.omega_h) << '\n';
        }
        if (s.omega_l) {
            out << "omega_l = " << num(*s.omega_l) << '\n';
        }
        out << "objective_scale = " << num(s.objective_scale) << '\n'
            << (s.k_init.relative ? "k_init_rel = " : "k_init = ") << num(s.k_init.value) << '\n'
            << "duration = " << num(s.duration) << '\n'
            << "dt = " << num(s.dt) << '\n'
            << "esc_enable_time = " << num(s.esc_enable_time) << '\n'
            << "decimation = " << s.decimation << '\n';
        if (s.deriv_time_constant) {
            out << "deriv_time_constant = " << num(*s.deriv_time_constant) << '\n';
        }
        out << "deriv_gain = " << num(s.deriv_gain) << '\n'
            << "noise_std = " << num(s.noise_std) << '\n'
            << "window_periods = " << num(s.window_periods) << '\n';
    }

    if (config.analysis) {
        const auto& a = *config.analysis;
        out << "\n[analysis]\n"
            << "wind_speed = " << num(a.wind_speed) << '\n'
            << "k_rel = ";
        for (std::size_t i = 0; i < a.k_rel.size(); ++i) {
            out << (i ? ", " : "") << num(a.k_rel[i]);
        }
        out << '\n'
            << "omega_min = " << num(a.omega_min) << '\n'
            << "omega_max = " << num(a.omega_max) << '\n'
            << "omega_points = " << a.omega_points << '\n'
            << "outputs = " << (a.outputs.empty() ? "none" : "");
        for (std::size_t i = 0; i < a.outputs.size(); ++i) {
            out << (i ? ", " : "") << a.outputs[i];
        }
        out << '\n'
            << "deriv_time_constant = " << num(a.deriv_time_constant) << '\n'
            << "deriv_gain = " << num(a.deriv_gain) << '\n'
            << "zero_locus = " << (a.zero_locus ? "true" : "false") << '\n'
            << "zero_k_rel_min = " << num(a.zero_k_rel_min) << '\n'
            << "zero_k_rel_max = " << num(a.zero_k_rel_max) << '\n'
            << "zero_points = " << a.zero_points << '\n';
    }
    return out.str();
}

} // namespace escwind::cli
