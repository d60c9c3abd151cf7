#pragma once

#include "escwind/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace escwind::cli {

struct RunOptions {
    // Base seed for measurement noise; scenario i uses seed + i. Only
    // consulted by scenarios with noise_std > 0.
    std::optional<std::uint64_t> seed;
    bool parallel = true;
};

inline constexpr std::string_view kSummaryHeader =
    "scenario,objective,omega_d,psi_deg,kappa,K_init,K_star,K_tilde_mean,K_tilde_spread,"
    "rel_deviation,K_tilde_final,status";

// Runs every scenario and writes `<name>.csv`, `summary.csv` and `run.gp`
// into out_dir. Returns 0 iff every run finished with a finite trace.
// Throws ConfigError / CalibrationError before any run if the config is
// invalid.
int cmd_run(const Config& config, const std::filesystem::path& out_dir,
            const RunOptions& options = {}, std::ostream* log = nullptr);

// Writes `bode_<output>.csv` per requested output, `zero_locus_P_g.csv` when
// requested, and `analyze.gp`. Returns 0 on success.
int cmd_analyze(const Config& config, const std::filesystem::path& out_dir,
                std::ostream* log = nullptr);

void cmd_presets(std::ostream& out);

// A built-in preset name or a path to a config file.
Config resolve_config(std::string_view name_or_path);

} // namespace escwind::cli
