#include "escwind/commands.hpp"
#include "escwind/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <iostream>
#include <string>

namespace {

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("ESCWIND_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    std::uint64_t seed = 0;
    const char* end = raw + std::strlen(raw);
    const auto [ptr, ec] = std::from_chars(raw, end, seed);
    if (ec != std::errc{} || ptr != end) {
        throw escwind::ConfigError(std::string("ESCWIND_SEED is not an unsigned integer: ") + raw);
    }
    return seed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kω² torque-gain ESC simulation and frequency-domain analysis"};
    app.require_subcommand(1);

    std::string target;
    std::string out_dir;
    bool serial = false;

    auto* run = app.add_subcommand("run", "run every scenario of a config or preset");
    run->add_option("config", target, "config file or preset name")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_flag("--serial", serial, "run scenarios one after another");

    auto* analyze = app.add_subcommand("analyze", "Bode and zero-locus analysis");
    analyze->add_option("config", target, "config file or preset name")->required();
    analyze->add_option("--out", out_dir, "output directory")->required();

    auto* presets = app.add_subcommand("presets", "list the built-in presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed()) {
            escwind::cli::cmd_presets(std::cout);
            return 0;
        }
        const auto config = escwind::cli::resolve_config(target);
        if (run->parsed()) {
            escwind::cli::RunOptions options;
            options.seed = seed_from_env();
            options.parallel = !serial;
            return escwind::cli::cmd_run(config, out_dir, options, &std::cout);
        }
        return escwind::cli::cmd_analyze(config, out_dir, &std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
