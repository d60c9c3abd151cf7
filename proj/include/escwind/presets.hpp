#pragma once

#include "escwind/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace escwind::cli {

enum class Provenance { published, default_value, computed };

struct PresetParameter {
    std::string name;
    std::string value;
    Provenance source;
};

struct Preset {
    std::string name;
    std::string description;
    Config config;
    std::vector<PresetParameter> parameters;
};

// fig3, fig4a, fig4b, fig5, fig6, fig7, fig8 built on the default turbine.
// Compensation angles are computed from the linear model of that turbine.
std::vector<Preset> builtin_presets();

std::optional<Preset> find_preset(std::string_view name);

// Lists every preset with its parameter table.
void print_presets(std::ostream& out);

} // namespace escwind::cli
