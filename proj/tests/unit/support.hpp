#pragma once

#include "escwind/aero.hpp"

#include <cmath>
#include <filesystem>
#include <string>

namespace test_support {

inline constexpr double kInertia = 43784725.0;

// Calibrated surface (λ* = 7.55, Cp* = 0.482) on the 126 m rotor.
inline escwind::aero::TurbineParams reference_turbine() {
    return escwind::aero::TurbineParams{
        1.225, 63.0, kInertia, 0.0, escwind::aero::CpSurface::calibrated(7.55, 0.482)};
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline std::string data_path(const std::string& name) {
    return std::string(ESCWIND_TEST_DATA_DIR) + "/" + name;
}

// Scratch location for files written by tests, outside the source tree.
inline std::string scratch_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "escwind_unit_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace test_support
