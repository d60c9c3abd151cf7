#pragma once

#include "escwind/linear.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace escwind::linear {

struct BodeCurve {
    std::string label;
    std::vector<FrequencyPoint> points;
};

// Magnitudes at or below this level (including exact zeros) are written as it.
inline constexpr double kMagnitudeFloorDb = -300.0;

double magnitude_db(double magnitude) noexcept;

// CSV `omega,magnitude_db,phase_deg,label`, one row per (ω, curve), curves in
// order. Values are written with round-trip precision.
void bode_export(std::span<const BodeCurve> curves, const std::filesystem::path& path);

// Reads a file written by bode_export; magnitudes are converted back to linear.
std::vector<BodeCurve> read_bode_csv(const std::filesystem::path& path);

} // namespace escwind::linear
