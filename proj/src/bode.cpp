#include "escwind/bode.hpp"

#include "text_util.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace escwind::linear {

double magnitude_db(double magnitude) noexcept {
    if (!(magnitude > 0.0)) {
        return kMagnitudeFloorDb;
    }
    return std::max(kMagnitudeFloorDb, 20.0 * std::log10(magnitude));
}

void bode_export(std::span<const BodeCurve> curves, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "omega,magnitude_db,phase_deg,label\n";
    for (const auto& curve : curves) {
        if (curve.label.find_first_of(",\n") != std::string::npos) {
            throw std::invalid_argument("curve label must not contain ',' or newline");
        }
        for (const auto& p : curve.points) {
            out << detail::format_double(p.omega) << ',' << detail::format_double(magnitude_db(p.magnitude))
                << ',' << detail::format_double(p.phase_deg) << ',' << curve.label << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::vector<BodeCurve> read_bode_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "omega,magnitude_db,phase_deg,label") {
        throw std::runtime_error(path.string() + ": unexpected Bode CSV header");
    }
    std::vector<BodeCurve> curves;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto fields = detail::split(line, ',');
        if (fields.size() != 4) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 4 fields");
        }
        const auto w = detail::parse_double(fields[0]);
        const auto db = detail::parse_double(fields[1]);
        const auto ph = detail::parse_double(fields[2]);
        if (!w || !db || !ph) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": non-numeric field");
        }
        const std::string label(detail::trim(fields[3]));
        if (curves.empty() || curves.back().label != label) {
            curves.push_back(BodeCurve{label, {}});
        }
        curves.back().points.push_back(FrequencyPoint{*w, std::pow(10.0, *db / 20.0), *ph});
    }
    return curves;
}

} // namespace escwind::linear
