#include "escwind/bode.hpp"
#include "escwind/linear.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

using namespace escwind::linear;

namespace {

std::size_t count_lines(const std::string& path) {
    std::ifstream in(path);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
    }
    return n;
}

std::string first_line(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

} // namespace

TEST_CASE("decibel conversion and floor") {
    CHECK(magnitude_db(1.0) == 0.0);
    CHECK(magnitude_db(10.0) == doctest::Approx(20.0));
    CHECK(magnitude_db(0.0) == kMagnitudeFloorDb);
    CHECK(magnitude_db(1e-200) == kMagnitudeFloorDb);
}

TEST_CASE("export and read back") {
    std::vector<BodeCurve> curves{
        {"a", {{1e-3, 2.5, -10.0}, {1e-2, 1.0 / 3.0, -45.123456789}, {1e-1, 7e5, 179.9}}},
        {"b", {{1e-3, 1e-9, 0.0}, {1e-2, 123.456, 90.0}}},
    };
    const std::string path = test_support::scratch_path("bode_roundtrip.csv");
    bode_export(curves, path);
    CHECK(first_line(path) == "omega,magnitude_db,phase_deg,label");
    CHECK(count_lines(path) == 6);

    const auto back = read_bode_csv(path);
    REQUIRE(back.size() == 2);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(back[c].label == curves[c].label);
        REQUIRE(back[c].points.size() == curves[c].points.size());
        for (std::size_t i = 0; i < curves[c].points.size(); ++i) {
            const auto& a = curves[c].points[i];
            const auto& b = back[c].points[i];
            CHECK(b.omega == a.omega);
            CHECK(b.phase_deg == a.phase_deg);
            CHECK(b.magnitude == doctest::Approx(a.magnitude).epsilon(1e-12));
        }
    }
}

TEST_CASE("empty export is header only") {
    const std::string path = test_support::scratch_path("bode_empty.csv");
    bode_export({}, path);
    CHECK(count_lines(path) == 1);
    CHECK(read_bode_csv(path).empty());
}

TEST_CASE("labels with commas are rejected") {
    std::vector<BodeCurve> curves{{"a,b", {{1.0, 1.0, 0.0}}}};
    CHECK_THROWS(bode_export(curves, test_support::scratch_path("bode_bad.csv")));
}

TEST_CASE("five-curve sweep has 5N rows") {
    const auto p = test_support::reference_turbine();
    const double k_star = escwind::aero::optimal_torque_gain(p);
    const auto omegas = log_space(1e-6, 1e2, 200);
    std::vector<BodeCurve> curves;
    for (const double rel : {0.96, 0.98, 1.0, 1.02, 1.04}) {
        const auto tf = transfer_functions(linearize(p, rel * k_star, 8.0))[1];
        curves.push_back({std::to_string(rel), frequency_response(tf, omegas)});
    }
    const std::string path = test_support::scratch_path("bode_sweep.csv");
    bode_export(curves, path);
    CHECK(count_lines(path) == 1 + 5 * 200);
}
