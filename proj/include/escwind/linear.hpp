#pragma once

#include "escwind/aero.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace escwind::linear {

struct OperatingPoint {
    double omega_r = 0.0;     // ω̄_r [rad/s]
    double torque_gain = 0.0; // K̄
    double wind_speed = 0.0;  // V̄ [m/s]
};

struct DerivParams {
    double time_constant = 1e-2; // T_d
    double gain = 1.0;           // K_d
};

// Small-signal model ẋ = A x + B u, y = C x + D u around an equilibrium of the
// Kω² loop, input u = K.
//
// Plain model: x = ω_r, y = [P_r, P_g].
// Augmented model: x = [ω_r, ω̂_r] (filtered-derivative state), y = P̂_r.
struct LinearModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;
    OperatingPoint op;
    aero::TurbineParams params;
    std::optional<DerivParams> deriv;

    Eigen::Index states() const noexcept { return A.rows(); }
    Eigen::Index outputs() const noexcept { return C.rows(); }
    bool augmented() const noexcept { return deriv.has_value(); }
};

enum class Output { aero_power, generator_power, estimated_aero_power };

// "P_r", "P_g", "P_hat_r"
std::string_view output_label(Output output) noexcept;

// num(s)/den(s), coefficients in ascending powers of s.
struct RationalTf {
    std::vector<double> num;
    std::vector<double> den;
    Output output = Output::aero_power;

    std::complex<double> operator()(std::complex<double> s) const;
    double dc_gain() const;
    int num_degree() const noexcept;
    int den_degree() const noexcept;
    std::vector<std::complex<double>> zeros() const;
    std::vector<std::complex<double>> poles() const;
};

LinearModel linearize(const aero::TurbineParams& params, double torque_gain, double wind_speed);

LinearModel linearize_augmented(const aero::TurbineParams& params, double torque_gain,
                                double wind_speed, double time_constant, double gain = 1.0);

// {P_r(s), P_g(s)} of a plain model with denominator I s + D₀.
std::array<RationalTf, 2> transfer_functions(const LinearModel& model);

// P̂_r(s) of an augmented model, denominator (I s + D₀)(T_d s + 1).
RationalTf estimated_power_tf(const LinearModel& model);

// Row `output` of C (sI − A)⁻¹ B + D, evaluated directly from the matrices.
std::complex<double> evaluate(const LinearModel& model, Eigen::Index output,
                              std::complex<double> s);

enum class PhaseClass { minimum_phase, nonminimum_phase, marginal };

struct PgZero {
    double location = 0.0; // real zero [1/s]
    PhaseClass kind = PhaseClass::marginal;
};

// The single zero −N_g1/N_g2 of P_g(s). Throws std::invalid_argument if the
// function is not a P_g transfer function or N_g2 = 0.
PgZero zero_of_pg(const RationalTf& tf);

struct FrequencyPoint {
    double omega = 0.0;     // [rad/s]
    double magnitude = 0.0; // linear
    double phase_deg = 0.0;
};

// Response at s = jω for strictly increasing ω > 0. The phase is a continuous
// function of ω, shifted so the value at the lowest frequency lies in
// (−180°, 180°].
std::vector<FrequencyPoint> frequency_response(const RationalTf& tf,
                                               std::span<const double> omegas);

// Demodulation phase [rad] that cancels the high-pass and plant phase at ω_d
// for the optimal operating point.
double compensation_angle(const aero::TurbineParams& params, double wind_speed, double omega_d,
                          double omega_h);

// Roots of a polynomial of degree ≤ 2 (ascending coefficients), closed form.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> ascending);

// n logarithmically spaced points from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t n);

} // namespace escwind::linear
