#include "escwind/linear.hpp"

#include "escwind/errors.hpp"
#include "escwind/turbine.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace escwind::linear {

namespace {

std::vector<double> trimmed(std::span<const double> c) {
    std::vector<double> out(c.begin(), c.end());
    while (!out.empty() && out.back() == 0.0) {
        out.pop_back();
    }
    return out;
}

std::complex<double> horner(const std::vector<double>& c, std::complex<double> s) {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

// Angle of (jω − r), continuous in ω > 0 for every root off the imaginary axis.
double factor_angle(double omega, std::complex<double> r) {
    double theta = std::atan2(omega - r.imag(), -r.real());
    if (r.real() > 0.0 && theta < 0.0) {
        theta += 2.0 * std::numbers::pi;
    }
    return theta;
}

struct Slopes {
    double lambda;
    double dcp;
    double dctau;
};

Slopes slopes_at(const aero::TurbineParams& params, double omega, double v) {
    const double lambda = aero::tip_speed_ratio(omega, params.radius, v);
    return {lambda, params.cp_surface.dcp(lambda), params.cp_surface.dctau(lambda)};
}

} // namespace

std::string_view output_label(Output output) noexcept {
    switch (output) {
    case Output::aero_power:
        return "P_r";
    case Output::generator_power:
        return "P_g";
    case Output::estimated_aero_power:
        return "P_hat_r";
    }
    return "?";
}

std::complex<double> RationalTf::operator()(std::complex<double> s) const {
    return horner(num, s) / horner(den, s);
}

double RationalTf::dc_gain() const {
    return (num.empty() ? 0.0 : num.front()) / den.front();
}

int RationalTf::num_degree() const noexcept {
    return static_cast<int>(trimmed(num).size()) - 1;
}

int RationalTf::den_degree() const noexcept {
    return static_cast<int>(trimmed(den).size()) - 1;
}

std::vector<std::complex<double>> RationalTf::zeros() const {
    return polynomial_roots(num);
}

std::vector<std::complex<double>> RationalTf::poles() const {
    return polynomial_roots(den);
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> ascending) {
    const auto c = trimmed(ascending);
    if (c.size() <= 1) {
        return {};
    }
    if (c.size() == 2) {
        return {std::complex<double>(-c[0] / c[1], 0.0)};
    }
    if (c.size() == 3) {
        const double a = c[2];
        const double b = c[1];
        const double d = c[0];
        const double disc = b * b - 4.0 * a * d;
        if (disc >= 0.0) {
            // Avoids cancellation between −b and √disc.
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            if (q == 0.0) {
                return {{0.0, 0.0}, {0.0, 0.0}};
            }
            return {{q / a, 0.0}, {d / q, 0.0}};
        }
        const double re = -b / (2.0 * a);
        const double im = std::sqrt(-disc) / (2.0 * a);
        return {{re, im}, {re, -im}};
    }
    throw std::invalid_argument("closed-form roots only up to degree 2");
}

LinearModel linearize(const aero::TurbineParams& params, double torque_gain, double wind_speed) {
    const double omega = turbine::steady_state(params, torque_gain, wind_speed);
    const auto s = slopes_at(params, omega, wind_speed);
    const double I = params.inertia;
    const double rho_a = params.rho * params.area();
    const double R = params.radius;
    const double v = wind_speed;

    LinearModel m{Eigen::MatrixXd(1, 1), Eigen::MatrixXd(1, 1), Eigen::MatrixXd(2, 1),
                  Eigen::MatrixXd(2, 1), OperatingPoint{omega, torque_gain, wind_speed},
                  params, std::nullopt};
    m.A(0, 0) = (0.5 * rho_a * R * R * v * s.dctau - 2.0 * torque_gain * omega) / I;
    m.B(0, 0) = -omega * omega / I;
    m.C(0, 0) = 0.5 * rho_a * R * v * v * s.dcp;
    m.C(1, 0) = 3.0 * torque_gain * omega * omega;
    m.D(0, 0) = 0.0;
    m.D(1, 0) = omega * omega * omega;
    return m;
}

LinearModel linearize_augmented(const aero::TurbineParams& params, double torque_gain,
                                double wind_speed, double time_constant, double gain) {
    if (!(time_constant > 0.0) || !(gain > 0.0)) {
        throw ConfigError("augmented linearization needs T_d > 0 and K_d > 0");
    }
    const auto plain = linearize(params, torque_gain, wind_speed);
    const double omega = plain.op.omega_r;
    const double omega_hat = gain * omega;
    const double I = params.inertia;
    const double td = time_constant;

    LinearModel m{Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 1), Eigen::MatrixXd(1, 2),
                  Eigen::MatrixXd(1, 1), plain.op, params, DerivParams{time_constant, gain}};
    m.A << plain.A(0, 0), 0.0, gain / td, -1.0 / td;
    m.B << plain.B(0, 0), 0.0;
    m.C(0, 0) = I / td * (2.0 * gain * omega - omega_hat) + 3.0 * torque_gain * omega * omega;
    m.C(0, 1) = -I / td * omega;
    m.D(0, 0) = omega * omega * omega;
    return m;
}

std::array<RationalTf, 2> transfer_functions(const LinearModel& model) {
    if (model.augmented() || model.states() != 1) {
        throw std::invalid_argument("transfer_functions expects the plain one-state model");
    }
    const auto& p = model.params;
    const double omega = model.op.omega_r;
    const double K = model.op.torque_gain;
    const double v = model.op.wind_speed;
    const auto s = slopes_at(p, omega, v);
    const double rho_a = p.rho * p.area();
    const double R = p.radius;
    const double w2 = omega * omega;
    const double w3 = w2 * omega;

    const double n_r1 = -0.5 * rho_a * R * v * v * s.dcp * w2;
    const double n_g1 = -0.5 * rho_a * R * R * v * s.dctau * w3 - K * w2 * w2;
    const double n_g2 = p.inertia * w3;
    const double d0 = 2.0 * K * omega - 0.5 * rho_a * v * s.dctau * R * R;
    const std::vector<double> den{d0, p.inertia};

    return {RationalTf{{n_r1}, den, Output::aero_power},
            RationalTf{{n_g1, n_g2}, den, Output::generator_power}};
}

RationalTf estimated_power_tf(const LinearModel& model) {
    if (!model.augmented()) {
        throw std::invalid_argument("estimated_power_tf expects an augmented model");
    }
    const double I = model.params.inertia;
    const double td = model.deriv->time_constant;
    const double kd = model.deriv->gain;
    const double a = model.A(0, 0);
    const double b = model.B(0, 0);
    const double c1 = model.C(0, 0);
    const double c2 = model.C(0, 1);
    const double d = model.D(0, 0);
    const double d0 = -I * a;

    // C adj(sI − A) B + D det(sI − A), scaled by I·T_d.
    RationalTf tf;
    tf.output = Output::estimated_aero_power;
    tf.num = {b * I * (c1 + c2 * kd) + d * d0, b * I * c1 * td + d * (I + d0 * td), d * I * td};
    tf.den = {d0, I + d0 * td, I * td};
    return tf;
}

std::complex<double> evaluate(const LinearModel& model, Eigen::Index output,
                              std::complex<double> s) {
    const Eigen::Index n = model.states();
    const Eigen::MatrixXcd sys =
        s * Eigen::MatrixXcd::Identity(n, n) - model.A.cast<std::complex<double>>();
    const Eigen::VectorXcd x = sys.partialPivLu().solve(model.B.cast<std::complex<double>>());
    return (model.C.row(output).cast<std::complex<double>>() * x)(0) + model.D(output, 0);
}

PgZero zero_of_pg(const RationalTf& tf) {
    if (tf.output != Output::generator_power || tf.num.size() != 2) {
        throw std::invalid_argument("zero_of_pg expects the first-order P_g transfer function");
    }
    if (tf.num[1] == 0.0) {
        throw std::invalid_argument("degenerate P_g numerator: N_g2 = 0");
    }
    PgZero z;
    z.location = -tf.num[0] / tf.num[1];
    // N_g1 is a difference of two terms that cancel at K*; treat a zero within
    // rounding of the pole scale as lying on the imaginary axis.
    const double scale = tf.den.size() == 2 && tf.den[1] != 0.0 ? std::abs(tf.den[0] / tf.den[1])
                                                                 : std::abs(z.location);
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    z.kind = z.location < -tol  ? PhaseClass::minimum_phase
             : z.location > tol ? PhaseClass::nonminimum_phase
                                : PhaseClass::marginal;
    return z;
}

std::vector<FrequencyPoint> frequency_response(const RationalTf& tf,
                                               std::span<const double> omegas) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0.0) || (i > 0 && !(omegas[i] > omegas[i - 1]))) {
            throw std::invalid_argument("frequencies must be positive and strictly increasing");
        }
    }
    const auto num = trimmed(tf.num);
    const auto den = trimmed(tf.den);
    if (den.empty()) {
        throw std::invalid_argument("transfer function has a zero denominator");
    }
    const auto zeros = polynomial_roots(num);
    const auto poles = polynomial_roots(den);
    const double lead_sign = num.empty() ? 0.0 : (num.back() / den.back() < 0.0 ? 1.0 : 0.0);

    std::vector<FrequencyPoint> out;
    out.reserve(omegas.size());
    double shift = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double w = omegas[i];
        FrequencyPoint pt;
        pt.omega = w;
        pt.magnitude = num.empty() ? 0.0 : std::abs(tf(std::complex<double>(0.0, w)));
        double phase = 0.0;
        if (!num.empty()) {
            phase = lead_sign * std::numbers::pi;
            for (const auto& z : zeros) {
                phase += factor_angle(w, z);
            }
            for (const auto& p : poles) {
                phase -= factor_angle(w, p);
            }
        }
        double deg = phase * 180.0 / std::numbers::pi;
        if (i == 0) {
            shift = -360.0 * std::ceil((deg - 180.0) / 360.0);
        }
        pt.phase_deg = deg + shift;
        out.push_back(pt);
    }
    return out;
}

double compensation_angle(const aero::TurbineParams& params, double wind_speed, double omega_d,
                          double omega_h) {
    const auto model = linearize(params, aero::optimal_torque_gain(params), wind_speed);
    const auto tfs = transfer_functions(model);
    const auto& den = tfs[0].den;
    const double highpass = std::numbers::pi / 2.0 - std::atan(omega_d / omega_h);
    const double plant = -std::atan2(den[1] * omega_d, den[0]);
    return highpass + plant;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw std::invalid_argument("log_space needs 0 < lo < hi and n >= 2");
    }
    std::vector<double> out(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace escwind::linear
