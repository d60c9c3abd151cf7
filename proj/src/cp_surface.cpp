#include "escwind/cp_surface.hpp"

#include "escwind/errors.hpp"
#include "text_util.hpp"

#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <variant>

namespace escwind::aero {

namespace {

struct SplineDeleter {
    void operator()(gsl_spline* spline) const noexcept { gsl_spline_free(spline); }
};

struct Exponential {
    ExponentialCoefficients c;

    // Value and first two derivatives with respect to λ.
    void eval(double lambda, double* f, double* df, double* d2f) const {
        const double u = 1.0 / lambda - c.c7;
        const double e = std::exp(-c.c5 * u);
        const double core = c.c2 * u - c.c4;
        if (f) {
            *f = c.c1 * core * e + c.c6 * lambda;
        }
        const double du = -1.0 / (lambda * lambda);
        const double g1 = c.c1 * e * (c.c2 - c.c5 * core);
        if (df) {
            *df = g1 * du + c.c6;
        }
        if (d2f) {
            const double g2 = c.c1 * e * (-2.0 * c.c5 * c.c2 + c.c5 * c.c5 * core);
            const double d2u = 2.0 / (lambda * lambda * lambda);
            *d2f = g2 * du * du + g1 * d2u;
        }
    }
};

struct Tabulated {
    std::vector<double> lambda;
    std::vector<double> cp;
    std::unique_ptr<gsl_spline, SplineDeleter> spline;
};

void disable_gsl_abort() {
    static std::once_flag flag;
    std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

} // namespace

struct CpSurface::Impl {
    std::variant<Exponential, Tabulated> rep;
    LambdaDomain domain;
    CpOptimum optimum;

    double value(double lambda) const {
        return std::visit(
            [lambda](const auto& r) -> double {
                if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Exponential>) {
                    double f = 0.0;
                    r.eval(lambda, &f, nullptr, nullptr);
                    return f;
                } else {
                    return gsl_spline_eval(r.spline.get(), lambda, nullptr);
                }
            },
            rep);
    }

    double slope(double lambda) const {
        return std::visit(
            [lambda](const auto& r) -> double {
                if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Exponential>) {
                    double df = 0.0;
                    r.eval(lambda, nullptr, &df, nullptr);
                    return df;
                } else {
                    return gsl_spline_eval_deriv(r.spline.get(), lambda, nullptr);
                }
            },
            rep);
    }

    double curvature(double lambda) const {
        return std::visit(
            [lambda](const auto& r) -> double {
                if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Exponential>) {
                    double d2f = 0.0;
                    r.eval(lambda, nullptr, nullptr, &d2f);
                    return d2f;
                } else {
                    return gsl_spline_eval_deriv2(r.spline.get(), lambda, nullptr);
                }
            },
            rep);
    }

    // Locates the unique sign change of ∂Cp/∂λ on a fine grid and polishes it.
    void locate_optimum() {
        constexpr int kGrid = 4000;
        const double step = (domain.max - domain.min) / kGrid;
        int changes = 0;
        double lo = 0.0;
        double hi = 0.0;
        double prev_lambda = domain.min;
        bool prev_rising = slope(prev_lambda) > 0.0;
        for (int i = 1; i <= kGrid; ++i) {
            const double lambda = (i == kGrid) ? domain.max : domain.min + i * step;
            const bool rising = slope(lambda) > 0.0;
            if (rising != prev_rising) {
                if (rising) {
                    throw CalibrationError("Cp surface has a local minimum near lambda = " +
                                           std::to_string(lambda));
                }
                ++changes;
                lo = prev_lambda;
                hi = lambda;
            }
            prev_lambda = lambda;
            prev_rising = rising;
        }
        if (changes == 0) {
            throw CalibrationError("Cp surface has no interior maximum on [" +
                                   std::to_string(domain.min) + ", " +
                                   std::to_string(domain.max) + "]");
        }
        if (changes > 1) {
            throw CalibrationError("Cp surface slope changes sign " + std::to_string(changes) +
                                   " times; a unique maximizer is required");
        }
        if (lo <= domain.min || hi >= domain.max) {
            throw CalibrationError("Cp maximizer lies on the domain boundary");
        }

        std::uintmax_t iterations = 100;
        const auto root = boost::math::tools::toms748_solve(
            [this](double l) { return slope(l); }, lo, hi,
            boost::math::tools::eps_tolerance<double>(52), iterations);
        optimum.lambda = 0.5 * (root.first + root.second);
        optimum.cp = value(optimum.lambda);

        if (!(curvature(optimum.lambda) < 0.0)) {
            throw CalibrationError("Cp maximizer is not strict (second derivative >= 0)");
        }
        if (optimum.cp > kBetzLimit) {
            throw CalibrationError("Cp* = " + std::to_string(optimum.cp) +
                                   " exceeds the Betz limit");
        }
        if (!(optimum.cp > 0.0)) {
            throw CalibrationError("Cp* must be positive");
        }
    }
};

CpSurface::CpSurface(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

CpSurface CpSurface::exponential(const ExponentialCoefficients& coefficients, LambdaDomain domain) {
    if (!(domain.min > 0.0) || !(domain.max > domain.min)) {
        throw CalibrationError("lambda domain must satisfy 0 < min < max");
    }
    auto impl = std::make_shared<Impl>();
    impl->rep = Exponential{coefficients};
    impl->domain = domain;
    impl->locate_optimum();
    return CpSurface(std::move(impl));
}

CpSurface CpSurface::calibrated(double lambda_opt, double cp_opt, LambdaDomain domain) {
    if (!(lambda_opt > 0.0) || !(cp_opt > 0.0) || cp_opt > kBetzLimit) {
        throw CalibrationError("calibration target must satisfy lambda* > 0 and 0 < Cp* <= 16/27");
    }
    const ExponentialCoefficients base;
    const auto reference = exponential(base, LambdaDomain{1.0, 20.0});
    // Cp(λ) = a · Cp_base(s λ) keeps the exponential form with rescaled coefficients.
    const double s = reference.optimum().lambda / lambda_opt;
    const double a = cp_opt / reference.optimum().cp;
    ExponentialCoefficients c;
    c.c1 = base.c1 * a;
    c.c2 = base.c2 / s;
    c.c4 = base.c4;
    c.c5 = base.c5 / s;
    c.c6 = base.c6 * s * a;
    c.c7 = base.c7 * s;
    return exponential(c, domain);
}

CpSurface CpSurface::tabulated(std::span<const double> lambda, std::span<const double> cp) {
    if (lambda.size() != cp.size()) {
        throw CalibrationError("lambda and cp columns differ in length");
    }
    if (lambda.size() < 10) {
        throw CalibrationError("Cp table needs at least 10 rows, got " +
                               std::to_string(lambda.size()));
    }
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!std::isfinite(lambda[i]) || !std::isfinite(cp[i])) {
            throw CalibrationError("Cp table contains a non-finite value at row " +
                                   std::to_string(i + 1));
        }
        if (i > 0 && !(lambda[i] > lambda[i - 1])) {
            throw CalibrationError("lambda column must be strictly increasing (row " +
                                   std::to_string(i + 1) + ")");
        }
    }
    if (!(lambda.front() > 0.0)) {
        throw CalibrationError("tabulated lambda must be positive");
    }
    disable_gsl_abort();

    Tabulated table;
    table.lambda.assign(lambda.begin(), lambda.end());
    table.cp.assign(cp.begin(), cp.end());
    table.spline.reset(gsl_spline_alloc(gsl_interp_cspline, table.lambda.size()));
    if (!table.spline ||
        gsl_spline_init(table.spline.get(), table.lambda.data(), table.cp.data(),
                        table.lambda.size()) != GSL_SUCCESS) {
        throw CalibrationError("failed to build cubic spline through the Cp table");
    }

    auto impl = std::make_shared<Impl>();
    impl->domain = LambdaDomain{table.lambda.front(), table.lambda.back()};
    impl->rep = std::move(table);
    impl->locate_optimum();
    for (const double value : cp) {
        if (value > kBetzLimit) {
            throw CalibrationError("tabulated Cp exceeds the Betz limit");
        }
    }
    return CpSurface(std::move(impl));
}

CpSurface CpSurface::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw CalibrationError("cannot open Cp table " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "lambda,cp") {
        throw CalibrationError(path.string() + ": expected header 'lambda,cp'");
    }
    std::vector<double> lambda;
    std::vector<double> cp;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto fields = detail::split(line, ',');
        const auto l = fields.size() == 2 ? detail::parse_double(fields[0]) : std::nullopt;
        const auto c = fields.size() == 2 ? detail::parse_double(fields[1]) : std::nullopt;
        if (!l || !c) {
            throw CalibrationError(path.string() + ":" + std::to_string(line_no) +
                                   ": expected two numeric fields");
        }
        lambda.push_back(*l);
        cp.push_back(*c);
    }
    return tabulated(lambda, cp);
}

void CpSurface::check_domain(double lambda) const {
    if (!impl_->domain.contains(lambda)) {
        std::ostringstream msg;
        msg << "tip-speed ratio " << lambda << " outside Cp surface domain [" << impl_->domain.min
            << ", " << impl_->domain.max << "]";
        throw DomainError(msg.str());
    }
}

double CpSurface::cp(double lambda) const {
    check_domain(lambda);
    return impl_->value(lambda);
}

double CpSurface::dcp(double lambda) const {
    check_domain(lambda);
    return impl_->slope(lambda);
}

double CpSurface::d2cp(double lambda) const {
    check_domain(lambda);
    return impl_->curvature(lambda);
}

double CpSurface::ctau(double lambda) const {
    return cp(lambda) / lambda;
}

double CpSurface::dctau(double lambda) const {
    check_domain(lambda);
    return (impl_->slope(lambda) * lambda - impl_->value(lambda)) / (lambda * lambda);
}

const CpOptimum& CpSurface::optimum() const noexcept { return impl_->optimum; }

LambdaDomain CpSurface::domain() const noexcept { return impl_->domain; }

bool CpSurface::is_tabulated() const noexcept {
    return std::holds_alternative<Tabulated>(impl_->rep);
}

const ExponentialCoefficients& CpSurface::coefficients() const {
    if (const auto* e = std::get_if<Exponential>(&impl_->rep)) {
        return e->c;
    }
    throw std::logic_error("tabulated Cp surface has no exponential coefficients");
}

} // namespace escwind::aero
