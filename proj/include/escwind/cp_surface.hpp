#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace escwind::aero {

// Betz limit, 16/27.
inline constexpr double kBetzLimit = 16.0 / 27.0;

struct LambdaDomain {
    double min = 1.0;
    double max = 16.0;

    bool contains(double lambda) const noexcept { return lambda >= min && lambda <= max; }
};

// Coefficients of the exponential power-coefficient family at fixed pitch
//
//   Cp(λ) = c1 (c2 u − c4) exp(−c5 u) + c6 λ,   u = 1/λ − c7
//
// (the usual c3 pitch term is folded into c7 since the pitch is constant).
struct ExponentialCoefficients {
    double c1 = 0.5176;
    double c2 = 116.0;
    double c4 = 5.0;
    double c5 = 21.0;
    double c6 = 0.0068;
    double c7 = 0.035;
};

struct CpOptimum {
    double lambda = 0.0;
    double cp = 0.0;
};

// Power coefficient map Cp(λ) at a fixed pitch angle, together with the
// torque coefficient Cτ = Cp/λ and their λ-derivatives.
//
// Immutable after construction; copies share the underlying representation.
// Construction validates the surface: the maximizer λ* must be unique and
// interior, ∂²Cp/∂λ² < 0 there, and Cp* must not exceed the Betz limit.
// Evaluation outside the declared λ-domain throws DomainError.
class CpSurface {
public:
    static CpSurface exponential(const ExponentialCoefficients& coefficients,
                                 LambdaDomain domain = {});

    // Exponential family rescaled in λ and amplitude so that its maximizer
    // lands exactly on (lambda_opt, cp_opt).
    static CpSurface calibrated(double lambda_opt, double cp_opt, LambdaDomain domain = {});

    // Natural cubic spline through (λ, Cp) samples. λ strictly increasing,
    // at least 10 samples.
    static CpSurface tabulated(std::span<const double> lambda, std::span<const double> cp);

    // CSV with header `lambda,cp`.
    static CpSurface from_csv(const std::filesystem::path& path);

    double cp(double lambda) const;
    double dcp(double lambda) const;
    double d2cp(double lambda) const;
    double ctau(double lambda) const;
    double dctau(double lambda) const;

    const CpOptimum& optimum() const noexcept;
    LambdaDomain domain() const noexcept;

    bool is_tabulated() const noexcept;
    // Coefficients of an exponential surface; throws std::logic_error for tables.
    const ExponentialCoefficients& coefficients() const;

    struct Impl;

private:
    explicit CpSurface(std::shared_ptr<const Impl> impl);
    void check_domain(double lambda) const;

    std::shared_ptr<const Impl> impl_;
};

} // namespace escwind::aero
