#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "grft/core.hpp"

namespace grft {

/// Truncated Fourier representation of the generic (material-independent)
/// per-unit-depth stress maps.
///
///   alpha_z0 = scale * sum_{m=-1..1} sum_{n=0..1} A[m][n] cos(2m*beta + n*gamma) + B[m][n] sin(...)
///   alpha_x0 = scale * sum_{m=-1..1} sum_{n=0..1} C[m][n] cos(2m*beta + n*gamma) + D[m][n] sin(...)
///
/// Tables are indexed [m + 1][n]. `scale` multiplies the whole series and sets
/// the normalization alpha_z0(0, pi/2).
struct StressMapCoefficients {
    using Table = std::array<std::array<double, 2>, 3>;

    Table A{};
    Table B{};
    Table C{};
    Table D{};
    double scale = 1.0;

    /// Generic granular coefficient set from the original RFT fits (dry
    /// granular media), rescaled so that alpha_z0(0, pi/2) = 1.25.
    static StressMapCoefficients generic()
    {
        StressMapCoefficients c;
        c.A[1][0] = 0.206;  // A_{0,0}
        c.A[2][0] = 0.169;  // A_{1,0}
        c.B[2][1] = 0.212;  // B_{1,1}
        c.B[1][1] = 0.358;  // B_{0,1}
        c.B[0][1] = 0.055;  // B_{-1,1}
        c.C[2][1] = -0.124; // C_{1,1}
        c.C[1][1] = 0.253;  // C_{0,1}
        c.C[0][1] = 0.007;  // C_{-1,1}
        c.D[2][0] = 0.088;  // D_{1,0}
        c.scale = 1.25;     // raw set has alpha_z0(0, pi/2) = 1.000
        return c;
    }
};

/// Five-parameter logistic used for the orientation weights:
///   p0 / (p1 + p2 * exp(p3 * t + p4))
struct Sigmoid {
    std::array<double, 5> p{};

    double operator()(double t) const { return p[0] / (p[1] + p[2] * std::exp(p[3] * t + p[4])); }
};

/// Granular material constants. Stored in SI units.
struct MediumParams {
    double zeta = 2.06e6;       // N/m^3
    double lambda_v = 1.1;      // inertial scale
    double lambda_h = 1.93;     // depth-correction scale
    double rho = 1500.0;        // kg/m^3, placeholder effective density
    double phi_s = deg2rad(35); // cone base angle, rad
    Sigmoid sigmoid_a{{1.15, 1.14, 1.82, -15.78, 1.62}};
    Sigmoid sigmoid_b{{1.99, 1.70, 2.49, -5.17, 3.04}};
    StressMapCoefficients coeffs = StressMapCoefficients::generic();

    void validate() const
    {
        if (!(zeta > 0.0) || !std::isfinite(zeta)) throw ConfigError("medium: zeta must be positive");
        if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("medium: rho must be positive");
        if (!(lambda_v >= 0.0)) throw ConfigError("medium: lambda_v must be non-negative");
        if (!(lambda_h >= 0.0)) throw ConfigError("medium: lambda_h must be non-negative");
        if (!(phi_s > 0.0 && phi_s < kHalfPi)) throw ConfigError("medium: phi_s must lie in (0, pi/2)");
    }
};

struct GenericStress {
    double alpha_x0 = 0.0;
    double alpha_z0 = 0.0;
};

/// Per-unit-depth stresses in N/m^3 along e2 (x), e3 (z) and e1 (y).
struct StressMaps {
    double alpha_x = 0.0;
    double alpha_z = 0.0;
    double alpha_y = 0.0;
};

struct ScalingFactors {
    double f1 = 0.0;
    double f23 = 0.0;
};

namespace detail {

inline void check_angle(double a, const char* name)
{
    constexpr double slack = 1e-12;
    if (!std::isfinite(a) || a < -kHalfPi - slack || a > kHalfPi + slack)
        throw DomainError(std::string(name) + " must lie in [-pi/2, pi/2]");
}

} // namespace detail

inline GenericStress alpha_generic(double beta, double gamma, const StressMapCoefficients& c)
{
    detail::check_angle(beta, "beta");
    detail::check_angle(gamma, "gamma");

    GenericStress s;
    for (int m = -1; m <= 1; ++m) {
        for (int n = 0; n <= 1; ++n) {
            const double arg = 2.0 * m * beta + n * gamma;
            const double ca = std::cos(arg);
            const double sa = std::sin(arg);
            const auto i = static_cast<std::size_t>(m + 1);
            const auto j = static_cast<std::size_t>(n);
            s.alpha_z0 += c.A[i][j] * ca + c.B[i][j] * sa;
            s.alpha_x0 += c.C[i][j] * ca + c.D[i][j] * sa;
        }
    }
    s.alpha_x0 *= c.scale;
    s.alpha_z0 *= c.scale;
    return s;
}

/// Material stress maps. alpha_y is the sliding stress, taken constant and
/// equal to alpha_x(0, 0).
inline StressMaps alpha_scaled(double beta, double gamma, const MediumParams& medium)
{
    const GenericStress g = alpha_generic(beta, gamma, medium.coeffs);
    const GenericStress g00 = alpha_generic(0.0, 0.0, medium.coeffs);
    return {medium.zeta * g.alpha_x0, medium.zeta * g.alpha_z0, medium.zeta * g00.alpha_x0};
}

/// Orientation weights for the sliding (f1) and in-plane (f23) force parts.
///
/// psi is the angle between the plate velocity and e1. The fitted sigmoids are
/// expressed in the complementary angle, so f1 uses sin(pi/2 - psi) = cos(psi)
/// and f23 uses cos(pi/2 - psi) = sin(psi). Both are clamped to [0, 1].
inline ScalingFactors scaling_factors(double psi, const MediumParams& medium)
{
    constexpr double slack = 1e-12;
    if (!std::isfinite(psi) || psi < -slack || psi > kHalfPi + slack)
        throw DomainError("psi must lie in [0, pi/2]");
    const double comp = kHalfPi - psi;
    return {std::clamp(medium.sigmoid_a(std::sin(comp)), 0.0, 1.0),
            std::clamp(medium.sigmoid_b(std::cos(comp)), 0.0, 1.0)};
}

} // namespace grft
