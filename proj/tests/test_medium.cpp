#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grft/medium.hpp"

using namespace grft;

namespace {

// Term-by-term Fourier series with the nine non-zero generic coefficients.
double oracle_alpha_z0(double b, double g)
{
    return 1.25 * (0.206 + 0.169 * std::cos(2 * b) + 0.212 * std::sin(2 * b + g) + 0.358 * std::sin(g) +
                   0.055 * std::sin(-2 * b + g));
}

double oracle_alpha_x0(double b, double g)
{
    return 1.25 * (-0.124 * std::cos(2 * b + g) + 0.253 * std::cos(g) + 0.007 * std::cos(-2 * b + g) +
                   0.088 * std::sin(2 * b));
}

double sig(const std::array<double, 5>& p, double t) { return p[0] / (p[1] + p[2] * std::exp(p[3] * t + p[4])); }

} // namespace

TEST(AlphaGeneric, VerticalPenetrationNormalization)
{
    const auto s = alpha_generic(0.0, kHalfPi, StressMapCoefficients::generic());
    EXPECT_NEAR(s.alpha_z0, 1.25, 1e-12);
    EXPECT_NEAR(s.alpha_x0, 0.0, 1e-12);
}

TEST(AlphaGeneric, ExtractionIsNegative)
{
    const auto s = alpha_generic(0.0, -kHalfPi, StressMapCoefficients::generic());
    EXPECT_LT(s.alpha_z0, 0.0);
    EXPECT_NEAR(s.alpha_z0, oracle_alpha_z0(0.0, -kHalfPi), 1e-12);
}

TEST(AlphaGeneric, MatchesTermByTermSeriesOnGrid)
{
    const auto c = StressMapCoefficients::generic();
    for (int i = 0; i <= 180; ++i) {
        for (int j = 0; j <= 180; ++j) {
            const double b = -kHalfPi + kPi * i / 180.0;
            const double g = -kHalfPi + kPi * j / 180.0;
            const auto s = alpha_generic(b, g, c);
            const double ez = oracle_alpha_z0(b, g), ex = oracle_alpha_x0(b, g);
            EXPECT_LE(std::abs(s.alpha_z0 - ez), 1e-12 * std::max(1.0, std::abs(ez))) << b << " " << g;
            EXPECT_LE(std::abs(s.alpha_x0 - ex), 1e-12 * std::max(1.0, std::abs(ex))) << b << " " << g;
        }
    }
}

TEST(AlphaGeneric, RejectsOutOfRangeAngles)
{
    const auto c = StressMapCoefficients::generic();
    EXPECT_THROW(alpha_generic(1.6, 0.0, c), DomainError);
    EXPECT_THROW(alpha_generic(0.0, -1.6, c), DomainError);
    EXPECT_THROW(alpha_generic(std::nan(""), 0.0, c), DomainError);
}

TEST(AlphaScaled, SandVerticalStress)
{
    const MediumParams m;
    const auto a = alpha_scaled(0.0, kHalfPi, m);
    EXPECT_NEAR(a.alpha_z, 2.575e6, 1e-6);
}

TEST(AlphaScaled, ZeroZetaGivesZero)
{
    MediumParams m;
    m.zeta = 0.0;
    const auto a = alpha_scaled(0.3, -0.2, m);
    EXPECT_EQ(a.alpha_x, 0.0);
    EXPECT_EQ(a.alpha_z, 0.0);
    EXPECT_EQ(a.alpha_y, 0.0);
}

TEST(AlphaScaled, SlidingStressIsConstant)
{
    const MediumParams m;
    const double ref = alpha_scaled(0.0, 0.0, m).alpha_x;
    EXPECT_EQ(alpha_scaled(0.7, -1.1, m).alpha_y, ref);
    EXPECT_EQ(alpha_scaled(-1.2, 0.4, m).alpha_y, ref);
    EXPECT_NEAR(ref, 2.06e6 * 1.25 * 0.136, 1e-6);
}

TEST(AlphaScaled, HomogeneousInZeta)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ang(-kHalfPi, kHalfPi);
    MediumParams m;
    for (int k = 0; k < 200; ++k) {
        const double b = ang(rng), g = ang(rng), c = 0.1 + k * 0.05;
        MediumParams mc = m;
        mc.zeta = c * m.zeta;
        const auto a = alpha_scaled(b, g, m);
        const auto ac = alpha_scaled(b, g, mc);
        EXPECT_NEAR(ac.alpha_x, c * a.alpha_x, 1e-9 * std::abs(c * a.alpha_x) + 1e-9);
        EXPECT_NEAR(ac.alpha_z, c * a.alpha_z, 1e-9 * std::abs(c * a.alpha_z) + 1e-9);
        EXPECT_NEAR(ac.alpha_y, c * a.alpha_y, 1e-9 * std::abs(c * a.alpha_y));
    }
}

TEST(ScalingFactors, BoundaryValues)
{
    const MediumParams m;
    const auto at0 = scaling_factors(0.0, m);
    const auto at90 = scaling_factors(kHalfPi, m);
    EXPECT_GT(sig(m.sigmoid_a.p, 1.0), 1.0);
    EXPECT_NEAR(sig(m.sigmoid_a.p, 1.0), 1.0088, 1e-4);
    EXPECT_EQ(at0.f1, 1.0);
    EXPECT_NEAR(at90.f23, sig(m.sigmoid_b.p, 1.0), 1e-15);
    EXPECT_NEAR(at90.f23, 1.0, 0.005);
    EXPECT_NEAR(at90.f1, sig(m.sigmoid_a.p, 0.0), 1e-15);
    EXPECT_NEAR(at90.f1, 0.111, 0.001);
}

TEST(ScalingFactors, MonotoneAndBoundedOnDegreeGrid)
{
    const MediumParams m;
    auto prev = scaling_factors(0.0, m);
    for (int d = 0; d <= 90; ++d) {
        const auto f = scaling_factors(deg2rad(d), m);
        EXPECT_GE(f.f1, 0.0);
        EXPECT_LE(f.f1, 1.0);
        EXPECT_GE(f.f23, 0.0);
        EXPECT_LE(f.f23, 1.0);
        EXPECT_LE(f.f1, prev.f1);
        EXPECT_GE(f.f23, prev.f23);
        prev = f;
    }
}

TEST(ScalingFactors, RejectsOutOfRange)
{
    const MediumParams m;
    EXPECT_THROW(scaling_factors(-0.1, m), DomainError);
    EXPECT_THROW(scaling_factors(1.6, m), DomainError);
}

TEST(MediumParams, Validation)
{
    MediumParams m;
    EXPECT_NO_THROW(m.validate());
    m.phi_s = kHalfPi;
    EXPECT_THROW(m.validate(), ConfigError);
    m = MediumParams{};
    m.rho = 0.0;
    EXPECT_THROW(m.validate(), ConfigError);
    m = MediumParams{};
    m.lambda_h = -1.0;
    EXPECT_THROW(m.validate(), ConfigError);
}
