#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "grft/material_profile.hpp"

using namespace grft;

namespace {

const char* kProfile = R"([medium]
zeta = 2.06 N/cm^3
lambda_v = 1.1
lambda_h = 1.93
rho = 1.5 g/cm^3
phi_s = 35 deg
[sigmoid_a]
a1 = 1.15
a2 = 1.14
a3 = 1.82
a4 = -15.78
a5 = 1.62
[sigmoid_b]
b1 = 1.99
b2 = 1.70
b3 = 2.49
b4 = -5.17
b5 = 3.04
[stress_map]
scale = 1.25
A_0_0 = 0.206
A_1_0 = 0.169
B_1_1 = 0.212
B_0_1 = 0.358
B_m1_1 = 0.055
C_1_1 = -0.124
C_0_1 = 0.253
C_m1_1 = 0.007
D_1_0 = 0.088
)";

std::string without_line(const std::string& text, const std::string& prefix)
{
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) != 0) out += line + "\n";
    return out;
}

} // namespace

TEST(MaterialProfile, ParsesUnitsToSi)
{
    std::istringstream in(kProfile);
    const MediumParams m = parse_material_profile(in);
    EXPECT_NEAR(m.zeta, 2.06e6, 1e-6);
    EXPECT_NEAR(m.rho, 1500.0, 1e-9);
    EXPECT_NEAR(m.phi_s, deg2rad(35.0), 1e-15);
    EXPECT_EQ(m.sigmoid_a.p[3], -15.78);
    EXPECT_EQ(m.sigmoid_b.p[4], 3.04);
    EXPECT_NEAR(alpha_generic(0.0, kHalfPi, m.coeffs).alpha_z0, 1.25, 1e-12);
}

TEST(MaterialProfile, MissingKeyIsNamed)
{
    std::istringstream in(without_line(kProfile, "lambda_h"));
    try {
        parse_material_profile(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("[medium] lambda_h"), std::string::npos) << e.what();
    }
}

TEST(MaterialProfile, RejectsUnknownUnitAndKey)
{
    std::string bad = kProfile;
    bad.replace(bad.find("N/cm^3"), 6, "psi");
    std::istringstream in(bad);
    EXPECT_THROW(parse_material_profile(in), ParseError);

    std::istringstream in2(std::string(kProfile) + "E_0_0 = 1\n");
    EXPECT_THROW(parse_material_profile(in2), ParseError);
}

TEST(MaterialProfile, RoundTripThroughFile)
{
    MediumParams m;
    m.zeta = 1.7e6;
    m.sigmoid_b.p[2] = 2.2;
    const auto path = (std::filesystem::temp_directory_path() / "grft_profile_roundtrip.ini").string();
    save_material_profile(path, m);
    const MediumParams r = load_material_profile(path);
    EXPECT_NEAR(r.zeta, m.zeta, 1e-6);
    EXPECT_EQ(r.sigmoid_b.p[2], 2.2);
    EXPECT_EQ(r.coeffs.B[0][1], m.coeffs.B[0][1]);
    std::filesystem::remove(path);
}

TEST(MaterialProfile, BundledSandProfileLoads)
{
    const MediumParams m = load_material_profile(std::string(GRFT_DATA_DIR) + "/materials/sand.ini");
    const MediumParams d;
    EXPECT_NEAR(m.zeta, d.zeta, 1e-6);
    EXPECT_EQ(m.lambda_h, d.lambda_h);
    EXPECT_EQ(m.sigmoid_a.p, d.sigmoid_a.p);
}
