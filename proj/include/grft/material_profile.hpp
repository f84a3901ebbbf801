#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "grft/medium.hpp"

// Material profile files are INI-style:
//
//   [medium]
//   zeta = 2.06 N/cm^3
//   lambda_v = 1.1
//   lambda_h = 1.93
//   rho = 1500 kg/m^3
//   phi_s = 35 deg
//   [sigmoid_a]
//   a1 = 1.15 ...
//   [sigmoid_b]
//   b1 = 1.99 ...
//   [stress_map]
//   scale = 1.25
//   A_0_0 = 0.206   ; entries X_m_n, m in {m1, 0, 1}, n in {0, 1}
//
// A bare number is taken to be SI.

namespace grft {

namespace detail {

struct Quantity {
    double value = 0.0;
    std::string unit;
};

inline Quantity split_quantity(const std::string& text, const std::string& key)
{
    std::istringstream in(text);
    Quantity q;
    if (!(in >> q.value)) throw ParseError("material profile: key '" + key + "' is not a number: '" + text + "'");
    in >> q.unit;
    std::string extra;
    if (in >> extra) throw ParseError("material profile: trailing text after value of '" + key + "'");
    return q;
}

inline double convert_unit(const Quantity& q, const std::string& key)
{
    const std::string& u = q.unit;
    if (u.empty()) return q.value;
    if (u == "N/m^3" || u == "N/m3") return q.value;
    if (u == "N/cm^3" || u == "N/cm3") return q.value * 1e6;
    if (u == "kg/m^3" || u == "kg/m3") return q.value;
    if (u == "g/cm^3" || u == "g/cm3") return q.value * 1e3;
    if (u == "rad") return q.value;
    if (u == "deg") return deg2rad(q.value);
    throw ParseError("material profile: unknown unit '" + u + "' for key '" + key + "'");
}

inline double required_value(const boost::property_tree::ptree& tree, const std::string& section,
                             const std::string& key)
{
    const auto node = tree.get_optional<std::string>(boost::property_tree::ptree::path_type(section + "/" + key, '/'));
    if (!node) throw ParseError("material profile: missing key [" + section + "] " + key);
    return convert_unit(split_quantity(*node, key), key);
}

inline std::string stress_key(char table, int m, int n)
{
    return std::string(1, table) + "_" + (m < 0 ? std::string("m1") : std::to_string(m)) + "_" + std::to_string(n);
}

inline std::string fmt_double(double v)
{
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

} // namespace detail

inline MediumParams parse_material_profile(std::istream& in)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ParseError(std::string("material profile: ") + e.what());
    }

    MediumParams m;
    m.zeta = detail::required_value(tree, "medium", "zeta");
    m.lambda_v = detail::required_value(tree, "medium", "lambda_v");
    m.lambda_h = detail::required_value(tree, "medium", "lambda_h");
    m.rho = detail::required_value(tree, "medium", "rho");
    m.phi_s = detail::required_value(tree, "medium", "phi_s");
    for (int i = 0; i < 5; ++i) {
        m.sigmoid_a.p[static_cast<std::size_t>(i)] = detail::required_value(tree, "sigmoid_a", "a" + std::to_string(i + 1));
        m.sigmoid_b.p[static_cast<std::size_t>(i)] = detail::required_value(tree, "sigmoid_b", "b" + std::to_string(i + 1));
    }

    StressMapCoefficients c;
    c.scale = detail::required_value(tree, "stress_map", "scale");
    const auto section = tree.get_child("stress_map");
    for (const auto& [key, value] : section) {
        if (key == "scale") continue;
        bool matched = false;
        for (char t : {'A', 'B', 'C', 'D'}) {
            for (int mm = -1; mm <= 1; ++mm) {
                for (int n = 0; n <= 1; ++n) {
                    if (key != detail::stress_key(t, mm, n)) continue;
                    auto& table = t == 'A' ? c.A : t == 'B' ? c.B : t == 'C' ? c.C : c.D;
                    table[static_cast<std::size_t>(mm + 1)][static_cast<std::size_t>(n)] =
                        detail::split_quantity(value.data(), key).value;
                    matched = true;
                }
            }
        }
        if (!matched) throw ParseError("material profile: unknown key [stress_map] " + key);
    }
    m.coeffs = c;

    try {
        m.validate();
    } catch (const ConfigError& e) {
        throw ParseError(std::string("material profile: ") + e.what());
    }
    return m;
}

inline MediumParams load_material_profile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open material profile '" + path + "'");
    return parse_material_profile(in);
}

inline void write_material_profile(std::ostream& out, const MediumParams& m)
{
    using detail::fmt_double;
    out << "[medium]\n";
    out << "zeta = " << fmt_double(m.zeta / 1e6) << " N/cm^3\n";
    out << "lambda_v = " << fmt_double(m.lambda_v) << "\n";
    out << "lambda_h = " << fmt_double(m.lambda_h) << "\n";
    out << "rho = " << fmt_double(m.rho) << " kg/m^3\n";
    out << "phi_s = " << fmt_double(rad2deg(m.phi_s)) << " deg\n";
    out << "\n[sigmoid_a]\n";
    for (std::size_t i = 0; i < 5; ++i) out << "a" << i + 1 << " = " << fmt_double(m.sigmoid_a.p[i]) << "\n";
    out << "\n[sigmoid_b]\n";
    for (std::size_t i = 0; i < 5; ++i) out << "b" << i + 1 << " = " << fmt_double(m.sigmoid_b.p[i]) << "\n";
    out << "\n[stress_map]\n";
    out << "scale = " << fmt_double(m.coeffs.scale) << "\n";
    const auto& c = m.coeffs;
    for (char t : {'A', 'B', 'C', 'D'}) {
        const auto& table = t == 'A' ? c.A : t == 'B' ? c.B : t == 'C' ? c.C : c.D;
        for (int mm = -1; mm <= 1; ++mm) {
            for (int n = 0; n <= 1; ++n) {
                const double v = table[static_cast<std::size_t>(mm + 1)][static_cast<std::size_t>(n)];
                if (v != 0.0) out << detail::stress_key(t, mm, n) << " = " << fmt_double(v) << "\n";
            }
        }
    }
}

inline void save_material_profile(const std::string& path, const MediumParams& m)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ConfigError("cannot write material profile '" + path + "'");
        write_material_profile(out, m);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw ConfigError("cannot move material profile into '" + path + "'");
}

} // namespace grft
