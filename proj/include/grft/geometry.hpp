#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "grft/core.hpp"

namespace grft {

enum class FootShape { flat, circular, elliptical, custom };

inline std::string to_string(FootShape s)
{
    switch (s) {
    case FootShape::flat: return "flat";
    case FootShape::circular: return "circular";
    case FootShape::elliptical: return "elliptical";
    case FootShape::custom: return "custom";
    }
    return "custom";
}

inline FootShape parse_foot_shape(const std::string& tag)
{
    if (tag == "flat") return FootShape::flat;
    if (tag == "circular") return FootShape::circular;
    if (tag == "elliptical") return FootShape::elliptical;
    if (tag == "custom") return FootShape::custom;
    throw ConfigError("unknown foot shape '" + tag + "'");
}

/// Flat intrusion element. Centroid and normal are in the foot body frame,
/// whose origin is the ankle joint; the normal points out of the foot solid.
struct Plate {
    Vec3 centroid = Vec3::Zero();
    Vec3 normal = -kE3;
    double area = 0.0; // m^2
};

struct FootMesh {
    std::vector<Plate> plates;
    FootShape shape = FootShape::custom;
    double length = 0.0;
    double width = 0.0;
    // From the mean sole level below the foot centre to the ankle.
    Vec3 ankle_offset = Vec3::Zero();
    // Plates [0, sole_plates) form the sole; any remaining plates are end caps.
    std::size_t sole_plates = 0;

    double total_area() const
    {
        double a = 0.0;
        for (const auto& p : plates) a += p.area;
        return a;
    }

    double sole_area() const
    {
        double a = 0.0;
        for (std::size_t i = 0; i < sole_plates; ++i) a += plates[i].area;
        return a;
    }
};

/// Sagittal sole section as a parametric curve u in [0, 1] -> (x, z) in the
/// body frame, traversed from heel (-x) to toe (+x).
using ProfileCurve = std::function<Eigen::Vector2d(double)>;

/// Strip mesh of a sole profile extruded across the foot width. Each plate is
/// centred on the curve at its mid-parameter; the normal is perpendicular to
/// the segment chord, pointing down/out of the foot.
inline FootMesh discretize_profile(const ProfileCurve& profile, double length, double width, int n_length,
                                   int n_width, FootShape tag = FootShape::custom)
{
    if (!(length > 0.0) || !(width > 0.0)) throw ConfigError("foot length and width must be positive");
    if (n_length < 1 || n_width < 1) throw ConfigError("mesh resolution must be at least 1 x 1");

    FootMesh mesh;
    mesh.shape = tag;
    mesh.length = length;
    mesh.width = width;
    mesh.plates.reserve(static_cast<std::size_t>(n_length) * static_cast<std::size_t>(n_width));

    const double dy = width / n_width;
    for (int i = 0; i < n_length; ++i) {
        const double u0 = static_cast<double>(i) / n_length;
        const double u1 = static_cast<double>(i + 1) / n_length;
        const Eigen::Vector2d p0 = profile(u0);
        const Eigen::Vector2d p1 = profile(u1);
        const Eigen::Vector2d pm = profile(0.5 * (u0 + u1));
        if (!p0.allFinite() || !p1.allFinite() || !pm.allFinite())
            throw ConfigError("foot profile produced a non-finite point");

        const Eigen::Vector2d chord = p1 - p0;
        const double chord_len = chord.norm();
        if (!(chord_len > 0.0)) throw ConfigError("foot profile has a zero-length segment");
        // Heel-to-toe traversal: rotate the chord by -90 degrees for the outward normal.
        const Vec3 normal = Vec3(chord.y(), 0.0, -chord.x()) / chord_len;

        for (int j = 0; j < n_width; ++j) {
            Plate plate;
            plate.centroid = Vec3(pm.x(), -0.5 * width + (j + 0.5) * dy, pm.y());
            plate.normal = normal;
            plate.area = chord_len * dy;
            mesh.plates.push_back(plate);
        }
    }
    mesh.sole_plates = mesh.plates.size();
    return mesh;
}

/// Convenience overload for a sole given as height z(x) over [-l/2, l/2].
inline FootMesh discretize_height_profile(const std::function<double(double)>& height, double length, double width,
                                          int n_length, int n_width)
{
    return discretize_profile(
        [&height, length](double u) {
            const double x = -0.5 * length + u * length;
            return Eigen::Vector2d(x, height(x));
        },
        length, width, n_length, n_width);
}

struct FootSpec {
    FootShape shape = FootShape::flat;
    double length = 0.11;
    double width = 0.07;
    double sagitta = 0.015;       // drop of a curved sole below its heel-toe line
    double ankle_height = 0.04;   // ankle above the mean sole height
    double ankle_x = 0.0;         // ankle position along the foot, from its centre
    double end_cap_height = 0.01; // vertical heel/toe faces above the heel-toe line
    // Built-in soles are extrusions, so resolution goes along the length.
    int n_length = 200;
    int n_width = 1;
    int n_cap = 2;
};

namespace detail {

inline void append_end_caps(FootMesh& mesh, double x_heel, double x_toe, double z_line, double height, int n_rows,
                            int n_width)
{
    if (height <= 0.0 || n_rows < 1) return;
    const double dz = height / n_rows;
    const double dy = mesh.width / n_width;
    for (double x : {x_heel, x_toe}) {
        const Vec3 normal = x < 0.5 * (x_heel + x_toe) ? -kE1 : kE1;
        for (int r = 0; r < n_rows; ++r) {
            for (int j = 0; j < n_width; ++j) {
                Plate plate;
                plate.centroid = Vec3(x, -0.5 * mesh.width + (j + 0.5) * dy, z_line + (r + 0.5) * dz);
                plate.normal = normal;
                plate.area = dz * dy;
                mesh.plates.push_back(plate);
            }
        }
    }
}

} // namespace detail

/// Mean drop of a built-in sole below its heel-toe line, averaged along x.
inline double mean_sole_drop(FootShape shape, double length, double sagitta)
{
    switch (shape) {
    case FootShape::circular: {
        const double r = (0.25 * length * length + sagitta * sagitta) / (2.0 * sagitta);
        const double c = r - sagitta;
        return (0.5 * length * c + r * r * std::asin(0.5 * length / r)) / length - c;
    }
    case FootShape::elliptical: return 0.25 * kPi * sagitta;
    default: return 0.0;
    }
}

/// Built-in sole shapes. All share length, width and the ankle height above
/// the mean sole level; curved soles bulge `sagitta` below their heel-toe line.
inline FootMesh builtin_foot(const FootSpec& spec)
{
    const double l = spec.length;
    const double s = spec.sagitta;
    const double xc = -spec.ankle_x;

    if (!(spec.ankle_height > 0.0)) throw ConfigError("ankle height must be positive");
    if (spec.shape != FootShape::flat && spec.shape != FootShape::custom && !(s > 0.0))
        throw ConfigError(to_string(spec.shape) + " foot requires a positive sagitta");
    const double z_low = -spec.ankle_height +
                         (spec.shape == FootShape::flat ? 0.0 : mean_sole_drop(spec.shape, l, s) - s);

    FootMesh mesh;
    switch (spec.shape) {
    case FootShape::flat:
        mesh = discretize_profile([&](double u) { return Eigen::Vector2d(xc - 0.5 * l + u * l, z_low); }, l,
                                  spec.width, spec.n_length, spec.n_width, FootShape::flat);
        break;
    case FootShape::circular: {
        if (s > 0.5 * l) throw ConfigError("circular foot sagitta cannot exceed half the foot length");
        const double radius = (0.25 * l * l + s * s) / (2.0 * s);
        const double theta_max = std::asin(std::min(1.0, 0.5 * l / radius));
        // Arc centre sits radius above the lowest point.
        mesh = discretize_profile(
            [=](double u) {
                const double th = -theta_max + 2.0 * theta_max * u;
                return Eigen::Vector2d(xc + radius * std::sin(th), z_low + radius - radius * std::cos(th));
            },
            l, spec.width, spec.n_length, spec.n_width, FootShape::circular);
        detail::append_end_caps(mesh, xc - 0.5 * l, xc + 0.5 * l, z_low + s, spec.end_cap_height, spec.n_cap,
                                spec.n_width);
        break;
    }
    case FootShape::elliptical: {
        // Eccentric-angle parametrisation keeps segments short near the steep ends.
        mesh = discretize_profile(
            [=](double u) {
                const double t = kPi * u;
                return Eigen::Vector2d(xc - 0.5 * l * std::cos(t), z_low + s - s * std::sin(t));
            },
            l, spec.width, spec.n_length, spec.n_width, FootShape::elliptical);
        detail::append_end_caps(mesh, xc - 0.5 * l, xc + 0.5 * l, z_low + s, spec.end_cap_height, spec.n_cap,
                                spec.n_width);
        break;
    }
    case FootShape::custom: throw ConfigError("custom feet are loaded from a mesh file");
    }
    mesh.ankle_offset = Vec3(spec.ankle_x, 0.0, spec.ankle_height);
    return mesh;
}

/// Reads "cx cy cz nx ny nz area" per line (SI, body frame, '#' comments).
inline FootMesh load_foot_mesh(std::istream& in, const std::string& name = "<stream>")
{
    FootMesh mesh;
    mesh.shape = FootShape::custom;
    std::string line;
    int row = 0;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    while (std::getline(in, line)) {
        ++row;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        Plate p;
        if (!(fields >> p.centroid.x() >> p.centroid.y() >> p.centroid.z() >> p.normal.x() >> p.normal.y() >>
              p.normal.z() >> p.area))
            throw ParseError(name + ":" + std::to_string(row) + ": expected 7 numbers");
        const double nn = p.normal.norm();
        if (!p.centroid.allFinite() || !std::isfinite(p.area) || std::abs(nn - 1.0) > 1e-6)
            throw ParseError(name + ":" + std::to_string(row) + ": normal must be unit length");
        if (!(p.area > 0.0)) throw ParseError(name + ":" + std::to_string(row) + ": area must be positive");
        p.normal /= nn;
        xmin = std::min(xmin, p.centroid.x());
        xmax = std::max(xmax, p.centroid.x());
        ymin = std::min(ymin, p.centroid.y());
        ymax = std::max(ymax, p.centroid.y());
        mesh.plates.push_back(p);
    }
    if (mesh.plates.empty()) throw ParseError(name + ": mesh has no plates");
    mesh.sole_plates = mesh.plates.size();
    mesh.length = xmax - xmin;
    mesh.width = ymax - ymin;
    return mesh;
}

inline FootMesh load_foot_mesh(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open foot mesh '" + path + "'");
    return load_foot_mesh(in, path);
}

/// Per-plate frame: e3 is world vertical, e2 the horizontal direction of the
/// plate normal, e1 = e2 x e3.
struct LocalFrame {
    Vec3 e1 = kE1;
    Vec3 e2 = kE2;
    Vec3 e3 = kE3;
};

inline LocalFrame local_frame(const Vec3& normal, const Vec3& velocity)
{
    if (!(normal.norm() > 0.0)) throw DomainError("local_frame: zero normal");
    constexpr double tiny = 1e-12;

    LocalFrame f;
    f.e3 = kE3;
    Vec3 horizontal(normal.x(), normal.y(), 0.0);
    if (horizontal.norm() <= tiny * normal.norm()) horizontal = Vec3(velocity.x(), velocity.y(), 0.0);
    if (horizontal.norm() <= tiny * std::max(1.0, velocity.norm())) horizontal = kE1;
    f.e2 = horizontal.normalized();
    f.e1 = f.e2.cross(f.e3);
    return f;
}

struct IntrusionAngles {
    double beta = 0.0;
    double gamma = 0.0;
    double psi = 0.0;
    // No in-plane (e2-e3) velocity component: gamma is meaningless.
    bool sliding = false;
    // Horizontal in-plane axis aligned with the direction of motion, +-e2.
    // The in-plane stress alpha_x acts along -motion_axis.
    Vec3 motion_axis = kE1;
};

/// Plate orientation and motion angles. beta is the tilt of the plate's
/// outward normal from straight down toward the in-plane direction of motion
/// (0 for a horizontal sole, pi/2 for a face-on vertical plate); gamma is the
/// in-plane velocity angle, positive downward; psi = angle(v, e1) folded to
/// [0, pi/2].
inline IntrusionAngles intrusion_angles(const Vec3& normal, const Vec3& velocity, const LocalFrame& frame)
{
    const double speed = velocity.norm();
    if (!(speed > 0.0)) throw DomainError("intrusion_angles: zero velocity");

    IntrusionAngles a;
    const double v1 = velocity.dot(frame.e1);
    a.psi = std::acos(std::clamp(std::abs(v1) / speed, 0.0, 1.0));

    const Vec3 v23 = velocity - v1 * frame.e1;
    const double v2 = v23.dot(frame.e2);
    const double v3 = v23.dot(frame.e3);
    a.motion_axis = v2 < 0.0 ? Vec3(-frame.e2) : frame.e2;
    if (v23.norm() <= 1e-12 * speed) {
        a.sliding = true;
        a.gamma = 0.0;
    } else {
        a.gamma = std::atan2(-v3, std::abs(v2));
    }

    double beta = std::atan2(normal.dot(a.motion_axis), -normal.dot(frame.e3));
    if (beta > kHalfPi) beta -= kPi;
    if (beta < -kHalfPi) beta += kPi;
    a.beta = beta;
    return a;
}

} // namespace grft
