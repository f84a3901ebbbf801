#pragma once

#include <cmath>
#include <vector>

#include "grft/core.hpp"
#include "grft/geometry.hpp"
#include "grft/medium.hpp"

namespace grft {

/// Foot pose and rigid-body velocity at one instant, world frame.
struct IntrusionState {
    Vec3 ankle_position = Vec3::Zero();
    Mat3 orientation = Mat3::Identity(); // body -> world
    Vec3 ankle_velocity = Vec3::Zero();
    Vec3 angular_velocity = Vec3::Zero();
    double free_surface_height = 0.0;
};

/// Switches for the rate-dependent model terms.
struct ModelOptions {
    bool depth_correction = true;
    bool inertial = true;
};

struct PlateForce {
    Vec3 f_static_1 = Vec3::Zero();
    Vec3 f_static_23 = Vec3::Zero();
    Vec3 f_inertial = Vec3::Zero();
    Vec3 total = Vec3::Zero();
    Vec3 application_point = Vec3::Zero();
    double depth = 0.0;           // positive below the free surface, 0 above it
    double effective_depth = 0.0;
    bool loaded = false;          // below the surface and leading
};

struct ForceResult {
    Vec3 F_total = Vec3::Zero();
    std::vector<PlateForce> per_plate;
    Vec3 cop = Vec3::Zero();
    bool cop_defined = false;
};

inline Vec3 plate_world_position(const IntrusionState& state, const Plate& plate)
{
    return state.ankle_position + state.orientation * plate.centroid;
}

inline Vec3 plate_velocity(const IntrusionState& state, const Plate& plate)
{
    const Vec3 r = state.orientation * plate.centroid;
    return state.ankle_velocity + state.angular_velocity.cross(r);
}

/// Cone-geometry factor (cot(beta) + cot(phi_s))^-1, zero when the plate is
/// not tilted toward its motion.
inline double cone_factor(double beta, double phi_s)
{
    if (!(beta > 0.0)) return 0.0;
    return 1.0 / (std::cos(beta) / std::sin(beta) + 1.0 / std::tan(phi_s));
}

/// Leading-zone corrected depth z0 + lambda_h * sqrt(|v| z0 g(beta, phi_s)).
inline double effective_depth(double z0, double speed, double beta, const MediumParams& medium)
{
    if (!(z0 >= 0.0)) throw DomainError("effective_depth: depth must be non-negative");
    if (!(speed >= 0.0)) throw DomainError("effective_depth: speed must be non-negative");
    return z0 + medium.lambda_h * std::sqrt(speed * z0 * cone_factor(beta, medium.phi_s));
}

inline PlateForce plate_force(const Plate& plate, const IntrusionState& state, const MediumParams& medium,
                              const ModelOptions& options = {})
{
    PlateForce out;
    out.application_point = plate_world_position(state, plate);
    const double z = out.application_point.z() - state.free_surface_height;
    if (z >= 0.0) return out;

    out.depth = -z;
    out.effective_depth = out.depth;

    const Vec3 n = state.orientation * plate.normal;
    const Vec3 v = plate_velocity(state, plate);
    const double vn = v.dot(n);
    if (!(vn > 0.0)) return out;

    out.loaded = true;
    const double speed = v.norm();
    const LocalFrame frame = local_frame(n, v);
    const IntrusionAngles ang = intrusion_angles(n, v, frame);
    const ScalingFactors w = scaling_factors(ang.psi, medium);
    const StressMaps alpha = alpha_scaled(ang.beta, ang.gamma, medium);

    out.f_static_1 = -sign(v.dot(frame.e1)) * w.f1 * alpha.alpha_y * out.depth * plate.area * frame.e1;

    if (options.depth_correction) out.effective_depth = effective_depth(out.depth, speed, ang.beta, medium);
    if (!ang.sliding) {
        out.f_static_23 = w.f23 * (-alpha.alpha_x * ang.motion_axis + alpha.alpha_z * frame.e3) *
                          out.effective_depth * plate.area;
    }

    if (options.inertial) out.f_inertial = -medium.lambda_v * medium.rho * vn * vn * plate.area * (v / speed);

    out.total = out.f_static_1 + out.f_static_23 + out.f_inertial;
    return out;
}

/// Centre of pressure of a distributed reaction. Horizontal coordinates are
/// weighted by vertical plate forces; the height is weighted by the sagittal
/// (x) forces, falling back to vertical weights when those cancel.
inline bool cop(const std::vector<PlateForce>& per_plate, Vec3& point)
{
    double fz = 0.0, fx = 0.0, fx_abs = 0.0;
    Vec3 mz = Vec3::Zero();
    double mx = 0.0;
    for (const auto& p : per_plate) {
        if (!p.loaded) continue;
        fz += p.total.z();
        mz += p.total.z() * p.application_point;
        fx += p.total.x();
        fx_abs += std::abs(p.total.x());
        mx += p.total.x() * p.application_point.z();
    }
    if (fz == 0.0) return false;
    point = mz / fz;
    if (std::abs(fx) > 1e-6 * fx_abs) point.z() = mx / fx;
    return true;
}

inline ForceResult total_force(const FootMesh& mesh, const IntrusionState& state, const MediumParams& medium,
                               const ModelOptions& options = {})
{
    ForceResult r;
    r.per_plate.reserve(mesh.plates.size());
    for (const auto& plate : mesh.plates) {
        r.per_plate.push_back(plate_force(plate, state, medium, options));
        r.F_total += r.per_plate.back().total;
    }
    r.cop_defined = cop(r.per_plate, r.cop);
    return r;
}

} // namespace grft
