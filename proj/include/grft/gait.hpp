#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grft/core.hpp"
#include "grft/csv.hpp"
#include "grft/rft.hpp"

namespace grft {

struct JointSample {
    double t = 0.0;      // s
    double theta1 = 0.0; // hip, rad, thigh from vertical, positive forward
    double theta2 = 0.0; // knee flexion, rad
};

struct JointTrajectory {
    std::vector<JointSample> samples;
    double period = 0.0; // s

    std::size_t size() const { return samples.size(); }
};

/// Planar double-link leg with a fixed hip; the foot is rigid on the shank.
struct LegModel {
    double l1 = 0.225; // thigh, m
    double l2 = 0.225; // shank, m
    Vec3 hip_position = Vec3(0.0, 0.0, 0.488);
    // +1: shank absolute angle = theta1 - theta2 (flexion folds the shank back).
    double knee_sign = 1.0;
    Mat3 foot_attachment = Mat3::Identity(); // shank -> foot body frame

    void validate() const
    {
        if (!(l1 > 0.0) || !(l2 > 0.0)) throw ConfigError("leg link lengths must be positive");
        if (knee_sign != 1.0 && knee_sign != -1.0) throw ConfigError("knee sign must be +1 or -1");
    }

    double shank_angle(double theta1, double theta2) const { return theta1 - knee_sign * theta2; }
};

struct LegPose {
    Vec3 knee = Vec3::Zero();
    Vec3 ankle = Vec3::Zero();
    Mat3 orientation = Mat3::Identity();
};

/// Rotation carrying the foot with a shank swung forward by `shank_angle`.
/// The swing is about -E2, so a positive angle lifts the toe.
inline Mat3 shank_rotation(double shank_angle)
{
    return Eigen::AngleAxisd(-shank_angle, kE2).toRotationMatrix();
}

inline LegPose forward_kinematics(const LegModel& leg, double theta1, double theta2)
{
    const double phi = leg.shank_angle(theta1, theta2);
    LegPose pose;
    pose.knee = leg.hip_position + leg.l1 * Vec3(std::sin(theta1), 0.0, -std::cos(theta1));
    pose.ankle = pose.knee + leg.l2 * Vec3(std::sin(phi), 0.0, -std::cos(phi));
    pose.orientation = shank_rotation(phi) * leg.foot_attachment;
    return pose;
}

/// Columns d(ankle)/d(theta1) and d(ankle)/d(theta2); the y row is zero.
inline Eigen::Matrix<double, 3, 2> ankle_jacobian(const LegModel& leg, double theta1, double theta2)
{
    const double phi = leg.shank_angle(theta1, theta2);
    Eigen::Matrix<double, 3, 2> j;
    j.col(0) = Vec3(leg.l1 * std::cos(theta1) + leg.l2 * std::cos(phi), 0.0,
                    leg.l1 * std::sin(theta1) + leg.l2 * std::sin(phi));
    j.col(1) = -leg.knee_sign * leg.l2 * Vec3(std::cos(phi), 0.0, std::sin(phi));
    return j;
}

inline void validate_trajectory(const JointTrajectory& traj, const std::string& name = "trajectory")
{
    if (traj.samples.size() < 2) throw ParseError(name + ": at least 2 samples required");
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (!(traj.samples[i].t > traj.samples[i - 1].t))
            throw ParseError(name + ": time not strictly increasing at sample " + std::to_string(i + 1));
    }
}

/// Gait file: header row with t, theta1_deg, theta2_deg (any order), one
/// sample per row. Times are shifted to start at zero; the period is the span.
inline JointTrajectory load_trajectory(std::istream& in, const std::string& name = "<stream>")
{
    const CsvTable table = read_csv(in, name);
    const std::size_t ct = table.column("t");
    const std::size_t c1 = table.column("theta1_deg");
    const std::size_t c2 = table.column("theta2_deg");

    JointTrajectory traj;
    traj.samples.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (i > 0 && !(row[ct] > table.rows[i - 1][ct]))
            throw ParseError(name + ":" + std::to_string(table.line_numbers[i]) +
                             ": time is not strictly increasing");
        traj.samples.push_back({row[ct], deg2rad(row[c1]), deg2rad(row[c2])});
    }
    if (traj.samples.size() < 2) throw ParseError(name + ": at least 2 samples required");
    const double t0 = traj.samples.front().t;
    for (auto& s : traj.samples) s.t -= t0;
    traj.period = traj.samples.back().t;
    return traj;
}

inline JointTrajectory load_trajectory(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open gait file '" + path + "'");
    return load_trajectory(in, path);
}

/// Uniform time dilation onto a new gait period.
inline JointTrajectory time_scale(const JointTrajectory& traj, double new_period)
{
    if (!(new_period > 0.0)) throw ConfigError("gait period must be positive");
    if (!(traj.period > 0.0)) throw ConfigError("trajectory has no period");
    JointTrajectory out = traj;
    const double k = new_period / traj.period;
    for (auto& s : out.samples) s.t *= k;
    out.period = new_period;
    return out;
}

/// Linear interpolation onto n uniformly spaced samples over [0, period].
inline JointTrajectory resample(const JointTrajectory& traj, std::size_t n)
{
    validate_trajectory(traj);
    if (n < 2) throw ConfigError("resampling needs at least 2 samples");
    JointTrajectory out;
    out.period = traj.period;
    out.samples.reserve(n);
    const double t0 = traj.samples.front().t;
    const double t1 = traj.samples.back().t;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
        while (k + 2 < traj.samples.size() && traj.samples[k + 1].t < t) ++k;
        const auto& a = traj.samples[k];
        const auto& b = traj.samples[k + 1];
        const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
        out.samples.push_back({t, a.theta1 + u * (b.theta1 - a.theta1), a.theta2 + u * (b.theta2 - a.theta2)});
    }
    return out;
}

/// Second-order finite-difference derivative on a possibly non-uniform grid:
/// three-point central stencil inside, three-point one-sided at the ends.
template <typename T>
std::vector<T> differentiate(const std::vector<double>& t, const std::vector<T>& x)
{
    const std::size_t n = t.size();
    if (n < 2 || x.size() != n) throw ConfigError("differentiate: need at least 2 matching samples");
    std::vector<T> dx(n);
    if (n == 2) {
        const T d = (x[1] - x[0]) / (t[1] - t[0]);
        dx[0] = d;
        dx[1] = d;
        return dx;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        dx[i] = (-h2 / (h1 * (h1 + h2))) * x[i - 1] + ((h2 - h1) / (h1 * h2)) * x[i] +
                (h1 / (h2 * (h1 + h2))) * x[i + 1];
    }
    {
        const double h1 = t[1] - t[0];
        const double h2 = t[2] - t[1];
        dx[0] = (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) * x[0] + ((h1 + h2) / (h1 * h2)) * x[1] +
                (-h1 / (h2 * (h1 + h2))) * x[2];
    }
    {
        const double h1 = t[n - 2] - t[n - 3];
        const double h2 = t[n - 1] - t[n - 2];
        dx[n - 1] = (h2 / (h1 * (h1 + h2))) * x[n - 3] + (-(h1 + h2) / (h1 * h2)) * x[n - 2] +
                    ((h1 + 2.0 * h2) / (h2 * (h1 + h2))) * x[n - 1];
    }
    return dx;
}

struct FootTrajectory {
    std::vector<double> t;
    std::vector<IntrusionState> states;
    std::vector<double> theta1, theta2;
    std::vector<double> dtheta1, dtheta2;

    std::size_t size() const { return t.size(); }
};

inline FootTrajectory foot_trajectory(const LegModel& leg, const JointTrajectory& traj,
                                      double free_surface_height = 0.0)
{
    leg.validate();
    validate_trajectory(traj);

    FootTrajectory ft;
    const std::size_t n = traj.samples.size();
    std::vector<Vec3> ankle(n);
    std::vector<double> shank(n);
    ft.states.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj.samples[i];
        const LegPose pose = forward_kinematics(leg, s.theta1, s.theta2);
        ft.t.push_back(s.t);
        ft.theta1.push_back(s.theta1);
        ft.theta2.push_back(s.theta2);
        ankle[i] = pose.ankle;
        shank[i] = leg.shank_angle(s.theta1, s.theta2);
        ft.states[i].ankle_position = pose.ankle;
        ft.states[i].orientation = pose.orientation;
        ft.states[i].free_surface_height = free_surface_height;
    }
    const auto v = differentiate(ft.t, ankle);
    const auto dphi = differentiate(ft.t, shank);
    ft.dtheta1 = differentiate(ft.t, ft.theta1);
    ft.dtheta2 = differentiate(ft.t, ft.theta2);
    for (std::size_t i = 0; i < n; ++i) {
        ft.states[i].ankle_velocity = v[i];
        ft.states[i].angular_velocity = -dphi[i] * kE2;
    }
    return ft;
}

struct IntrusionInterval {
    double t_start = 0.0;
    double t_end = 0.0;

    double phase(double t) const { return (t - t_start) / (t_end - t_start); }
};

/// Interval from the first sample with Fz above `threshold` to the next sample
/// where it falls back to or below it (the last sample if it never does).
inline IntrusionInterval intrusion_phase(const std::vector<double>& t, const std::vector<double>& fz,
                                         double threshold = 1e-9)
{
    if (t.empty() || t.size() != fz.size()) throw SimulationError("intrusion_phase: empty or mismatched trace");
    std::size_t i = 0;
    while (i < fz.size() && !(fz[i] > threshold)) ++i;
    if (i == fz.size()) throw SimulationError("no contact detected: vertical force never exceeds threshold");
    std::size_t j = i + 1;
    while (j < fz.size() && fz[j] > threshold) ++j;
    if (j == fz.size()) j = fz.size() - 1;
    IntrusionInterval iv{t[i], t[j]};
    if (!(iv.t_end > iv.t_start)) throw SimulationError("intrusion_phase: contact lasts a single sample");
    return iv;
}

/// Forward speed a rescaled human gait corresponds to for a smaller leg.
inline double equivalent_forward_velocity(double period, double reference_speed = 1.2,
                                          double reference_period = 1.1, double leg_scale = 0.5)
{
    if (!(period > 0.0)) throw ConfigError("gait period must be positive");
    return reference_speed * (reference_period / period) * leg_scale;
}

} // namespace grft
