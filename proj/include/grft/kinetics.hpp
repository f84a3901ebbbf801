#pragma once

#include <cmath>
#include <vector>

#include "grft/gait.hpp"
#include "grft/rft.hpp"

namespace grft {

/// Load the leg applies to the foot at the ankle to balance the terrain.
struct AnkleLoad {
    Vec3 F_a = Vec3::Zero();
    Vec3 tau_a = Vec3::Zero();
};

/// F_a = -F_RFT and tau_a = (r_cop - r_ankle) x F_RFT. Without a defined
/// centre of pressure the moment is summed plate by plate.
inline AnkleLoad ankle_load(const ForceResult& result, const Vec3& ankle_position, bool include_moment = true)
{
    AnkleLoad load;
    load.F_a = -result.F_total;
    if (!include_moment) return load;
    if (result.cop_defined) {
        load.tau_a = (result.cop - ankle_position).cross(result.F_total);
    } else {
        for (const auto& p : result.per_plate)
            if (p.loaded) load.tau_a += (p.application_point - ankle_position).cross(p.total);
    }
    return load;
}

struct JointTorques {
    double tau1 = 0.0; // hip, N m
    double tau2 = 0.0; // knee, N m
};

/// Quasi-static torques: J^T F_a plus the lateral ankle moment mapped through
/// d(shank angle)/dq = [1, -knee_sign].
inline JointTorques joint_torques(const LegModel& leg, double theta1, double theta2, const AnkleLoad& load)
{
    const Eigen::Matrix<double, 3, 2> j = ankle_jacobian(leg, theta1, theta2);
    const Eigen::Vector2d from_force = j.transpose() * load.F_a;
    const double m = load.tau_a.y();
    return {from_force(0) + m, from_force(1) - leg.knee_sign * m};
}

inline double power(double tau1, double tau2, double dtheta1, double dtheta2)
{
    return tau1 * dtheta1 + tau2 * dtheta2;
}

struct WorkResult {
    double total = 0.0;
    std::vector<double> cumulative;
};

/// Trapezoidal integral of a sampled power trace.
inline WorkResult work(const std::vector<double>& t, const std::vector<double>& p)
{
    if (t.size() < 2 || t.size() != p.size()) throw SimulationError("work: need at least 2 matching samples");
    WorkResult w;
    w.cumulative.resize(t.size());
    w.cumulative[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) throw SimulationError("work: time must be strictly increasing");
        w.cumulative[i] = w.cumulative[i - 1] + 0.5 * (p[i] + p[i - 1]) * (t[i] - t[i - 1]);
    }
    w.total = w.cumulative.back();
    return w;
}

struct EnergyOptions {
    ModelOptions model;
    bool ankle_moment = true;
    double free_surface_height = 0.0;
};

struct EnergySample {
    double t = 0.0;
    Vec3 force = Vec3::Zero(); // F_RFT
    Vec3 cop = Vec3::Zero();
    bool cop_defined = false;
    double tau1 = 0.0, tau2 = 0.0;
    double p1 = 0.0, p2 = 0.0, p = 0.0;
    double w1 = 0.0, w2 = 0.0, w = 0.0;
    double w_abs = 0.0; // integral of |P|
};

struct EnergyReport {
    FootShape shape = FootShape::custom;
    double period = 0.0;
    std::vector<EnergySample> samples;
    double hip_work = 0.0;
    double knee_work = 0.0;
    double total_work = 0.0;
    double total_abs_work = 0.0;
};

/// Foot trajectory -> reaction force -> ankle load -> joint torques -> power
/// -> cumulative work, over the whole replayed trajectory.
inline EnergyReport energy_report(const FootMesh& mesh, const LegModel& leg, const JointTrajectory& traj,
                                  const MediumParams& medium, const EnergyOptions& options = {})
{
    const FootTrajectory ft = foot_trajectory(leg, traj, options.free_surface_height);
    const std::size_t n = ft.size();

    EnergyReport rep;
    rep.shape = mesh.shape;
    rep.period = traj.period;
    rep.samples.resize(n);
    std::vector<double> p1(n), p2(n), p(n), pabs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ForceResult fr = total_force(mesh, ft.states[i], medium, options.model);
        const AnkleLoad load = ankle_load(fr, ft.states[i].ankle_position, options.ankle_moment);
        const JointTorques tq = joint_torques(leg, ft.theta1[i], ft.theta2[i], load);

        EnergySample& s = rep.samples[i];
        s.t = ft.t[i];
        s.force = fr.F_total;
        s.cop = fr.cop;
        s.cop_defined = fr.cop_defined;
        s.tau1 = tq.tau1;
        s.tau2 = tq.tau2;
        s.p1 = tq.tau1 * ft.dtheta1[i];
        s.p2 = tq.tau2 * ft.dtheta2[i];
        s.p = power(tq.tau1, tq.tau2, ft.dtheta1[i], ft.dtheta2[i]);
        p1[i] = s.p1;
        p2[i] = s.p2;
        p[i] = s.p;
        pabs[i] = std::abs(s.p);
    }
    const WorkResult w1 = work(ft.t, p1);
    const WorkResult w2 = work(ft.t, p2);
    const WorkResult w = work(ft.t, p);
    const WorkResult wa = work(ft.t, pabs);
    for (std::size_t i = 0; i < n; ++i) {
        rep.samples[i].w1 = w1.cumulative[i];
        rep.samples[i].w2 = w2.cumulative[i];
        rep.samples[i].w = w.cumulative[i];
        rep.samples[i].w_abs = wa.cumulative[i];
    }
    rep.hip_work = w1.total;
    rep.knee_work = w2.total;
    rep.total_work = w.total;
    rep.total_abs_work = wa.total;
    return rep;
}

} // namespace grft
