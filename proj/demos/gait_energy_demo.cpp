// Compares the built-in feet over the three reference gait periods and prints
// peak forces and actuator work. Usage: gait_energy_demo [gait.csv]
#include <cstdio>
#include <string>

#include "grft/kinetics.hpp"

int main(int argc, char** argv)
{
    using namespace grft;
    const std::string path = argc > 1 ? argv[1] : "data/gait/human_sand_mean.csv";
    JointTrajectory gait;
    try {
        gait = load_trajectory(path);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    const MediumParams sand;
    const LegModel leg;
    std::printf("%-11s %6s %8s %9s %9s %9s %9s\n", "foot", "T_g", "v_eq", "drag N", "lift N", "W_hip J", "W_knee J");
    for (FootShape shape : {FootShape::flat, FootShape::circular, FootShape::elliptical}) {
        FootSpec spec;
        spec.shape = shape;
        const FootMesh foot = builtin_foot(spec);
        for (double period : {13.5, 4.5, 2.3}) {
            const EnergyReport rep = energy_report(foot, leg, resample(time_scale(gait, period), 500), sand);
            double drag = 0.0, lift = 0.0;
            for (const auto& s : rep.samples) {
                drag = std::max(drag, std::abs(s.force.x()));
                lift = std::max(lift, s.force.z());
            }
            std::printf("%-11s %6.1f %8.3f %9.2f %9.2f %9.3f %9.3f\n", to_string(shape).c_str(), period,
                        equivalent_forward_velocity(period), drag, lift, rep.hip_work, rep.knee_work);
        }
    }
    return 0;
}
