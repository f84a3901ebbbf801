#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "grft/calibration.hpp"
#include "grft/config.hpp"
#include "grft/trace.hpp"

namespace {

using namespace grft;

enum Exit { kOk = 0, kConfig = 2, kRuntime = 3, kPartial = 4 };

struct Overrides {
    std::string config;
    std::string out;
    bool no_correction = false;
    bool no_inertial = false;
    int workers = 0;
};

RunConfig resolve_config(const Overrides& o)
{
    std::string path = o.config.empty() ? default_config_path() : o.config;
    if (path.empty())
        throw ConfigError(std::string("no config given: pass --config or set ") + kConfigEnv);
    RunConfig c = load_run_config(path);
    if (!o.out.empty()) c.out_dir = o.out;
    if (o.no_correction) c.model.depth_correction = false;
    if (o.no_inertial) c.model.inertial = false;
    if (o.workers > 0) c.workers = o.workers;
    c.validate();
    return c;
}

std::string period_tag(double period)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", period);
    return buf;
}

std::string cell_stem(const RunConfig& c, FootShape shape, double period)
{
    return (std::filesystem::path(c.out_dir) / (to_string(shape) + "_T" + period_tag(period))).string();
}

struct Cell {
    FootShape shape = FootShape::flat;
    double period = 0.0;
    bool ok = false;
    std::string error;
    SimulationSummary summary;
};

/// Runs one shape/period combination and writes its trace, gnuplot data and
/// summary files.
SimulationSummary run_cell(const RunConfig& c, const MediumParams& medium, const JointTrajectory& gait,
                           FootShape shape, double period)
{
    const FootMesh mesh = make_foot(c, shape);
    const JointTrajectory traj = prepare_gait(gait, period, c.samples);
    const EnergyReport rep = energy_report(mesh, c.leg, traj, medium, energy_options(c));
    SimulationSummary s = summarize(rep);
    s.shape = to_string(shape);
    if (!s.contact) throw SimulationError("no contact detected: the foot never loads the terrain");

    const std::string stem = cell_stem(c, shape, period);
    write_file_atomic(stem + ".csv", format_trace_csv(rep));
    write_file_atomic(stem + ".dat", format_trace_dat(rep));
    write_file_atomic(stem + "_summary.txt", format_summary(s));
    return s;
}

int cmd_simulate(const Overrides& o, const std::string& foot, double period)
{
    const RunConfig c = resolve_config(o);
    const FootShape shape = foot.empty() ? c.shapes.front() : parse_foot_shape(foot);
    const double T = period > 0.0 ? period : c.periods.front();
    const MediumParams medium = load_medium(c);
    const JointTrajectory gait = load_trajectory(c.gait_path);

    const SimulationSummary s = run_cell(c, medium, gait, shape, T);
    std::cout << format_summary(s);
    std::cout << "trace = " << cell_stem(c, shape, T) << ".csv\n";
    return kOk;
}

std::string format_sweep_table(const std::vector<Cell>& cells)
{
    std::ostringstream out;
    out << "shape,period_s,equivalent_speed_mps,peak_drag_N,peak_lift_N,hip_work_J,knee_work_J,total_work_J,"
           "total_abs_work_J,status\n";
    for (const auto& cell : cells) {
        const auto& s = cell.summary;
        out << to_string(cell.shape) << ',' << format_number(cell.period) << ','
            << format_number(equivalent_forward_velocity(cell.period));
        if (cell.ok) {
            for (double v : {s.peak_drag, s.peak_lift, s.hip_work, s.knee_work, s.total_work, s.total_abs_work})
                out << ',' << format_number(v);
            out << ",ok\n";
        } else {
            out << ",nan,nan,nan,nan,nan,nan,\"failed: " << cell.error << "\"\n";
        }
    }
    return out.str();
}

int cmd_sweep(const Overrides& o)
{
    const RunConfig c = resolve_config(o);
    const MediumParams medium = load_medium(c);
    const JointTrajectory gait = load_trajectory(c.gait_path);

    std::vector<Cell> cells;
    for (FootShape shape : c.shapes)
        for (double period : c.periods) cells.push_back({shape, period, false, {}, {}});

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            Cell& cell = cells[i];
            try {
                cell.summary = run_cell(c, medium, gait, cell.shape, cell.period);
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(c.workers), cells.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const std::string table = format_sweep_table(cells);
    write_file_atomic((std::filesystem::path(c.out_dir) / "sweep_summary.csv").string(), table);

    std::printf("%-11s %7s %8s %10s %10s %9s %9s %9s\n", "shape", "T_g(s)", "v(m/s)", "drag(N)", "lift(N)",
                "W_hip(J)", "W_knee(J)", "W_tot(J)");
    bool failed = false;
    for (const auto& cell : cells) {
        if (!cell.ok) {
            failed = true;
            std::printf("%-11s %7.2f  failed: %s\n", to_string(cell.shape).c_str(), cell.period, cell.error.c_str());
            continue;
        }
        const auto& s = cell.summary;
        std::printf("%-11s %7.2f %8.3f %10.2f %10.2f %9.3f %9.3f %9.3f\n", s.shape.c_str(), s.period,
                    s.equivalent_speed, s.peak_drag, s.peak_lift, s.hip_work, s.knee_work, s.total_work);
    }
    return failed ? kPartial : kOk;
}

void print_fit(const std::string& title, const FitResult& fit)
{
    std::cout << title << " (" << fit.samples << " samples, residual RMS " << fit.residual_rms
              << (fit.residual_unit.empty() ? "" : " " + fit.residual_unit) << ")\n";
    for (const auto& p : fit.parameters)
        std::cout << "  " << p.name << " = " << p.value << (p.unit.empty() ? "" : " " + p.unit) << "\n";
    for (const auto& w : fit.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_calibrate(const std::string& base_profile, const std::string& vertical, const std::string& sweep,
                  const std::string& horizontal, const std::string& out)
{
    if (vertical.empty() && sweep.empty() && horizontal.empty())
        throw ConfigError("calibrate: give at least one of --vertical, --sweep, --horizontal");
    MediumParams m = base_profile.empty() ? MediumParams{} : load_material_profile(base_profile);

    std::vector<std::string> defaulted;
    if (!vertical.empty()) {
        const FitResult fit = fit_zeta(load_record(vertical, RecordKind::vertical), m.coeffs);
        print_fit("zeta from " + vertical, fit);
        apply_fit(m, fit);
    } else {
        defaulted.push_back("zeta");
    }
    if (!sweep.empty()) {
        const ScalingFit fit = fit_scaling_factors(load_record(sweep, RecordKind::sweep), m.sigmoid_a, m.sigmoid_b);
        print_fit("scaling factors from " + sweep, fit.result);
        std::cout << "  curve RMS f1 = " << fit.rms_f1 << ", f23 = " << fit.rms_f23 << "\n";
        apply_fit(m, fit.result);
    } else {
        defaulted.push_back("a1..a5, b1..b5");
    }
    if (!horizontal.empty()) {
        const FitResult fit = fit_lambda_h(load_record(horizontal, RecordKind::horizontal), m);
        print_fit("lambda_h from " + horizontal, fit);
        if (!fit.converged) throw CalibrationError("lambda_h: fitted value is negative, data inconsistent");
        apply_fit(m, fit);
    } else {
        defaulted.push_back("lambda_h");
    }
    if (!defaulted.empty()) {
        std::cerr << "warning: parameters left at their " << (base_profile.empty() ? "built-in" : "base profile")
                  << " values:";
        for (const auto& d : defaulted) std::cerr << ' ' << d;
        std::cerr << "\n";
    }

    std::ostringstream text;
    write_material_profile(text, m);
    write_file_atomic(out, text.str());
    std::cout << "profile = " << out << "\n";
    return kOk;
}

int cmd_report_rmse(const std::string& sim, const std::string& sim_nocorr, const std::string& measured,
                    double threshold)
{
    const ForceTrace meas = read_force_trace(measured);
    std::cout << format_rmse_header() << "\n";
    std::cout << format_rmse_row(sim_nocorr.empty() ? "simulation" : "with correction",
                                 report_rmse(read_force_trace(sim), meas, threshold))
              << "\n";
    if (!sim_nocorr.empty())
        std::cout << format_rmse_row("without correction", report_rmse(read_force_trace(sim_nocorr), meas, threshold))
                  << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Granular RFT foot-terrain simulator"};
    app.require_subcommand(1);

    Overrides o;
    const auto add_run_flags = [&o](CLI::App* cmd) {
        cmd->add_option("--config", o.config, std::string("run config (default: $") + kConfigEnv + ")");
        cmd->add_option("--out", o.out, "output directory");
        cmd->add_flag("--no-correction", o.no_correction, "disable the effective-depth correction");
        cmd->add_flag("--no-inertial", o.no_inertial, "disable the inertial term");
        cmd->add_option("--workers", o.workers, "parallel sweep cells")->check(CLI::PositiveNumber);
    };

    std::string foot;
    double period = 0.0;
    auto* sim = app.add_subcommand("simulate", "replay one gait with one foot");
    add_run_flags(sim);
    sim->add_option("--foot", foot, "flat, circular, elliptical or custom");
    sim->add_option("--period", period, "gait period in seconds")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "all configured shapes x periods");
    add_run_flags(sweep);

    std::string base_profile, vertical, sweep_rec, horizontal, profile_out = "calibrated.ini";
    auto* cal = app.add_subcommand("calibrate", "fit material parameters from plate records");
    cal->add_option("--material", base_profile, "profile supplying unfitted parameters");
    cal->add_option("--vertical", vertical, "vertical penetration record (t, depth_m, Fz_N)");
    cal->add_option("--sweep", sweep_rec, "orientation sweep record (psi_deg, F1_N, F23_N)");
    cal->add_option("--horizontal", horizontal, "horizontal drag record (speed_mps, Fdrag_N)");
    cal->add_option("--out", profile_out, "output material profile");

    std::string sim_trace, sim_nocorr, measured;
    double threshold = 1e-9;
    auto* rmse = app.add_subcommand("report-rmse", "force RMSE over the measured intrusion phase");
    rmse->add_option("--sim", sim_trace, "simulated trace (with correction)")->required();
    rmse->add_option("--sim-no-correction", sim_nocorr, "simulated trace without correction");
    rmse->add_option("--measured", measured, "measured trace (t, Fx, Fy, Fz)")->required();
    rmse->add_option("--threshold", threshold, "contact threshold on Fz, N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        if (*sim) return cmd_simulate(o, foot, period);
        if (*sweep) return cmd_sweep(o);
        if (*cal) return cmd_calibrate(base_profile, vertical, sweep_rec, horizontal, profile_out);
        if (*rmse) return cmd_report_rmse(sim_trace, sim_nocorr, measured, threshold);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
