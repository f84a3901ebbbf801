#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grft/csv.hpp"
#include "grft/gait.hpp"
#include "grft/kinetics.hpp"

namespace grft {

/// Writes `content` to `path` via a sibling temporary file and a rename, so
/// readers never observe a partial file.
inline void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

inline const std::vector<std::string>& trace_columns()
{
    static const std::vector<std::string> cols = {"t",    "phase", "Fx",   "Fy",    "Fz",     "COPx",
                                                  "COPy", "COPz",  "tau1", "tau2",  "P",      "W_cum",
                                                  "W1_cum", "W2_cum", "Wabs_cum"};
    return cols;
}

struct SimulationSummary {
    std::string shape;
    double period = 0.0;
    double equivalent_speed = 0.0;
    std::size_t samples = 0;
    bool contact = false;
    IntrusionInterval intrusion;
    double peak_drag = 0.0; // max |Fx|
    double peak_lift = 0.0; // max Fz
    double peak_lateral = 0.0;
    double hip_work = 0.0;
    double knee_work = 0.0;
    double total_work = 0.0;
    double total_abs_work = 0.0;
};

inline SimulationSummary summarize(const EnergyReport& rep)
{
    SimulationSummary s;
    s.shape = to_string(rep.shape);
    s.period = rep.period;
    s.equivalent_speed = equivalent_forward_velocity(rep.period);
    s.samples = rep.samples.size();
    std::vector<double> t, fz;
    for (const auto& x : rep.samples) {
        t.push_back(x.t);
        fz.push_back(x.force.z());
        s.peak_drag = std::max(s.peak_drag, std::abs(x.force.x()));
        s.peak_lift = std::max(s.peak_lift, x.force.z());
        s.peak_lateral = std::max(s.peak_lateral, std::abs(x.force.y()));
    }
    try {
        s.intrusion = intrusion_phase(t, fz);
        s.contact = true;
    } catch (const SimulationError&) {
        s.contact = false;
    }
    s.hip_work = rep.hip_work;
    s.knee_work = rep.knee_work;
    s.total_work = rep.total_work;
    s.total_abs_work = rep.total_abs_work;
    return s;
}

namespace detail {

inline std::vector<double> trace_row(const EnergySample& s, const SimulationSummary& sum)
{
    double phase = std::nan("");
    if (sum.contact && s.t >= sum.intrusion.t_start && s.t <= sum.intrusion.t_end) phase = sum.intrusion.phase(s.t);
    const double nan = std::nan("");
    return {s.t,
            phase,
            s.force.x(),
            s.force.y(),
            s.force.z(),
            s.cop_defined ? s.cop.x() : nan,
            s.cop_defined ? s.cop.y() : nan,
            s.cop_defined ? s.cop.z() : nan,
            s.tau1,
            s.tau2,
            s.p,
            s.w,
            s.w1,
            s.w2,
            s.w_abs};
}

} // namespace detail

/// Comma-separated trace, one row per sample, 9 significant digits.
inline std::string format_trace_csv(const EnergyReport& rep)
{
    const SimulationSummary sum = summarize(rep);
    std::ostringstream out;
    const auto& cols = trace_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& s : rep.samples) {
        const auto row = detail::trace_row(s, sum);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
    return out.str();
}

/// Whitespace-separated variant with a commented header, for gnuplot.
inline std::string format_trace_dat(const EnergyReport& rep)
{
    const SimulationSummary sum = summarize(rep);
    std::ostringstream out;
    out << "# shape " << sum.shape << " period " << format_number(sum.period) << " s\n#";
    const auto& cols = trace_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << ' ' << (i + 1) << ':' << cols[i];
    out << '\n';
    for (const auto& s : rep.samples) {
        const auto row = detail::trace_row(s, sum);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << format_number(row[i]);
        out << '\n';
    }
    return out.str();
}

inline std::string format_summary(const SimulationSummary& s)
{
    std::ostringstream out;
    out << "shape = " << s.shape << '\n'
        << "period_s = " << format_number(s.period) << '\n'
        << "equivalent_speed_mps = " << format_number(s.equivalent_speed) << '\n'
        << "samples = " << s.samples << '\n'
        << "contact = " << (s.contact ? "true" : "false") << '\n';
    if (s.contact)
        out << "intrusion_start_s = " << format_number(s.intrusion.t_start) << '\n'
            << "intrusion_end_s = " << format_number(s.intrusion.t_end) << '\n';
    out << "peak_drag_N = " << format_number(s.peak_drag) << '\n'
        << "peak_lift_N = " << format_number(s.peak_lift) << '\n'
        << "peak_lateral_N = " << format_number(s.peak_lateral) << '\n'
        << "hip_work_J = " << format_number(s.hip_work) << '\n'
        << "knee_work_J = " << format_number(s.knee_work) << '\n'
        << "total_work_J = " << format_number(s.total_work) << '\n'
        << "total_abs_work_J = " << format_number(s.total_abs_work) << '\n';
    return out.str();
}

/// Force trace (simulated or measured) with t, Fx, Fy, Fz columns.
struct ForceTrace {
    std::string name;
    std::vector<double> t, fx, fy, fz;

    std::size_t size() const { return t.size(); }
};

inline ForceTrace force_trace_from_table(const CsvTable& table)
{
    ForceTrace tr;
    tr.name = table.name;
    tr.t = table.values("t");
    tr.fx = table.values("Fx");
    tr.fy = table.values("Fy");
    tr.fz = table.values("Fz");
    if (tr.t.size() < 2) throw ParseError(table.name + ": at least 2 samples required");
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (!std::isfinite(tr.t[i]) || !std::isfinite(tr.fx[i]) || !std::isfinite(tr.fy[i]) ||
            !std::isfinite(tr.fz[i]))
            throw ParseError(table.name + ":" + std::to_string(table.line_numbers[i]) + ": non-finite value");
        if (i > 0 && !(tr.t[i] > tr.t[i - 1]))
            throw ParseError(table.name + ":" + std::to_string(table.line_numbers[i]) +
                             ": time is not strictly increasing");
    }
    return tr;
}

inline ForceTrace read_force_trace(std::istream& in, const std::string& name = "<stream>")
{
    return force_trace_from_table(read_csv(in, name));
}

inline ForceTrace read_force_trace(const std::string& path) { return force_trace_from_table(read_csv_file(path)); }

inline ForceTrace force_trace(const EnergyReport& rep)
{
    ForceTrace tr;
    tr.name = to_string(rep.shape);
    for (const auto& s : rep.samples) {
        tr.t.push_back(s.t);
        tr.fx.push_back(s.force.x());
        tr.fy.push_back(s.force.y());
        tr.fz.push_back(s.force.z());
    }
    return tr;
}

/// Linear interpolation of samples (t, y) at tq; tq must lie inside [t0, tn].
inline double interpolate(const std::vector<double>& t, const std::vector<double>& y, double tq)
{
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    if (it == t.begin()) return y.front();
    if (it == t.end()) return y.back();
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double u = (tq - t[k - 1]) / (t[k] - t[k - 1]);
    return y[k - 1] + u * (y[k] - y[k - 1]);
}

struct AxisError {
    double rmse = 0.0;
    double spread = 0.0; // standard deviation of |error|
};

struct RmseReport {
    AxisError x, y, z;
    IntrusionInterval intrusion;
    std::size_t samples = 0;
};

/// Error of a simulated trace against a measured one over the measured
/// intrusion phase (F_z above `threshold`). The simulation is interpolated
/// onto the measured timestamps.
inline RmseReport report_rmse(const ForceTrace& sim, const ForceTrace& measured, double threshold = 1e-9)
{
    if (sim.size() < 2 || measured.size() < 2) throw SimulationError("report_rmse: traces need at least 2 samples");
    const IntrusionInterval iv = intrusion_phase(measured.t, measured.fz, threshold);
    const double lo = std::max(iv.t_start, sim.t.front());
    const double hi = std::min(iv.t_end, sim.t.back());
    if (!(hi >= lo)) throw SimulationError("report_rmse: simulated and measured traces do not overlap");

    std::vector<double> ex, ey, ez;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        const double tq = measured.t[i];
        if (tq < lo || tq > hi) continue;
        ex.push_back(interpolate(sim.t, sim.fx, tq) - measured.fx[i]);
        ey.push_back(interpolate(sim.t, sim.fy, tq) - measured.fy[i]);
        ez.push_back(interpolate(sim.t, sim.fz, tq) - measured.fz[i]);
    }
    if (ex.empty()) throw SimulationError("report_rmse: no measured samples inside the overlap");

    const auto axis = [](const std::vector<double>& e) {
        double s2 = 0.0, sa = 0.0;
        for (double v : e) {
            s2 += v * v;
            sa += std::abs(v);
        }
        const double n = static_cast<double>(e.size());
        const double mean_abs = sa / n;
        AxisError a;
        a.rmse = std::sqrt(s2 / n);
        a.spread = std::sqrt(std::max(0.0, s2 / n - mean_abs * mean_abs));
        return a;
    };
    RmseReport r;
    r.x = axis(ex);
    r.y = axis(ey);
    r.z = axis(ez);
    r.intrusion = iv;
    r.samples = ex.size();
    return r;
}

/// One "label | Fx | Fy | Fz" row with "rmse±std" cells.
inline std::string format_rmse_row(const std::string& label, const RmseReport& r)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-22s %8.2f±%-6.2f %8.2f±%-6.2f %8.2f±%-6.2f", label.c_str(), r.x.rmse, r.x.spread,
                  r.y.rmse, r.y.spread, r.z.rmse, r.z.spread);
    return buf;
}

inline std::string format_rmse_header()
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-22s %15s %15s %15s", "model", "Fx RMSE (N)", "Fy RMSE (N)", "Fz RMSE (N)");
    return buf;
}

} // namespace grft
