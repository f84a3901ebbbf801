#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "grft/csv.hpp"
#include "grft/medium.hpp"
#include "grft/rft.hpp"

namespace grft {

enum class RecordKind { vertical, horizontal, sweep };

inline std::string to_string(RecordKind k)
{
    switch (k) {
    case RecordKind::vertical: return "vertical";
    case RecordKind::horizontal: return "horizontal";
    case RecordKind::sweep: return "sweep";
    }
    return "vertical";
}

inline RecordKind parse_record_kind(const std::string& tag)
{
    if (tag == "vertical") return RecordKind::vertical;
    if (tag == "horizontal") return RecordKind::horizontal;
    if (tag == "sweep" || tag == "orientation-sweep") return RecordKind::sweep;
    throw ConfigError("unknown record kind '" + tag + "' (expected vertical, horizontal or sweep)");
}

/// One plate calibration experiment.
///
/// vertical:   x = depth (m),       y1 = F_z (N)
/// horizontal: x = speed (m/s),     y1 = drag (N)
/// sweep:      x = psi (rad),       y1 = F_1 (N), y2 = F_23 (N)
///
/// For sweeps psi is the angle between the plate velocity and the plate's
/// in-plane tangent e1, so psi = 0 is pure sliding and psi = pi/2 face-on drag.
struct PenetrationRecord {
    RecordKind kind = RecordKind::vertical;
    double plate_area = 1.4e-3; // m^2
    double depth = 0.01;        // m, plate centroid depth for horizontal runs
    std::vector<double> x;
    std::vector<double> y1;
    std::vector<double> y2;
    std::string name = "<record>";

    std::size_t size() const { return x.size(); }
};

struct FitParameter {
    std::string name;
    double value = 0.0;
    std::string unit;
    std::string description;
};

struct FitResult {
    std::vector<FitParameter> parameters;
    double residual_rms = 0.0;
    std::string residual_unit;
    std::size_t samples = 0;
    int iterations = 0;
    bool converged = true;
    std::vector<std::string> warnings;

    double value(const std::string& name) const
    {
        for (const auto& p : parameters)
            if (p.name == name) return p.value;
        throw CalibrationError("fit result has no parameter '" + name + "'");
    }
};

struct ScalingFit {
    Sigmoid a;
    Sigmoid b;
    double rms_f1 = 0.0;
    double rms_f23 = 0.0;
    FitResult result;
};

namespace detail {

inline void require_samples(const PenetrationRecord& r, std::size_t n)
{
    if (r.x.size() < n) throw CalibrationError(r.name + ": at least " + std::to_string(n) + " samples required");
    if (r.y1.size() != r.x.size()) throw CalibrationError(r.name + ": column lengths differ");
}

inline double rms(const std::vector<double>& r)
{
    if (r.empty()) return 0.0;
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s / static_cast<double>(r.size()));
}

inline double metadata_number(const CsvTable& t, const std::string& key, double fallback)
{
    const auto it = t.metadata.find(key);
    if (it == t.metadata.end()) return fallback;
    double v = 0.0;
    if (!parse_number(trim(it->second), v) || !(v > 0.0))
        throw ParseError(t.name + ": metadata '" + key + "' must be a positive number");
    return v;
}

} // namespace detail

/// Reads a calibration record. Plate area and depth come from optional
/// "# plate_area_m2: ..." and "# depth_m: ..." comment lines.
inline PenetrationRecord record_from_table(const CsvTable& t, RecordKind kind)
{
    PenetrationRecord r;
    r.kind = kind;
    r.name = t.name;
    switch (kind) {
    case RecordKind::vertical:
        r.plate_area = detail::metadata_number(t, "plate_area_m2", 0.035 * 0.040);
        r.x = t.values("depth_m");
        r.y1 = t.values("Fz_N");
        break;
    case RecordKind::horizontal:
        r.depth = detail::metadata_number(t, "depth_m", 0.01);
        r.plate_area = detail::metadata_number(t, "plate_area_m2", 0.07 * r.depth);
        r.x = t.values("speed_mps");
        r.y1 = t.values("Fdrag_N");
        break;
    case RecordKind::sweep:
        r.plate_area = detail::metadata_number(t, "plate_area_m2", 0.07 * 0.01);
        r.x = t.values("psi_deg");
        for (double& v : r.x) v = deg2rad(v);
        r.y1 = t.values("F1_N");
        r.y2 = t.values("F23_N");
        break;
    }
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        const bool bad = !std::isfinite(r.x[i]) || !std::isfinite(r.y1[i]) ||
                         (kind == RecordKind::sweep && !std::isfinite(r.y2[i]));
        if (bad) throw ParseError(t.name + ":" + std::to_string(t.line_numbers[i]) + ": non-finite value");
        if (kind != RecordKind::sweep && r.x[i] < 0.0)
            throw ParseError(t.name + ":" + std::to_string(t.line_numbers[i]) + ": negative " +
                             (kind == RecordKind::vertical ? "depth" : "speed"));
    }
    return r;
}

inline PenetrationRecord load_record(const std::string& path, RecordKind kind)
{
    return record_from_table(read_csv_file(path), kind);
}

/// zeta from a vertical penetration of a horizontal plate. F_z = k_F z is
/// fitted through the origin; zeta is the per-depth stress k_F / A divided by
/// the generic map at (0, pi/2), so the forward model reproduces the slope.
inline FitResult fit_zeta(const PenetrationRecord& rec,
                          const StressMapCoefficients& coeffs = StressMapCoefficients::generic())
{
    if (rec.kind != RecordKind::vertical) throw CalibrationError("fit_zeta needs a vertical record");
    detail::require_samples(rec, 5);
    if (!(rec.plate_area > 0.0)) throw CalibrationError("fit_zeta: plate area must be positive");

    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        sxy += rec.x[i] * rec.y1[i];
        sxx += rec.x[i] * rec.x[i];
    }
    if (!(sxx > 0.0)) throw CalibrationError("fit_zeta: all depths are zero");
    const double slope = sxy / sxx;
    if (!(slope > 0.0)) throw CalibrationError("fit_zeta: non-positive force/depth slope (bad data)");

    const double k = slope / rec.plate_area;
    const double zeta = k / alpha_generic(0.0, kHalfPi, coeffs).alpha_z0;

    std::vector<double> res(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) res[i] = rec.y1[i] - slope * rec.x[i];

    FitResult out;
    out.parameters.push_back({"zeta", zeta, "N/m^3", "stress scale"});
    out.parameters.push_back({"slope", slope, "N/m", "vertical force per unit depth"});
    out.residual_rms = detail::rms(res);
    out.residual_unit = "N";
    out.samples = rec.size();
    return out;
}

namespace detail {

constexpr double kSigmoidBound = 100.0;

inline double bounded(double q) { return kSigmoidBound * std::tanh(q / kSigmoidBound); }

inline double unbounded(double p)
{
    const double u = std::clamp(p / kSigmoidBound, -1.0 + 1e-12, 1.0 - 1e-12);
    return kSigmoidBound * std::atanh(u);
}

// Residuals of a clamped sigmoid in transformed (unbounded) coordinates.
struct SigmoidResidual {
    std::vector<double> t;
    std::vector<double> y;

    int inputs() const { return 5; }
    int values() const { return static_cast<int>(t.size()); }

    static Sigmoid to_sigmoid(const Eigen::VectorXd& q)
    {
        Sigmoid s;
        for (int k = 0; k < 5; ++k) s.p[static_cast<std::size_t>(k)] = bounded(q(k));
        return s;
    }

    int operator()(const Eigen::VectorXd& q, Eigen::VectorXd& f) const
    {
        const Sigmoid s = to_sigmoid(q);
        for (int i = 0; i < values(); ++i) {
            const double v = std::clamp(s(t[static_cast<std::size_t>(i)]), 0.0, 1.0);
            f(i) = std::isfinite(v) ? v - y[static_cast<std::size_t>(i)] : 1e3;
        }
        return 0;
    }

    int df(const Eigen::VectorXd& q, Eigen::MatrixXd& jac) const
    {
        const Sigmoid s = to_sigmoid(q);
        const auto& p = s.p;
        for (int i = 0; i < values(); ++i) {
            const double ti = t[static_cast<std::size_t>(i)];
            const double e = std::exp(p[3] * ti + p[4]);
            const double d = p[1] + p[2] * e;
            const double v = p[0] / d;
            if (!std::isfinite(v) || v <= 0.0 || v >= 1.0) {
                jac.row(i).setZero();
                continue;
            }
            const double g = -p[0] / (d * d);
            const double dp[5] = {1.0 / d, g, g * e, g * p[2] * e * ti, g * p[2] * e};
            for (int k = 0; k < 5; ++k) {
                const double u = p[static_cast<std::size_t>(k)] / kSigmoidBound;
                jac(i, k) = dp[k] * (1.0 - u * u);
            }
        }
        return 0;
    }
};

struct SigmoidFitOutcome {
    Sigmoid fitted;
    int iterations = 0;
    bool converged = false;
    double rms = 0.0;
};

inline SigmoidFitOutcome fit_sigmoid(const std::vector<double>& t, const std::vector<double>& y, const Sigmoid& start,
                                     int max_iterations)
{
    SigmoidResidual functor{t, y};
    Eigen::VectorXd q(5);
    for (int k = 0; k < 5; ++k) q(k) = unbounded(start.p[static_cast<std::size_t>(k)]);

    Eigen::LevenbergMarquardt<SigmoidResidual> lm(functor);
    lm.parameters.maxfev = max_iterations;
    lm.parameters.ftol = 1e-10;
    lm.parameters.xtol = 1e-12;
    const auto status = lm.minimize(q);

    SigmoidFitOutcome out;
    out.fitted = SigmoidResidual::to_sigmoid(q);
    out.iterations = static_cast<int>(lm.iter);
    using namespace Eigen::LevenbergMarquardtSpace;
    out.converged = status != TooManyFunctionEvaluation && status != ImproperInputParameters;
    Eigen::VectorXd f(functor.values());
    functor(q, f);
    out.rms = std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
    return out;
}

inline double curve_range(const Sigmoid& s, bool use_cos)
{
    double lo = 1e300, hi = -1e300;
    for (int d = 0; d <= 90; ++d) {
        const double psi = deg2rad(d);
        const double v = std::clamp(s(use_cos ? std::cos(psi) : std::sin(psi)), 0.0, 1.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

inline double mean_at(const std::vector<double>& x, const std::vector<double>& y, double x0)
{
    double s = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i] - x0) < 1e-9) {
            s += y[i];
            ++n;
        }
    }
    return n > 0 ? s / n : std::nan("");
}

} // namespace detail

/// Orientation weights from a psi sweep of a vertical plate. Forces are
/// normalized as f1 = F1(psi) / F1(0) and f23 = F23(psi) / F23(90 deg), using
/// the mean of repeated samples at the reference angle. The f1 sigmoid is
/// fitted in cos(psi), the f23 sigmoid in sin(psi).
inline ScalingFit fit_scaling_factors(const PenetrationRecord& rec, const Sigmoid& start_a = MediumParams{}.sigmoid_a,
                                      const Sigmoid& start_b = MediumParams{}.sigmoid_b, int max_iterations = 500)
{
    if (rec.kind != RecordKind::sweep) throw CalibrationError("fit_scaling_factors needs a sweep record");
    detail::require_samples(rec, 8);
    if (rec.y2.size() != rec.x.size()) throw CalibrationError(rec.name + ": column lengths differ");

    std::set<long long> distinct;
    for (double psi : rec.x) {
        if (psi < -1e-9 || psi > kHalfPi + 1e-9) throw CalibrationError(rec.name + ": psi outside [0, 90] deg");
        distinct.insert(std::llround(rad2deg(psi) * 1e6));
    }
    if (distinct.size() < 8) throw CalibrationError(rec.name + ": sweep needs at least 8 distinct psi values");

    const double f1_ref = detail::mean_at(rec.x, rec.y1, 0.0);
    const double f23_ref = detail::mean_at(rec.x, rec.y2, kHalfPi);
    if (!std::isfinite(f1_ref) || !std::isfinite(f23_ref))
        throw CalibrationError(rec.name + ": sweep must include psi = 0 and psi = 90 deg");
    if (!(std::abs(f1_ref) > 0.0) || !(std::abs(f23_ref) > 0.0))
        throw CalibrationError(rec.name + ": zero reference force, cannot normalize");

    std::vector<double> t1, t23, y1, y23;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        t1.push_back(std::cos(rec.x[i]));
        t23.push_back(std::sin(rec.x[i]));
        y1.push_back(rec.y1[i] / f1_ref);
        y23.push_back(rec.y2[i] / f23_ref);
    }

    const auto a = detail::fit_sigmoid(t1, y1, start_a, max_iterations);
    const auto b = detail::fit_sigmoid(t23, y23, start_b, max_iterations);

    ScalingFit out;
    out.a = a.fitted;
    out.b = b.fitted;
    out.rms_f1 = a.rms;
    out.rms_f23 = b.rms;

    FitResult& r = out.result;
    for (int k = 0; k < 5; ++k)
        r.parameters.push_back({"a" + std::to_string(k + 1), a.fitted.p[static_cast<std::size_t>(k)], "",
                                "sliding weight sigmoid"});
    for (int k = 0; k < 5; ++k)
        r.parameters.push_back({"b" + std::to_string(k + 1), b.fitted.p[static_cast<std::size_t>(k)], "",
                                "in-plane weight sigmoid"});
    r.residual_rms = std::sqrt(0.5 * (a.rms * a.rms + b.rms * b.rms));
    r.samples = rec.size();
    r.iterations = a.iterations + b.iterations;
    r.converged = a.converged && b.converged;
    if (!r.converged)
        throw CalibrationError(rec.name + ": sigmoid fit did not converge within " + std::to_string(max_iterations) +
                               " evaluations");
    if (detail::curve_range(out.a, true) < 0.05)
        r.warnings.push_back("f1 fit is flat: the sweep shows no orientation dependence of F1");
    if (detail::curve_range(out.b, false) < 0.05)
        r.warnings.push_back("f23 fit is flat: the sweep shows no orientation dependence of F23");
    return out;
}

/// Forward model of the horizontal drag test: a vertical plate of area A
/// centred at depth z0, pushed face-on. Returns the drag (+ along -v).
inline double horizontal_drag(double speed, double depth, double area, const MediumParams& medium,
                              const ModelOptions& options = {})
{
    Plate plate;
    plate.centroid = Vec3(0.0, 0.0, -depth);
    plate.normal = kE1;
    plate.area = area;
    IntrusionState st;
    st.ankle_velocity = speed * kE1;
    return -plate_force(plate, st, medium, options).total.x();
}

/// lambda_h from face-on drag at several speeds. Drag is
///   F(v) = C0 + lambda_h * C1 * sqrt(v) + F_inertial(v)
/// with C0 the static drag at z0; lambda_h solves the linear least-squares
/// problem in sqrt(v) after removing C0 and the inertial prediction.
inline FitResult fit_lambda_h(const PenetrationRecord& rec, const MediumParams& medium)
{
    if (rec.kind != RecordKind::horizontal) throw CalibrationError("fit_lambda_h needs a horizontal record");
    detail::require_samples(rec, 3);
    std::set<double> speeds(rec.x.begin(), rec.x.end());
    if (speeds.size() < 3) throw CalibrationError(rec.name + ": at least 3 distinct speeds required");
    if (!(rec.depth > 0.0) || !(rec.plate_area > 0.0))
        throw CalibrationError(rec.name + ": depth and plate area must be positive");

    const double z0 = rec.depth;
    const double w = scaling_factors(kHalfPi, medium).f23;
    const double ax = alpha_scaled(kHalfPi, 0.0, medium).alpha_x;
    const double stress = w * ax * rec.plate_area;
    const double c0 = stress * z0;
    const double c1 = stress * std::sqrt(z0 * cone_factor(kHalfPi, medium.phi_s));

    double sxy = 0.0, sxx = 0.0;
    std::vector<double> xs(rec.size()), inertia(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const double v = rec.x[i];
        inertia[i] = medium.lambda_v * medium.rho * v * v * rec.plate_area;
        xs[i] = c1 * std::sqrt(v);
        const double y = rec.y1[i] - c0 - inertia[i];
        sxy += xs[i] * y;
        sxx += xs[i] * xs[i];
    }
    if (!(sxx > 0.0)) throw CalibrationError(rec.name + ": all speeds are zero");
    const double lambda_h = sxy / sxx;

    std::vector<double> res(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) res[i] = rec.y1[i] - (c0 + lambda_h * xs[i] + inertia[i]);

    FitResult out;
    out.parameters.push_back({"lambda_h", lambda_h, "", "effective-depth scale"});
    out.residual_rms = detail::rms(res);
    out.residual_unit = "N";
    out.samples = rec.size();
    if (lambda_h < 0.0) {
        out.converged = false;
        out.warnings.push_back("negative lambda_h: drag decreases with speed, data inconsistent with the model");
    }
    return out;
}

/// Copies fitted values (zeta, lambda_h, a1..a5, b1..b5) into a parameter set.
inline void apply_fit(MediumParams& m, const FitResult& fit)
{
    for (const auto& p : fit.parameters) {
        if (p.name == "zeta") m.zeta = p.value;
        else if (p.name == "lambda_h") m.lambda_h = p.value;
        else if (p.name.size() == 2 && (p.name[0] == 'a' || p.name[0] == 'b') && p.name[1] >= '1' && p.name[1] <= '5') {
            auto& s = p.name[0] == 'a' ? m.sigmoid_a : m.sigmoid_b;
            s.p[static_cast<std::size_t>(p.name[1] - '1')] = p.value;
        }
    }
}

} // namespace grft
