#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "grft/geometry.hpp"
#include "grft/gait.hpp"
#include "grft/kinetics.hpp"
#include "grft/material_profile.hpp"

// Run configuration (INI):
//
//   [run]
//   material = ../materials/sand.ini   ; optional, built-in sand otherwise
//   gait = ../gait/human_sand_mean.csv
//   out = out
//   samples = 500
//   periods = 13.5, 4.5, 2.3
//   shapes = flat, circular, elliptical
//   workers = 1
//   [foot]    length, width, sagitta, ankle_height, ankle_x, end_cap_height,
//             n_length, n_width, mesh (custom plate file)
//   [leg]     l1, l2, hip_height, knee_sign
//   [model]   depth_correction, inertial, ankle_moment, free_surface_height
//
// Relative paths are resolved against the directory of the config file.

namespace grft {

inline constexpr const char* kConfigEnv = "GRFT_CONFIG";

struct RunConfig {
    std::string material_path; // empty: built-in defaults
    std::string gait_path;
    std::string out_dir = "out";
    std::size_t samples = 500;
    std::vector<double> periods{13.5, 4.5, 2.3};
    std::vector<FootShape> shapes{FootShape::flat, FootShape::circular, FootShape::elliptical};
    int workers = 1;

    FootSpec foot;
    std::string mesh_path; // used for the custom shape

    LegModel leg;
    ModelOptions model;
    bool ankle_moment = true;
    double free_surface_height = 0.0;

    void validate() const
    {
        namespace fs = std::filesystem;
        if (gait_path.empty()) throw ConfigError("config: [run] gait is required");
        if (!fs::exists(gait_path)) throw ConfigError("config: gait file '" + gait_path + "' does not exist");
        if (!material_path.empty() && !fs::exists(material_path))
            throw ConfigError("config: material file '" + material_path + "' does not exist");
        if (samples < 2) throw ConfigError("config: samples must be at least 2");
        if (periods.empty()) throw ConfigError("config: at least one period is required");
        for (double p : periods)
            if (!(p > 0.0)) throw ConfigError("config: periods must be positive");
        if (shapes.empty()) throw ConfigError("config: at least one shape is required");
        if (workers < 1) throw ConfigError("config: workers must be at least 1");
        if (!(foot.length > 0.0) || !(foot.width > 0.0) || !(foot.ankle_height > 0.0))
            throw ConfigError("config: foot dimensions must be positive");
        if (foot.end_cap_height < 0.0) throw ConfigError("config: end_cap_height must be non-negative");
        if (foot.n_length < 1 || foot.n_width < 1) throw ConfigError("config: mesh resolution must be positive");
        for (FootShape s : shapes) {
            if (s == FootShape::custom) {
                if (mesh_path.empty()) throw ConfigError("config: custom shape needs [foot] mesh");
                if (!fs::exists(mesh_path)) throw ConfigError("config: mesh file '" + mesh_path + "' does not exist");
            } else if (s != FootShape::flat && !(foot.sagitta > 0.0)) {
                throw ConfigError("config: curved feet need a positive sagitta");
            }
        }
        leg.validate();
    }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto t = trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

inline double to_double(const std::string& text, const std::string& key)
{
    double v = 0.0;
    if (!parse_number(trim(text), v) || !std::isfinite(v))
        throw ConfigError("config: '" + key + "' is not a number: '" + text + "'");
    return v;
}

inline bool to_bool(const std::string& text, const std::string& key)
{
    const std::string t(trim(text));
    if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "off" || t == "no") return false;
    throw ConfigError("config: '" + key + "' is not a boolean: '" + text + "'");
}

inline std::string resolve(const std::string& path, const std::filesystem::path& base)
{
    if (path.empty()) return path;
    const std::filesystem::path p(path);
    return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

} // namespace detail

/// Parses a run config. `base_dir` anchors relative paths.
inline RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = ".")
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    static const std::vector<std::pair<std::string, std::vector<std::string>>> known = {
        {"run", {"material", "gait", "out", "samples", "periods", "shapes", "workers"}},
        {"foot",
         {"length", "width", "sagitta", "ankle_height", "ankle_x", "end_cap_height", "n_length", "n_width", "n_cap",
          "mesh"}},
        {"leg", {"l1", "l2", "hip_height", "knee_sign"}},
        {"model", {"depth_correction", "inertial", "ankle_moment", "free_surface_height"}},
    };
    for (const auto& [section, body] : tree) {
        const auto it = std::find_if(known.begin(), known.end(), [&](const auto& k) { return k.first == section; });
        if (it == known.end()) throw ConfigError("config: unknown section [" + section + "]");
        for (const auto& kv : body)
            if (std::find(it->second.begin(), it->second.end(), kv.first) == it->second.end())
                throw ConfigError("config: unknown key [" + section + "] " + kv.first);
    }

    const auto get = [&](const std::string& path) -> boost::optional<std::string> {
        return tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    };
    RunConfig c;
    if (auto v = get("run.material")) c.material_path = detail::resolve(*v, base_dir);
    if (auto v = get("run.gait")) c.gait_path = detail::resolve(*v, base_dir);
    if (auto v = get("run.out")) c.out_dir = detail::resolve(*v, base_dir);
    if (auto v = get("run.samples")) {
        const double n = detail::to_double(*v, "samples");
        if (n < 2 || n != std::floor(n)) throw ConfigError("config: samples must be an integer >= 2");
        c.samples = static_cast<std::size_t>(n);
    }
    if (auto v = get("run.periods")) {
        c.periods.clear();
        for (const auto& s : detail::split_list(*v)) c.periods.push_back(detail::to_double(s, "periods"));
    }
    if (auto v = get("run.shapes")) {
        c.shapes.clear();
        for (const auto& s : detail::split_list(*v)) c.shapes.push_back(parse_foot_shape(s));
    }
    if (auto v = get("run.workers")) c.workers = static_cast<int>(detail::to_double(*v, "workers"));

    const auto num = [&](const std::string& key, double& dst) {
        if (auto v = get(key)) dst = detail::to_double(*v, key);
    };
    const auto count = [&](const std::string& key, int& dst) {
        if (auto v = get(key)) {
            const double n = detail::to_double(*v, key);
            if (n != std::floor(n)) throw ConfigError("config: '" + key + "' must be an integer");
            dst = static_cast<int>(n);
        }
    };
    num("foot.length", c.foot.length);
    num("foot.width", c.foot.width);
    num("foot.sagitta", c.foot.sagitta);
    num("foot.ankle_height", c.foot.ankle_height);
    num("foot.ankle_x", c.foot.ankle_x);
    num("foot.end_cap_height", c.foot.end_cap_height);
    count("foot.n_length", c.foot.n_length);
    count("foot.n_width", c.foot.n_width);
    count("foot.n_cap", c.foot.n_cap);
    if (auto v = get("foot.mesh")) c.mesh_path = detail::resolve(*v, base_dir);

    num("leg.l1", c.leg.l1);
    num("leg.l2", c.leg.l2);
    double hip = c.leg.hip_position.z();
    num("leg.hip_height", hip);
    c.leg.hip_position = Vec3(0.0, 0.0, hip);
    num("leg.knee_sign", c.leg.knee_sign);

    if (auto v = get("model.depth_correction")) c.model.depth_correction = detail::to_bool(*v, "depth_correction");
    if (auto v = get("model.inertial")) c.model.inertial = detail::to_bool(*v, "inertial");
    if (auto v = get("model.ankle_moment")) c.ankle_moment = detail::to_bool(*v, "ankle_moment");
    num("model.free_surface_height", c.free_surface_height);
    return c;
}

inline RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    const auto base = std::filesystem::absolute(path).parent_path();
    return parse_run_config(in, base);
}

/// Config path from the environment, or empty.
inline std::string default_config_path()
{
    const char* env = std::getenv(kConfigEnv);
    return env ? std::string(env) : std::string();
}

inline MediumParams load_medium(const RunConfig& c)
{
    MediumParams m = c.material_path.empty() ? MediumParams{} : load_material_profile(c.material_path);
    m.validate();
    return m;
}

inline FootMesh make_foot(const RunConfig& c, FootShape shape)
{
    if (shape == FootShape::custom) return load_foot_mesh(c.mesh_path);
    FootSpec spec = c.foot;
    spec.shape = shape;
    return builtin_foot(spec);
}

inline EnergyOptions energy_options(const RunConfig& c)
{
    EnergyOptions o;
    o.model = c.model;
    o.ankle_moment = c.ankle_moment;
    o.free_surface_height = c.free_surface_height;
    return o;
}

/// Loads the gait, rescales it to `period` and resamples it onto the
/// configured grid.
inline JointTrajectory prepare_gait(const JointTrajectory& base, double period, std::size_t samples)
{
    return resample(time_scale(base, period), samples);
}

} // namespace grft
