#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "grft/config.hpp"

using namespace grft;
namespace fs = std::filesystem;

namespace {

const std::string kData = GRFT_DATA_DIR;

RunConfig parse(const std::string& text, const fs::path& base = kData)
{
    std::istringstream in(text);
    return parse_run_config(in, base);
}

} // namespace

TEST(RunConfigTest, Defaults)
{
    const RunConfig c = parse("");
    EXPECT_EQ(c.samples, 500u);
    EXPECT_EQ(c.periods, (std::vector<double>{13.5, 4.5, 2.3}));
    EXPECT_EQ(c.shapes.size(), 3u);
    EXPECT_TRUE(c.model.depth_correction);
    EXPECT_TRUE(c.model.inertial);
    EXPECT_TRUE(c.material_path.empty());
    EXPECT_THROW(c.validate(), ConfigError); // no gait
}

TEST(RunConfigTest, ParsesAllSections)
{
    const RunConfig c = parse("[run]\ngait = gait/human_sand_mean.csv\nmaterial = materials/sand.ini\nsamples = 200\n"
                              "periods = 4.5, 2.3\nshapes = elliptical\nworkers = 3\n"
                              "[foot]\nlength = 0.12\nsagitta = 0.01\nn_length = 30\n"
                              "[leg]\nl1 = 0.2\nhip_height = 0.45\nknee_sign = -1\n"
                              "[model]\ndepth_correction = off\ninertial = false\nfree_surface_height = 0.01\n");
    EXPECT_EQ(c.samples, 200u);
    EXPECT_EQ(c.periods, (std::vector<double>{4.5, 2.3}));
    ASSERT_EQ(c.shapes.size(), 1u);
    EXPECT_EQ(c.shapes[0], FootShape::elliptical);
    EXPECT_EQ(c.workers, 3);
    EXPECT_EQ(c.foot.length, 0.12);
    EXPECT_EQ(c.foot.sagitta, 0.01);
    EXPECT_EQ(c.foot.n_length, 30);
    EXPECT_EQ(c.leg.l1, 0.2);
    EXPECT_EQ(c.leg.hip_position.z(), 0.45);
    EXPECT_EQ(c.leg.knee_sign, -1.0);
    EXPECT_FALSE(c.model.depth_correction);
    EXPECT_FALSE(c.model.inertial);
    EXPECT_EQ(c.free_surface_height, 0.01);
    EXPECT_EQ(fs::path(c.gait_path), (fs::path(kData) / "gait/human_sand_mean.csv").lexically_normal());
    EXPECT_NO_THROW(c.validate());
}

TEST(RunConfigTest, RejectsUnknownKeysAndBadValues)
{
    EXPECT_THROW(parse("[run]\ngaits = x\n"), ConfigError);
    EXPECT_THROW(parse("[solver]\nsteps = 3\n"), ConfigError);
    EXPECT_THROW(parse("[run]\nsamples = many\n"), ConfigError);
    EXPECT_THROW(parse("[run]\nsamples = 1\n"), ConfigError);
    EXPECT_THROW(parse("[run]\nshapes = square\n"), ConfigError);
    EXPECT_THROW(parse("[model]\ninertial = maybe\n"), ConfigError);
    EXPECT_THROW(parse("[foot]\nn_length = 2.5\n"), ConfigError);
    EXPECT_THROW(parse("[run\n"), ConfigError);
}

TEST(RunConfigTest, ValidationCatchesInconsistentSettings)
{
    const std::string gait = "[run]\ngait = gait/human_sand_mean.csv\n";
    EXPECT_THROW(parse(gait + "periods = 4.5, -1\n").validate(), ConfigError);
    EXPECT_THROW(parse(gait + "material = nope.ini\n").validate(), ConfigError);
    EXPECT_THROW(parse(gait + "shapes = custom\n").validate(), ConfigError);
    EXPECT_THROW(parse(gait + "[leg]\nknee_sign = 0.5\n").validate(), ConfigError);
    EXPECT_THROW(parse(gait + "[foot]\nsagitta = 0\n").validate(), ConfigError);
    EXPECT_NO_THROW(parse(gait + "shapes = flat\n[foot]\nsagitta = 0\n").validate());
    EXPECT_THROW(parse("[run]\ngait = missing.csv\n").validate(), ConfigError);
}

TEST(RunConfigTest, RelativePathsFollowConfigFile)
{
    const RunConfig c = load_run_config(kData + "/config/default.ini");
    EXPECT_NO_THROW(c.validate());
    EXPECT_TRUE(fs::exists(c.gait_path));
    EXPECT_TRUE(fs::exists(c.material_path));
    EXPECT_TRUE(fs::path(c.out_dir).is_absolute());
    EXPECT_THROW(load_run_config(kData + "/config/missing.ini"), ConfigError);
}

TEST(RunConfigTest, EnvironmentVariableSuppliesDefaultPath)
{
    ::setenv(kConfigEnv, "/tmp/some.ini", 1);
    EXPECT_EQ(default_config_path(), "/tmp/some.ini");
    ::unsetenv(kConfigEnv);
    EXPECT_EQ(default_config_path(), "");
}

TEST(RunConfigTest, HelpersBuildModelInputs)
{
    RunConfig c = load_run_config(kData + "/config/default.ini");
    const MediumParams m = load_medium(c);
    EXPECT_GT(m.zeta, 0.0);
    const FootMesh mesh = make_foot(c, FootShape::circular);
    EXPECT_EQ(mesh.shape, FootShape::circular);
    c.ankle_moment = false;
    EXPECT_FALSE(energy_options(c).ankle_moment);
    const JointTrajectory g = prepare_gait(load_trajectory(c.gait_path), 2.3, 123);
    EXPECT_EQ(g.size(), 123u);
    EXPECT_NEAR(g.period, 2.3, 1e-12);
}
