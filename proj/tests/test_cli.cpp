#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "grft/calibration.hpp"
#include "grft/csv.hpp"
#include "grft/material_profile.hpp"

using namespace grft;
namespace fs = std::filesystem;

namespace {

const std::string kCli = GRFT_CLI;
const std::string kData = GRFT_DATA_DIR;

struct CliRun {
    int status = -1;
    std::string output;
};

class CliTest : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("grft_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    CliRun run(const std::string& args) const
    {
        const fs::path log = dir / "log.txt";
        const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
        const int raw = std::system(cmd.c_str());
        CliRun r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        r.output = ss.str();
        return r;
    }

    std::string write(const std::string& name, const std::string& text) const
    {
        const fs::path p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }

    std::string config(const std::string& extra = "") const
    {
        return write("run.ini", "[run]\ngait = " + kData + "/gait/human_sand_mean.csv\nmaterial = " + kData +
                                    "/materials/sand.ini\nout = " + (dir / "out").string() + "\n" + extra);
    }
};

std::size_t data_rows(const fs::path& p)
{
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++n;
    return n - 1;
}

} // namespace

TEST_F(CliTest, SimulateWritesTraceAndSummary)
{
    const CliRun r = run("simulate --config " + config() + " --foot elliptical --period 4.5");
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(data_rows(dir / "out" / "elliptical_T4.5.csv"), 500u);
    EXPECT_TRUE(fs::exists(dir / "out" / "elliptical_T4.5.dat"));
    EXPECT_TRUE(fs::exists(dir / "out" / "elliptical_T4.5_summary.txt"));
    EXPECT_NE(r.output.find("peak_drag_N"), std::string::npos);
}

TEST_F(CliTest, OutOverrideAndEnvironmentConfig)
{
    const std::string cfg = config();
    const fs::path other = dir / "elsewhere";
    const CliRun r = run("simulate --out " + other.string() + " --foot flat --period 2.3 --no-correction");
    EXPECT_EQ(r.status, 2) << r.output; // no config anywhere

    ::setenv("GRFT_CONFIG", cfg.c_str(), 1);
    const CliRun e = run("simulate --out " + other.string() + " --foot flat --period 2.3 --no-correction");
    ::unsetenv("GRFT_CONFIG");
    ASSERT_EQ(e.status, 0) << e.output;
    EXPECT_TRUE(fs::exists(other / "flat_T2.3.csv"));
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST_F(CliTest, ConfigErrorsExitWithTwo)
{
    EXPECT_EQ(run("simulate --config " + write("bad.ini", "[run]\nsamples = lots\n")).status, 2);
    EXPECT_EQ(run("simulate --config " + (dir / "missing.ini").string()).status, 2);
    EXPECT_EQ(run("simulate --config " + config() + " --foot hexagonal").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("--help").status, 0);
}

TEST_F(CliTest, FootAboveSandExitsWithThree)
{
    const CliRun r = run("simulate --config " + config("[leg]\nhip_height = 1.0\n"));
    EXPECT_EQ(r.status, 3) << r.output;
    EXPECT_NE(r.output.find("no contact"), std::string::npos);
}

TEST_F(CliTest, SweepProducesTableForEveryCell)
{
    const CliRun r = run("sweep --workers 2 --config " + config("periods = 4.5, 2.3\nsamples = 200\n"));
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(data_rows(dir / "out" / "sweep_summary.csv"), 6u);
    std::ifstream table(dir / "out" / "sweep_summary.csv");
    std::stringstream ss;
    ss << table.rdbuf();
    EXPECT_EQ(ss.str().find("failed"), std::string::npos);
    for (const char* shape : {"flat", "circular", "elliptical"})
        for (const char* T : {"4.5", "2.3"})
            EXPECT_TRUE(fs::exists(dir / "out" / (std::string(shape) + "_T" + T + ".csv")));
}

TEST_F(CliTest, CalibrateRoundTrip)
{
    std::ostringstream v;
    v << "# plate_area_m2: 0.0014\nt,depth_m,Fz_N\n";
    for (int i = 1; i <= 10; ++i) v << i << ',' << 0.002 * i << ',' << 2.575e6 * 0.0014 * 0.002 * i << '\n';
    const std::string out = (dir / "fitted.ini").string();
    const CliRun r = run("calibrate --vertical " + write("vertical.csv", v.str()) + " --out " + out);
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("left at their"), std::string::npos);
    const MediumParams m = load_material_profile(out);
    EXPECT_NEAR(m.zeta / 2.06e6, 1.0, 1e-6);
}

TEST_F(CliTest, CalibrateCorruptRecordExitsWithTwo)
{
    const CliRun r = run("calibrate --vertical " + write("broken.csv", "t,depth_m,Fz_N\n0,0.1,abc\n"));
    EXPECT_EQ(r.status, 2) << r.output;
    EXPECT_NE(r.output.find("broken.csv"), std::string::npos);
    EXPECT_EQ(run("calibrate").status, 2);
}

TEST_F(CliTest, ReportRmsePrintsBothModels)
{
    const std::string cfg = config("samples = 300\n");
    ASSERT_EQ(run("simulate --config " + cfg + " --foot flat --period 4.5").status, 0);
    const std::string with = (dir / "out" / "flat_T4.5.csv").string();
    const std::string without = (dir / "nc" / "flat_T4.5.csv").string();
    ASSERT_EQ(run("simulate --config " + cfg + " --foot flat --period 4.5 --no-correction --out " +
                  (dir / "nc").string())
                  .status,
              0);
    const CliRun same = run("report-rmse --sim " + with + " --measured " + with);
    ASSERT_EQ(same.status, 0) << same.output;
    EXPECT_NE(same.output.find("0.00±0.00"), std::string::npos);
    const CliRun both = run("report-rmse --sim " + with + " --sim-no-correction " + without + " --measured " + with);
    ASSERT_EQ(both.status, 0) << both.output;
    EXPECT_NE(both.output.find("without correction"), std::string::npos);
    EXPECT_EQ(run("report-rmse --sim " + with).status, 2);
}
