#include <gtest/gtest.h>

#include "cli_fixtures.hpp"
#include "json.hpp"
#include "lftensor/parallel.hpp"
#include "lftensor/tensor_display.hpp"

namespace lftensor::testing {
namespace {

using nlohmann::json;

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite() { inputs_ = new CliInputs(); }
    static void TearDownTestSuite() {
        delete inputs_;
        set_max_threads(0);
    }
    static CliInputs* inputs_;
    const CliInputs& in() const { return *inputs_; }
};
CliInputs* Cli::inputs_ = nullptr;

TEST_F(Cli, NoSubcommandIsUsageError) {
    EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST_F(Cli, MissingRequiredOptionIsUsageError) {
    const CliResult r = run_cli({"planes", "--k", "2"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("--disparity"), std::string::npos);
    EXPECT_EQ(run_cli({"planes", "--disparity", in().s(in().disparity), "--k", "0"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"metrics"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"fit", "--target", in().s(in().lf), "--out", in().out("x"), "--planes", "1,a"}).code,
              cli::kExitUsage);
}

TEST_F(Cli, DataErrorsExitWithOne) {
    const CliResult r = run_cli({"planes", "--disparity", in().out("missing.pfm"), "--k", "2"});
    EXPECT_EQ(r.code, cli::kExitDataError);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run_cli({"view", "--lf", in().s(in().lf), "--u", "7", "--v", "0", "--out", in().out("v.png")}).code,
              cli::kExitDataError);
    EXPECT_EQ(run_cli({"scanline", "--lf", in().s(in().lf), "--row", "99"}).code, cli::kExitDataError);
}

TEST_F(Cli, PlanesAreSorted) {
    const CliResult r = run_cli({"planes", "--disparity", in().s(in().disparity), "--k", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["centers"], json::parse("[1.0, 2.0]"));
}

TEST_F(Cli, MetricsOfIdenticalInputs) {
    const CliResult r = run_cli({"metrics", "--pred", in().s(in().disparity), "--ref", in().s(in().disparity), "--k",
                                 "2", "--image-a", in().s(in().next), "--image-b", in().s(in().next)});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["ai1"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j["ai2"].get<double>(), 0.0, 1e-12);
    EXPECT_EQ(j["chamfer"].get<double>(), 0.0);
    EXPECT_EQ(j["psnr"], "INF");
    EXPECT_FALSE(j.contains("temporal"));
}

TEST_F(Cli, MetricsDistillationUsesConfigTemperatures) {
    const fs::path cfg = in().dir.path() / "temps.json";
    std::ofstream(cfg) << R"({"t1": 1.0, "t2": 0.0, "t3": 0.0})";
    const CliResult r = run_cli({"--config", cfg.string(), "metrics", "--pred", in().s(in().noisy_disparity), "--ref",
                                 in().s(in().disparity), "--rgb", in().s(in().rgb), "--teacher",
                                 in().s(in().noisy_disparity)});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["distill"].get<double>(), 0.0);
    EXPECT_GT(json::parse(r.out)["disl"].get<double>(), 0.0);
}

TEST_F(Cli, WarpLossOnConsistentLightField) {
    const fs::path d1 = in().dir.path() / "ones.pfm";
    io::save_disparity_pfm(DisparityMap(12, 16, 1.0), d1);
    const CliResult r = run_cli({"warp-loss", "--lf", in().s(in().lf), "--disparity", d1.string(), "--scale", "1",
                                 "--flow", in().s(in().flow), "--next", in().s(in().next), "--masked",
                                 "--pred-planes", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["photometric"].get<double>(), 0.0);
    EXPECT_LE(j["geometric"].get<double>(), 1e-6);
    EXPECT_LE(j["temporal"].get<double>(), 1e-6);
    EXPECT_EQ(j["bins"].get<double>(), 0.0);
    // Scale outside the recommended range still runs, with a warning.
    const CliResult w = run_cli({"warp-loss", "--lf", in().s(in().lf), "--disparity", d1.string(), "--scale", "5"});
    EXPECT_EQ(w.code, 0);
    EXPECT_NE(w.err.find("warning"), std::string::npos);
}

TEST_F(Cli, ConfigSuppliesDefaultsAndFlagsWin) {
    const fs::path cfg = in().dir.path() / "cfg.json";
    std::ofstream(cfg) << R"({"a": 2.0, "lambda_photo": 0.0, "lambda_geo": 1.0})";
    const fs::path d = in().dir.path() / "half.pfm";
    io::save_disparity_pfm(DisparityMap(12, 16, 0.5), d);
    const auto geo = [&](std::vector<std::string> extra) {
        std::vector<std::string> args = {"--config", cfg.string(), "warp-loss", "--lf", in().s(in().lf),
                                         "--disparity", d.string(), "--masked"};
        args.insert(args.end(), extra.begin(), extra.end());
        const CliResult r = run_cli(args);
        EXPECT_EQ(r.code, 0) << r.err;
        return json::parse(r.out);
    };
    const json from_config = geo({});
    EXPECT_LE(from_config["geometric"].get<double>(), 1e-6);  // 0.5 * a = 1 matches the parallax
    EXPECT_EQ(from_config["total"], from_config["geometric"]);
    EXPECT_GT(geo({"--scale", "1"})["geometric"].get<double>(), 1e-3);
}

TEST_F(Cli, FitRenderRoundTrip) {
    const CliResult fit = run_cli({"fit", "--target", in().s(in().lf), "--layers", "2", "--rank", "1", "--iters", "30",
                                   "--planes", "-1,1", "--out", in().out("fit_stack")});
    ASSERT_EQ(fit.code, 0) << fit.err;
    const json j = json::parse(fit.out);
    EXPECT_LE(j["final_loss"].get<double>(), j["initial_loss"].get<double>());
    EXPECT_EQ(j["planes"], json::parse("[-1.0, 1.0]"));
    const CliResult render =
        run_cli({"render", "--stack", in().out("fit_stack"), "--rows", "3", "--cols", "3", "--out", in().out("r_lf")});
    ASSERT_EQ(render.code, 0) << render.err;
    EXPECT_EQ(io::load_light_field(in().out("r_lf")).angular_rows(), 3);
    EXPECT_EQ(run_cli({"fit", "--target", in().s(in().lf), "--layers", "3", "--planes", "0,1", "--out",
                       in().out("bad")}).code,
              cli::kExitUsage);
}

TEST_F(Cli, FitIsDeterministicAcrossThreadCounts) {
    std::string reference;
    for (const char* threads : {"1", "1", "8"}) {
        const std::string dir = in().out(std::string("det_") + threads);
        fs::remove_all(dir);
        const CliResult r = run_cli({"--threads", threads, "fit", "--target", in().s(in().lf), "--layers", "2",
                                     "--rank", "2", "--iters", "20", "--seed", "7", "--disparity",
                                     in().s(in().disparity), "--out", dir});
        ASSERT_EQ(r.code, 0) << r.err;
        const std::string bytes = r.out + tree_bytes(dir);
        if (reference.empty()) reference = bytes;
        EXPECT_EQ(bytes, reference) << "threads " << threads;
    }
}

TEST_F(Cli, SimulateDpAndScanline) {
    ASSERT_EQ(run_cli({"simulate-dp", "--lf", in().s(in().lf), "--out", in().out("dp")}).code, 0);
    const CliResult a = run_cli({"scanline", "--dp", in().out("dp"), "--row", "4"});
    const CliResult b = run_cli({"scanline", "--lf", in().s(in().lf), "--row", "4"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out.rfind("col,dp_left,dp_right,abs_diff\n", 0), 0u);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 17);
    EXPECT_EQ(b.code, 0);
    EXPECT_EQ(run_cli({"scanline", "--row", "1"}).code, cli::kExitUsage);
}

TEST_F(Cli, DpDisparity) {
    const CliResult r = run_cli({"dp-disparity", "--depth", in().s(in().depth), "--alpha", "1", "--aperture", "2",
                                 "--focal", "1", "--focus-depth", "4", "--out", in().out("dpd.pfm")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["p"].get<double>() + j["q"].get<double>() / 4.0, 0.0, 1e-12);
    const DisparityMap written = io::load_disparity_pfm(in().out("dpd.pfm"));
    for (double v : written.data()) EXPECT_NEAR(v, 0.0, 1e-6);
    EXPECT_EQ(run_cli({"dp-disparity", "--depth", in().s(in().depth), "--alpha", "1", "--aperture", "2", "--focal",
                       "5", "--focus-depth", "4"}).code,
              cli::kExitDataError);
}

TEST_F(Cli, SimulateVideoIsDeterministic) {
    std::string reference;
    for (const char* threads : {"1", "8", "1"}) {
        const std::string dir = in().out(std::string("video_") + threads);
        fs::remove_all(dir);
        const CliResult r =
            run_cli({"--threads", threads, "simulate-video", "--lf", in().s(in().lf), "--path", in().s(in().path),
                     "--out", dir});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_EQ(json::parse(r.out)["frames"], 3);
        const std::string bytes = tree_bytes(dir);
        if (reference.empty()) reference = bytes;
        EXPECT_EQ(bytes, reference);
    }
    const CliResult stereo = run_cli({"simulate-video", "--lf", in().s(in().lf), "--path", in().s(in().path), "--out",
                                      in().out("stereo"), "--stereo"});
    ASSERT_EQ(stereo.code, 0) << stereo.err;
    EXPECT_EQ(json::parse(stereo.out)["views"], 2);
}

TEST_F(Cli, RefocusEpiAndView) {
    ASSERT_EQ(run_cli({"refocus", "--lf", in().s(in().lf), "--disparity", "1", "--out", in().out("rf.png")}).code, 0);
    EXPECT_EQ(io::read_png(in().out("rf.png")).width(), 16);
    const CliResult h = run_cli({"epi", "--lf", in().s(in().lf), "--mode", "h", "--row", "3", "--vrow", "1", "--out",
                                 in().out("epi_h.png")});
    ASSERT_EQ(h.code, 0) << h.err;
    EXPECT_EQ(json::parse(h.out)["height"], 3);
    EXPECT_EQ(json::parse(h.out)["width"], 16);
    const CliResult v = run_cli({"epi", "--lf", in().s(in().lf), "--mode", "v", "--col", "3", "--ucol", "1", "--out",
                                 in().out("epi_v.png")});
    ASSERT_EQ(v.code, 0) << v.err;
    EXPECT_EQ(json::parse(v.out)["width"], 12);
    EXPECT_EQ(run_cli({"epi", "--lf", in().s(in().lf), "--mode", "x", "--out", in().out("e.png")}).code,
              cli::kExitUsage);
    const CliResult view = run_cli({"view", "--lf", in().s(in().lf), "--u", "0", "--v", "2", "--out", in().out("v.png")});
    ASSERT_EQ(view.code, 0) << view.err;
    EXPECT_EQ(json::parse(view.out), json::parse(R"({"du": -1.0, "dv": 1.0})"));
    EXPECT_EQ(io::read_png(in().out("v.png")), io::load_light_field(in().lf).view(2, 0));
}

}  // namespace
}  // namespace lftensor::testing
