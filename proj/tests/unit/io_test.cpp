#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "gmcphd/config.hpp"
#include "gmcphd/csv.hpp"
#include "gmcphd/sim.hpp"

namespace {

using namespace gmcphd;
namespace fs = std::filesystem;

fs::path scratch_dir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const fs::path dir = fs::temp_directory_path() / "gmcphd_io_test" / (std::string(info->test_suite_name()) + "_" + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(Csv, DetectionsRoundTrip) {
    const auto dir = scratch_dir();
    const auto frames = sim::generate(sim::reference_scenario(4)).detections;
    io::write_detections(dir / "d.csv", frames);
    const auto back = io::read_detections(dir / "d.csv");
    ASSERT_EQ(back.size(), frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
        ASSERT_EQ(back[t].measurements.size(), frames[t].measurements.size());
        for (std::size_t k = 0; k < frames[t].measurements.size(); ++k) {
            const Vector& a = frames[t].measurements[k];
            const Vector& b = back[t].measurements[k];
            for (int i = 0; i < 2; ++i) EXPECT_LE(std::abs(a(i) - b(i)), 5e-9 * std::max(1.0, std::abs(a(i))));
        }
    }
    // Values read back are a fixpoint of write/read.
    io::write_detections(dir / "d2.csv", back);
    EXPECT_EQ(read_text(dir / "d.csv"), read_text(dir / "d2.csv"));
    const auto again = io::read_detections(dir / "d2.csv");
    for (std::size_t t = 0; t < back.size(); ++t) EXPECT_EQ(again[t].measurements, back[t].measurements);
}

TEST(Csv, TrackPointsRoundTripExactly) {
    const auto dir = scratch_dir();
    std::mt19937_64 rng(71);
    std::normal_distribution<double> nd(0.0, 10.0);
    std::vector<TrackPoint> pts;
    for (long id = 0; id < 5; ++id)
        for (long t = 0; t < 20; ++t) pts.push_back({id, t, nd(rng), nd(rng), nd(rng), nd(rng)});
    io::write_track_points(dir / "a.csv", pts);
    const auto once = io::read_track_points(dir / "a.csv");
    io::write_track_points(dir / "b.csv", once);
    const auto twice = io::read_track_points(dir / "b.csv");
    ASSERT_EQ(twice.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(twice[i].p_x, once[i].p_x);
        EXPECT_EQ(twice[i].v_y, once[i].v_y);
        EXPECT_LE(std::abs(once[i].p_x - pts[i].p_x), 5e-9 * std::abs(pts[i].p_x));
    }
}

TEST(Csv, EmptyFramesUseSentinelRows) {
    const auto dir = scratch_dir();
    std::vector<sim::DetectionFrame> frames = {{0, {}}, {1, {Vector::Ones(2)}}, {2, {}}};
    io::write_detections(dir / "d.csv", frames);
    EXPECT_EQ(read_text(dir / "d.csv"), "time_index,p_x_um,p_y_um\n0,,\n1,1,1\n2,,\n");
    const auto back = io::read_detections(dir / "d.csv");
    ASSERT_EQ(back.size(), 3u);
    EXPECT_TRUE(back[0].measurements.empty());
    EXPECT_TRUE(back[2].measurements.empty());
}

TEST(Csv, UnsortedAndGapFramesAllReported) {
    const auto dir = scratch_dir();
    write_text(dir / "d.csv", "time_index,p_x_um,p_y_um\n0,1,1\n1,,\n4,2,2\n3,1,1\n");
    try {
        io::read_detections(dir / "d.csv");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("frames 2..3 missing"), std::string::npos) << msg;
        EXPECT_NE(msg.find("frame 3 (line 5) appears after frame 4"), std::string::npos) << msg;
    }
}

TEST(Csv, MalformedRowsRejected) {
    const auto dir = scratch_dir();
    write_text(dir / "bad_header.csv", "t,x,y\n0,1,1\n");
    EXPECT_THROW(io::read_detections(dir / "bad_header.csv"), DataError);
    write_text(dir / "bad_number.csv", "time_index,p_x_um,p_y_um\n0,1,abc\n");
    EXPECT_THROW(io::read_detections(dir / "bad_number.csv"), DataError);
    write_text(dir / "dup.csv", "track_id,time_index,p_x_um,v_x_um_s,p_y_um,v_y_um_s\n0,1,0,0,0,0\n0,1,1,1,1,1\n");
    EXPECT_THROW(io::read_track_points(dir / "dup.csv"), DataError);
    EXPECT_THROW(io::read_track_points(dir / "missing.csv"), DataError);
}

TEST(Config, DefaultsMatchTrackingSetup) {
    std::istringstream empty("");
    const auto cfg = parse_config(empty);
    EXPECT_EQ(cfg.survival_probability, 0.99);
    EXPECT_EQ(cfg.detection_probability, 0.98);
    EXPECT_EQ(cfg.model.sigma_x, 2.33);
    EXPECT_EQ(cfg.model.sigma_y, 2.33);
    EXPECT_EQ(cfg.model.sigma_obs, 0.2);
    EXPECT_EQ(cfg.model.sampling_interval, 1.0);
    EXPECT_EQ(cfg.filter.prune_threshold, 1e-5);
    EXPECT_EQ(cfg.filter.merge_threshold, 0.004);
    EXPECT_EQ(cfg.filter.max_components, 200u);
    EXPECT_EQ(cfg.ospa.cutoff, 30.0);
    EXPECT_EQ(cfg.ospa.order, 1.0);
    EXPECT_NEAR(cfg.effective_link_gate(), 7.6, 1e-15);
}

TEST(Config, ParsesKeysAndComments) {
    std::istringstream in("# comment\np_d = 0.9   # trailing\norder_l = inf\nseed=7\nscenario = single\nout = /tmp/x\n");
    const auto cfg = parse_config(in);
    EXPECT_EQ(cfg.detection_probability, 0.9);
    EXPECT_TRUE(cfg.ospa.infinite_order());
    EXPECT_EQ(cfg.seed, 7u);
    EXPECT_EQ(cfg.scenario, "single");
    EXPECT_EQ(cfg.output_dir, fs::path("/tmp/x"));
}

TEST(Config, ErrorsNameLineAndKey) {
    auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_config(in, "run.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("p_d = 0.9\nbogus = 1\n").find("run.cfg:2: unknown key 'bogus'"), std::string::npos);
    EXPECT_NE(message("p_d = x\n").find("run.cfg:1: bad value for 'p_d'"), std::string::npos);
    EXPECT_NE(message("seed = 1\nseed = 2\n").find("run.cfg:2: key 'seed' already set on line 1"), std::string::npos);
    EXPECT_NE(message("just words\n").find("run.cfg:1"), std::string::npos);
    EXPECT_NE(message("p_d = 1.5\n").find("p_d must lie in [0, 1]"), std::string::npos);
    EXPECT_NE(message("j_max = -3\n").find("j_max"), std::string::npos);
}

}  // namespace
