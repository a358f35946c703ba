#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gmcphd/csv.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gmcphd;

fs::path scratch_dir(const std::string& suffix = "") {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const fs::path dir = fs::temp_directory_path() / "gmcphd_cli_test" / (std::string(info->name()) + suffix);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs the CLI; stdout/stderr go to files in `dir`. Returns the exit code.
int run_cli(const std::string& args, const fs::path& dir) {
    const std::string cmd = std::string("\"") + GMCPHD_CLI_PATH + "\" " + args + " >\"" + (dir / "stdout.txt").string() +
                            "\" 2>\"" + (dir / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out_flag(const fs::path& dir) { return "--out \"" + dir.string() + "\""; }

TEST(CliSimulate, DefaultScenario) {
    const auto dir = scratch_dir();
    ASSERT_EQ(run_cli("simulate " + out_flag(dir), dir), 0);
    const auto truth = io::read_track_points(dir / "truth.csv");
    std::map<long, int> ids;
    long last = 0;
    for (const auto& p : truth) {
        ids[p.track_id] = 1;
        last = std::max(last, p.time_index);
    }
    EXPECT_EQ(ids.size(), 12u);
    EXPECT_EQ(last, 99);
    EXPECT_EQ(io::read_detections(dir / "detections.csv").size(), 100u);
    const std::string out = read_text(dir / "stdout.txt");
    EXPECT_NE(out.find("tracks: 12"), std::string::npos);
    EXPECT_NE(out.find("steps: 100"), std::string::npos);
}

TEST(CliSimulate, SameSeedSameBytes) {
    const auto a = scratch_dir("_a"), b = scratch_dir("_b");
    ASSERT_EQ(run_cli("simulate --seed 7 " + out_flag(a), a), 0);
    ASSERT_EQ(run_cli("simulate --seed 7 " + out_flag(b), b), 0);
    EXPECT_EQ(read_text(a / "truth.csv"), read_text(b / "truth.csv"));
    EXPECT_EQ(read_text(a / "detections.csv"), read_text(b / "detections.csv"));

    ASSERT_EQ(run_cli("track --detections \"" + (a / "detections.csv").string() + "\" " + out_flag(a), a), 0);
    ASSERT_EQ(run_cli("track --detections \"" + (b / "detections.csv").string() + "\" " + out_flag(b), b), 0);
    EXPECT_EQ(read_text(a / "tracks.csv"), read_text(b / "tracks.csv"));
    EXPECT_EQ(read_text(a / "cardinality.csv"), read_text(b / "cardinality.csv"));
}

TEST(CliSimulate, ZeroDetectionProbability) {
    const auto dir = scratch_dir();
    ASSERT_EQ(run_cli("simulate --p-d 0 " + out_flag(dir), dir), 0);
    std::ifstream in(dir / "detections.csv");
    std::string line;
    std::getline(in, line);
    long expected = 0;
    while (std::getline(in, line)) EXPECT_EQ(line, std::to_string(expected++) + ",,");
    EXPECT_EQ(expected, 100);
}

TEST(CliErrors, MalformedConfigExitsTwo) {
    const auto dir = scratch_dir();
    std::ofstream(dir / "bad.cfg") << "p_d = 0.9\nsigma_q = 3\n";
    EXPECT_EQ(run_cli("simulate --config \"" + (dir / "bad.cfg").string() + "\" " + out_flag(dir), dir), 2);
    const std::string err = read_text(dir / "stderr.txt");
    EXPECT_NE(err.find("bad.cfg:2"), std::string::npos) << err;
    EXPECT_NE(err.find("sigma_q"), std::string::npos) << err;
    EXPECT_EQ(run_cli("simulate --order-l 0.5 " + out_flag(dir), dir), 2);
    EXPECT_EQ(run_cli("simulate --bogus-flag", dir), 2);
}

TEST(CliErrors, GapInDetectionsExitsThree) {
    const auto dir = scratch_dir();
    std::ofstream(dir / "d.csv") << "time_index,p_x_um,p_y_um\n0,1,1\n2,1,1\n";
    EXPECT_EQ(run_cli("track --detections \"" + (dir / "d.csv").string() + "\" " + out_flag(dir), dir), 3);
    EXPECT_NE(read_text(dir / "stderr.txt").find("frames 1..1 missing"), std::string::npos);
}

TEST(CliErrors, DisjointRangesExitThree) {
    const auto dir = scratch_dir();
    const std::string header = "track_id,time_index,p_x_um,v_x_um_s,p_y_um,v_y_um_s\n";
    std::ofstream(dir / "a.csv") << header << "0,0,0,0,0,0\n0,1,0,0,0,0\n";
    std::ofstream(dir / "b.csv") << header << "0,5,0,0,0,0\n";
    EXPECT_EQ(run_cli("evaluate --truth \"" + (dir / "a.csv").string() + "\" --tracks \"" + (dir / "b.csv").string() +
                          "\" " + out_flag(dir),
                      dir),
              3);
}

TEST(CliEvaluate, TruthAgainstItselfIsZero) {
    const auto dir = scratch_dir();
    ASSERT_EQ(run_cli("simulate " + out_flag(dir), dir), 0);
    const std::string truth = "\"" + (dir / "truth.csv").string() + "\"";
    ASSERT_EQ(run_cli("evaluate --truth " + truth + " --tracks " + truth + " " + out_flag(dir), dir), 0);
    for (const auto& r : io::read_ospa(dir / "ospa.csv")) {
        EXPECT_EQ(r.result.total, 0.0);
        EXPECT_EQ(r.result.localization, 0.0);
        EXPECT_EQ(r.result.cardinality, 0.0);
    }
    const std::string summary = read_text(dir / "ospa_summary.txt");
    EXPECT_EQ(summary.rfind("# OSPA cutoff_c=30 order_l=1\n", 0), 0u) << summary;
}

std::map<std::string, double> read_summary(const fs::path& p) {
    std::map<std::string, double> kv;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
    }
    return kv;
}

TEST(CliEvaluate, SummaryMeanEqualsColumnMean) {
    const auto dir = scratch_dir();
    ASSERT_EQ(run_cli("simulate --seed 3 " + out_flag(dir), dir), 0);
    ASSERT_EQ(run_cli("track --detections \"" + (dir / "detections.csv").string() + "\" " + out_flag(dir), dir), 0);
    ASSERT_EQ(run_cli("evaluate --truth \"" + (dir / "truth.csv").string() + "\" --tracks \"" +
                          (dir / "tracks.csv").string() + "\" --cutoff-c 20 --order-l 2 " + out_flag(dir),
                      dir),
              0);
    const auto rows = io::read_ospa(dir / "ospa.csv");
    ASSERT_EQ(rows.size(), 100u);
    double total = 0.0, loc = 0.0, card = 0.0;
    for (const auto& r : rows) {
        total += r.result.total;
        loc += r.result.localization;
        card += r.result.cardinality;
    }
    const auto kv = read_summary(dir / "ospa_summary.txt");
    EXPECT_NEAR(kv.at("mean_total"), total / 100.0, 1e-12);
    EXPECT_NEAR(kv.at("mean_localization"), loc / 100.0, 1e-12);
    EXPECT_NEAR(kv.at("mean_cardinality_err"), card / 100.0, 1e-12);
    EXPECT_NE(read_text(dir / "ospa_summary.txt").find("cutoff_c=20 order_l=2"), std::string::npos);
}

TEST(CliTrack, SingleObjectFollowsTruth) {
    const auto dir = scratch_dir();
    std::ofstream(dir / "single.cfg") << "scenario = single\np_d = 1\n";
    const std::string cfg = "--config \"" + (dir / "single.cfg").string() + "\" ";
    ASSERT_EQ(run_cli("simulate " + cfg + out_flag(dir), dir), 0);
    ASSERT_EQ(run_cli("track " + cfg + "--detections \"" + (dir / "detections.csv").string() + "\" " + out_flag(dir),
                      dir),
              0);
    const auto truth = io::read_track_points(dir / "truth.csv");
    const auto tracks = io::read_track_points(dir / "tracks.csv");
    std::map<long, int> ids;
    for (const auto& p : tracks) ids[p.track_id] = 1;
    EXPECT_EQ(ids.size(), 1u);
    std::map<long, const TrackPoint*> truth_at;
    for (const auto& p : truth) truth_at[p.time_index] = &p;
    for (const auto& p : tracks) {
        if (p.time_index < 3) continue;
        const auto* t = truth_at.at(p.time_index);
        EXPECT_LT(std::hypot(p.p_x - t->p_x, p.p_y - t->p_y), 3.0 * 0.2) << "t=" << p.time_index;
    }
}

TEST(CliTrack, EmptyIntervalReportsNoObjects) {
    const auto dir = scratch_dir();
    ASSERT_EQ(run_cli("simulate " + out_flag(dir), dir), 0);
    ASSERT_EQ(run_cli("track --detections \"" + (dir / "detections.csv").string() + "\" " + out_flag(dir), dir), 0);
    std::ifstream in(dir / "cardinality.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "step,map_n,expected_n");
    std::map<long, long> map_n;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string step, n;
        std::getline(ss, step, ',');
        std::getline(ss, n, ',');
        map_n[std::stol(step)] = std::stol(n);
    }
    EXPECT_EQ(map_n.at(23), 0);
    EXPECT_EQ(map_n.at(24), 0);
}

TEST(CliAnalyze, ReportsMomentsAndTest) {
    const auto dir = scratch_dir();
    ASSERT_EQ(run_cli("simulate " + out_flag(dir), dir), 0);
    ASSERT_EQ(run_cli("analyze --tracks \"" + (dir / "truth.csv").string() + "\" " + out_flag(dir), dir), 0);
    const std::string report = read_text(dir / "normality.txt");
    EXPECT_NE(report.find("acceleration samples: m="), std::string::npos);
    EXPECT_NE(report.find("x: mean="), std::string::npos);
    EXPECT_NE(report.find("p_value="), std::string::npos);
    EXPECT_NE(report.find("Lilliefors"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "accelerations.csv"));
    EXPECT_TRUE(fs::exists(dir / "normal_qq.csv"));
}

TEST(CliAnalyze, ConstantVelocitySkipsTest) {
    const auto dir = scratch_dir();
    std::ofstream out(dir / "cv.csv");
    out << "track_id,time_index,p_x_um,v_x_um_s,p_y_um,v_y_um_s\n";
    for (int t = 0; t < 10; ++t) out << "0," << t << "," << 2 * t << ",2," << -t << ",-1\n";
    out.close();
    ASSERT_EQ(run_cli("analyze --tracks \"" + (dir / "cv.csv").string() + "\" " + out_flag(dir), dir), 0);
    const std::string report = read_text(dir / "normality.txt");
    EXPECT_NE(report.find("zero-variance sample, test skipped"), std::string::npos) << report;
    std::ifstream acc(dir / "accelerations.csv");
    std::string line;
    std::getline(acc, line);
    while (std::getline(acc, line)) EXPECT_EQ(line.substr(line.find(',', line.find(',') + 1)), ",0,0");
}

}  // namespace
