// End-to-end tests driving the installed binary through a shell. The binary
// path comes in through OCCSORT_CLI_BIN at compile time.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "occsort/mot_io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(OCCSORT_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  RunResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir_;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("occsort_cli_") + info->name() + "_" + std::to_string(getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& leaf) const { return (dir_ / leaf).string(); }

  // A small deterministic sequence most tests track or evaluate.
  fs::path make_crossing(const std::string& name = "seq") {
    const auto r = run_cli("simulate --preset crossing -o " + path(name));
    EXPECT_EQ(r.exit_code, 0) << r.output;
    return dir_ / name;
  }
};

TEST_F(CliTest, NoSubcommandIsUsageError) {
  const auto r = run_cli("");
  EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = run_cli("--help");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("track"), std::string::npos);
  EXPECT_NE(r.output.find("simulate"), std::string::npos);
}

TEST_F(CliTest, SimulateWritesSequenceLayout) {
  const fs::path seq = make_crossing();
  EXPECT_TRUE(fs::exists(seq / "det" / "det.txt"));
  EXPECT_TRUE(fs::exists(seq / "gt" / "gt.txt"));
  EXPECT_TRUE(fs::exists(seq / "seqinfo.ini"));

  const auto parsed = occsort::io::parse_detections(seq / "det" / "det.txt");
  EXPECT_TRUE(parsed.rejected.empty());
  EXPECT_FALSE(parsed.frames.empty());
  const auto info = occsort::io::parse_seqinfo(seq / "seqinfo.ini");
  EXPECT_EQ(info.name, "seq");
  EXPECT_EQ(info.seq_length, 60);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  make_crossing("a");
  make_crossing("b");
  EXPECT_EQ(slurp(dir_ / "a" / "det" / "det.txt"), slurp(dir_ / "b" / "det" / "det.txt"));
  EXPECT_EQ(slurp(dir_ / "a" / "gt" / "gt.txt"), slurp(dir_ / "b" / "gt" / "gt.txt"));
}

TEST_F(CliTest, SimulateNeedsExactlyOneSource) {
  EXPECT_EQ(run_cli("simulate -o " + path("x")).exit_code, 1);
  EXPECT_EQ(
      run_cli("simulate --preset crossing --spec nope.json -o " + path("x")).exit_code, 1);
  EXPECT_EQ(run_cli("simulate --preset bogus -o " + path("x")).exit_code, 1);
}

TEST_F(CliTest, SimulateBadSpecIsDataError) {
  {
    std::ofstream out(dir_ / "broken.json");
    out << "{ not json";
  }
  EXPECT_EQ(run_cli("simulate --spec " + path("broken.json") + " -o " + path("x")).exit_code, 2);
}

TEST_F(CliTest, SimulateCustomSpec) {
  {
    std::ofstream out(dir_ / "spec.json");
    out << R"({
      "seed": 11,
      "frame_count": 30,
      "actors": [
        {"entry": 1, "exit": 30, "box": [0, 0, 50, 80], "vx": 2.0},
        {"entry": 5, "exit": 25, "box": [400, 0, 460, 90], "vy": 1.5}
      ],
      "detector": {"miss_probability": 0.1, "jitter_sigma": 0.3, "occlusion": "shrink"}
    })";
  }
  const auto r = run_cli("simulate --spec " + path("spec.json") + " -o " + path("custom"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  const auto info = occsort::io::parse_seqinfo(dir_ / "custom" / "seqinfo.ini");
  EXPECT_EQ(info.seq_length, 30);
}

TEST_F(CliTest, SimulateRejectsUnknownOcclusionMode) {
  {
    std::ofstream out(dir_ / "spec.json");
    out << R"({"frame_count": 10,
               "actors": [{"entry": 1, "exit": 10, "box": [0, 0, 10, 10]}],
               "detector": {"occlusion": "mask"}})";
  }
  EXPECT_EQ(run_cli("simulate --spec " + path("spec.json") + " -o " + path("x")).exit_code, 2);
}

TEST_F(CliTest, TrackWritesParseableResults) {
  const fs::path seq = make_crossing();
  const auto r = run_cli("track " + seq.string() + " -o " + path("out"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("sequence"), std::string::npos);
  EXPECT_NE(r.output.find("TOTAL"), std::string::npos);

  const fs::path results = dir_ / "out" / "seq.txt";
  ASSERT_TRUE(fs::exists(results));
  const auto parsed = occsort::io::parse_detections(results);
  EXPECT_TRUE(parsed.rejected.empty());
  EXPECT_FALSE(parsed.frames.empty());
  for (const auto& [frame, rows] : parsed.frames) {
    for (const auto& row : rows) EXPECT_GT(row.id, 0);
  }
}

TEST_F(CliTest, TrackAcceptsBareDetectionFile) {
  const fs::path seq = make_crossing();
  const auto r =
      run_cli("track " + (seq / "det" / "det.txt").string() + " -o " + path("out"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "det.txt"));
}

TEST_F(CliTest, TrackMissingInputIsDataError) {
  EXPECT_EQ(run_cli("track " + path("nowhere") + " -o " + path("out")).exit_code, 2);
}

TEST_F(CliTest, TrackOverlayWritesCsv) {
  const fs::path seq = make_crossing();
  const auto r = run_cli("track " + seq.string() + " -o " + path("out") + " --overlay");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  const std::string overlay = slurp(dir_ / "out" / "seq.overlay.csv");
  EXPECT_EQ(overlay.rfind("frame,id,left,top,width,height,center_x,center_y\n", 0), 0u);
}

TEST_F(CliTest, TrackThreadCountDoesNotChangeResults) {
  fs::create_directories(dir_ / "set");
  ASSERT_EQ(run_cli("simulate --preset staggered --seed 1 -o " + path("set/seq_a")).exit_code, 0);
  ASSERT_EQ(run_cli("simulate --preset staggered --seed 2 -o " + path("set/seq_b")).exit_code, 0);

  ASSERT_EQ(run_cli("track " + path("set") + " -o " + path("one") + " --threads 1").exit_code, 0);
  ASSERT_EQ(run_cli("track " + path("set") + " -o " + path("two") + " --threads 2").exit_code, 0);

  EXPECT_EQ(slurp(dir_ / "one" / "seq_a.txt"), slurp(dir_ / "two" / "seq_a.txt"));
  EXPECT_EQ(slurp(dir_ / "one" / "seq_b.txt"), slurp(dir_ / "two" / "seq_b.txt"));
  EXPECT_FALSE(slurp(dir_ / "one" / "seq_a.txt").empty());
}

TEST_F(CliTest, EvalGroundTruthAgainstItselfIsPerfect) {
  const fs::path seq = make_crossing();
  const auto r = run_cli("eval " + seq.string() + " " + (seq / "gt" / "gt.txt").string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("mota=1.000000"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("ids=0"), std::string::npos);
}

TEST_F(CliTest, EvalTrackedResultsReportsMetrics) {
  const fs::path seq = make_crossing();
  ASSERT_EQ(run_cli("track " + seq.string() + " -o " + path("out")).exit_code, 0);
  const auto r =
      run_cli("eval " + seq.string() + " " + path("out/seq.txt") + " --gate 0.5");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("mota="), std::string::npos);
  EXPECT_NE(r.output.find("MOTP"), std::string::npos);
}

TEST_F(CliTest, EvalSurfacesIdSwitchCount) {
  {
    std::ofstream gt(dir_ / "gt.txt"), res(dir_ / "res.txt");
    for (int f = 1; f <= 10; ++f) {
      gt << f << ",1,0,0,10,10,1,1,1\n";
      res << f << "," << (f <= 5 ? 1 : 2) << ",0,0,10,10,1,-1,-1,-1\n";
    }
  }
  const auto r = run_cli("eval " + path("gt.txt") + " " + path("res.txt"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("ids=1"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("mota=0.900000"), std::string::npos) << r.output;
}

TEST_F(CliTest, EvalWithoutGroundTruthIsDataError) {
  fs::create_directories(dir_ / "empty");
  {
    std::ofstream out(dir_ / "res.txt");
    out << "1,1,0,0,10,10,1,-1,-1,-1\n";
  }
  EXPECT_EQ(run_cli("eval " + path("empty") + " " + path("res.txt")).exit_code, 2);
}

TEST_F(CliTest, SweepEmitsFullGrid) {
  const fs::path seq = make_crossing();
  const auto r = run_cli("sweep " + seq.string() +
                         " --co 0.6,0.8 --ct 0.3:0.4:0.1 -o " + path("grid.csv"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("# grid points: 4"), std::string::npos);

  std::istringstream csv(slurp(dir_ / "grid.csv"));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(csv, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "co,ct,mota,ids,fm");
}

TEST_F(CliTest, SinglePointSweepMatchesTrackPlusEval) {
  const fs::path seq = make_crossing();
  ASSERT_EQ(run_cli("track " + seq.string() + " -o " + path("out")).exit_code, 0);
  const auto eval = run_cli("eval " + seq.string() + " " + path("out/seq.txt"));
  ASSERT_EQ(eval.exit_code, 0) << eval.output;

  // 0.75 / 0.35 are the tracker's default confidence thresholds, so the lone
  // grid point must reproduce the plain track+eval numbers.
  const auto sweep = run_cli("sweep " + seq.string() +
                             " --co 0.75 --ct 0.35 -o " + path("grid.csv"));
  ASSERT_EQ(sweep.exit_code, 0) << sweep.output;

  std::istringstream csv(slurp(dir_ / "grid.csv"));
  std::string header, row;
  ASSERT_TRUE(std::getline(csv, header) && std::getline(csv, row));
  std::vector<std::string> fields;
  std::istringstream cells(row);
  for (std::string cell; std::getline(cells, cell, ',');) fields.push_back(cell);
  ASSERT_EQ(fields.size(), 5u) << row;

  const auto value_of = [&](const std::string& key) {
    const auto at = eval.output.find("\n" + key + "=");
    EXPECT_NE(at, std::string::npos) << eval.output;
    const auto start = at + key.size() + 2;
    return eval.output.substr(start, eval.output.find('\n', start) - start);
  };
  EXPECT_EQ(fields[2], value_of("mota"));
  EXPECT_EQ(fields[3], value_of("ids"));
  EXPECT_EQ(fields[4], value_of("fm"));
}

TEST_F(CliTest, SweepEmptyRangeIsUsageError) {
  const fs::path seq = make_crossing();
  EXPECT_EQ(run_cli("sweep " + seq.string() + " --co , --ct 0.3").exit_code, 1);
}

TEST_F(CliTest, SweepRequiresGroundTruth) {
  const fs::path seq = make_crossing();
  fs::remove(seq / "gt" / "gt.txt");
  EXPECT_EQ(run_cli("sweep " + seq.string() + " --co 0.7 --ct 0.3").exit_code, 2);
}

TEST_F(CliTest, ConfigFileControlsThreshold) {
  const fs::path seq = make_crossing();
  {
    std::ofstream out(dir_ / "cfg.json");
    out << R"({"detection_score_threshold": 2.0})";
  }
  const auto r = run_cli("track " + seq.string() + " -o " + path("out") + " --config " +
                         path("cfg.json"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(slurp(dir_ / "out" / "seq.txt").empty());  // every detection filtered out
}

TEST_F(CliTest, UnknownConfigKeyIsDataError) {
  const fs::path seq = make_crossing();
  {
    std::ofstream out(dir_ / "cfg.json");
    out << R"({"detection_threshold": 0.5})";
  }
  const auto r = run_cli("track " + seq.string() + " -o " + path("out") + " --config " +
                         path("cfg.json"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("unknown key"), std::string::npos);
}

TEST_F(CliTest, CommandLineOverridesConfigFile) {
  const fs::path seq = make_crossing();
  {
    std::ofstream out(dir_ / "cfg.json");
    out << R"({"detection_score_threshold": 2.0})";
  }
  const auto r = run_cli("track " + seq.string() + " -o " + path("out") + " --config " +
                         path("cfg.json") + " --detection_score_threshold 0.5");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_FALSE(slurp(dir_ / "out" / "seq.txt").empty());
}

TEST_F(CliTest, EnvironmentOverridesConfigFile) {
  const fs::path seq = make_crossing();
  {
    std::ofstream out(dir_ / "cfg.json");
    out << R"({"detection_score_threshold": 0.5})";
  }
  const std::string cmd = "OCCSORT_DETECTION_SCORE_THRESHOLD=2.0 " + std::string(OCCSORT_CLI_BIN) +
                          " track " + seq.string() + " -o " + path("out") + " --config " +
                          path("cfg.json") + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[4096];
  std::string output;
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
  const int status = pclose(pipe);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0) << output;
  EXPECT_TRUE(slurp(dir_ / "out" / "seq.txt").empty());  // env threshold dropped everything
}

TEST_F(CliTest, BenchReportsThroughput) {
  const auto r = run_cli("bench --frames 50 --actors 4 --seed 3");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("frames=50"), std::string::npos);
  EXPECT_NE(r.output.find("fps="), std::string::npos);
  EXPECT_NE(r.output.find("core_seconds="), std::string::npos);
}

}  // namespace
