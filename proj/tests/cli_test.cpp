#include "c2g/bench.hpp"
#include "c2g/colorspace.hpp"
#include "c2g/image_io.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

namespace c2g {
namespace {

using test_util::slurp;
using test_util::spit;
using test_util::TempDir;

int run(const std::string& args, const TempDir& dir) {
  const std::string cmd = std::string(C2G_CLI_PATH) + " " + args + " >" + (dir / "stdout.txt").string() + " 2>" +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::filesystem::create_directories(dir_ / "data");
    for (int i = 0; i < 3; ++i) {
      write_rgb(oracle::synthetic_scene(20, 22, 40 + i), dir_ / "data" / ("s" + std::to_string(i) + ".png"));
    }
    color_ = dir_ / "data" / "s0.png";
  }
  std::string out() const { return slurp(dir_ / "stdout.txt"); }
  std::string err() const { return slurp(dir_ / "stderr.txt"); }

  TempDir dir_{"cli"};
  std::filesystem::path color_;
};

TEST_F(CliTest, ConvertAdaptiveWritesGrayAndTrace) {
  ASSERT_EQ(run("convert --input " + q(color_) + " --output " + q(dir_ / "g.png") + " --trace " + q(dir_ / "t.csv"), dir_),
            0)
      << err();
  EXPECT_NE(out().find("chosen_c "), std::string::npos);
  const GrayImage g = read_gray(dir_ / "g.png");
  EXPECT_EQ(g.height(), 20);
  EXPECT_EQ(g.width(), 22);

  std::istringstream trace(slurp(dir_ / "t.csv"));
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line, "c,score");
  int rows = 0;
  while (std::getline(trace, line)) ++rows;
  EXPECT_EQ(rows, 20);

  // The printed score is the score of the written file.
  const RgbImage ref = read_rgb(color_);
  std::istringstream printed(out());
  std::string key;
  double chosen = 0, score = 0;
  printed >> key >> chosen >> key >> score;
  EXPECT_NEAR(c2g_ssim(ref, g, MetricConfig{}), score, 1e-6);
}

TEST_F(CliTest, ConvertBaselinesMatchLibrary) {
  const RgbImage ref = read_rgb(color_);
  ASSERT_EQ(run("convert --input " + q(color_) + " --output " + q(dir_ / "n.png") + " --method ntsc", dir_), 0);
  EXPECT_EQ(read_gray(dir_ / "n.png").values(), quantize_8bit(ntsc_gray(ref)).values());
  ASSERT_EQ(run("convert --input " + q(color_) + " --output " + q(dir_ / "f.png") + " --method svd-fixed --c 0.5", dir_),
            0);
  EXPECT_EQ(read_gray(dir_ / "f.png").values(),
            quantize_8bit(decolor_fixed(ref, 0.5, RankPolicy::full())).values());
}

TEST_F(CliTest, ScoreAndMaps) {
  ASSERT_EQ(run("convert --input " + q(color_) + " --output " + q(dir_ / "n.png") + " --method ntsc", dir_), 0);
  ASSERT_EQ(run("score --color " + q(color_) + " --gray " + q(dir_ / "n.png") + " --maps " + q(dir_ / "maps"), dir_), 0)
      << err();
  std::istringstream printed(out());
  std::string key;
  double score = 0;
  printed >> key >> score;
  EXPECT_EQ(key, "score");
  EXPECT_NEAR(score, c2g_ssim(read_rgb(color_), read_gray(dir_ / "n.png"), MetricConfig{}), 1e-6);
  for (const char* name : {"L_map.png", "C_map.png", "S_map.png", "q_map.png"}) {
    EXPECT_EQ(read_gray(dir_ / "maps" / name).height(), 20) << name;
  }
}

TEST_F(CliTest, EvalWritesAllOutputsDeterministically) {
  const std::string base = "eval --dataset " + q(dir_ / "data") + " --methods ntsc,svd-fixed,svd-adaptive";
  ASSERT_EQ(run(base + " --report " + q(dir_ / "a.json") + " --csv " + q(dir_ / "a.csv") + " --plot-data " +
                    q(dir_ / "p.csv"),
                dir_),
            0)
      << err();
  ASSERT_EQ(run(base + " --jobs 3 --report " + q(dir_ / "b.json"), dir_), 0);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
  const QualityReport r = parse_report_json(slurp(dir_ / "a.json"));
  EXPECT_EQ(r.entries.size(), 9u);
  EXPECT_EQ(r.dataset_name, "data");
  EXPECT_EQ(slurp(dir_ / "a.csv"), report_csv(r));
  EXPECT_EQ(slurp(dir_ / "p.csv").substr(0, 34), "method,success_rate,average_score\n");
}

TEST_F(CliTest, ConfigFileAndFlagOverride) {
  spit(dir_ / "c.cfg", "kind = synthetic\nepsilon = 1\n");
  ASSERT_EQ(run("--config " + q(dir_ / "c.cfg") + " eval --dataset " + q(dir_ / "data") +
                    " --methods ntsc,cie-y --epsilon 0 --report " + q(dir_ / "r.json"),
                dir_),
            0)
      << err();
  const std::string json = slurp(dir_ / "r.json");
  EXPECT_NE(json.find("\"synthetic\""), std::string::npos);
  EXPECT_NE(json.find("\"epsilon\": 0.0"), std::string::npos);
}

TEST_F(CliTest, ExternalMethodIsIngested) {
  std::filesystem::create_directories(dir_ / "ext");
  for (int i = 0; i < 3; ++i) {
    const std::string id = "s" + std::to_string(i);
    write_gray(cie_y_gray(read_rgb(dir_ / "data" / (id + ".png"))), dir_ / "ext" / (id + ".png"));
  }
  ASSERT_EQ(run("eval --dataset " + q(dir_ / "data") + " --methods cie-y --external other=" + q(dir_ / "ext") +
                    " --report " + q(dir_ / "r.json"),
                dir_),
            0)
      << err();
  const QualityReport r = parse_report_json(slurp(dir_ / "r.json"));
  ASSERT_EQ(r.entries.size(), 6u);
  for (std::size_t i = 0; i < r.entries.size(); i += 2) EXPECT_EQ(r.entries[i].score, r.entries[i + 1].score);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("", dir_), 1);
  EXPECT_EQ(run("convert --input " + q(color_), dir_), 1);
  EXPECT_EQ(run("convert --input " + q(color_) + " --output " + q(dir_ / "g.png") + " --method median", dir_), 1);
  EXPECT_EQ(run("convert --input " + q(color_) + " --output " + q(dir_ / "g.png") + " --method ntsc --c 0.3", dir_), 1);
  EXPECT_EQ(run("convert --input " + q(color_) + " --output " + q(dir_ / "g.png") + " --rank k=0", dir_), 1);
  EXPECT_EQ(run("convert --input " + q(dir_ / "none.png") + " --output " + q(dir_ / "g.png"), dir_), 2);
  EXPECT_NE(err().find("none.png"), std::string::npos);
  EXPECT_EQ(run("eval --dataset " + q(dir_ / "nowhere") + " --report " + q(dir_ / "r.json"), dir_), 2);

  std::filesystem::create_directories(dir_ / "empty");
  EXPECT_EQ(run("eval --dataset " + q(dir_ / "empty") + " --report " + q(dir_ / "r.json"), dir_), 3);

  write_gray(GrayImage(Plane::Constant(4, 4, 0.5)), dir_ / "small.png");
  EXPECT_EQ(run("score --color " + q(color_) + " --gray " + q(dir_ / "small.png"), dir_), 3);

  spit(dir_ / "bad.cfg", "colour = red\n");
  EXPECT_EQ(run("--config " + q(dir_ / "bad.cfg") + " score --color " + q(color_) + " --gray " + q(color_), dir_), 1);
}

}  // namespace
}  // namespace c2g
