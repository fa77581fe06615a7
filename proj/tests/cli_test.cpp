#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "rinorm/corpus_io.hpp"

namespace fs = std::filesystem;

namespace rinorm {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(RINORM_TEST_WORK_DIR) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  Result run(const std::string& args, const std::string& sub = ".") {
    const fs::path cwd = dir_ / sub;
    fs::create_directories(cwd);
    const std::string cmd = "cd '" + cwd.string() + "' && '" RINORM_CLI "' " + args + " > out.txt 2> err.txt";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(cwd / "out.txt"), read_file(cwd / "err.txt")};
  }

  std::string file(const std::string& rel) { return read_file(dir_ / rel); }

  fs::path dir_;
};

TEST_F(Cli, ParseSpan) {
  const Result r = run("parse-span 'the next day'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Offset{1, day, After}\n");
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("train --no-such-flag").code, 1);
  EXPECT_EQ(run("parse-span").code, 1);
  EXPECT_EQ(run("--set novalue stats").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, TrainWithoutGoldExitsTwo) {
  ASSERT_EQ(run("gen-synthetic --documents 3 --out corpus").code, 0);
  std::string doc = file("corpus/synthetic-0001.json");
  const auto pos = doc.find("\"gold_anchors\": {");
  ASSERT_NE(pos, std::string::npos);
  doc = doc.substr(0, pos) + "\"gold_anchors\": null\n}\n";
  write_file(dir_ / "corpus/synthetic-0001.json", doc);
  const Result r = run("train --corpus corpus");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gold_anchors"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("synthetic-0001.json"), std::string::npos) << r.err;
  EXPECT_EQ(run("stats --corpus missing").code, 2);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  write_file(dir_ / "run.cfg", "synthetic.documents = 5\ncorpus_dir = from_config\n");
  ASSERT_EQ(run("--config run.cfg gen-synthetic").code, 0);
  EXPECT_EQ(corpus_files(dir_ / "from_config").size(), 5u);
  ASSERT_EQ(run("--config run.cfg gen-synthetic --documents 7 --out from_flag").code, 0);
  EXPECT_EQ(corpus_files(dir_ / "from_flag").size(), 7u);
  ASSERT_EQ(run("--config run.cfg --set report_dir=r stats --corpus from_flag").code, 0);
  const std::string report = file("r/anchor_stats.txt");
  EXPECT_NE(report.find("# corpus_dir = from_flag\n"), std::string::npos);
  EXPECT_NE(report.find("# synthetic.documents = 5\n"), std::string::npos);
  write_file(dir_ / "bad.cfg", "feature.window = wide\n");
  const Result bad = run("--config bad.cfg stats");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("bad.cfg:1"), std::string::npos);
}

TEST_F(Cli, ConvertMatchesLibraryReader) {
  fs::create_directories(dir_ / "xml");
  fs::copy_file(RINORM_TEST_DATA_DIR "/figure1.xml", dir_ / "xml/figure1.xml");
  fs::copy_file(RINORM_TEST_DATA_DIR "/figure1.gold.json", dir_ / "xml/figure1.gold.json");
  ASSERT_EQ(run("convert --input xml --out corpus").code, 0);
  Document expected = read_i2b2_xml(read_file(RINORM_TEST_DATA_DIR "/figure1.xml"), "figure1");
  attach_gold(expected, read_file(RINORM_TEST_DATA_DIR "/figure1.gold.json"));
  EXPECT_EQ(file("corpus/figure1.json"), write_canonical(expected));
  ASSERT_EQ(run("predict --oracle --corpus corpus --out preds").code, 0);
  const std::string preds = file("preds/figure1.json");
  for (const char* v : {"2017-04-27", "2017-04-28", "2017-04-29"}) EXPECT_NE(preds.find(v), std::string::npos) << v;
}

TEST_F(Cli, EndToEndIsDeterministicAndRelaxedDominatesStrict) {
  for (const std::string sub : {"a", "b"}) {
    ASSERT_EQ(run("--set synthetic.documents=40 gen-synthetic", sub).code, 0);
    ASSERT_EQ(run("train", sub).code, 0);
    ASSERT_EQ(run("predict", sub).code, 0);
    ASSERT_EQ(run("evaluate --mode strict", sub).code, 0);
    ASSERT_EQ(run("evaluate --mode relaxed", sub).code, 0);
  }
  for (const char* rel : {"corpus/synthetic-0000.json", "models/anchor_models.txt", "reports/evaluation_strict.json",
                          "reports/evaluation_relaxed.txt", "reports/value_comparison.txt"}) {
    EXPECT_EQ(file(std::string("a/") + rel), file(std::string("b/") + rel)) << rel;
  }
  const auto accuracy = [&](const std::string& rel) {
    const std::string s = file(rel);
    const auto pos = s.find("\"normalization\"");
    const auto acc = s.find("\"accuracy\": ", pos);
    return std::stod(s.substr(acc + 12));
  };
  EXPECT_GE(accuracy("a/reports/evaluation_relaxed.json"), accuracy("a/reports/evaluation_strict.json"));
}

}  // namespace
}  // namespace rinorm
