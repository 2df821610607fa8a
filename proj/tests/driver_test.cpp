#include "differential.hpp"

#include "fpv/driver.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fpv {
namespace {

VerifyConfig half_config() {
  VerifyConfig cfg;
  cfg.widths.fp_formats = {half_format()};
  cfg.widths.int_widths = {16};
  cfg.solver = testing::test_solver();
  return cfg;
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Zeroes every timing so two reports can be compared.
Report without_seconds(Report r) {
  for (auto &f : r.files)
    for (auto &t : f.transforms)
      for (auto &i : t.instances)
        i.seconds = 0;
  return r;
}

const TransformReport &only(const Report &r) {
  EXPECT_EQ(r.files.size(), 1u);
  EXPECT_EQ(r.files.at(0).transforms.size(), 1u);
  return r.files.at(0).transforms.at(0);
}

TEST(DriverTest, BugCorpusIsIncorrectAtHalf) {
  std::vector<std::string> paths;
  for (const char *name : {"pr26746", "pr26958", "pr26943", "pr27036"})
    paths.push_back(std::string(FPV_CORPUS_DIR) + "/" + name + ".opt");
  Report r = verify_files(paths, half_config());
  Counts c = count(r);
  EXPECT_EQ(c.incorrect, 4u);
  for (auto &f : r.files)
    for (auto &t : f.transforms) {
      ASSERT_EQ(t.status, TransformStatus::Incorrect) << t.name;
      for (auto &i : t.instances)
        if (i.status == InstanceStatus::Invalid) {
          ASSERT_TRUE(i.counterexample);
          EXPECT_EQ(i.counterexample->replay, "confirmed") << t.name;
        }
    }
  EXPECT_EQ(exit_code(r), 1);
}

TEST(DriverTest, FixedTransformIsCorrect) {
  Report r = verify_text("fixed", "Name: fixed\n%r = fadd %x, -0.0\n=>\n%r = %x\n",
                         half_config());
  EXPECT_EQ(only(r).status, TransformStatus::Correct);
  EXPECT_EQ(exit_code(r), 0);
}

TEST(DriverTest, EmptyInputGivesEmptyReport) {
  Report r = verify_text("empty", "", half_config());
  ASSERT_EQ(r.files.size(), 1u);
  EXPECT_TRUE(r.files[0].transforms.empty());
  EXPECT_EQ(exit_code(r), 0);
}

TEST(DriverTest, ParseErrorIsReportedPerTransform) {
  Report r = verify_text("bad",
                         "Name: ok\n%r = fadd %x, -0.0\n=>\n%r = %x\n\n"
                         "Name: bad\n%r = fadd %q\n=>\n%r = %x\n",
                         half_config());
  ASSERT_EQ(r.files.at(0).transforms.size(), 2u);
  EXPECT_EQ(r.files[0].transforms[0].status, TransformStatus::Correct);
  EXPECT_EQ(r.files[0].transforms[1].status, TransformStatus::Error);
  EXPECT_FALSE(r.files[0].transforms[1].error.empty());
  EXPECT_EQ(exit_code(r), 3);
}

TEST(DriverTest, UnreadableFileIsAnError) {
  Report r = verify_files({"/nonexistent/x.opt"}, half_config());
  ASSERT_EQ(r.files.size(), 1u);
  EXPECT_FALSE(r.files[0].error.empty());
  EXPECT_EQ(exit_code(r), 3);
}

TEST(DriverTest, JsonRoundTrip) {
  auto cfg = half_config();
  cfg.brute_force = true;
  Report r = verify_text("mix",
                         "Name: a\n%a = fsub -0.0, %x\n%r = fsub 0.0, %a\n=>\n"
                         "%r = %x\n\n"
                         "Name: b\n%r = fadd %x, undef\n=>\n%r = nan\n",
                         cfg);
  std::string json = render(r, ReportFormat::Json);
  Report back = parse_report_json(json);
  EXPECT_EQ(back, r);
  EXPECT_EQ(render(back, ReportFormat::Json), json);
  EXPECT_FALSE(render(r, ReportFormat::Text).empty());
}

TEST(DriverTest, ReportDoesNotDependOnJobs) {
  std::string text = slurp(std::string(FPV_CORPUS_DIR) + "/undef.opt") +
                     slurp(std::string(FPV_CORPUS_DIR) + "/pr26746.opt");
  auto cfg = half_config();
  cfg.jobs = 1;
  Report serial = verify_text("jobs", text, cfg);
  cfg.jobs = 4;
  Report parallel = verify_text("jobs", text, cfg);
  EXPECT_EQ(without_seconds(serial), without_seconds(parallel));
}

TEST(DriverTest, StubSolverTimeoutIsUnverified) {
  auto cfg = half_config();
  cfg.solver.command = "sleep 30";
  cfg.solver.timeout_s = 1;
  Report r = verify_text("slow", "Name: slow\n%r = fadd %x, -0.0\n=>\n%r = %x\n",
                         cfg);
  const TransformReport &t = only(r);
  EXPECT_EQ(t.status, TransformStatus::Unverified);
  ASSERT_EQ(t.instances.size(), 1u);
  EXPECT_EQ(t.instances[0].status, InstanceStatus::Timeout);
  EXPECT_EQ(exit_code(r), 2);
}

TEST(DriverTest, DumpWritesQueryAndTranscript) {
  auto dir = std::filesystem::temp_directory_path() / "fpv-driver-dump";
  std::filesystem::remove_all(dir);
  auto cfg = half_config();
  cfg.dump_dir = dir.string();
  verify_text("dump", "Name: d\n%r = fadd %x, -0.0\n=>\n%r = %x\n", cfg);
  size_t smt2 = 0, out = 0;
  for (auto &e : std::filesystem::directory_iterator(dir)) {
    smt2 += e.path().extension() == ".smt2";
    out += e.path().extension() == ".out";
    if (e.path().extension() == ".smt2") {
      EXPECT_NE(slurp(e.path()).find("(check-sat)"), std::string::npos);
    }
  }
  EXPECT_EQ(smt2, 1u);
  EXPECT_EQ(out, 1u);
  std::filesystem::remove_all(dir);
}

TEST(DriverTest, CrossCheckAgreesOnSmallCorpus) {
  auto cfg = half_config();
  cfg.brute_force = true;
  Report r = verify_files({std::string(FPV_CORPUS_DIR) + "/undef.opt"}, cfg);
  unsigned agreed = 0;
  for (auto &t : r.files.at(0).transforms) {
    ASSERT_TRUE(t.cross_check) << t.name;
    EXPECT_TRUE(t.cross_check->disagreements.empty()) << t.name;
    agreed += t.cross_check->agreed;
  }
  EXPECT_GT(agreed, 0u);
}

TEST(DriverTest, ExitCodeContract) {
  auto with = [](std::vector<InstanceStatus> ss) {
    Report r;
    r.files.emplace_back();
    TransformReport t;
    for (auto s : ss) {
      InstanceResult i;
      i.status = s;
      t.instances.push_back(i);
    }
    t.status = summarize(t.instances);
    r.files[0].transforms.push_back(t);
    return r;
  };
  using S = InstanceStatus;
  EXPECT_EQ(exit_code(with({S::Valid})), 0);
  EXPECT_EQ(exit_code(with({S::Valid, S::Invalid, S::Error})), 1);
  EXPECT_EQ(exit_code(with({S::Valid, S::Error})), 3);
  EXPECT_EQ(exit_code(with({S::Timeout, S::Error})), 3);
  EXPECT_EQ(exit_code(with({S::Timeout})), 2);
  EXPECT_EQ(exit_code(with({S::Unknown, S::Valid})), 2);
  EXPECT_EQ(summarize({}), TransformStatus::Error);
}

} // namespace
} // namespace fpv
