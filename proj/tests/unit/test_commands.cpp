#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <sstream>

#include "fluctwork/commands.hpp"
#include "fluctwork/sweep.hpp"

using namespace fluctwork;

namespace {

CommandOptions quiet() {
  CommandOptions o;
  o.timestamp = false;
  return o;
}

const char* kIdentity = R"({"initial": {"energies": [0, 1], "state": [0.3, 0.7]},
                            "grid": [0], "kernel": [["0", "0", 0, 1], ["1", "1", 0, 1]]})";
const char* kRandom7 = R"({"beta": 1.3, "initial": {"energies": [0, 0.4, 1.1], "state": [0.5, 0.3, 0.2]},
                           "grid": [-1, -0.5, 0, 0.25, 0.7, 1.5], "random_kernel": {"seed": 7}})";
const char* kNotGibbs = R"({"initial": {"energies": [0, 1]}, "grid": [0],
                            "kernel": [["0", "0", 0, 1], ["1", "0", 0, 1]]})";

}  // namespace

TEST(Commands, ValidateIdentityPassesWithZeroDeviation) {
  const auto r = run_subcommand_text("validate", quiet(), std::string(kIdentity));
  EXPECT_EQ(r.exit_code, kExitPass);
  EXPECT_EQ(r.report.body["max_gibbs_deviation"].get<double>(), 0.0);
  EXPECT_EQ(r.report.body["max_row_deviation"].get<double>(), 0.0);
}

TEST(Commands, ExitCodeContract) {
  EXPECT_EQ(run_subcommand_text("validate", quiet(), std::string(kNotGibbs)).exit_code, kExitViolation);
  EXPECT_EQ(run_subcommand_text("validate", quiet(), std::string("{\"initial\": ")).exit_code, kExitInputError);
  EXPECT_EQ(run_subcommand_text("validate", quiet(), std::nullopt).exit_code, kExitInputError);
  EXPECT_EQ(run_subcommand_text("nonsense", quiet(), std::string(kIdentity)).exit_code, kExitInputError);
  const auto missing_state = run_subcommand_text("identities", quiet(), std::string(kNotGibbs));
  EXPECT_EQ(missing_state.exit_code, kExitInputError);
  EXPECT_NE(missing_state.error.find("initial.state"), std::string::npos);
  CommandOptions bad = quiet();
  bad.epsilon = 1.5;
  EXPECT_EQ(run_subcommand("landauer", bad, std::nullopt).exit_code, kExitInputError);
  bad = quiet();
  bad.samples = -4;
  EXPECT_EQ(run_subcommand_text("sample", bad, std::string(kRandom7)).exit_code, kExitInputError);
}

TEST(Commands, ViolationReportNamesTheCondition) {
  const auto r = run_subcommand_text("validate", quiet(), std::string(kNotGibbs));
  ASSERT_EQ(r.exit_code, kExitViolation);
  const auto& v = r.report.body["violations"];
  EXPECT_NE(std::find(v.begin(), v.end(), "gibbs_stochastic"), v.end());
}

TEST(Commands, IdentitiesOnRandomKernelSeed7) {
  const auto r = run_subcommand_text("identities", quiet(), std::string(kRandom7));
  ASSERT_EQ(r.exit_code, kExitPass) << r.error;
  for (const auto& rep : r.report.body["identities"]) {
    if (rep["name"] == "second_law_equality") {
      EXPECT_LT(rep["abs_error"].get<double>(), 1e-10);
    }
  }
}

TEST(Commands, LandauerSweepCsvMinimumCostRow) {
  CommandOptions o = quiet();
  o.epsilon = 0.0;
  o.sweep = true;
  o.csv = true;
  const auto r = run_subcommand("landauer", o, std::nullopt);
  ASSERT_EQ(r.exit_code, kExitPass);
  std::istringstream in(r.csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "w0,w1,mean_work,mean_cost");
  double best_cost = std::numeric_limits<double>::infinity(), w0 = 0, w1 = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    double a, b, mw, mc;
    char c1, c2, c3;
    std::istringstream fields(line);
    fields >> a >> c1 >> b >> c2 >> mw >> c3 >> mc;
    ASSERT_TRUE(fields);
    EXPECT_LT(a, 0.0);
    EXPECT_LT(b, 0.0);
    if (mc < best_cost) best_cost = mc, w0 = a, w1 = b;
    ++rows;
  }
  EXPECT_GT(rows, 100);
  EXPECT_NEAR(w0, -0.693147, 1e-6);
  EXPECT_NEAR(w1, -0.693147, 1e-6);
}

TEST(Commands, ReportsAreByteIdenticalWithoutTimestamp) {
  for (const char* name : {"identities", "sample", "backward", "validate"}) {
    CommandOptions o = quiet();
    o.samples = 4000;
    const auto a = run_subcommand_text(name, o, std::string(kRandom7));
    const auto b = run_subcommand_text(name, o, std::string(kRandom7));
    EXPECT_EQ(render_report(a.report), render_report(b.report)) << name;
    EXPECT_EQ(a.csv, b.csv);
  }
  CommandOptions t;
  const auto stamped = run_subcommand_text("validate", t, std::string(kIdentity));
  EXPECT_TRUE(stamped.report.timestamp.has_value());
  EXPECT_NE(render_report(stamped.report).find("\"timestamp\""), std::string::npos);
}

TEST(Commands, FlagsOverrideDocument) {
  CommandOptions o = quiet();
  o.beta = 2.0;
  const auto r = run_subcommand_text("identities", o, std::string(kRandom7));
  ASSERT_EQ(r.exit_code, kExitPass);
  const auto base = run_subcommand_text("identities", quiet(), std::string(kRandom7));
  EXPECT_NE(render_report(r.report), render_report(base.report));
  EXPECT_EQ(r.report.input_digest, base.report.input_digest);  // digest covers the document only
}

TEST(Commands, DemoAndQuantumPass) {
  const auto demo = run_subcommand("demo", quiet(), std::nullopt);
  EXPECT_EQ(demo.exit_code, kExitPass);
  EXPECT_NE(demo.csv.find("no_work_initial"), std::string::npos);
  CommandOptions o = quiet();
  o.seed = 5;
  EXPECT_EQ(run_subcommand("quantum", o, std::nullopt).exit_code, kExitPass);
}

TEST(Commands, EverySubcommandIsListed) {
  EXPECT_EQ(subcommand_names().size(), 11u);
  EXPECT_FALSE(needs_document("landauer"));
  EXPECT_TRUE(needs_document("optimal-work"));
}
