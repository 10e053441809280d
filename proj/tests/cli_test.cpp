#include <gtest/gtest.h>

#include <sstream>

#include "eedecide/cli.hpp"
#include "test_support.hpp"

namespace eedecide {
namespace {

using testing_support::data_file;
using testing_support::slurp;
using testing_support::TempDir;

TEST(ParseArgs, AssignHappyPath) {
  const auto cfg = cli::parse_args({"assign", "--gamma", "2", "--input", "bounds.csv"});
  EXPECT_EQ(cfg.command, cli::Command::Assign);
  EXPECT_EQ(cfg.gamma, 2.0);
  EXPECT_TRUE(cfg.gamma_set);
  EXPECT_EQ(cfg.input_path(), "bounds.csv");
}

TEST(ParseArgs, Defaults) {
  const auto cfg = cli::parse_args({"ee", "--input", "x.csv"});
  EXPECT_EQ(cfg.gamma, 0.0);
  EXPECT_FALSE(cfg.gamma_set);
  EXPECT_TRUE(cfg.output_path.empty());
  EXPECT_FALSE(cfg.seed.has_value());
}

TEST(ParseArgs, MetaAsTwoTokens) {
  EXPECT_EQ(cli::parse_args({"meta", "summarize", "--input", "d.csv"}).command,
            cli::Command::MetaSummarize);
  EXPECT_EQ(cli::parse_args({"meta-simulate", "--input", "c.json", "--seed", "42"}).seed, 42u);
}

TEST(ParseArgs, UsageErrors) {
  using cli::UsageError;
  EXPECT_THROW(cli::parse_args({"assign", "--gamma", "-1", "--input", "b.csv"}), UsageError);
  EXPECT_THROW(cli::parse_args({"assign", "--gamma", "abc", "--input", "b.csv"}), UsageError);
  EXPECT_THROW(cli::parse_args({"assign"}), UsageError);
  EXPECT_THROW(cli::parse_args({"assign", "--input", "b.csv", "--frobnicate"}), UsageError);
  EXPECT_THROW(cli::parse_args({}), UsageError);
  EXPECT_THROW(cli::parse_args({"binary", "--p-low", "0.2"}), UsageError);
  EXPECT_THROW(cli::parse_args({"ee", "--input", "a", "--input", "b"}), UsageError);
  EXPECT_THROW(cli::parse_args({"bounds", "--input", "b.csv", "--grid", "1"}), UsageError);
  EXPECT_THROW(cli::parse_args({"rank", "--input", "a", "--representation", "median"}), UsageError);
  EXPECT_THROW(cli::parse_args({"rank", "--input", "a", "--prior", "1/0"}), UsageError);
}

TEST(ParseNumberList, FractionsAndDecimals) {
  const auto v = cli::parse_number_list("2/3, 1/3,0.25", "--prior");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], 2.0 / 3.0);
  EXPECT_EQ(v[2], 0.25);
  EXPECT_THROW(cli::parse_number_list("0.5,,0.5", "--prior"), cli::UsageError);
}

TEST(Main, ExitCodes) {
  std::ostringstream err;
  EXPECT_EQ(cli::main({"assign", "--gamma", "-1", "--input", "b.csv"}, err), cli::kExitValidation);
  EXPECT_EQ(cli::main({"ee", "--input", "/nonexistent/file.csv"}, err), cli::kExitValidation);
  EXPECT_NE(err.str().find("/nonexistent/file.csv"), std::string::npos);
}

TEST(Main, EmptyInputNamesFile) {
  TempDir dir;
  const auto empty = dir.write("empty.csv", "");
  std::ostringstream err;
  EXPECT_EQ(cli::main({"bounds", "--input", empty.string(), "--output",
                       dir.file("out.csv").string()},
                      err),
            cli::kExitValidation);
  EXPECT_NE(err.str().find("empty.csv"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir.file("out.csv")));
}

TEST(Main, SolverFailuresExitThree) {
  std::ostringstream err;
  EXPECT_EQ(cli::report_failure(SolverError("bisect: no sign change"), err), cli::kExitSolver);
  EXPECT_EQ(cli::report_failure(DomainError("bad income"), err), cli::kExitValidation);
  EXPECT_EQ(cli::report_failure(InputError("x.csv:3: bad"), err), cli::kExitValidation);
  EXPECT_NE(err.str().find("solver error"), std::string::npos);
}

TEST(Commands, EeOnIncomeRow) {
  TempDir dir;
  const auto out = dir.file("ee.csv");
  ASSERT_EQ(cli::main({"ee", "--gamma", "1", "--input", data_file("incomes.csv").string(),
                       "--output", out.string()}),
            0);
  const auto table = read_csv_with_rows(out);
  EXPECT_EQ(table.header, (std::vector<std::string>{"row", "n", "gamma", "ee", "mean"}));
  EXPECT_NEAR(parse_number(table, table.rows[0], 3), 4.93, 0.005);
  EXPECT_EQ(parse_number(table, table.rows[0], 4), 5.0);
}

TEST(Commands, BoundsOnSampleFile) {
  TempDir dir;
  const auto out = dir.file("assign.csv");
  const auto curves = dir.file("curves");
  ASSERT_EQ(cli::main({"bounds", "--input", data_file("bounds_example.csv").string(), "--output",
                       out.string(), "--curves", curves.string(), "--grid", "5"}),
            0);
  const auto rows = read_assignments(out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].scheme, "horowitz-manski");
  EXPECT_NEAR(rows[0].delta, 0.59, 0.005);
  EXPECT_NEAR(rows[1].delta, 2.0 / 3.0, 1e-10);
  EXPECT_EQ(rows[2].delta, 1.0);
  EXPECT_NEAR(rows[3].delta, 0.4271, 5e-5);
  EXPECT_NEAR(rows[4].delta, 0.9268, 5e-5);
  EXPECT_EQ(rows[5].delta, 1.0);
  const auto curve = read_regret_curve(curves / "horowitz-manski_gamma0.csv");
  ASSERT_EQ(curve.size(), 5u);
  EXPECT_NEAR(curve.back().regret_a, 4.6, 1e-12);
  EXPECT_TRUE(std::filesystem::exists(curves / "lee_gamma2.csv"));
}

TEST(Commands, RankFlipsWithRepresentation) {
  TempDir dir;
  const auto a = data_file("prospect_a.csv").string();
  const auto b = data_file("prospect_b.csv").string();
  ASSERT_EQ(cli::main({"rank", "--gamma", "1", "--prior", "2/3,1/3", "--input", a, "--input", b,
                       "--output", dir.file("ee.csv").string()}),
            0);
  ASSERT_EQ(cli::main({"rank", "--gamma", "1", "--prior", "2/3,1/3", "--representation",
                       "transformed-mean", "--input", a, "--input", b, "--output",
                       dir.file("tm.csv").string()}),
            0);
  const auto ee_rank = read_csv_with_rows(dir.file("ee.csv"));
  const auto tm_rank = read_csv_with_rows(dir.file("tm.csv"));
  EXPECT_EQ(ee_rank.rows[0].fields[1], "prospect_b");
  EXPECT_EQ(tm_rank.rows[0].fields[1], "prospect_a");
  // Maximin picks prospect a under both representations.
  EXPECT_EQ(ee_rank.rows[1].fields[4], "1");
  EXPECT_EQ(tm_rank.rows[0].fields[4], "1");
}

TEST(Commands, AssignAndBinary) {
  TempDir dir;
  ASSERT_EQ(cli::main({"assign", "--input", data_file("states.csv").string(), "--output",
                       dir.file("a.csv").string(), "--strict"}),
            0);
  const auto assign = read_csv_with_rows(dir.file("a.csv"));
  ASSERT_EQ(assign.rows.size(), 3u);
  EXPECT_EQ(assign.rows[2].fields[0], "minimax-regret");
  EXPECT_NEAR(parse_number(assign, assign.rows[2], 1), 6.6 / 11.2, 1e-10);

  ASSERT_EQ(cli::main({"binary", "--gamma", "1", "--p-low", "0.25", "--p-high", "1", "--p-a",
                       "0.5", "--prior", "0.4,0.6", "--output", dir.file("b.csv").string()}),
            0);
  const auto binary = read_csv_with_rows(dir.file("b.csv"));
  ASSERT_EQ(binary.rows.size(), 6u);
  EXPECT_EQ(binary.rows[2].fields[1], "minimax-regret");
  EXPECT_EQ(parse_number(binary, binary.rows[2], 2), 0.5);
  EXPECT_GT(parse_number(binary, binary.rows[5], 2), 0.5);
}

TEST(Commands, MetaSummarize) {
  TempDir dir;
  ASSERT_EQ(cli::main({"meta", "summarize", "--gamma", "2", "--units", "USD", "--input",
                       data_file("draws_synthetic.csv").string(), "--output",
                       dir.file("s.csv").string()}),
            0);
  const auto rows = read_summaries(dir.file("s.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].summary.site, "north");
  EXPECT_EQ(rows[0].summary.units, "USD");
}

TEST(Commands, MetaSimulateIsByteIdentical) {
  TempDir dir;
  const auto config = dir.write("sim.json", R"({"gamma": 2,
    "truth": {"mu": 0, "zeta": 0.05, "sigma": 0.5, "lambda": 1.1},
    "sample_sizes": [10, 200], "replications": 50, "seed": 1})");
  for (const char* name : {"one.csv", "two.csv"}) {
    ASSERT_EQ(cli::main({"meta-simulate", "--seed", "42", "--input", config.string(), "--output",
                         dir.file(name).string()}),
              0);
  }
  const auto one = slurp(dir.file("one.csv"));
  EXPECT_FALSE(one.empty());
  EXPECT_EQ(one, slurp(dir.file("two.csv")));
  ASSERT_EQ(cli::main({"meta-simulate", "--seed", "43", "--input", config.string(), "--output",
                       dir.file("three.csv").string()}),
            0);
  EXPECT_NE(one, slurp(dir.file("three.csv")));
  EXPECT_EQ(read_agreement(dir.file("one.csv")).size(), 2u);

  std::ostringstream err;
  const auto broken = dir.write("broken.json", R"({"gamma": 2})");
  EXPECT_EQ(cli::main({"meta-simulate", "--input", broken.string()}, err), cli::kExitValidation);
}

TEST(Executable, RunsAndReportsExitStatus) {
  const std::string exe = EEDECIDE_CLI;
  EXPECT_EQ(std::system((exe + " ee --gamma 1 --input " + data_file("incomes.csv").string() +
                         " > /dev/null")
                            .c_str()),
            0);
  const int status = std::system((exe + " assign --gamma -1 --input x 2> /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

}  // namespace
}  // namespace eedecide
