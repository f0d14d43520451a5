#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "countrank/bounds.hpp"
#include "countrank/cli.hpp"
#include "countrank/error.hpp"
#include "countrank/io.hpp"
#include "countrank/reports.hpp"

using namespace countrank;
namespace fs = std::filesystem;
using reports::Json;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("countrank_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(io::parse_double(io::format_double(v), "x"), v);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_THROW(io::parse_double("1.5x", "x"), DataError);
  EXPECT_THROW(io::parse_int("2.0", "x"), DataError);
  EXPECT_EQ(io::parse_seed("0xff"), 255u);
  EXPECT_EQ(io::parse_seed("18446744073709551615"), ~std::uint64_t{0});
  EXPECT_THROW(io::parse_seed("-1"), DataError);
  EXPECT_THROW(io::parse_seed(""), DataError);
}

TEST(Io, MatrixMarketParsing) {
  const std::string mm =
      "%%MatrixMarket matrix coordinate integer general\n% comment\n3 2 2\n1 1 4\n3 2 7\n";
  const auto m = io::parse_count_matrix(mm);
  ASSERT_EQ(m.rows(), 3u);
  ASSERT_EQ(m.cols(), 2u);
  EXPECT_EQ(m(0, 0), 4.0);
  EXPECT_EQ(m(2, 1), 7.0);
  EXPECT_EQ(m(1, 0), 0.0);
  EXPECT_EQ(io::parse_count_matrix(io::matrix_market(m)), m);

  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      io::parse_count_matrix(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  const std::string head = "%%MatrixMarket matrix coordinate integer general\n";
  expect_error(head + "2 2 1\n1 1 -3\n", "line 3");
  expect_error(head + "2 2 1\n3 1 1\n", "line 3");
  expect_error(head + "2 2 2\n1 1 1\n1 1 2\n", "duplicate");
  expect_error(head + "2 2 2\n1 1 1\n", "entries");
  expect_error("%%MatrixMarket matrix coordinate integer symmetric\n2 2 1\n1 1 1\n", "general");
  expect_error("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 0.5\n", "line 3");
}

TEST(Io, DenseCsvParsing) {
  const auto m = io::parse_count_matrix("1,2,3\n4,5,6\n");
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m(1, 2), 6.0);
  EXPECT_EQ(io::parse_count_matrix(io::dense_csv(m)), m);
  EXPECT_THROW(io::parse_count_matrix("1,2\n3\n"), DataError);
  EXPECT_THROW(io::parse_count_matrix("1,2\n3,1.5\n"), DataError);
  EXPECT_THROW(io::parse_rate_matrix(""), DataError);
  EXPECT_THROW(io::parse_rate_matrix("1,-0.5\n"), DataError);
  EXPECT_THROW(io::parse_rate_matrix("1,nan\n"), DataError);
  const auto r = io::parse_rate_matrix("# comment\n0.25,1e-3\n");
  EXPECT_EQ(r(0, 1), 1e-3);
}

TEST(Io, ObservationsRoundTrip) {
  const auto obs = MaskedObservations::from_entries(4, 3, {{{2, 1}, 5}, {{0, 0}, 0}, {{3, 2}, 11}});
  const std::string text = io::observations_csv(obs, 0.25, 0xabc);
  EXPECT_EQ(text.substr(0, text.find('\n')), "# m=4 n=3 p=0.25 seed=2748");
  EXPECT_TRUE(io::looks_like_observations(text));
  const auto back = io::parse_observations(text);
  EXPECT_EQ(back.observations, obs);
  EXPECT_EQ(back.p, 0.25);
  EXPECT_EQ(back.seed, 0xabcu);
  EXPECT_THROW(io::parse_observations("# m=2 n=2 p=0.5 seed=1\n3,1,1\n"), DataError);
  EXPECT_THROW(io::parse_observations("# m=2 n=2 p=0.5 seed=1\n1,1,1\n1,1,2\n"), DataError);
  EXPECT_THROW(io::parse_observations("# m=2 n=2 p=1.5 seed=1\n"), DataError);
}

TEST(Io, PackingAndTrialCsvRoundTrip) {
  PackingSet set{6, 2, 9, {BitVector::from_hex("08", 6), BitVector::from_hex("f4", 6)}};
  const std::string text = io::packing_text(set);
  EXPECT_EQ(text, "# m=6 min_dist=2 count=2 seed=9\n08\nf4\n");
  const auto back = io::parse_packing(text);
  EXPECT_EQ(back.codewords, set.codewords);
  EXPECT_THROW(io::parse_packing("# m=6 min_dist=2 count=3 seed=9\n08\nf4\n"), DataError);

  std::vector<io::TrialRow> rows{{"s1", 0, 123, 0.5, 0.25, 1.0 / 3.0, false, 0.0},
                                 {"s1", 1, 456, 2.0, 2.0, 0.0, true, 1.5}};
  const std::string csv = io::trial_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), io::kTrialCsvHeader);
  const auto parsed = io::parse_trial_csv(csv);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0].residual, 1.0 / 3.0);
  EXPECT_TRUE(parsed[1].bound_violated);
  EXPECT_EQ(parsed[1].seed, 456u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"pack", "--m", "8", "--out", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"calibrate", "--seed", "zz"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(Cli, DataErrorsExitTwo) {
  TempDir dir;
  io::write_text(dir / "bad.csv", "1,2\n3\n");
  EXPECT_EQ(run_cli({"bounds", "--truth", dir / "bad.csv"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"bounds", "--truth", dir / "missing.csv"}).code, cli::kExitData);
  io::write_text(dir / "neg.mtx", "%%MatrixMarket matrix coordinate integer general\n2 2 1\n1 1 -1\n");
  const auto r = run_cli({"estimate", "--input", dir / "neg.mtx", "--kind", "dantzig", "--delta", "1", "--out", dir / "e.csv"});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(Cli, BoundsMatchesLibrary) {
  TempDir dir;
  io::write_text(dir / "m.csv", "1,1,1,1\n1,1,1,1\n1,1,1,1\n1,1,1,1\n");
  const auto r = run_cli({"bounds", "--truth", dir / "m.csv", "--p", "1", "--epsilon", "0.1", "--C", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  BoundConfig cfg;
  cfg.C = 1.0;
  cfg.epsilon = 0.1;
  const Json expected = reports::to_json(bound_report(DenseMatrix::constant(4, 4, 1.0), 1.0, 0, cfg));
  EXPECT_EQ(Json::parse(r.out), expected);
}

TEST(Cli, SimulateThenEstimate) {
  TempDir dir;
  io::write_text(dir / "m.csv", "2,2,2\n2,2,2\n2,2,2\n2,2,2\n");
  auto r = run_cli({"simulate", "--truth", dir / "m.csv", "--p", "0.5", "--seed", "0x10", "--out", dir / "obs.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto obs = io::read_observations(dir / "obs.csv");
  EXPECT_EQ(obs.p, 0.5);
  EXPECT_EQ(obs.seed, 16u);

  r = run_cli({"estimate", "--input", dir / "obs.csv", "--kind", "dantzig", "--delta", "0", "--out", dir / "est.csv",
           "--report", dir / "rep.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  // Unprojected estimates may carry tiny negative entries, so parse the CSV directly.
  std::vector<std::vector<double>> est;
  {
    std::istringstream lines(io::read_text(dir / "est.csv"));
    for (std::string line; std::getline(lines, line);) {
      std::istringstream cells(line);
      est.emplace_back();
      for (std::string cell; std::getline(cells, cell, ',');) est.back().push_back(io::parse_double(cell, "cell"));
    }
  }
  ASSERT_EQ(est.size(), 4u);
  // delta = 0 returns the inverse-propensity rescaled observations.
  DenseMatrix y(4, 3);
  for (std::size_t k = 0; k < obs.observations.counts().size(); ++k) {
    const auto c = obs.observations.mask().cells()[k];
    y(c.row, c.col) = static_cast<double>(obs.observations.counts()[k]) / 0.5;
  }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(est[i][j], y(i, j), 1e-9);
  const Json rep = Json::parse(io::read_text(dir / "rep.json"));
  EXPECT_EQ(rep["estimator"], "dantzig");
  EXPECT_EQ(rep["p"], 0.5);

  r = run_cli({"estimate", "--input", dir / "obs.csv", "--kind", "regls", "--out", dir / "est.csv"});
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST(Cli, PackWritesAuditedPacking) {
  TempDir dir;
  const auto r = run_cli({"pack", "--m", "40", "--seed", "3", "--out", dir / "p.txt"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto set = io::parse_packing(io::read_text(dir / "p.txt"));
  EXPECT_EQ(set.min_distance, 10u);
  EXPECT_EQ(set.codewords.size(), gv_target(40));
  EXPECT_TRUE(audit_packing(set));
  const Json summary = Json::parse(r.out);
  EXPECT_EQ(summary["count"], set.codewords.size());
  EXPECT_EQ(run_cli({"pack", "--m", "8", "--min-dist", "4", "--target", "100", "--budget", "1000", "--seed", "1", "--out",
                 dir / "q.txt"})
                .code,
            cli::kExitNumerical);
}

TEST(Cli, BenchIsByteIdenticalAndVerifiable) {
  TempDir dir;
  const std::string scenario = R"({
    "id": "cli", "model": "poisson_completion",
    "truth": {"generator": "random_low_rank", "rows": 12, "cols": 10, "rank": 2, "lambda_max": 4},
    "p": 0.7, "estimator": "dantzig", "tuning": "theorem", "trials": 6
  })";
  io::write_text(dir / "s.json", scenario);
  const std::vector<std::string> base{"bench", "--scenario", dir / "s.json", "--seed", "42"};
  auto args1 = base, args2 = base;
  args1.insert(args1.end(), {"--out-json", dir / "a.json", "--out-csv", dir / "a.csv"});
  args2.insert(args2.end(), {"--out-json", dir / "b.json", "--out-csv", dir / "b.csv", "--threads", "3"});
  ASSERT_EQ(run_cli(args1).code, 0);
  ASSERT_EQ(run_cli(args2).code, 0);
  // Thread count is recorded in the scenario, so compare records and aggregates.
  Json a = Json::parse(io::read_text(dir / "a.json")), b = Json::parse(io::read_text(dir / "b.json"));
  EXPECT_EQ(a["records"], b["records"]);
  EXPECT_EQ(a["aggregates"], b["aggregates"]);
  EXPECT_EQ(io::read_text(dir / "a.csv"), io::read_text(dir / "b.csv"));
  ASSERT_EQ(run_cli(args1).code, 0);
  EXPECT_EQ(Json::parse(io::read_text(dir / "a.json")), a);

  EXPECT_EQ(run_cli({"bench", "--verify", dir / "a.json", "--verify-csv", dir / "a.csv"}).code, 0);
  a["aggregates"]["mean_error"] = 1e9;
  io::write_text(dir / "t.json", reports::dump(a));
  EXPECT_EQ(run_cli({"bench", "--verify", dir / "t.json"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"bench", "--scenario", dir / "s.json", "--out-json", dir / "c.json", "--out-csv", dir / "c.csv"}).code,
            cli::kExitUsage);
}

TEST(Cli, BenchSweep) {
  TempDir dir;
  io::write_text(dir / "s.json", R"({"sweep": {"family": {"r": 2, "k": 6, "l": 3, "lambda_max": 2, "p": 0.5,
      "mode": "assouad"}, "members": 2, "trials_per_member": 2, "estimator": "rank_trunc"}})");
  const auto r = run_cli({"bench", "--scenario", dir / "s.json", "--seed", "1", "--out-json", dir / "o.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(io::read_text(dir / "o.json"));
  EXPECT_EQ(j["mode"], "assouad");
  EXPECT_EQ(j["runs"], 4);
}

TEST(Cli, CalibrateSmall) {
  TempDir dir;
  const auto r = run_cli({"calibrate", "--seed", "5", "--trials", "3", "--out", dir / "c.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(io::read_text(dir / "c.json"));
  EXPECT_GT(j["C"].get<double>(), 0.0);
  EXPECT_EQ(j["points"].size(), 18u);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  TempDir dir;
  io::write_text(dir / "m.csv", "1,2\n3,4\n");
  io::write_text(dir / "cfg.json", R"({"truth": ")" + dir / "m.csv" + R"(", "p": 0.5, "C": 2})");
  const auto r = run_cli({"bounds", "--config", dir / "cfg.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["p"], 0.5);
  EXPECT_EQ(j["C"], 2.0);
}

TEST(Cli, BinaryExitCodes) {
  const std::string exe = COUNTRANK_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int s = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status("nonsense"), 1);
  EXPECT_EQ(status("bounds --truth /nonexistent/file.csv"), 2);
}
