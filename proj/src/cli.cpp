#include "countrank/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "countrank/bench.hpp"
#include "countrank/bounds.hpp"
#include "countrank/calibration.hpp"
#include "countrank/error.hpp"
#include "countrank/estimators.hpp"
#include "countrank/io.hpp"
#include "countrank/linalg.hpp"
#include "countrank/packing.hpp"
#include "countrank/reports.hpp"
#include "countrank/sampling.hpp"

namespace countrank::cli {

namespace {

using reports::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --config files: a JSON object whose keys are option names without dashes. Values become
// command-line arguments appended after the given ones; options given explicitly win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  auto it = std::find_if(args.begin(), args.end(),
                         [](const std::string& a) { return a == "--config" || a.rfind("--config=", 0) == 0; });
  if (it == args.end()) return args;
  std::string path;
  if (*it == "--config") {
    if (std::next(it) == args.end()) throw UsageError("--config needs a file");
    path = *std::next(it);
    args.erase(it, it + 2);
  } else {
    path = it->substr(9);
    args.erase(it);
  }
  const Json j = Json::parse(io::read_text(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("config " + path + ": expected a JSON object");

  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  auto scalar = [&](const std::string& key, const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return io::format_double(v.get<double>());
    throw DataError("config " + path + ": value of '" + key + "' must be a string, a number or an array of them");
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back(flag);
        extra.push_back(scalar(key, v));
      }
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(key, value));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::uint64_t seed_value(const std::string& text) {
  try {
    return io::parse_seed(text);
  } catch (const DataError& e) {
    throw UsageError(std::string("--seed: ") + e.what());
  }
}

Projection projection_from(const std::vector<std::string>& names) {
  Projection p = Projection::none;
  for (const auto& n : names) p = p | parse_projection(n);
  return p;
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else io::write_text(path, text);
}

// ---- simulate

struct SimulateArgs {
  std::string model = "poisson_completion";
  std::string truth;
  double p = 1.0;
  std::string seed;
  std::int64_t trials = 0;
  std::int64_t row_trials = 0;
  std::string out;
  std::string mask_out;
};

void do_simulate(const SimulateArgs& a, std::ostream&) {
  const std::uint64_t seed = seed_value(a.seed);
  const auto model = bench::parse_model(a.model);
  const DenseMatrix truth = io::read_rate_matrix(a.truth);
  switch (model) {
    case bench::Model::poisson_completion: {
      const Mask mask = sample_bernoulli_mask(truth.rows(), truth.cols(), {a.p, rng::derive_seed(seed, 0)});
      const auto obs = sample_poisson(truth, mask, rng::derive_seed(seed, 1));
      io::write_text(a.out, io::observations_csv(obs, a.p, seed));
      if (!a.mask_out.empty()) io::write_text(a.mask_out, io::mask_csv(mask, a.p, seed));
      return;
    }
    case bench::Model::multinomial_matrix: {
      if (a.trials < 1) throw UsageError("simulate --model multinomial_matrix requires --trials >= 1");
      if (a.p != 1.0) throw UsageError("multinomial models are fully observed; --p must be 1");
      const DenseMatrix x = sample_matrix_multinomial(truth, a.trials, rng::derive_seed(seed, 1));
      const auto obs = MaskedObservations::from_dense(x);
      io::write_text(a.out, io::observations_csv(obs, 1.0, seed));
      if (!a.mask_out.empty()) io::write_text(a.mask_out, io::mask_csv(obs.mask(), 1.0, seed));
      return;
    }
    case bench::Model::multinomial_rows: {
      if (a.row_trials < 1) throw UsageError("simulate --model multinomial_rows requires --row-trials >= 1");
      if (a.p != 1.0) throw UsageError("multinomial models are fully observed; --p must be 1");
      RowMultinomialModel m{truth, std::vector<std::int64_t>(truth.rows(), a.row_trials)};
      const DenseMatrix x = sample_row_multinomial(m, rng::derive_seed(seed, 1));
      const auto obs = MaskedObservations::from_dense(x);
      io::write_text(a.out, io::observations_csv(obs, 1.0, seed));
      if (!a.mask_out.empty()) io::write_text(a.mask_out, io::mask_csv(obs.mask(), 1.0, seed));
      return;
    }
  }
}

// ---- estimate

struct EstimateArgs {
  std::string input;
  std::string kind;
  std::optional<double> p;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<std::size_t> rank;
  std::vector<std::string> project;
  std::optional<std::int64_t> trials;
  std::optional<std::int64_t> row_trials;
  std::string out;
  std::string report;
};

void do_estimate(const EstimateArgs& a, std::ostream& out) {
  EstimatorParams params;
  params.kind = parse_estimator_kind(a.kind);
  params.delta = a.delta;
  params.lambda = a.lambda;
  params.rank = a.rank;
  params.project = projection_from(a.project);
  switch (params.kind) {
    case EstimatorKind::regls:
      if (!a.lambda) throw UsageError("--kind regls requires --lambda");
      break;
    case EstimatorKind::rank_trunc:
      if (!a.rank) throw UsageError("--kind rank_trunc requires --rank");
      break;
    default:
      if (!a.delta) throw UsageError("--kind " + a.kind + " requires --delta");
  }

  const std::string text = io::read_text(a.input);
  io::ObservationFile file;
  if (io::looks_like_observations(text)) {
    file = io::parse_observations(text);
  } else {
    file.observations = MaskedObservations::from_dense(io::parse_count_matrix(text));
  }
  params.p = a.p.value_or(file.p);
  const auto& obs = file.observations;

  EstimateResult res;
  if (params.kind == EstimatorKind::multinomial_matrix || params.kind == EstimatorKind::multinomial_rows) {
    if (obs.mask().size() != obs.rows() * obs.cols()) {
      throw DataError("multinomial estimators need fully observed counts");
    }
    const DenseMatrix x = mask_adjoint(obs);
    if (params.kind == EstimatorKind::multinomial_matrix) {
      std::int64_t total = 0;
      for (auto c : obs.counts()) total += c;
      res = estimate_multinomial_matrix(x, a.trials.value_or(total), *params.delta, params.project);
    } else {
      std::vector<std::int64_t> n(x.rows());
      for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (double v : x.row(i)) s += v;
        n[i] = a.row_trials.value_or(static_cast<std::int64_t>(s));
      }
      res = estimate_row_multinomial(x, n, *params.delta, params.project);
    }
  } else {
    res = estimate(params, obs);
  }
  io::write_text(a.out, io::dense_csv(res.estimate));
  write_or_print(a.report, reports::dump(reports::to_json(res, params)), out);
}

// ---- bounds

struct BoundsArgs {
  std::string truth;
  double p = 1.0;
  double epsilon = 0.1;
  std::optional<double> C;
  double C0 = BoundConfig::kDefaultC0;
  std::size_t rank = 0;
  std::string out;
};

void do_bounds(const BoundsArgs& a, std::ostream& out) {
  BoundConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.C0 = a.C0;
  cfg.C = a.C.value_or(BoundConfig::default_c(a.C0));
  const DenseMatrix m = io::read_rate_matrix(a.truth);
  write_or_print(a.out, reports::dump(reports::to_json(bound_report(m, a.p, a.rank, cfg))), out);
}

// ---- pack

struct PackArgs {
  std::size_t m = 0;
  std::optional<std::size_t> min_dist;
  std::optional<std::size_t> target;
  std::string seed;
  std::uint64_t budget = 10'000'000;
  std::string out;
  std::string summary;
};

void do_pack(const PackArgs& a, std::ostream& out) {
  const std::uint64_t seed = seed_value(a.seed);
  const std::size_t d = a.min_dist.value_or((a.m + 3) / 4);
  const std::size_t target = a.target.value_or(gv_target(a.m));
  const PackingSet set = gv_packing(a.m, d, target, seed, a.budget);
  if (!audit_packing(set)) throw NumericalError("packing audit failed");
  io::write_text(a.out, io::packing_text(set));
  write_or_print(a.summary, reports::dump(reports::packing_summary(set)), out);
}

// ---- bench

struct BenchArgs {
  std::string scenario;
  std::string seed;
  std::optional<unsigned> threads;
  std::string out_json;
  std::string out_csv;
  std::string verify;
  std::string verify_csv;
};

bench::SweepConfig sweep_from_json(const Json& j, std::uint64_t seed) {
  bench::SweepConfig c;
  try {
    const auto& f = j.at("family");
    c.family.r = f.at("r").get<std::size_t>();
    c.family.k = f.at("k").get<std::size_t>();
    c.family.l = f.at("l").get<std::size_t>();
    c.family.lambda_max = f.at("lambda_max").get<double>();
    c.family.p = f.at("p").get<double>();
    c.family.mode = parse_family_mode(f.at("mode").get<std::string>());
    c.members = j.value("members", std::size_t{20});
    c.trials_per_member = j.value("trials_per_member", std::size_t{5});
    c.fano.max_codewords = j.value("max_codewords", std::size_t{4096});
    c.estimator.kind = parse_estimator_kind(j.value("estimator", std::string("rank_trunc")));
    if (j.contains("delta")) c.estimator.delta = j.at("delta").get<double>();
    if (j.contains("lambda")) c.estimator.lambda = j.at("lambda").get<double>();
    if (j.contains("rank")) c.estimator.rank = j.at("rank").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("sweep: ") + e.what());
  }
  c.seed = seed;
  c.fano.seed = rng::derive_seed(seed, ~std::uint64_t{0});
  return c;
}

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.verify.empty()) {
    const Json j = Json::parse(io::read_text(a.verify), nullptr, false);
    if (j.is_discarded()) throw DataError("campaign: invalid JSON");
    if (a.verify_csv.empty()) {
      reports::verify_campaign(j);
    } else {
      const std::string csv = io::read_text(a.verify_csv);
      reports::verify_campaign(j, &csv);
    }
    out << "aggregates consistent with records\n";
    return kExitOk;
  }
  if (a.scenario.empty()) throw UsageError("bench requires --scenario (or --verify)");
  if (a.seed.empty()) throw UsageError("bench requires --seed");
  if (a.out_json.empty()) throw UsageError("bench requires --out-json");
  const std::uint64_t seed = seed_value(a.seed);

  const std::string text = io::read_text(a.scenario);
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("scenario: invalid JSON");
  if (j.is_object() && j.contains("sweep")) {
    const auto rep = bench::minimax_family_sweep(sweep_from_json(j.at("sweep"), seed));
    io::write_text(a.out_json, reports::dump(reports::to_json(rep)));
    return kExitOk;
  }
  if (a.out_csv.empty()) throw UsageError("bench requires --out-csv");
  Json sj = j;
  sj["base_seed"] = seed;
  if (a.threads) sj["threads"] = *a.threads;
  const bench::Scenario scenario = reports::scenario_from_json(sj);
  const auto rep = bench::run_campaign(scenario);
  io::write_text(a.out_json, reports::dump(reports::to_json(rep)));
  io::write_text(a.out_csv, io::trial_csv(reports::trial_rows(rep)));
  if (rep.failure) {
    err << "error: campaign failed at " << *rep.failure << " (" << rep.records.size() << " trials completed)\n";
    return rep.failure_exit_code;
  }
  if (rep.aggregates.bound_violations > 0) {
    err << "error: " << rep.aggregates.bound_violations << " trials violate the deterministic error bound\n";
    return kExitNumerical;
  }
  return kExitOk;
}

// ---- calibrate

struct CalibrateArgs {
  std::string seed;
  std::size_t trials = 100;
  double epsilon = 0.1;
  double C0 = BoundConfig::kDefaultC0;
  std::string out;
};

void do_calibrate(const CalibrateArgs& a, std::ostream& out) {
  CalibrationOptions opt;
  opt.seed = seed_value(a.seed);
  opt.trials = a.trials;
  opt.epsilon = a.epsilon;
  opt.C0 = a.C0;
  const auto res = calibrate_C(opt);
  if (a.out.empty()) {
    out << reports::dump(reports::to_json(res));
  } else {
    io::write_text(a.out, reports::dump(reports::to_json(res)));
    out << "C = " << io::format_double(res.C) << (res.floored ? " (floor)" : "") << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-rank estimation of count matrices: simulation, estimation, bounds and benchmarks", "countrank"};
  app.require_subcommand(1);
  std::string config_path;  // consumed by expand_config; declared for --help

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Sample observations from a rate matrix");
  s->add_option("--config", config_path, "JSON file of option values (keys are option names)");
  s->add_option("--model", sim.model, "poisson_completion | multinomial_matrix | multinomial_rows")->capture_default_str();
  s->add_option("--truth", sim.truth, "Rate (or probability) matrix, dense CSV")->required();
  s->add_option("--p", sim.p, "Sampling probability")->capture_default_str();
  s->add_option("--seed", sim.seed, "Seed, decimal or 0x hex")->required();
  s->add_option("--trials", sim.trials, "N for multinomial_matrix");
  s->add_option("--row-trials", sim.row_trials, "N_i (same for every row) for multinomial_rows");
  s->add_option("--out", sim.out, "Observation CSV to write")->required();
  s->add_option("--mask-out", sim.mask_out, "Mask CSV to write");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate a low-rank matrix from counts");
  e->add_option("--config", config_path, "JSON file of option values (keys are option names)");
  e->add_option("--input", est.input, "Observation CSV, MatrixMarket or dense count CSV")->required();
  e->add_option("--kind", est.kind, "dantzig | regls | rank_trunc | multinomial_matrix | multinomial_rows")->required();
  e->add_option("--p", est.p, "Sampling probability (default: from the observation header, else 1)");
  e->add_option("--delta", est.delta, "Operator-norm radius");
  e->add_option("--lambda", est.lambda, "Nuclear-norm weight");
  e->add_option("--rank", est.rank, "Target rank");
  e->add_option("--project", est.project, "nonnegative | global_simplex | row_simplex (repeatable)");
  e->add_option("--trials", est.trials, "N for multinomial_matrix (default: total count)");
  e->add_option("--row-trials", est.row_trials, "N_i for multinomial_rows (default: row sums)");
  e->add_option("--out", est.out, "Estimate CSV to write")->required();
  e->add_option("--report", est.report, "JSON report path (default: stdout)");

  BoundsArgs bnd;
  auto* b = app.add_subcommand("bounds", "Evaluate upper and lower bounds for a rate matrix");
  b->add_option("--config", config_path, "JSON file of option values (keys are option names)");
  b->add_option("--truth", bnd.truth, "Rate matrix, dense CSV")->required();
  b->add_option("--p", bnd.p, "Sampling probability")->capture_default_str();
  b->add_option("--epsilon", bnd.epsilon, "Failure probability parameter")->capture_default_str();
  b->add_option("--C", bnd.C, "Constant in A(M, p, eps) (default 4 sqrt(C0))");
  b->add_option("--C0", bnd.C0, "Constant in the bounded-entries tail")->capture_default_str();
  b->add_option("--rank", bnd.rank, "Rank (0: numerical rank of the matrix)")->capture_default_str();
  b->add_option("--out", bnd.out, "JSON report path (default: stdout)");

  PackArgs pk;
  auto* k = app.add_subcommand("pack", "Build a Gilbert-Varshamov packing");
  k->add_option("--config", config_path, "JSON file of option values (keys are option names)");
  k->add_option("--m", pk.m, "Codeword length")->required()->check(CLI::PositiveNumber);
  k->add_option("--min-dist", pk.min_dist, "Minimum Hamming distance (default ceil(m/4))");
  k->add_option("--target", pk.target, "Codewords wanted (default ceil(e^{m/8}))");
  k->add_option("--seed", pk.seed, "Seed, decimal or 0x hex")->required();
  k->add_option("--budget", pk.budget, "Candidate draws allowed")->capture_default_str();
  k->add_option("--out", pk.out, "Packing file to write")->required();
  k->add_option("--summary", pk.summary, "JSON summary path (default: stdout)");

  BenchArgs bn;
  auto* r = app.add_subcommand("bench", "Run a Monte Carlo campaign or family sweep");
  r->add_option("--config", config_path, "JSON file of option values (keys are option names)");
  r->add_option("--scenario", bn.scenario, "Scenario JSON");
  r->add_option("--seed", bn.seed, "Base seed, decimal or 0x hex (required to run)");
  r->add_option("--threads", bn.threads, "Worker threads");
  r->add_option("--out-json", bn.out_json, "Campaign report JSON");
  r->add_option("--out-csv", bn.out_csv, "Per-trial CSV");
  r->add_option("--verify", bn.verify, "Check a campaign JSON: aggregates recomputed from its records");
  r->add_option("--verify-csv", bn.verify_csv, "CSV to check against the records of --verify");

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Fit the constant C of A(M, p, eps) on the standard grid");
  c->add_option("--config", config_path, "JSON file of option values (keys are option names)");
  c->add_option("--seed", cal.seed, "Seed, decimal or 0x hex")->required();
  c->add_option("--trials", cal.trials, "Trials per grid point")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--epsilon", cal.epsilon, "Failure probability parameter")->capture_default_str();
  c->add_option("--C0", cal.C0, "Constant in the bounded-entries tail")->capture_default_str();
  c->add_option("--out", cal.out, "JSON report path (default: stdout)");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const DataError& ex) {
    err << "data error: " << ex.what() << "\n";
    return kExitData;
  }
  try {
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    if (code == 0) return kExitOk;
    if (dynamic_cast<const CLI::CallForHelp*>(&ex) == nullptr) err << app.help();
    return kExitUsage;
  }

  try {
    if (s->parsed()) do_simulate(sim, out);
    else if (e->parsed()) do_estimate(est, out);
    else if (b->parsed()) do_bounds(bnd, out);
    else if (k->parsed()) do_pack(pk, out);
    else if (r->parsed()) return do_bench(bn, out, err);
    else if (c->parsed()) do_calibrate(cal, out);
    return kExitOk;
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const DataError& ex) {
    err << "data error: " << ex.what() << "\n";
    return kExitData;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitNumerical;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace countrank::cli
