// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "countrank/bench.hpp"
#include "countrank/bounds.hpp"
#include "countrank/calibration.hpp"
#include "countrank/constructions.hpp"
#include "countrank/estimators.hpp"
#include "countrank/io.hpp"
#include "countrank/linalg.hpp"
#include "countrank/packing.hpp"
#include "countrank/reference_solver.hpp"
#include "countrank/reports.hpp"
#include "countrank/sampling.hpp"
#include "test_support.hpp"

using namespace countrank;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned worker_count() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

// Random instance for the deterministic error-bound checks.
struct BoundInstance {
  DenseMatrix truth;
  std::size_t rank = 0;
  double p = 1.0;
  MaskedObservations obs;
  double delta = 0.0;
};

std::vector<BoundInstance> bound_instances(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::uniform_real_distribution<double> lam(0.01, 50.0);
  const double ps[] = {0.3, 0.7, 1.0};
  std::vector<BoundInstance> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    BoundInstance in;
    const std::size_t m = size(gen), n = size(gen);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>({5, m, n}))(gen);
    in.truth = testing_support::low_rank_nonneg(m, n, r, lam(gen), gen);
    in.rank = std::max<std::size_t>(numerical_rank(in.truth), 1);
    in.p = ps[k % 3];
    const Mask mask = sample_bernoulli_mask(m, n, {in.p, gen()});
    in.obs = sample_poisson(in.truth, mask, gen());
    in.delta = operator_norm(scaled_difference(mask_adjoint(in.obs), in.truth, in.p));
    out.push_back(std::move(in));
  }
  return out;
}

bool within(double err, double bound) { return err <= bound * (1.0 + 1e-9) + 1e-12; }

Outcome criterion1() {
  std::size_t dz = 0, rl = 0, skipped = 0;
  for (const auto& in : bound_instances(1000, 101)) {
    if (in.delta == 0.0) {
      ++skipped;
      continue;
    }
    const double r = static_cast<double>(in.rank);
    const auto d = estimate_dantzig(in.obs, in.p, in.delta);
    if (!within(frobenius_distance(d.estimate, in.truth), 4.0 * std::sqrt(2.0 * r) * in.delta / in.p)) ++dz;
    const double lambda = 2.0 * in.p * in.delta;
    const auto g = estimate_regls(in.obs, in.p, lambda);
    if (!within(frobenius_distance(g.estimate, in.truth), 2.0 * std::sqrt(2.0 * r) * lambda / (in.p * in.p))) ++rl;
  }
  std::ostringstream s;
  s << "dantzig violations " << dz << ", regls violations " << rl << " (1000 instances, " << skipped
    << " with zero deviation)";
  return {dz == 0 && rl == 0, s.str()};
}

Outcome criterion2() {
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& in : bound_instances(1000, 101)) {
    const double r = static_cast<double>(in.rank);
    const auto t = estimate_rank_truncated(in.obs, in.p, in.rank);
    const double err = frobenius_distance(t.estimate, in.truth);
    const double bound = 2.0 * std::sqrt(2.0 * r) / in.p * in.delta;
    if (!within(err, bound)) ++bad;
    if (bound > 0.0) worst = std::max(worst, err / bound);
  }
  std::ostringstream s;
  s << "rank_trunc violations " << bad << ", worst error/bound " << worst;
  return {bad == 0, s.str()};
}

Outcome criterion3() {
  std::mt19937_64 gen(303);
  double worst_eq = 0.0;
  for (std::size_t k = 0; k < 200; ++k) {
    const std::size_t m = 2 + gen() % 40, n = 2 + gen() % 40;
    const auto truth = testing_support::low_rank_nonneg(m, n, 1 + gen() % 4, 1.0 + 30.0 * testing_support::uniform(1, 1, gen)(0, 0), gen);
    const double p = (k % 2) ? 0.5 : 1.0;
    const auto obs = sample_poisson(truth, sample_bernoulli_mask(m, n, {p, gen()}), gen());
    const double delta = 0.3 * operator_norm(mask_adjoint(obs)) + 0.1;
    const auto a = estimate_dantzig(obs, p, delta).estimate;
    const auto b = estimate_regls(obs, p, 2.0 * p * delta).estimate;
    const double scale = std::max(testing_support::frob_oracle(a), 1e-300);
    worst_eq = std::max(worst_eq, testing_support::frob_oracle(a, b) / scale);
  }
  double worst_ref = 0.0;
  std::size_t ref_failures = 0;
  for (std::size_t k = 0; k < 20; ++k) {
    const auto truth = testing_support::low_rank_nonneg(20, 15, 2, 10.0, gen);
    const double p = (k % 2) ? 0.6 : 1.0;
    const auto obs = sample_poisson(truth, sample_bernoulli_mask(20, 15, {p, gen()}), gen());
    const double delta = 0.5 * operator_norm(mask_adjoint(obs));
    const auto closed = estimate_dantzig(obs, p, delta).estimate;
    try {
      ReferenceSolverOptions opt;
      opt.tol = 1e-7;
      opt.max_iterations = 50000;
      const auto ref = reference_solver_dantzig(obs, p, delta, opt);
      worst_ref = std::max(worst_ref, testing_support::frob_oracle(ref.estimate, closed) /
                                          std::max(testing_support::frob_oracle(closed), 1e-300));
    } catch (const std::exception&) {
      ++ref_failures;
    }
  }
  std::ostringstream s;
  s << "dantzig vs regls worst relative gap " << worst_eq << " (limit 1e-10); reference solver worst relative gap "
    << worst_ref << " (limit 1e-4), solver failures " << ref_failures;
  return {worst_eq <= 1e-10 && worst_ref <= 1e-4 && ref_failures == 0, s.str()};
}

Outcome criterion4() {
  const auto start = std::chrono::steady_clock::now();
  CalibrationOptions opt;
  opt.seed = 404;
  opt.trials = 100;
  opt.epsilon = 0.1;
  const auto cal = calibrate_C(opt);

  BoundConfig cfg;
  cfg.epsilon = 0.1;
  cfg.C = cal.C;
  const DenseMatrix m = bench::random_low_rank(100, 100, 2, 20.0, 4040);
  const double a = opnorm_bound_A(m, 0.5, cfg);
  const std::size_t trials = 500;
  std::vector<char> covered(trials, 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < trials;) {
      const std::uint64_t seed = rng::derive_seed(40400, t);
      const Mask mask = sample_bernoulli_mask(100, 100, {0.5, rng::derive_seed(seed, 0)});
      const auto obs = sample_poisson(m, mask, rng::derive_seed(seed, 1));
      covered[t] = operator_norm(scaled_difference(mask_adjoint(obs), m, 0.5)) <= a;
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned i = 0; i < worker_count(); ++i) pool.emplace_back(work);
  pool.clear();
  const double coverage = static_cast<double>(std::count(covered.begin(), covered.end(), 1)) / trials;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream s;
  s << "calibrated C " << cal.C << (cal.floored ? " (floor)" : "") << ", A " << a << ", coverage " << coverage
    << " (need >= 0.8), " << seconds << " s";
  return {coverage >= 0.8 && seconds <= 300.0, s.str()};
}

Outcome criterion5() {
  bench::Scenario s;
  s.id = "risk_vs_mle";
  s.truth.generator = "two_level";
  s.truth.rows = 100;
  s.truth.cols = 100;
  s.truth.lambda_max = 10.0;
  s.p = 1.0;
  s.estimator = "rank_trunc";
  s.rank = 2;
  s.trials = 200;
  s.base_seed = 505;
  s.threads = worker_count();
  const auto rep = bench::run_campaign(s);
  const double mle = *rep.instance.mle_risk;
  const double ratio = rep.aggregates.mean_squared_error / mle;
  const double lo = 2.0 / (4.0 * 100.0), hi = 8.0 * 2.0 / 100.0;
  std::ostringstream o;
  o << "truth rank " << rep.instance.truth_rank << ", MSE/MLE risk " << ratio << " (window [" << lo << ", " << hi
    << "])";
  return {!rep.failure && rep.instance.truth_rank == 2 && ratio >= lo && ratio <= hi, o.str()};
}

Outcome criterion6() {
  auto run = [](bench::Model model, const std::string& gen, std::int64_t n, std::uint64_t seed) {
    bench::Scenario s;
    s.id = "mle";
    s.model = model;
    s.truth.generator = gen;
    s.truth.rows = 12;
    s.truth.cols = 9;
    s.truth.rank = 2;
    s.truth.lambda_max = 3.0;
    s.multinomial_trials = model == bench::Model::multinomial_matrix ? n : 0;
    if (model == bench::Model::multinomial_rows) s.row_trials = {n};
    s.estimator = "mle";
    s.trials = 10000;
    s.base_seed = seed;
    s.threads = worker_count();
    return bench::run_campaign(s);
  };
  const auto a = run(bench::Model::poisson_completion, "random_low_rank", 0, 601);
  const auto b = run(bench::Model::multinomial_matrix, "random_low_rank", 400, 602);
  const auto c = run(bench::Model::multinomial_rows, "random_low_rank", 50, 603);

  // Independent references from the truths.
  double ra = 0.0, rb = 0.0, rc = 0.0;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      ra += a.instance.truth(i, j);
      rb += b.instance.truth(i, j) * (1.0 - b.instance.truth(i, j)) / 400.0;
      rc += c.instance.truth(i, j) * (1.0 - c.instance.truth(i, j));
    }
  const double ea = std::abs(a.aggregates.mean_squared_error / ra - 1.0);
  const double eb = std::abs(b.aggregates.mean_squared_error / rb - 1.0);
  const double ec = std::abs(c.aggregates.mean_squared_weighted_error / rc - 1.0);
  const bool refs_agree = std::abs(*a.instance.mle_risk / ra - 1) < 1e-12 &&
                          std::abs(*b.instance.mle_risk / rb - 1) < 1e-12 &&
                          std::abs(*c.instance.mle_risk / rc - 1) < 1e-12;
  std::ostringstream s;
  s << "relative gaps poisson " << ea << ", matrix multinomial " << eb << ", row multinomial " << ec
    << " (limit 0.05)" << (refs_agree ? "" : ", mle_risk_reference disagrees with direct sums");
  return {ea <= 0.05 && eb <= 0.05 && ec <= 0.05 && refs_agree, s.str()};
}

Outcome criterion7() {
  std::size_t tail_bad = 0;
  for (double lambda : {0.5, 1.0, 5.0, 20.0}) {
    // PMF by recurrence in long double; tail = 1 - P(X <= ceil(lambda + t) - 1).
    std::vector<long double> pmf(400);
    pmf[0] = std::exp(-static_cast<long double>(lambda));
    for (std::size_t k = 1; k < pmf.size(); ++k) pmf[k] = pmf[k - 1] * lambda / static_cast<long double>(k);
    for (int t = 1; t <= 40; ++t) {
      const auto first = static_cast<std::size_t>(std::ceil(lambda + t));
      long double tail = 0.0L;
      for (std::size_t k = first; k < pmf.size(); ++k) tail += pmf[k];
      if (static_cast<double>(tail) > poisson_tail_bound(lambda, t) * (1.0 + 1e-12)) ++tail_bad;
    }
  }
  std::size_t kl_bad = 0;
  for (int i = 1; i <= 100; ++i)
    for (int j = 1; j <= 100; ++j) {
      const double a = 0.25 * i, b = 0.25 * j;
      if (poisson_kl(a, b) > (a - b) * (a - b) / b * (1.0 + 1e-12) + 1e-15) ++kl_bad;
    }
  std::ostringstream s;
  s << "tail violations " << tail_bad << " of 160, KL violations " << kl_bad << " of 10000";
  return {tail_bad == 0 && kl_bad == 0, s.str()};
}

Outcome criterion8() {
  bench::Scenario s;
  s.id = "rows";
  s.model = bench::Model::multinomial_rows;
  s.truth.generator = "random_low_rank";
  s.truth.rows = 50;
  s.truth.cols = 30;
  s.truth.rank = 2;
  s.row_trials = {200};
  s.estimator = "multinomial_rows";
  s.tuning = bench::Tuning::theorem;
  s.trials = 300;
  s.base_seed = 808;
  s.threads = worker_count();
  s.bounds.epsilon = 0.1;
  const auto rep = bench::run_campaign(s);
  std::size_t held = 0, implication_bad = 0;
  const double bound = 4.0 * std::sqrt(2.0 * static_cast<double>(rep.instance.truth_rank)) *
                       rep.instance.concentration_threshold;
  for (const auto& r : rep.records) {
    if (!r.concentration_holds) continue;
    ++held;
    if (!within(r.weighted_error, bound)) ++implication_bad;
  }
  const double freq = static_cast<double>(held) / static_cast<double>(rep.records.size());
  std::ostringstream o;
  o << "event frequency " << freq << " (need >= 0.9), implication violations " << implication_bad
    << ", harness violations " << rep.aggregates.bound_violations;
  return {!rep.failure && rep.records.size() == 300 && freq >= 0.9 && implication_bad == 0 &&
              rep.aggregates.bound_violations == 0,
          o.str()};
}

Outcome criterion9() {
  std::ostringstream s;
  bool ok = true;
  try {
    const auto big = gv_packing(64, 16, 2981, 909);
    const std::size_t d = minimum_pairwise_distance(big);
    s << "m=64: " << big.codewords.size() << " codewords, audited min distance " << d;
    ok = ok && big.codewords.size() >= 2981 && d >= 16;
  } catch (const PackingBudgetExhausted& e) {
    s << "m=64: " << e.what();
    ok = false;
  }
  const auto small = gv_packing(8, 2, gv_target(8), 910);
  // Exhaustive check over all pairs and also against the whole cube for the audit itself.
  std::size_t brute = 9;
  for (std::size_t a = 0; a < small.codewords.size(); ++a)
    for (std::size_t b = a + 1; b < small.codewords.size(); ++b) {
      std::size_t h = 0;
      for (std::size_t k = 0; k < 8; ++k) h += small.codewords[a].get(k) != small.codewords[b].get(k);
      brute = std::min(brute, h);
    }
  const bool small_ok = audit_packing(small) && brute >= 2 && brute == minimum_pairwise_distance(small);
  s << "; m=8: " << small.codewords.size() << " codewords, min distance " << brute;
  return {ok && small_ok, s.str()};
}

Outcome criterion10() {
  std::size_t checked = 0, class_bad = 0, sep_bad = 0;
  const BlockFamilyConfig fano_cfgs[] = {
      {2, 16, 4, 5.0, 0.5, FamilyMode::fano}, {3, 12, 6, 1.0, 1.0, FamilyMode::fano}, {2, 4, 20, 10.0, 0.3, FamilyMode::fano}};
  for (const auto& c : fano_cfgs) {
    FanoOptions opt;
    opt.seed = 1000 + checked;
    const auto fam = fano_family(c, opt);
    const std::size_t n = std::min<std::size_t>(fam.size(), 20);
    for (std::size_t i = 0; i < n; ++i) {
      ++checked;
      if (!check_variance_class(fam.member(i), c.r, c.lambda_max, fam.sigma1).ok()) ++class_bad;
      for (std::size_t j = i + 1; j < n; ++j)
        if (testing_support::frob_oracle(fam.member(i), fam.member(j)) < fam.separation * (1.0 - 1e-12)) ++sep_bad;
    }
  }
  const BlockFamilyConfig assouad_cfgs[] = {
      {2, 10, 10, 3.0, 0.2, FamilyMode::assouad}, {3, 6, 4, 1.0, 0.5, FamilyMode::assouad}, {1, 3, 8, 2.0, 1.0, FamilyMode::assouad}};
  std::mt19937_64 gen(1010);
  for (const auto& c : assouad_cfgs) {
    const auto fam = assouad_family(c);
    for (int t = 0; t < 20; ++t) {
      BitVector theta(fam.code_length());
      for (std::size_t k = 0; k < theta.size(); ++k) theta.set(k, gen() & 1u);
      ++checked;
      if (!check_squared_class(fam.member(theta), c.r, c.lambda_max, fam.sigma2).ok()) ++class_bad;
    }
  }
  std::ostringstream s;
  s << checked << " members checked, class violations " << class_bad << ", separation violations " << sep_bad;
  return {class_bad == 0 && sep_bad == 0, s.str()};
}

Outcome criterion11() {
  std::vector<bench::Scenario> scenarios(3);
  scenarios[0].id = "poisson";
  scenarios[0].truth.generator = "random_low_rank";
  scenarios[0].truth.rows = 40;
  scenarios[0].truth.cols = 30;
  scenarios[0].truth.rank = 3;
  scenarios[0].truth.lambda_max = 8.0;
  scenarios[0].p = 0.4;
  scenarios[0].tuning = bench::Tuning::plugin;
  scenarios[0].project = Projection::nonnegative;
  scenarios[0].trials = 30;
  scenarios[0].base_seed = 1111;
  scenarios[1] = scenarios[0];
  scenarios[1].id = "matrix";
  scenarios[1].model = bench::Model::multinomial_matrix;
  scenarios[1].p = 1.0;
  scenarios[1].multinomial_trials = 5000;
  scenarios[1].estimator = "multinomial_matrix";
  scenarios[1].tuning = bench::Tuning::theorem;
  scenarios[1].project = Projection::global_simplex;
  scenarios[2] = scenarios[1];
  scenarios[2].id = "rows";
  scenarios[2].model = bench::Model::multinomial_rows;
  scenarios[2].row_trials = {100};
  scenarios[2].estimator = "multinomial_rows";
  scenarios[2].project = Projection::row_simplex;

  std::size_t differing = 0;
  for (const auto& base : scenarios) {
    // Thread count is part of the config, so reruns use the same one.
    for (unsigned threads : {1u, 4u}) {
      auto s = base;
      s.threads = threads;
      const auto a = bench::run_campaign(s);
      const auto b = bench::run_campaign(s);
      const std::string ja = reports::dump(reports::to_json(a)), jb = reports::dump(reports::to_json(b));
      const std::string ca = io::trial_csv(reports::trial_rows(a)), cb = io::trial_csv(reports::trial_rows(b));
      if (ja != jb || ca != cb || a.failure) ++differing;
    }
  }
  std::ostringstream s;
  s << differing << " of 6 reruns differ";
  return {differing == 0, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"deterministic dantzig/regls error bounds", criterion1},
      {"deterministic rank-truncation error bound", criterion2},
      {"closed-form equivalence and reference solver", criterion3},
      {"concentration coverage with calibrated C", criterion4},
      {"risk improvement over the MLE", criterion5},
      {"exact MLE risk formulas", criterion6},
      {"Poisson tail and KL inequalities", criterion7},
      {"row-multinomial coverage and implication", criterion8},
      {"packing construction", criterion9},
      {"lower-bound family membership and separation", criterion10},
      {"campaign reproducibility", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
