#include "countrank/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "countrank/error.hpp"
#include "countrank/linalg.hpp"
#include "countrank/philox.hpp"
#include "countrank/sampling.hpp"

namespace countrank::bench {

Model parse_model(const std::string& name) {
  if (name == "poisson_completion") return Model::poisson_completion;
  if (name == "multinomial_matrix") return Model::multinomial_matrix;
  if (name == "multinomial_rows") return Model::multinomial_rows;
  throw DataError("unknown model '" + name + "'");
}

std::string to_string(Model model) {
  switch (model) {
    case Model::poisson_completion: return "poisson_completion";
    case Model::multinomial_matrix: return "multinomial_matrix";
    case Model::multinomial_rows: return "multinomial_rows";
  }
  return "?";
}

Tuning parse_tuning(const std::string& name) {
  if (name == "fixed") return Tuning::fixed;
  if (name == "oracle") return Tuning::oracle;
  if (name == "theorem") return Tuning::theorem;
  if (name == "plugin") return Tuning::plugin;
  throw DataError("unknown tuning rule '" + name + "'");
}

std::string to_string(Tuning tuning) {
  switch (tuning) {
    case Tuning::fixed: return "fixed";
    case Tuning::oracle: return "oracle";
    case Tuning::theorem: return "theorem";
    case Tuning::plugin: return "plugin";
  }
  return "?";
}

namespace {

bool is_mle(const Scenario& s) { return s.estimator == "mle"; }

EstimatorKind kind_of(const Scenario& s) { return parse_estimator_kind(s.estimator); }

}  // namespace

void Scenario::validate() const {
  if (trials < 1) throw DataError("trials must be >= 1");
  if (threads < 1) throw DataError("threads must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw DataError("p must lie in (0, 1]");
  bounds.validate();
  if (id.empty() || id.find_first_of(",\n\r") != std::string::npos) {
    throw DataError("scenario id must be nonempty and free of commas and newlines");
  }
  const bool mle = is_mle(*this);
  const std::optional<EstimatorKind> kind = mle ? std::nullopt : std::optional(kind_of(*this));
  switch (model) {
    case Model::poisson_completion:
      if (kind && (*kind == EstimatorKind::multinomial_matrix || *kind == EstimatorKind::multinomial_rows)) {
        throw DataError("estimator " + estimator + " does not apply to poisson_completion");
      }
      break;
    case Model::multinomial_matrix:
      if (p != 1.0) throw DataError("multinomial models are fully observed (p = 1)");
      if (multinomial_trials < 1) throw DataError("multinomial_matrix needs multinomial_trials >= 1");
      if (kind && *kind != EstimatorKind::multinomial_matrix) {
        throw DataError("multinomial_matrix model takes estimator multinomial_matrix or mle");
      }
      if (tuning == Tuning::fixed && !mle && !delta) throw DataError("fixed tuning requires delta");
      break;
    case Model::multinomial_rows:
      if (p != 1.0) throw DataError("multinomial models are fully observed (p = 1)");
      if (row_trials.empty()) throw DataError("multinomial_rows needs row_trials");
      for (auto n : row_trials)
        if (n < 1) throw DataError("row_trials entries must be >= 1");
      if (kind && *kind != EstimatorKind::multinomial_rows) {
        throw DataError("multinomial_rows model takes estimator multinomial_rows or mle");
      }
      if (tuning == Tuning::fixed && !mle && !delta) throw DataError("fixed tuning requires delta");
      break;
  }
  if (kind && tuning == Tuning::fixed) {
    if (*kind == EstimatorKind::dantzig && !delta) throw DataError("fixed tuning of dantzig requires delta");
    if (*kind == EstimatorKind::regls && !lambda) throw DataError("fixed tuning of regls requires lambda");
  }
  if (delta && !(*delta >= 0.0)) throw DataError("delta must be >= 0");
  if (lambda && !(*lambda >= 0.0)) throw DataError("lambda must be >= 0");
  if (rank && *rank == 0) throw DataError("rank must be >= 1");
  if (has(project, Projection::global_simplex) && has(project, Projection::row_simplex)) {
    throw DataError("global_simplex and row_simplex projections are mutually exclusive");
  }
}

DenseMatrix random_low_rank(std::size_t rows, std::size_t cols, std::size_t rank, double lambda_max,
                            std::uint64_t seed) {
  if (rows == 0 || cols == 0 || rank == 0) throw DataError("random_low_rank: sizes must be positive");
  if (!(lambda_max > 0.0)) throw DataError("random_low_rank: lambda_max must be positive");
  rng::Stream stream(seed, rng::StreamTag::truth);
  DenseMatrix u(rows, rank), v(cols, rank);
  for (double& x : u.entries()) x = stream.uniform();
  for (double& x : v.entries()) x = stream.uniform();
  DenseMatrix m(multiply(u, v.transposed()));
  const double top = *std::max_element(m.entries().begin(), m.entries().end());
  return scaled(std::move(m), lambda_max / top);
}

namespace {

std::vector<double> balanced_signs(std::size_t n, rng::Stream& stream) {
  std::vector<double> s(n, -1.0);
  std::fill(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n / 2), 1.0);
  for (std::size_t i = n; i > 1; --i) std::swap(s[i - 1], s[stream.below(i)]);
  return s;
}

}  // namespace

DenseMatrix two_level(std::size_t rows, std::size_t cols, double lambda, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw DataError("two_level: sizes must be positive");
  if (!(lambda > 0.0)) throw DataError("two_level: lambda must be positive");
  rng::Stream stream(seed, rng::StreamTag::truth);
  const auto u = balanced_signs(rows, stream);
  const auto v = balanced_signs(cols, stream);
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = lambda + 0.5 * lambda * u[i] * v[j];
  return m;
}

namespace {

DenseMatrix generate_truth(const TruthSpec& t, std::uint64_t seed) {
  if (t.generator == "matrix") {
    if (!t.matrix) throw DataError("truth generator 'matrix' needs a matrix");
    return *t.matrix;
  }
  if (t.generator == "random_low_rank") return random_low_rank(t.rows, t.cols, t.rank, t.lambda_max, seed);
  if (t.generator == "constant") {
    if (t.rows == 0 || t.cols == 0) throw DataError("constant truth needs rows and cols");
    return DenseMatrix::constant(t.rows, t.cols, t.lambda_max);
  }
  if (t.generator == "two_level") return two_level(t.rows, t.cols, t.lambda_max, seed);
  if (t.generator == "block_family") {
    if (!t.family) throw DataError("block_family truth needs a family config");
    const auto theta = BitVector::from_hex(t.theta_hex, t.family->code_length());
    if (t.family->mode == FamilyMode::assouad) return assouad_family(*t.family).member(theta);
    t.family->validate();
    const double dp = std::sqrt(t.family->lambda_max / (32.0 * static_cast<double>(t.family->short_side()) * t.family->p));
    return block_matrix(theta, *t.family, t.family->lambda_max / 2.0 - dp, t.family->lambda_max / 2.0 + dp);
  }
  throw DataError("unknown truth generator '" + t.generator + "'");
}

double total(const DenseMatrix& m) {
  return std::accumulate(m.entries().begin(), m.entries().end(), 0.0);
}

std::int64_t min_trials(const std::vector<std::int64_t>& n) { return *std::min_element(n.begin(), n.end()); }

// Poisson plug-in: rows/column sums of M and M^2 estimated by observed sums of X and X^2 - X, over p.
double plugin_A(const MaskedObservations& obs, double p, const BoundConfig& cfg) {
  std::vector<double> rs(obs.rows(), 0.0), rq(obs.rows(), 0.0), cs(obs.cols(), 0.0), cq(obs.cols(), 0.0);
  double top = 0.0;
  const auto cells = obs.mask().cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const double x = static_cast<double>(obs.counts()[k]);
    rs[cells[k].row] += x;
    cs[cells[k].col] += x;
    rq[cells[k].row] += x * x - x;
    cq[cells[k].col] += x * x - x;
    top = std::max(top, x);
  }
  auto side = [&](const std::vector<double>& s, const std::vector<double>& q) {
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      best = std::max(best, std::sqrt(std::max(0.0, s[i] / p + (1.0 - p) * q[i] / p)));
    }
    return best;
  };
  const double st = side(rs, rq) + side(cs, cq);
  return opnorm_bound_A(obs.rows(), obs.cols(), st, top, p, cfg);
}

DenseMatrix row_normalized(const DenseMatrix& counts, const std::vector<std::int64_t>& n) {
  DenseMatrix out = counts;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (double& x : out.row(i)) x /= static_cast<double>(n[i]);
  return out;
}

bool exceeds(double error, double bound) { return error > bound * (1.0 + 1e-9) + 1e-12; }

}  // namespace

std::optional<double> mle_risk_reference(Model model, const DenseMatrix& truth, double p, std::int64_t trials) {
  switch (model) {
    case Model::poisson_completion:
      if (p != 1.0) return std::nullopt;
      return total(truth);
    case Model::multinomial_matrix: {
      if (trials < 1) throw DataError("mle_risk_reference: N must be >= 1");
      double s = 0.0;
      for (double x : truth.entries()) s += x * (1.0 - x);
      return s / static_cast<double>(trials);
    }
    case Model::multinomial_rows: {
      double s = 0.0;
      for (double x : truth.entries()) s += x * (1.0 - x);
      return s;
    }
  }
  return std::nullopt;
}

Instance materialize(const Scenario& s) {
  s.validate();
  Instance inst;
  DenseMatrix truth = generate_truth(s.truth, s.base_seed);
  for (double x : truth.entries())
    if (x < 0.0) throw DataError("truth has a negative entry");
  switch (s.model) {
    case Model::poisson_completion:
      inst.concentration_threshold = opnorm_bound_A(truth, s.p, s.bounds);
      inst.mle_risk = mle_risk_reference(s.model, truth, s.p, 0);
      break;
    case Model::multinomial_matrix: {
      const double t = total(truth);
      if (!(t > 0.0)) throw DataError("multinomial truth must have positive total");
      truth = scaled(std::move(truth), 1.0 / t);
      inst.concentration_threshold = delta_matrix_multinomial(truth, s.multinomial_trials, s.bounds.epsilon, s.bounds.C);
      inst.mle_risk = mle_risk_reference(s.model, truth, 1.0, s.multinomial_trials);
      break;
    }
    case Model::multinomial_rows: {
      for (std::size_t i = 0; i < truth.rows(); ++i) {
        double rs = 0.0;
        for (double x : truth.row(i)) rs += x;
        if (!(rs > 0.0)) throw DataError("row " + std::to_string(i + 1) + " of the truth sums to zero");
        for (double& x : truth.row(i)) x /= rs;
      }
      if (s.row_trials.size() == 1) inst.row_trials.assign(truth.rows(), s.row_trials[0]);
      else inst.row_trials = s.row_trials;
      if (inst.row_trials.size() != truth.rows()) {
        throw DataError("row_trials has " + std::to_string(s.row_trials.size()) + " entries for " +
                        std::to_string(truth.rows()) + " rows");
      }
      inst.concentration_threshold = delta_row_multinomial(truth, min_trials(inst.row_trials), s.bounds.epsilon);
      inst.mle_risk = mle_risk_reference(s.model, truth, 1.0, 0);
      break;
    }
  }
  inst.truth_rank = numerical_rank(truth);
  inst.truth = std::move(truth);
  return inst;
}

TrialRecord run_trial(const Scenario& s, std::size_t trial_index) { return run_trial(s, materialize(s), trial_index); }

TrialRecord run_trial(const Scenario& s, const Instance& inst, std::size_t trial_index) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial = trial_index;
  rec.seed = rng::derive_seed(s.base_seed, trial_index);
  const DenseMatrix& m = inst.truth;
  const std::size_t r_truth = std::max<std::size_t>(inst.truth_rank, 1);
  const bool mle = is_mle(s);
  EstimateResult est;

  if (s.model == Model::poisson_completion) {
    const Mask mask = sample_bernoulli_mask(m.rows(), m.cols(), {s.p, rng::derive_seed(rec.seed, 0)});
    const MaskedObservations obs = sample_poisson(m, mask, rng::derive_seed(rec.seed, 1));
    const DenseMatrix y = mask_adjoint(obs);
    rec.deviation = operator_norm(scaled_difference(y, m, s.p));
    rec.concentration_holds = rec.deviation <= inst.concentration_threshold;
    if (mle) {
      est.estimate = apply_projections(scaled(y, 1.0 / s.p), s.project);
      est.output_rank = numerical_rank(est.estimate);
      rec.delta_used = 0.0;
      rec.event_holds = rec.deviation == 0.0;
    } else {
      const EstimatorKind kind = kind_of(s);
      double d = 0.0;
      switch (s.tuning) {
        case Tuning::fixed: d = kind == EstimatorKind::regls ? *s.lambda / (2.0 * s.p) : s.delta.value_or(0.0); break;
        case Tuning::oracle: d = rec.deviation; break;
        case Tuning::theorem: d = inst.concentration_threshold; break;
        case Tuning::plugin: d = plugin_A(obs, s.p, s.bounds); break;
      }
      EstimatorParams params;
      params.kind = kind;
      params.p = s.p;
      params.project = s.project;
      params.delta = d;
      params.lambda = 2.0 * s.p * d;
      params.rank = s.rank.value_or(r_truth);
      est = estimate(params, obs);
      if (kind == EstimatorKind::rank_trunc) {
        rec.delta_used = rec.deviation;
        rec.event_holds = true;
        rec.bound_checked = *params.rank >= inst.truth_rank;
        rec.bound = upper_bound(kind, *params.rank, s.p, rec.deviation);
      } else {
        rec.delta_used = d;
        rec.event_holds = rec.deviation <= d;
        rec.bound_checked = true;
        rec.bound = upper_bound(kind, r_truth, s.p, kind == EstimatorKind::regls ? *params.lambda : d);
      }
    }
    rec.error = frobenius_distance(est.estimate, m);
    rec.weighted_error = rec.error;
  } else if (s.model == Model::multinomial_matrix) {
    const std::int64_t n = s.multinomial_trials;
    const DenseMatrix x = sample_matrix_multinomial(m, n, rng::derive_seed(rec.seed, 1));
    const DenseMatrix freq = scaled(x, 1.0 / static_cast<double>(n));
    rec.deviation = operator_norm(scaled_difference(freq, m, 1.0));
    rec.concentration_holds = rec.deviation <= inst.concentration_threshold;
    if (mle) {
      est.estimate = apply_projections(freq, s.project);
      est.output_rank = numerical_rank(est.estimate);
      rec.event_holds = rec.deviation == 0.0;
    } else {
      double d = 0.0;
      switch (s.tuning) {
        case Tuning::fixed: d = *s.delta; break;
        case Tuning::oracle: d = rec.deviation; break;
        case Tuning::theorem: d = inst.concentration_threshold; break;
        case Tuning::plugin: d = delta_matrix_multinomial(freq, n, s.bounds.epsilon, s.bounds.C); break;
      }
      est = estimate_multinomial_matrix(x, n, d, s.project);
      rec.delta_used = d;
      rec.event_holds = rec.deviation <= d;
      rec.bound_checked = true;
      rec.bound = upper_bound(EstimatorKind::multinomial_matrix, r_truth, 1.0, d);
    }
    rec.error = frobenius_distance(est.estimate, m);
    rec.weighted_error = rec.error;
  } else {
    const auto& n = inst.row_trials;
    const DenseMatrix x = sample_row_multinomial({m, n}, rng::derive_seed(rec.seed, 1));
    std::vector<double> root(n.size()), inv_root(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
      root[i] = std::sqrt(static_cast<double>(n[i]));
      inv_root[i] = 1.0 / root[i];
    }
    const DenseMatrix freq = row_normalized(x, n);
    // D^{-1/2}(X - D P) = D^{1/2}(D^{-1} X - P)
    rec.deviation = operator_norm(scale_rows(scaled_difference(freq, m, 1.0), root));
    rec.concentration_holds = rec.deviation <= inst.concentration_threshold;
    if (mle) {
      est.estimate = apply_projections(freq, s.project);
      est.output_rank = numerical_rank(est.estimate);
      rec.event_holds = rec.deviation == 0.0;
    } else {
      double d = 0.0;
      switch (s.tuning) {
        case Tuning::fixed: d = *s.delta; break;
        case Tuning::oracle: d = rec.deviation; break;
        case Tuning::theorem: d = inst.concentration_threshold; break;
        case Tuning::plugin: d = delta_row_multinomial(freq, min_trials(n), s.bounds.epsilon); break;
      }
      est = estimate_row_multinomial(x, n, d, s.project);
      rec.delta_used = d;
      rec.event_holds = rec.deviation <= d;
      rec.bound_checked = true;
      rec.bound = upper_bound(EstimatorKind::multinomial_rows, r_truth, 1.0, d);
    }
    const DenseMatrix diff = scaled_difference(est.estimate, m, 1.0);
    rec.error = frobenius_norm(diff);
    rec.weighted_error = frobenius_norm(scale_rows(diff, root));
  }

  rec.residual_opnorm = est.residual_opnorm;
  rec.output_rank = est.output_rank;
  if (rec.bound_checked && rec.event_holds) {
    const double checked = s.model == Model::multinomial_rows ? rec.weighted_error : rec.error;
    rec.bound_violated = exceeds(checked, rec.bound);
  }
  if (s.timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DataError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Aggregates aggregate(const std::vector<TrialRecord>& records, Model model, std::optional<double> mle_risk) {
  Aggregates a;
  a.trials = records.size();
  if (records.empty()) return a;
  std::vector<double> errors;
  errors.reserve(records.size());
  double sum = 0.0, sq = 0.0, wsq = 0.0;
  std::size_t conc = 0, ev = 0;
  for (const auto& r : records) {
    errors.push_back(r.error);
    sum += r.error;
    sq += r.error * r.error;
    wsq += r.weighted_error * r.weighted_error;
    conc += r.concentration_holds;
    ev += r.event_holds;
    a.bound_checks += r.bound_checked && r.event_holds;
    a.bound_violations += r.bound_violated;
  }
  const double n = static_cast<double>(records.size());
  a.mean_error = sum / n;
  a.mean_squared_error = sq / n;
  a.mean_squared_weighted_error = wsq / n;
  a.median_error = quantile(errors, 0.5);
  a.q05_error = quantile(errors, 0.05);
  a.q25_error = quantile(errors, 0.25);
  a.q75_error = quantile(errors, 0.75);
  a.q95_error = quantile(errors, 0.95);
  a.coverage_concentration = static_cast<double>(conc) / n;
  a.coverage_delta = static_cast<double>(ev) / n;
  if (mle_risk && *mle_risk > 0.0) {
    const double risk = model == Model::multinomial_rows ? a.mean_squared_weighted_error : a.mean_squared_error;
    a.mle_risk_ratio = risk / *mle_risk;
  }
  return a;
}

CampaignReport run_campaign(const Scenario& s) {
  CampaignReport rep;
  rep.scenario = s;
  rep.instance = materialize(s);
  if (s.model == Model::poisson_completion) {
    try {
      rep.bound_report = bound_report(rep.instance.truth, s.p, 0, s.bounds);
    } catch (const DataError&) {
      // Degenerate truth (e.g. all zeros): no bound report.
    }
  }

  std::vector<std::optional<TrialRecord>> slots(s.trials);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex failure_mutex;
  std::size_t failed_at = s.trials;

  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t t = next.fetch_add(1);
      if (t >= s.trials) return;
      try {
        slots[t] = run_trial(s, rep.instance, t);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (t < failed_at) {
          failed_at = t;
          rep.failure = "trial " + std::to_string(t) + ": " + e.what();
          rep.failure_exit_code = dynamic_cast<const DataError*>(&e) ? 2 : 3;
        }
        stop.store(true);
        return;
      }
    }
  };
  const unsigned n_threads = std::min<unsigned>(s.threads, static_cast<unsigned>(s.trials));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  // Completed trials in index order, up to the first failure.
  for (std::size_t t = 0; t < s.trials && t < failed_at; ++t) {
    if (!slots[t]) break;
    rep.records.push_back(*slots[t]);
  }
  rep.aggregates = aggregate(rep.records, s.model, rep.instance.mle_risk);
  return rep;
}

SweepReport minimax_family_sweep(const SweepConfig& c) {
  SweepReport rep;
  rep.mode = to_string(c.family.mode);
  EstimatorParams params = c.estimator;
  params.p = c.family.p;
  if (params.kind == EstimatorKind::rank_trunc && !params.rank) params.rank = c.family.r;
  params.validate();
  if (params.kind == EstimatorKind::multinomial_matrix || params.kind == EstimatorKind::multinomial_rows) {
    throw DataError("family sweeps use Poisson estimators");
  }
  if (c.members == 0 || c.trials_per_member == 0) throw DataError("members and trials_per_member must be >= 1");

  std::vector<DenseMatrix> members;
  if (c.family.mode == FamilyMode::fano) {
    const FanoFamily fam = fano_family(c.family, c.fano);
    for (std::size_t i = 0; i < std::min(c.members, fam.size()); ++i) members.push_back(fam.member(i));
    const auto lb = lower_bound_variance_rate(c.family.r, c.family.p, fam.sigma1, c.family.rows(), c.family.cols());
    rep.lower_bound = lb.radius;
    rep.predicted_probability = lb.probability;
    rep.vacuous = lb.vacuous;
  } else {
    const AssouadFamily fam = assouad_family(c.family);
    rng::Stream stream(c.seed, rng::StreamTag::instance);
    for (std::size_t i = 0; i < c.members; ++i) {
      BitVector theta(fam.code_length());
      for (std::size_t k = 0; k < theta.size(); ++k) theta.set(k, stream.next_u32() & 1u);
      members.push_back(fam.member(theta));
    }
    const auto lb = lower_bound_squared_rate(c.family.r, c.family.p, fam.sigma2, c.family.rows(), c.family.cols());
    rep.lower_bound = lb.max_form;
    rep.vacuous = !lb.valid;
  }

  std::size_t exceeding = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    double sq = 0.0;
    for (std::size_t t = 0; t < c.trials_per_member; ++t) {
      const std::uint64_t seed = rng::derive_seed(c.seed, i * c.trials_per_member + t);
      const Mask mask = sample_bernoulli_mask(members[i].rows(), members[i].cols(), {params.p, rng::derive_seed(seed, 0)});
      const auto obs = sample_poisson(members[i], mask, rng::derive_seed(seed, 1));
      const double err = frobenius_distance(estimate(params, obs).estimate, members[i]);
      rep.max_error = std::max(rep.max_error, err);
      sq += err * err;
      exceeding += err >= rep.lower_bound;
      ++rep.runs;
    }
    rep.max_mean_squared_error = std::max(rep.max_mean_squared_error, sq / static_cast<double>(c.trials_per_member));
  }
  rep.members = members.size();
  rep.fraction_exceeding_radius = static_cast<double>(exceeding) / static_cast<double>(rep.runs);
  const double num = c.family.mode == FamilyMode::fano ? rep.max_error : rep.max_mean_squared_error;
  rep.ratio = rep.lower_bound > 0.0 ? num / rep.lower_bound : std::numeric_limits<double>::infinity();
  rep.note = "sanity check with one estimator over sampled members; the lower bound concerns the best "
             "estimator at the worst member";
  return rep;
}

}  // namespace countrank::bench
