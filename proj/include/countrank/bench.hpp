#pragma once

// Monte Carlo harness. A campaign is a pure function of its Scenario: trial t
// draws everything from derive_seed(base_seed, t), and records are aggregated
// in trial order whatever the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "countrank/bounds.hpp"
#include "countrank/constructions.hpp"
#include "countrank/dense_matrix.hpp"
#include "countrank/estimators.hpp"
#include "countrank/projections.hpp"

namespace countrank::bench {

enum class Model { poisson_completion, multinomial_matrix, multinomial_rows };
Model parse_model(const std::string& name);
std::string to_string(Model model);

/// How the estimator's delta (or lambda = 2 p delta) is chosen per trial.
///   fixed    scenario value
///   oracle   the realized deviation, using the truth (simulation only)
///   theorem  the bound formula on the truth: A(M, p, eps) or the multinomial deltas
///   plugin   the bound formula on a truth estimated from the observations
enum class Tuning { fixed, oracle, theorem, plugin };
Tuning parse_tuning(const std::string& name);
std::string to_string(Tuning tuning);

struct TruthSpec {
  /// matrix | random_low_rank | constant | two_level | block_family
  std::string generator = "matrix";
  std::optional<DenseMatrix> matrix;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 1;
  double lambda_max = 1.0;
  /// block_family only.
  std::optional<BlockFamilyConfig> family;
  std::string theta_hex;
};

struct Scenario {
  std::string id = "scenario";
  Model model = Model::poisson_completion;
  TruthSpec truth;
  double p = 1.0;
  /// Matrix multinomial: N.
  std::int64_t multinomial_trials = 0;
  /// Row multinomial: N_i, one entry per row or a single entry for all rows.
  std::vector<std::int64_t> row_trials;
  /// An EstimatorKind name, or "mle".
  std::string estimator = "dantzig";
  Tuning tuning = Tuning::fixed;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<std::size_t> rank;
  Projection project = Projection::none;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  BoundConfig bounds;
  unsigned threads = 1;
  bool timing = false;

  void validate() const;
};

/// Random nonnegative rank-r matrix U V^T with U, V uniform on [0,1], scaled to max entry lambda_max.
DenseMatrix random_low_rank(std::size_t rows, std::size_t cols, std::size_t rank, double lambda_max,
                            std::uint64_t seed);
/// lambda 11^T + (lambda/2) u v^T with balanced +-1 sign vectors: rank 2, entries lambda/2 or 3 lambda/2,
/// constant row and column sums.
DenseMatrix two_level(std::size_t rows, std::size_t cols, double lambda, std::uint64_t seed);

/// The truth fixed by a scenario, normalized for the model (sum 1, or unit row sums).
struct Instance {
  DenseMatrix truth;
  std::size_t truth_rank = 0;
  std::vector<std::int64_t> row_trials;
  /// A(M, p, eps), delta_matrix_multinomial or delta_row_multinomial on the truth.
  double concentration_threshold = 0.0;
  std::optional<double> mle_risk;
};
Instance materialize(const Scenario& scenario);

/// Exact expected squared error of the unstructured MLE: sum M_ij (Poisson, p = 1),
/// sum p_ij (1 - p_ij) / N (matrix multinomial), sum p_ij (1 - p_ij) in the D-weighted norm
/// (row multinomial). Empty for Poisson with p < 1.
std::optional<double> mle_risk_reference(Model model, const DenseMatrix& truth, double p, std::int64_t trials);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double error = 0.0;           ///< ||M_hat - M||_F
  double weighted_error = 0.0;  ///< ||D^{1/2}(P_hat - P)||_F for row multinomial, else equal to error
  double residual_opnorm = 0.0;
  double deviation = 0.0;       ///< realized noise norm the delta is compared against
  double delta_used = 0.0;
  std::size_t output_rank = 0;
  bool concentration_holds = false;  ///< deviation <= concentration threshold
  bool event_holds = false;          ///< deviation <= delta_used (always true for rank truncation)
  bool bound_checked = false;
  double bound = 0.0;
  bool bound_violated = false;
  double wall_ms = 0.0;
};

TrialRecord run_trial(const Scenario& scenario, const Instance& instance, std::size_t trial_index);
TrialRecord run_trial(const Scenario& scenario, std::size_t trial_index);

struct Aggregates {
  std::size_t trials = 0;
  double mean_error = 0.0;
  double median_error = 0.0;
  double q05_error = 0.0, q25_error = 0.0, q75_error = 0.0, q95_error = 0.0;
  double mean_squared_error = 0.0;
  double mean_squared_weighted_error = 0.0;
  double coverage_concentration = 0.0;
  double coverage_delta = 0.0;
  std::size_t bound_checks = 0;
  std::size_t bound_violations = 0;
  std::optional<double> mle_risk_ratio;

  bool operator==(const Aggregates&) const = default;
};

/// Type-7 quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double q);
Aggregates aggregate(const std::vector<TrialRecord>& records, Model model, std::optional<double> mle_risk);

struct CampaignReport {
  Scenario scenario;
  Instance instance;
  std::vector<TrialRecord> records;
  Aggregates aggregates;
  std::optional<BoundReport> bound_report;
  /// Set when a trial failed; records then hold the trials completed before it.
  std::optional<std::string> failure;
  int failure_exit_code = 0;
};

CampaignReport run_campaign(const Scenario& scenario);

struct SweepConfig {
  BlockFamilyConfig family;
  FanoOptions fano;
  /// Family members evaluated (packing prefix for fano, random theta for assouad).
  std::size_t members = 20;
  std::size_t trials_per_member = 5;
  EstimatorParams estimator;
  std::uint64_t seed = 0;
};

struct SweepReport {
  std::string mode;
  std::size_t members = 0;
  std::size_t runs = 0;
  double max_error = 0.0;
  /// Worst over members of the mean squared error.
  double max_mean_squared_error = 0.0;
  /// Radius of the variance lower bound (fano) or the squared-risk lower bound (assouad).
  double lower_bound = 0.0;
  /// max_error / radius (fano) or max_mean_squared_error / lower bound (assouad).
  double ratio = 0.0;
  double fraction_exceeding_radius = 0.0;
  double predicted_probability = 0.0;
  bool vacuous = false;
  std::string note;
};

/// Runs one concrete estimator over family members. This only sanity-checks consistency with a
/// minimax statement about the best estimator at the worst member.
SweepReport minimax_family_sweep(const SweepConfig& config);

}  // namespace countrank::bench
