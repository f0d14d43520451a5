#include "countrank/reports.hpp"

#include <cmath>
#include <set>

#include "countrank/error.hpp"
#include "countrank/kernels.hpp"
#include "countrank/philox.hpp"

namespace countrank::reports {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json opt_num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

Json matrix_json(const DenseMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (double x : m.row(i)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json projection_json(Projection p) {
  Json a = Json::array();
  for (const auto& n : projection_names(p)) a.push_back(n);
  return a;
}

[[noreturn]] void bad(const std::string& what) { throw DataError("scenario: " + what); }

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) bad("unknown key '" + k + "' in " + where);
  }
}

double get_double(const Json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) bad("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad("'" + key + "' must be finite");
  return d;
}

std::int64_t get_int(const Json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) bad("'" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::size_t get_size(const Json& j, const std::string& key) {
  const auto v = get_int(j, key);
  if (v < 0) bad("'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::string get_string(const Json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) bad("'" + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t get_seed(const Json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) return io::parse_seed(v.get<std::string>());
  bad("'" + key + "' must be a nonnegative integer or a hex string");
}

DenseMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) bad("matrix rows must be arrays");
    std::vector<double> row;
    for (const auto& x : r) {
      if (!x.is_number()) bad("matrix entries must be numbers");
      row.push_back(x.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return DenseMatrix::from_rows(rows);
}

Json family_json(const BlockFamilyConfig& f) {
  Json j;
  j["r"] = f.r;
  j["k"] = f.k;
  j["l"] = f.l;
  j["lambda_max"] = f.lambda_max;
  j["p"] = f.p;
  j["mode"] = to_string(f.mode);
  return j;
}

BlockFamilyConfig family_from_json(const Json& j) {
  check_keys(j, {"r", "k", "l", "lambda_max", "p", "mode"}, "family");
  BlockFamilyConfig f;
  f.r = get_size(j, "r");
  f.k = get_size(j, "k");
  f.l = get_size(j, "l");
  f.lambda_max = get_double(j, "lambda_max");
  f.p = get_double(j, "p");
  f.mode = parse_family_mode(get_string(j, "mode"));
  return f;
}

bench::TrialRecord record_from_json(const Json& j) {
  bench::TrialRecord r;
  auto real = [&](const char* k) { return j.at(k).is_null() ? std::nan("") : j.at(k).get<double>(); };
  r.trial = j.at("trial").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.error = real("error");
  r.weighted_error = real("weighted_error");
  r.residual_opnorm = real("residual_opnorm");
  r.deviation = real("deviation");
  r.delta_used = real("delta_used");
  r.output_rank = j.at("output_rank").get<std::size_t>();
  r.concentration_holds = j.at("concentration_holds").get<bool>();
  r.event_holds = j.at("event_holds").get<bool>();
  r.bound_checked = j.at("bound_checked").get<bool>();
  r.bound = real("bound");
  r.bound_violated = j.at("bound_violated").get<bool>();
  r.wall_ms = real("wall_ms");
  return r;
}

}  // namespace

Json to_json(const EstimateResult& r, const EstimatorParams& params) {
  Json j;
  j["estimator"] = to_string(params.kind);
  j["p"] = params.p;
  j["delta"] = opt_num(params.delta);
  j["lambda"] = opt_num(params.lambda);
  j["rank"] = params.rank ? Json(*params.rank) : Json(nullptr);
  j["projection"] = projection_json(params.project);
  j["rows"] = r.estimate.rows();
  j["cols"] = r.estimate.cols();
  j["threshold_used"] = num(r.threshold_used);
  j["output_rank"] = r.output_rank;
  j["residual_opnorm"] = num(r.residual_opnorm);
  j["residual_opnorm_unprojected"] = num(r.residual_opnorm_unprojected);
  j["projected"] = projection_json(r.projected);
  return j;
}

Json to_json(const BoundConfig& cfg) {
  Json j;
  j["C"] = cfg.C;
  j["C0"] = cfg.C0;
  j["epsilon"] = cfg.epsilon;
  return j;
}

Json to_json(const BoundReport& b) {
  Json j;
  j["rows"] = b.rows;
  j["cols"] = b.cols;
  j["rank"] = b.rank;
  j["p"] = b.p;
  j["lambda_max"] = b.lambda_max;
  j["epsilon"] = b.epsilon;
  j["C"] = b.C;
  j["C0"] = b.C0;
  j["sigma_tilde"] = num(b.sigma_tilde);
  j["A"] = num(b.A_value);
  j["upper_bounds"] = {{"dantzig", num(b.ub_dantzig)}, {"regls", num(b.ub_regls)}, {"rank_trunc", num(b.ub_rank_trunc)}};
  j["sigma1"] = num(b.sigma1);
  j["sigma2"] = num(b.sigma2);
  j["lb_variance_radius"] = num(b.lb_variance_radius);
  j["lb_variance_prob"] = num(b.lb_variance_prob);
  j["lb_variance_vacuous"] = b.lb_variance_vacuous;
  j["lb_squared"] = num(b.lb_squared);
  j["lb_squared_max_form"] = num(b.lb_squared_max_form);
  j["lb_squared_valid"] = b.lb_squared_valid;
  j["regime"] = {{"regime", b.regime.regime},
                 {"log_m", num(b.regime.log_m)},
                 {"threshold", num(b.regime.threshold)},
                 {"satisfied", b.regime.satisfied},
                 {"slack", num(b.regime.slack)}};
  return j;
}

Json to_json(const bench::Scenario& s) {
  Json j;
  j["id"] = s.id;
  j["model"] = bench::to_string(s.model);
  Json t;
  t["generator"] = s.truth.generator;
  if (s.truth.generator == "matrix") {
    t["matrix"] = s.truth.matrix ? matrix_json(*s.truth.matrix) : Json(nullptr);
  } else if (s.truth.generator == "block_family") {
    t["family"] = s.truth.family ? family_json(*s.truth.family) : Json(nullptr);
    t["theta"] = s.truth.theta_hex;
  } else {
    t["rows"] = s.truth.rows;
    t["cols"] = s.truth.cols;
    if (s.truth.generator == "random_low_rank") t["rank"] = s.truth.rank;
    t["lambda_max"] = s.truth.lambda_max;
  }
  j["truth"] = std::move(t);
  j["p"] = s.p;
  if (s.model == bench::Model::multinomial_matrix) j["multinomial_trials"] = s.multinomial_trials;
  if (s.model == bench::Model::multinomial_rows) j["row_trials"] = s.row_trials;
  j["estimator"] = s.estimator;
  j["tuning"] = bench::to_string(s.tuning);
  if (s.delta) j["delta"] = *s.delta;
  if (s.lambda) j["lambda"] = *s.lambda;
  if (s.rank) j["rank"] = *s.rank;
  j["project"] = projection_json(s.project);
  j["trials"] = s.trials;
  j["base_seed"] = s.base_seed;
  j["epsilon"] = s.bounds.epsilon;
  j["C"] = s.bounds.C;
  j["C0"] = s.bounds.C0;
  j["threads"] = s.threads;
  j["timing"] = s.timing;
  return j;
}

bench::Scenario scenario_from_json(const Json& j) {
  check_keys(j, {"id", "model", "truth", "p", "multinomial_trials", "row_trials", "estimator", "tuning", "delta",
                 "lambda", "rank", "project", "trials", "base_seed", "epsilon", "C", "C0", "threads", "timing"},
             "scenario");
  bench::Scenario s;
  try {
    if (j.contains("id")) s.id = get_string(j, "id");
    s.model = bench::parse_model(get_string(j, "model"));
    const Json& t = j.at("truth");
    check_keys(t, {"generator", "matrix", "rows", "cols", "rank", "lambda_max", "family", "theta"}, "truth");
    s.truth.generator = get_string(t, "generator");
    if (t.contains("matrix")) s.truth.matrix = matrix_from_json(t.at("matrix"));
    if (t.contains("rows")) s.truth.rows = get_size(t, "rows");
    if (t.contains("cols")) s.truth.cols = get_size(t, "cols");
    if (t.contains("rank")) s.truth.rank = get_size(t, "rank");
    if (t.contains("lambda_max")) s.truth.lambda_max = get_double(t, "lambda_max");
    if (t.contains("family")) s.truth.family = family_from_json(t.at("family"));
    if (t.contains("theta")) s.truth.theta_hex = get_string(t, "theta");
    if (j.contains("p")) s.p = get_double(j, "p");
    if (j.contains("multinomial_trials")) s.multinomial_trials = get_int(j, "multinomial_trials");
    if (j.contains("row_trials")) {
      const auto& rt = j.at("row_trials");
      if (rt.is_number_integer()) {
        s.row_trials = {rt.get<std::int64_t>()};
      } else if (rt.is_array()) {
        for (const auto& x : rt) {
          if (!x.is_number_integer()) bad("'row_trials' entries must be integers");
          s.row_trials.push_back(x.get<std::int64_t>());
        }
      } else {
        bad("'row_trials' must be an integer or an array of integers");
      }
    }
    if (j.contains("estimator")) s.estimator = get_string(j, "estimator");
    if (s.estimator != "mle") (void)parse_estimator_kind(s.estimator);
    if (j.contains("tuning")) s.tuning = bench::parse_tuning(get_string(j, "tuning"));
    if (j.contains("delta")) s.delta = get_double(j, "delta");
    if (j.contains("lambda")) s.lambda = get_double(j, "lambda");
    if (j.contains("rank")) s.rank = get_size(j, "rank");
    if (j.contains("project")) {
      const auto& pj = j.at("project");
      if (pj.is_string()) {
        s.project = parse_projection(pj.get<std::string>());
      } else if (pj.is_array()) {
        for (const auto& x : pj) {
          if (!x.is_string()) bad("'project' entries must be strings");
          s.project = s.project | parse_projection(x.get<std::string>());
        }
      } else {
        bad("'project' must be a string or an array of strings");
      }
    }
    if (j.contains("trials")) s.trials = get_size(j, "trials");
    if (j.contains("base_seed")) s.base_seed = get_seed(j, "base_seed");
    if (j.contains("epsilon")) s.bounds.epsilon = get_double(j, "epsilon");
    if (j.contains("C0")) {
      s.bounds.C0 = get_double(j, "C0");
      s.bounds.C = BoundConfig::default_c(s.bounds.C0);
    }
    if (j.contains("C")) s.bounds.C = get_double(j, "C");
    if (j.contains("threads")) s.threads = static_cast<unsigned>(get_size(j, "threads"));
    if (j.contains("timing")) {
      if (!j.at("timing").is_boolean()) bad("'timing' must be a boolean");
      s.timing = j.at("timing").get<bool>();
    }
  } catch (const Json::out_of_range& e) {
    bad(std::string("missing key: ") + e.what());
  }
  s.validate();
  return s;
}

bench::Scenario parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("scenario: invalid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

Json to_json(const bench::TrialRecord& r) {
  Json j;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["error"] = num(r.error);
  j["weighted_error"] = num(r.weighted_error);
  j["residual_opnorm"] = num(r.residual_opnorm);
  j["deviation"] = num(r.deviation);
  j["delta_used"] = num(r.delta_used);
  j["output_rank"] = r.output_rank;
  j["concentration_holds"] = r.concentration_holds;
  j["event_holds"] = r.event_holds;
  j["bound_checked"] = r.bound_checked;
  j["bound"] = num(r.bound);
  j["bound_violated"] = r.bound_violated;
  j["wall_ms"] = num(r.wall_ms);
  return j;
}

Json to_json(const bench::Aggregates& a) {
  Json j;
  j["trials"] = a.trials;
  j["mean_error"] = num(a.mean_error);
  j["median_error"] = num(a.median_error);
  j["quantiles"] = {{"q05", num(a.q05_error)}, {"q25", num(a.q25_error)}, {"q75", num(a.q75_error)}, {"q95", num(a.q95_error)}};
  j["mean_squared_error"] = num(a.mean_squared_error);
  j["mean_squared_weighted_error"] = num(a.mean_squared_weighted_error);
  j["coverage_concentration"] = num(a.coverage_concentration);
  j["coverage_delta"] = num(a.coverage_delta);
  j["bound_checks"] = a.bound_checks;
  j["bound_violations"] = a.bound_violations;
  j["mle_risk_ratio"] = opt_num(a.mle_risk_ratio);
  return j;
}

Json to_json(const bench::CampaignReport& r) {
  Json j;
  j["generator"] = rng::kGeneratorName;
  j["simd_backend"] = kernels::backend_name(kernels::active_backend());
  j["scenario"] = to_json(r.scenario);
  j["instance"] = {{"rows", r.instance.truth.rows()},
                   {"cols", r.instance.truth.cols()},
                   {"truth_rank", r.instance.truth_rank},
                   {"concentration_threshold", num(r.instance.concentration_threshold)},
                   {"mle_risk_reference", opt_num(r.instance.mle_risk)}};
  j["tuning_note"] = r.scenario.tuning == bench::Tuning::plugin
                         ? "plugin: delta from the bound formula on observed sums divided by p and the largest "
                           "observed count; not part of the original guarantees"
                         : (r.scenario.tuning == bench::Tuning::fixed ? "fixed" : "uses the true matrix (simulation only)");
  j["bound_report"] = r.bound_report ? to_json(*r.bound_report) : Json(nullptr);
  j["aggregates"] = to_json(r.aggregates);
  j["failure"] = r.failure ? Json(*r.failure) : Json(nullptr);
  Json recs = Json::array();
  for (const auto& rec : r.records) recs.push_back(to_json(rec));
  j["records"] = std::move(recs);
  return j;
}

Json to_json(const bench::SweepReport& r) {
  Json j;
  j["mode"] = r.mode;
  j["members"] = r.members;
  j["runs"] = r.runs;
  j["max_error"] = num(r.max_error);
  j["max_mean_squared_error"] = num(r.max_mean_squared_error);
  j["lower_bound"] = num(r.lower_bound);
  j["ratio"] = num(r.ratio);
  j["fraction_exceeding_radius"] = num(r.fraction_exceeding_radius);
  j["predicted_probability"] = num(r.predicted_probability);
  j["vacuous"] = r.vacuous;
  j["note"] = r.note;
  return j;
}

Json to_json(const CalibrationResult& r) {
  Json j;
  j["C"] = r.C;
  j["floored"] = r.floored;
  j["epsilon"] = r.epsilon;
  j["trials"] = r.trials;
  Json pts = Json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"rows", p.point.rows},
                   {"cols", p.point.cols},
                   {"rank", p.point.rank},
                   {"p", p.point.p},
                   {"lambda_max", p.point.lambda_max},
                   {"required_c", num(p.required_c)},
                   {"coverage_at_fit", num(p.coverage_at_fit)},
                   {"max_deviation", num(p.max_deviation)},
                   {"fixed_terms", num(p.fixed_terms)}});
  }
  j["points"] = std::move(pts);
  return j;
}

Json packing_summary(const PackingSet& set) {
  Json j;
  j["m"] = set.length;
  j["min_dist"] = set.min_distance;
  j["count"] = set.codewords.size();
  j["seed"] = set.seed;
  j["gv_target"] = gv_target(set.length);
  j["audit_min_distance"] = set.codewords.size() < 2 ? Json(nullptr) : Json(minimum_pairwise_distance(set));
  return j;
}

std::vector<io::TrialRow> trial_rows(const bench::CampaignReport& r) {
  std::vector<io::TrialRow> rows;
  for (const auto& rec : r.records) {
    rows.push_back({r.scenario.id, rec.trial, rec.seed, rec.error, rec.weighted_error, rec.residual_opnorm,
                    rec.bound_violated, rec.wall_ms});
  }
  return rows;
}

void verify_campaign(const Json& campaign, const std::string* csv) {
  try {
    const auto scenario = scenario_from_json(campaign.at("scenario"));
    std::vector<bench::TrialRecord> records;
    for (const auto& r : campaign.at("records")) records.push_back(record_from_json(r));
    const auto& mle = campaign.at("instance").at("mle_risk_reference");
    const std::optional<double> mle_risk = mle.is_null() ? std::nullopt : std::optional(mle.get<double>());
    const Json recomputed = to_json(bench::aggregate(records, scenario.model, mle_risk));
    if (recomputed != campaign.at("aggregates")) {
      throw DataError("campaign: stored aggregates differ from those recomputed from the records");
    }
    if (csv) {
      const auto rows = io::parse_trial_csv(*csv);
      if (rows.size() != records.size()) throw DataError("campaign: CSV and JSON record counts differ");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = records[i];
        const bool same = a.scenario_id == scenario.id && a.trial == b.trial && a.seed == b.seed &&
                          a.error == b.error && a.weighted_error == b.weighted_error &&
                          a.residual == b.residual_opnorm && a.bound_violated == b.bound_violated &&
                          a.wall_ms == b.wall_ms;
        if (!same) throw DataError("campaign: CSV row " + std::to_string(i + 1) + " differs from the JSON record");
      }
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("campaign: malformed report: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace countrank::reports
