#pragma once

// JSON forms of reports and scenarios. Keys keep insertion order so that a
// report is a deterministic function of its inputs; non-finite reals are null.

#include <string>

#include <json.hpp>

#include "countrank/bench.hpp"
#include "countrank/bounds.hpp"
#include "countrank/calibration.hpp"
#include "countrank/constructions.hpp"
#include "countrank/estimators.hpp"
#include "countrank/io.hpp"
#include "countrank/packing.hpp"

namespace countrank::reports {

using Json = nlohmann::ordered_json;

Json to_json(const EstimateResult& result, const EstimatorParams& params);
Json to_json(const BoundReport& report);
Json to_json(const BoundConfig& cfg);
Json to_json(const bench::Scenario& scenario);
Json to_json(const bench::TrialRecord& record);
Json to_json(const bench::Aggregates& aggregates);
Json to_json(const bench::CampaignReport& report);
Json to_json(const bench::SweepReport& report);
Json to_json(const CalibrationResult& result);
Json packing_summary(const PackingSet& set);

/// Strict: unknown keys and wrong types are DataErrors.
bench::Scenario scenario_from_json(const Json& j);
bench::Scenario parse_scenario(const std::string& text);

/// CSV rows for a campaign.
std::vector<io::TrialRow> trial_rows(const bench::CampaignReport& report);

/// Recomputes the aggregates from the records of a campaign JSON (and, when given, checks
/// the CSV rows against them). Throws DataError on any inconsistency.
void verify_campaign(const Json& campaign, const std::string* csv = nullptr);

std::string dump(const Json& j);

}  // namespace countrank::reports
