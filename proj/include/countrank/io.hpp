#pragma once

// File formats. Indices in files are 1-based.
//
//   count matrix   MatrixMarket "coordinate integer general", or dense CSV
//   rate matrix    dense CSV of nonnegative reals
//   observations   "# m=<m> n=<n> p=<p> seed=<seed>" then one "i,j,count" line per observed cell
//   mask           "# m=<m> n=<n> p=<p> seed=<seed>" then one "i,j" line per observed cell
//   packing        "# m=<m> min_dist=<d> count=<c> seed=<s>" then one hex codeword per line
//   trial records  CSV, header scenario_id,trial,seed,error,weighted_error,residual,bound_violated,wall_ms
//
// Reals are written as the shortest decimal that parses back to the same double.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "countrank/dense_matrix.hpp"
#include "countrank/packing.hpp"

namespace countrank::io {

std::string format_double(double v);
/// Whole-field parse; throws DataError naming `what` on failure.
double parse_double(std::string_view text, const std::string& what);
std::int64_t parse_int(std::string_view text, const std::string& what);
/// Decimal or 0x-prefixed hexadecimal.
std::uint64_t parse_seed(std::string_view text);

std::string read_text(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: to path, truncating. Throws DataError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

DenseMatrix parse_count_matrix(const std::string& text);
DenseMatrix read_count_matrix(const std::filesystem::path& path);
DenseMatrix parse_rate_matrix(const std::string& text);
DenseMatrix read_rate_matrix(const std::filesystem::path& path);

std::string dense_csv(const DenseMatrix& m);
/// Count matrix in MatrixMarket coordinate integer form (nonzeros only).
std::string matrix_market(const DenseMatrix& counts);

struct ObservationFile {
  MaskedObservations observations;
  double p = 1.0;
  std::uint64_t seed = 0;
};

std::string observations_csv(const MaskedObservations& obs, double p, std::uint64_t seed);
ObservationFile parse_observations(const std::string& text);
ObservationFile read_observations(const std::filesystem::path& path);
std::string mask_csv(const Mask& mask, double p, std::uint64_t seed);
/// True when the text starts with the observation header.
bool looks_like_observations(const std::string& text);

std::string packing_text(const PackingSet& set);
PackingSet parse_packing(const std::string& text);

struct TrialRow {
  std::string scenario_id;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double error = 0.0;
  double weighted_error = 0.0;
  double residual = 0.0;
  bool bound_violated = false;
  double wall_ms = 0.0;
};

inline constexpr const char* kTrialCsvHeader =
    "scenario_id,trial,seed,error,weighted_error,residual,bound_violated,wall_ms";

std::string trial_csv(const std::vector<TrialRow>& rows);
std::vector<TrialRow> parse_trial_csv(const std::string& text);

}  // namespace countrank::io
