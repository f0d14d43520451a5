#include "countrank/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "countrank/error.hpp"

namespace countrank::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = line.find(sep, start);
    out.push_back(trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// "# key=value key=value" header.
std::map<std::string, std::string> parse_header(std::string_view line, const char* what) {
  line = trim(line);
  if (line.empty() || line.front() != '#') throw DataError(std::string(what) + ": missing '#' header line");
  line.remove_prefix(1);
  std::map<std::string, std::string> kv;
  for (auto tok : split_ws(line)) {
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw DataError(std::string(what) + ": malformed header field '" + std::string(tok) + "'");
    kv.emplace(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
  }
  return kv;
}

const std::string& header_field(const std::map<std::string, std::string>& kv, const std::string& key,
                                const char* what) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw DataError(std::string(what) + ": header lacks '" + key + "='");
  return it->second;
}

std::size_t parse_dim(std::string_view text, const std::string& what) {
  const auto v = parse_int(text, what);
  if (v <= 0) throw DataError(what + " must be positive");
  return static_cast<std::size_t>(v);
}

double count_value(std::string_view field, const std::string& where) {
  double v;
  try {
    v = parse_double(field, where);
  } catch (const DataError&) {
    throw DataError(where + ": count '" + std::string(field) + "' is not a number");
  }
  if (v < 0.0) throw DataError(where + ": negative count " + std::string(field));
  if (v != std::floor(v)) throw DataError(where + ": fractional count " + std::string(field));
  return v;
}

template <typename F>
DenseMatrix parse_dense_csv(const std::string& text, const char* what, F&& entry) {
  std::vector<double> values;
  std::size_t cols = 0, rows = 0;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw DataError(std::string(what) + ": " + at_line(ln + 1) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      values.push_back(entry(fields[j], at_line(ln + 1) + ", column " + std::to_string(j + 1)));
    }
    ++rows;
  }
  if (rows == 0) throw DataError(std::string(what) + ": empty file");
  return DenseMatrix(rows, cols, std::move(values));
}

DenseMatrix parse_matrix_market(const std::string& text) {
  const auto lines = split_lines(text);
  const auto banner = split_ws(lines.at(0));
  if (banner.size() < 5 || lower(banner[1]) != "matrix") throw DataError("MatrixMarket: malformed banner");
  if (lower(banner[2]) != "coordinate") throw DataError("MatrixMarket: only coordinate format is supported");
  const std::string field = lower(banner[3]);
  if (field != "integer" && field != "real") throw DataError("MatrixMarket: field must be integer");
  if (lower(banner[4]) != "general") throw DataError("MatrixMarket: only general symmetry is supported");

  std::size_t ln = 1;
  while (ln < lines.size() && (trim(lines[ln]).empty() || trim(lines[ln]).front() == '%')) ++ln;
  if (ln == lines.size()) throw DataError("MatrixMarket: missing size line");
  const auto size = split_ws(lines[ln]);
  if (size.size() != 3) throw DataError("MatrixMarket: " + at_line(ln + 1) + ": size line needs 'rows cols entries'");
  const std::size_t rows = parse_dim(size[0], "MatrixMarket rows");
  const std::size_t cols = parse_dim(size[1], "MatrixMarket cols");
  const auto nnz = parse_int(size[2], "MatrixMarket entry count");
  if (nnz < 0) throw DataError("MatrixMarket: negative entry count");

  DenseMatrix out(rows, cols);
  std::vector<bool> seen(rows * cols, false);
  std::int64_t read = 0;
  for (++ln; ln < lines.size(); ++ln) {
    const auto line = trim(lines[ln]);
    if (line.empty() || line.front() == '%') continue;
    const std::string where = "MatrixMarket: " + at_line(ln + 1);
    const auto f = split_ws(line);
    if (f.size() != 3) throw DataError(where + ": expected 'row col value'");
    const auto i = parse_int(f[0], where + " row");
    const auto j = parse_int(f[1], where + " col");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols) {
      throw DataError(where + ": index (" + std::string(f[0]) + ", " + std::string(f[1]) + ") outside " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    }
    const std::size_t idx = static_cast<std::size_t>(i - 1) * cols + static_cast<std::size_t>(j - 1);
    if (seen[idx]) throw DataError(where + ": duplicate entry (" + std::string(f[0]) + ", " + std::string(f[1]) + ")");
    seen[idx] = true;
    out.entries()[idx] = count_value(f[2], where + " (" + std::string(f[0]) + ", " + std::string(f[1]) + ")");
    ++read;
  }
  if (read != nnz) {
    throw DataError("MatrixMarket: header declares " + std::to_string(nnz) + " entries, found " + std::to_string(read));
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw DataError(what + ": cannot parse '" + std::string(text) + "' as a number");
  }
  if (!std::isfinite(v)) throw DataError(what + ": non-finite value '" + std::string(text) + "'");
  return v;
}

std::int64_t parse_int(std::string_view text, const std::string& what) {
  text = trim(text);
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw DataError(what + ": cannot parse '" + std::string(text) + "' as an integer");
  }
  return v;
}

std::uint64_t parse_seed(std::string_view text) {
  text = trim(text);
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v, base);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw DataError("invalid seed '" + std::string(text) + "'");
  }
  return v;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw DataError("write to '" + path.string() + "' failed");
}

DenseMatrix parse_count_matrix(const std::string& text) {
  const auto first = trim(std::string_view(text).substr(0, text.find('\n')));
  if (first.rfind("%%MatrixMarket", 0) == 0) return parse_matrix_market(text);
  return parse_dense_csv(text, "count CSV", [](std::string_view f, const std::string& where) {
    return count_value(f, "count CSV: " + where);
  });
}

DenseMatrix read_count_matrix(const std::filesystem::path& path) { return parse_count_matrix(read_text(path)); }

DenseMatrix parse_rate_matrix(const std::string& text) {
  return parse_dense_csv(text, "rate CSV", [](std::string_view f, const std::string& where) {
    const double v = parse_double(f, "rate CSV: " + where);
    if (v < 0.0) throw DataError("rate CSV: " + where + ": negative rate " + std::string(f));
    return v;
  });
}

DenseMatrix read_rate_matrix(const std::filesystem::path& path) { return parse_rate_matrix(read_text(path)); }

std::string dense_csv(const DenseMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

std::string matrix_market(const DenseMatrix& counts) {
  if (!is_count_matrix(counts)) throw DataError("matrix_market: entries must be nonnegative integers");
  std::size_t nnz = 0;
  for (double v : counts.entries()) nnz += v != 0.0;
  std::string out = "%%MatrixMarket matrix coordinate integer general\n";
  out += std::to_string(counts.rows()) + " " + std::to_string(counts.cols()) + " " + std::to_string(nnz) + "\n";
  for (std::size_t i = 0; i < counts.rows(); ++i)
    for (std::size_t j = 0; j < counts.cols(); ++j)
      if (counts(i, j) != 0.0) {
        out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
               std::to_string(static_cast<std::int64_t>(counts(i, j))) + "\n";
      }
  return out;
}

namespace {

std::string obs_header(std::size_t m, std::size_t n, double p, std::uint64_t seed) {
  return "# m=" + std::to_string(m) + " n=" + std::to_string(n) + " p=" + format_double(p) +
         " seed=" + std::to_string(seed) + "\n";
}

}  // namespace

std::string observations_csv(const MaskedObservations& obs, double p, std::uint64_t seed) {
  std::string out = obs_header(obs.rows(), obs.cols(), p, seed);
  const auto cells = obs.mask().cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out += std::to_string(cells[k].row + 1) + "," + std::to_string(cells[k].col + 1) + "," +
           std::to_string(obs.counts()[k]) + "\n";
  }
  return out;
}

std::string mask_csv(const Mask& mask, double p, std::uint64_t seed) {
  std::string out = obs_header(mask.rows(), mask.cols(), p, seed);
  for (const auto& c : mask.cells()) out += std::to_string(c.row + 1) + "," + std::to_string(c.col + 1) + "\n";
  return out;
}

bool looks_like_observations(const std::string& text) {
  const auto first = trim(std::string_view(text).substr(0, text.find('\n')));
  return first.rfind("#", 0) == 0 && first.find("m=") != std::string_view::npos &&
         first.find("n=") != std::string_view::npos;
}

ObservationFile parse_observations(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw DataError("observations: empty file");
  const auto kv = parse_header(lines[0], "observations");
  const std::size_t m = parse_dim(header_field(kv, "m", "observations"), "observations m");
  const std::size_t n = parse_dim(header_field(kv, "n", "observations"), "observations n");
  ObservationFile file;
  file.p = parse_double(header_field(kv, "p", "observations"), "observations p");
  if (!(file.p > 0.0 && file.p <= 1.0)) throw DataError("observations: p must lie in (0, 1]");
  file.seed = parse_seed(header_field(kv, "seed", "observations"));
  std::vector<MaskedObservations::Entry> entries;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "observations: " + at_line(ln + 1);
    const auto f = split(line, ',');
    if (f.size() != 3) throw DataError(where + ": expected 'i,j,count'");
    const auto i = parse_int(f[0], where + " row");
    const auto j = parse_int(f[1], where + " col");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > m || static_cast<std::size_t>(j) > n) {
      throw DataError(where + ": index (" + std::string(f[0]) + ", " + std::string(f[1]) + ") outside " +
                      std::to_string(m) + "x" + std::to_string(n));
    }
    const auto c = parse_int(f[2], where + " count");
    if (c < 0) throw DataError(where + ": negative count " + std::string(f[2]));
    entries.push_back({Cell{static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)}, c});
  }
  file.observations = MaskedObservations::from_entries(m, n, std::move(entries));
  return file;
}

ObservationFile read_observations(const std::filesystem::path& path) { return parse_observations(read_text(path)); }

std::string packing_text(const PackingSet& set) {
  std::string out = "# m=" + std::to_string(set.length) + " min_dist=" + std::to_string(set.min_distance) +
                    " count=" + std::to_string(set.codewords.size()) + " seed=" + std::to_string(set.seed) + "\n";
  for (const auto& c : set.codewords) out += c.to_hex() + "\n";
  return out;
}

PackingSet parse_packing(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw DataError("packing: empty file");
  const auto kv = parse_header(lines[0], "packing");
  PackingSet set;
  set.length = parse_dim(header_field(kv, "m", "packing"), "packing m");
  const auto d = parse_int(header_field(kv, "min_dist", "packing"), "packing min_dist");
  if (d < 0) throw DataError("packing: negative min_dist");
  set.min_distance = static_cast<std::size_t>(d);
  set.seed = parse_seed(header_field(kv, "seed", "packing"));
  const auto count = parse_int(header_field(kv, "count", "packing"), "packing count");
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto line = trim(lines[ln]);
    if (line.empty()) continue;
    set.codewords.push_back(BitVector::from_hex(std::string(line), set.length));
  }
  if (static_cast<std::int64_t>(set.codewords.size()) != count) {
    throw DataError("packing: header declares " + std::to_string(count) + " codewords, found " +
                    std::to_string(set.codewords.size()));
  }
  return set;
}

std::string trial_csv(const std::vector<TrialRow>& rows) {
  std::string out = std::string(kTrialCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += r.scenario_id + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
           format_double(r.error) + "," + format_double(r.weighted_error) + "," + format_double(r.residual) + "," +
           (r.bound_violated ? "1" : "0") + "," + format_double(r.wall_ms) + "\n";
  }
  return out;
}

std::vector<TrialRow> parse_trial_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != kTrialCsvHeader) throw DataError("trial CSV: missing or wrong header");
  std::vector<TrialRow> rows;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto line = trim(lines[ln]);
    if (line.empty()) continue;
    const std::string where = "trial CSV: " + at_line(ln + 1);
    const auto f = split(line, ',');
    if (f.size() != 8) throw DataError(where + ": expected 8 fields");
    TrialRow r;
    r.scenario_id = std::string(f[0]);
    r.trial = static_cast<std::size_t>(parse_int(f[1], where + " trial"));
    r.seed = parse_seed(f[2]);
    r.error = parse_double(f[3], where + " error");
    r.weighted_error = parse_double(f[4], where + " weighted_error");
    r.residual = parse_double(f[5], where + " residual");
    if (f[6] != "0" && f[6] != "1") throw DataError(where + ": bound_violated must be 0 or 1");
    r.bound_violated = f[6] == "1";
    r.wall_ms = parse_double(f[7], where + " wall_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace countrank::io
