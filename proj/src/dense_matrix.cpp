#include "countrank/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "countrank/error.hpp"

namespace countrank {
namespace {

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DataError("matrix dimensions must be positive");
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  check_dims(rows, cols);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_dims(rows, cols);
  if (entries_.size() != rows * cols) {
    throw DataError("matrix entry count " + std::to_string(entries_.size()) + " does not match " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw DataError("matrix entries must be finite");
  }
}

DenseMatrix::DenseMatrix(const Eigen::Ref<const RowMajorMatrix>& m)
    : DenseMatrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                  std::vector<double>(m.size())) {
  view() = m;
  for (double v : entries_) {
    if (!std::isfinite(v)) throw NumericalError("matrix computation produced non-finite entries");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::constant(std::size_t rows, std::size_t cols, double value) {
  return DenseMatrix(rows, cols, std::vector<double>(rows * cols, value));
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("matrix must have at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DataError("ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return DenseMatrix(rows.size(), cols, std::move(entries));
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mask::Mask(std::size_t rows, std::size_t cols, std::vector<Cell> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows == 0 || cols == 0) throw DataError("mask dimensions must be positive");
  std::sort(cells_.begin(), cells_.end());
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const Cell c = cells_[k];
    if (c.row >= rows || c.col >= cols) {
      throw DataError("mask index (" + std::to_string(c.row + 1) + "," + std::to_string(c.col + 1) +
                      ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (k > 0 && cells_[k - 1] == c) {
      throw DataError("duplicate mask index (" + std::to_string(c.row + 1) + "," +
                      std::to_string(c.col + 1) + ")");
    }
  }
}

Mask Mask::full(std::size_t rows, std::size_t cols) {
  std::vector<Cell> cells;
  cells.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      cells.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  return Mask(rows, cols, std::move(cells));
}

Mask Mask::empty(std::size_t rows, std::size_t cols) { return Mask(rows, cols, {}); }

bool Mask::contains(Cell c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

MaskedObservations::MaskedObservations(Mask mask, std::vector<std::int64_t> counts)
    : mask_(std::move(mask)), counts_(std::move(counts)) {
  if (counts_.size() != mask_.size()) throw DataError("one count per mask entry required");
  for (auto c : counts_) {
    if (c < 0) throw DataError("counts must be nonnegative");
  }
}

MaskedObservations MaskedObservations::from_dense(const DenseMatrix& counts) {
  if (!is_count_matrix(counts)) throw DataError("count matrix must hold nonnegative integers");
  std::vector<std::int64_t> values;
  values.reserve(counts.size());
  for (double v : counts.entries()) values.push_back(static_cast<std::int64_t>(v));
  return MaskedObservations(Mask::full(counts.rows(), counts.cols()), std::move(values));
}

MaskedObservations MaskedObservations::from_entries(std::size_t rows, std::size_t cols,
                                                    std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.cell < b.cell; });
  std::vector<Cell> cells;
  std::vector<std::int64_t> counts;
  cells.reserve(entries.size());
  counts.reserve(entries.size());
  for (const auto& e : entries) {
    cells.push_back(e.cell);
    counts.push_back(e.count);
  }
  return MaskedObservations(Mask(rows, cols, std::move(cells)), std::move(counts));
}

bool is_count_matrix(const DenseMatrix& m) {
  return std::all_of(m.entries().begin(), m.entries().end(),
                     [](double v) { return v >= 0.0 && std::floor(v) == v; });
}

}  // namespace countrank
