#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace countrank {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense real matrix, row-major, all entries finite.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero matrix. Throws DataError when either dimension is zero.
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  explicit DenseMatrix(const Eigen::Ref<const RowMajorMatrix>& m);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix constant(std::size_t rows, std::size_t cols, double value);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(entries_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) noexcept {
    return std::span<double>(entries_).subspan(i * cols_, cols_);
  }

  Eigen::Map<const RowMajorMatrix> view() const {
    return {entries_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
  }
  Eigen::Map<RowMajorMatrix> view() {
    return {entries_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
  }

  DenseMatrix transposed() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Matrix index, 0-based. External formats are 1-based and convert at the I/O boundary.
struct Cell {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Sampled index set Omega. Cells are kept sorted row-major and unique; that
/// order is the iteration order of every Omega-indexed vector.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols, std::vector<Cell> cells);

  static Mask full(std::size_t rows, std::size_t cols);
  static Mask empty(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::span<const Cell> cells() const noexcept { return cells_; }
  bool contains(Cell c) const;

  bool operator==(const Mask&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Cell> cells_;
};

/// Counts observed on Omega, one per mask cell in mask order.
class MaskedObservations {
 public:
  MaskedObservations() = default;
  MaskedObservations(Mask mask, std::vector<std::int64_t> counts);

  /// Full observation of a count matrix (p = 1). Entries must be nonnegative integers.
  static MaskedObservations from_dense(const DenseMatrix& counts);

  struct Entry {
    Cell cell;
    std::int64_t count = 0;
  };
  /// Builds from entries in any order; they are sorted into mask order.
  static MaskedObservations from_entries(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

  const Mask& mask() const noexcept { return mask_; }
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  std::size_t rows() const noexcept { return mask_.rows(); }
  std::size_t cols() const noexcept { return mask_.cols(); }

  bool operator==(const MaskedObservations&) const = default;

 private:
  Mask mask_;
  std::vector<std::int64_t> counts_;
};

/// True when every entry is an exact nonnegative integer.
bool is_count_matrix(const DenseMatrix& m);

}  // namespace countrank
