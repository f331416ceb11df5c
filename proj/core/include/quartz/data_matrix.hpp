#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace quartz {

/// One nonzero of a sparse column: feature (row) index and value.
struct Entry {
  std::size_t row;
  double value;
};

/// Sparse d-by-n example matrix. Column i is example A_i; both the column
/// (CSC) and row (CSR) layouts are kept so that per-example updates and
/// per-feature statistics are each a single contiguous scan.
///
/// Invariants: every stored value is finite and nonzero; rows within a column
/// are strictly increasing; row_nnz()[j] is the number of columns with a
/// nonzero in row j.
class DataMatrix {
 public:
  DataMatrix() = default;

  /// Builds from per-column entry lists. Explicit zeros are dropped, duplicate
  /// rows inside a column keep the last value. Throws std::invalid_argument on
  /// a non-finite value or a row index >= d.
  DataMatrix(std::size_t d, std::vector<std::vector<Entry>> columns);

  /// Dense convenience constructor; `rows` is d rows of n values each.
  static DataMatrix from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return d_; }
  std::size_t cols() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  double density() const noexcept;

  std::span<const std::size_t> col_rows(std::size_t i) const;
  std::span<const double> col_values(std::size_t i) const;

  std::span<const std::size_t> row_cols(std::size_t j) const;
  std::span<const double> row_values(std::size_t j) const;

  /// omega_j: number of examples with a nonzero in feature j.
  const std::vector<std::size_t>& row_nnz() const noexcept { return row_nnz_; }

  /// A_i^T x for a dense x of length d.
  double col_dot(std::size_t i, std::span<const double> x) const;
  /// y += scale * A_i for a dense y of length d.
  void col_axpy(std::size_t i, double scale, std::span<double> y) const;
  double col_sq_norm(std::size_t i) const;

  /// A^T x (length n), fixed left-to-right accumulation per column.
  std::vector<double> transpose_times(std::span<const double> x) const;
  /// A x (length d) accumulated column by column in index order.
  std::vector<double> times(std::span<const double> x) const;

  /// Copy with column i multiplied by scales[i].
  DataMatrix scale_columns(std::span<const double> scales) const;

  std::vector<std::vector<Entry>> to_columns() const;
  std::vector<std::vector<double>> to_dense() const;

  friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

 private:
  void build_rows();

  std::size_t d_ = 0;
  std::size_t n_ = 0;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_idx_;
  std::vector<double> values_;

  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> row_values_;
  std::vector<std::size_t> row_nnz_;
};

}  // namespace quartz
