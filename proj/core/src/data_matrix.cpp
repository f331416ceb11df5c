#include "quartz/data_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quartz {

DataMatrix::DataMatrix(std::size_t d, std::vector<std::vector<Entry>> columns)
    : d_(d), n_(columns.size()) {
  col_ptr_.assign(1, 0);
  col_ptr_.reserve(n_ + 1);
  for (auto& col : columns) {
    // Stable sort keeps input order among duplicates so the last one wins.
    std::stable_sort(col.begin(), col.end(),
                     [](const Entry& a, const Entry& b) { return a.row < b.row; });
    for (std::size_t k = 0; k < col.size(); ++k) {
      const Entry& e = col[k];
      if (e.row >= d_) {
        throw std::invalid_argument("row index " + std::to_string(e.row) +
                                    " out of range for d = " + std::to_string(d_));
      }
      if (!std::isfinite(e.value)) {
        throw std::invalid_argument("non-finite matrix entry in row " +
                                    std::to_string(e.row));
      }
      if (k + 1 < col.size() && col[k + 1].row == e.row) continue;
      if (e.value == 0.0) continue;
      row_idx_.push_back(e.row);
      values_.push_back(e.value);
    }
    col_ptr_.push_back(row_idx_.size());
  }
  build_rows();
}

DataMatrix DataMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  const std::size_t d = rows.size();
  const std::size_t n = d == 0 ? 0 : rows.front().size();
  std::vector<std::vector<Entry>> columns(n);
  for (std::size_t j = 0; j < d; ++j) {
    if (rows[j].size() != n) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[j][i] != 0.0) columns[i].push_back({j, rows[j][i]});
    }
  }
  return DataMatrix(d, std::move(columns));
}

void DataMatrix::build_rows() {
  row_nnz_.assign(d_, 0);
  for (std::size_t r : row_idx_) ++row_nnz_[r];
  row_ptr_.assign(d_ + 1, 0);
  for (std::size_t j = 0; j < d_; ++j) row_ptr_[j + 1] = row_ptr_[j] + row_nnz_[j];
  col_idx_.assign(values_.size(), 0);
  row_values_.assign(values_.size(), 0.0);
  std::vector<std::size_t> next(row_ptr_.begin(), row_ptr_.end() - 1);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) {
      const std::size_t slot = next[row_idx_[k]]++;
      col_idx_[slot] = i;
      row_values_[slot] = values_[k];
    }
  }
}

double DataMatrix::density() const noexcept {
  if (d_ == 0 || n_ == 0) return 0.0;
  return static_cast<double>(nnz()) / (static_cast<double>(d_) * static_cast<double>(n_));
}

std::span<const std::size_t> DataMatrix::col_rows(std::size_t i) const {
  return {row_idx_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
}

std::span<const double> DataMatrix::col_values(std::size_t i) const {
  return {values_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
}

std::span<const std::size_t> DataMatrix::row_cols(std::size_t j) const {
  return {col_idx_.data() + row_ptr_[j], row_ptr_[j + 1] - row_ptr_[j]};
}

std::span<const double> DataMatrix::row_values(std::size_t j) const {
  return {row_values_.data() + row_ptr_[j], row_ptr_[j + 1] - row_ptr_[j]};
}

double DataMatrix::col_dot(std::size_t i, std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) s += values_[k] * x[row_idx_[k]];
  return s;
}

void DataMatrix::col_axpy(std::size_t i, double scale, std::span<double> y) const {
  for (std::size_t k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) y[row_idx_[k]] += scale * values_[k];
}

double DataMatrix::col_sq_norm(std::size_t i) const {
  double s = 0.0;
  for (std::size_t k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) s += values_[k] * values_[k];
  return s;
}

std::vector<double> DataMatrix::transpose_times(std::span<const double> x) const {
  if (x.size() != d_) throw std::invalid_argument("transpose_times: expected length d");
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = col_dot(i, x);
  return out;
}

std::vector<double> DataMatrix::times(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("times: expected length n");
  std::vector<double> out(d_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i] != 0.0) col_axpy(i, x[i], out);
  }
  return out;
}

DataMatrix DataMatrix::scale_columns(std::span<const double> scales) const {
  if (scales.size() != n_) throw std::invalid_argument("scale_columns: expected n scales");
  DataMatrix out = *this;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) out.values_[k] *= scales[i];
  }
  // A zero scale would leave explicit zeros behind; rebuild in that case.
  if (std::find(scales.begin(), scales.end(), 0.0) != scales.end()) {
    return DataMatrix(d_, out.to_columns());
  }
  out.build_rows();
  return out;
}

std::vector<std::vector<Entry>> DataMatrix::to_columns() const {
  std::vector<std::vector<Entry>> cols(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) {
      cols[i].push_back({row_idx_[k], values_[k]});
    }
  }
  return cols;
}

std::vector<std::vector<double>> DataMatrix::to_dense() const {
  std::vector<std::vector<double>> rows(d_, std::vector<double>(n_, 0.0));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k) rows[row_idx_[k]][i] = values_[k];
  }
  return rows;
}

}  // namespace quartz
