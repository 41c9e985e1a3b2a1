//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <lapacke.h>

#include "sabatier/common.hpp"

namespace sabatier {

/// General band matrix in LAPACK band storage, with kl extra rows for the
/// LU fill-in.
class BandedMatrix {
public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(ldab_) * n, 0.0) { }

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }
  int ldab() const { return ldab_; }

  bool in_band(int i, int j) const { return i - j <= kl_ && j - i <= ku_; }

  double &operator()(int i, int j) { return ab_[index(i, j)]; }
  double operator()(int i, int j) const { return ab_[index(i, j)]; }

  void set_zero() { std::fill(ab_.begin(), ab_.end(), 0.0); }

  void zero_row(int i) {
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
      (*this)(i, j) = 0.0;
  }

  /// y = A x
  std::vector<double> multiply(const std::vector<double> &x) const {
    std::vector<double> y(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
        y[i] += (*this)(i, j) * x[j];
    }
    return y;
  }

  /// y = A^T x
  std::vector<double> multiply_transpose(const std::vector<double> &x) const {
    std::vector<double> y(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
        y[j] += (*this)(i, j) * x[i];
    }
    return y;
  }

  double *data() { return ab_.data(); }
  const double *data() const { return ab_.data(); }

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(kl_ + ku_ + i - j) +
           static_cast<std::size_t>(j) * ldab_;
  }

  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 1;
  std::vector<double> ab_;
};

/// LU factorization with partial pivoting (dgbtrf); solves with A or A^T.
class BandedLU {
public:
  BandedLU() = default;
  explicit BandedLU(BandedMatrix a) { factor(std::move(a)); }

  void factor(BandedMatrix a) {
    row_.clear();
    col_.clear();
    lu_ = std::move(a);
    ipiv_.assign(lu_.size(), 0);
    const lapack_int info =
        LAPACKE_dgbtrf(LAPACK_COL_MAJOR, lu_.size(), lu_.size(), lu_.lower(), lu_.upper(),
                       lu_.data(), lu_.ldab(), ipiv_.data());
    if (info > 0)
      throw SolverError("banded LU: exactly singular pivot at row " + std::to_string(info));
    if (info < 0)
      throw SolverError("banded LU: illegal argument " + std::to_string(-info));
    factored_ = true;
  }

  /// Factors diag(1/r) A diag(c); solve() still works with A itself.
  void factor(BandedMatrix a, std::vector<double> r, std::vector<double> c) {
    const int n = a.size();
    if (static_cast<int>(r.size()) != n || static_cast<int>(c.size()) != n)
      throw SolverError("banded LU: scale vectors have the wrong size");
    for (int j = 0; j < n; ++j)
      for (int i = std::max(0, j - a.upper()); i <= std::min(n - 1, j + a.lower()); ++i)
        a(i, j) *= c[j] / r[i];
    factor(std::move(a));
    row_ = std::move(r);
    col_ = std::move(c);
  }

  bool factored() const { return factored_; }

  /// Solves A x = b (transpose = false) or A^T x = b in place.
  void solve(std::vector<double> &b, bool transpose = false) const {
    if (!factored_)
      throw SolverError("banded LU: solve before factor");
    if (!row_.empty()) {
      const auto &pre = transpose ? col_ : row_;
      for (std::size_t i = 0; i < b.size(); ++i)
        b[i] = transpose ? b[i] * pre[i] : b[i] / pre[i];
    }
    const lapack_int info =
        LAPACKE_dgbtrs(LAPACK_COL_MAJOR, transpose ? 'T' : 'N', lu_.size(), lu_.lower(),
                       lu_.upper(), 1, lu_.data(), lu_.ldab(), ipiv_.data(), b.data(),
                       lu_.size());
    if (info != 0)
      throw SolverError("banded LU: dgbtrs failed with info " + std::to_string(info));
    if (!row_.empty()) {
      for (std::size_t i = 0; i < b.size(); ++i)
        b[i] = transpose ? b[i] / row_[i] : b[i] * col_[i];
    }
  }

private:
  BandedMatrix lu_;
  std::vector<lapack_int> ipiv_;
  std::vector<double> row_, col_;
  bool factored_ = false;
};

}  // namespace sabatier
