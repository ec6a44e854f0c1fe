// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include "thermobloch/complexnum.hpp"

namespace thermobloch::num {

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense complex matrix at a fixed working precision. Row-major, immutable
// dimensions. All entries share the precision recorded at construction.
template <class R>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0), bits_(kBitsDd) {}
  Matrix(int rows, int cols, long bits)
      : rows_(rows), cols_(cols), bits_(bits),
        a_(static_cast<size_t>(rows) * cols, Cx<R>::zero(bits)) {}

  static Matrix identity(int n, long bits) {
    Matrix m(n, n, bits);
    for (int i = 0; i < n; ++i) m(i, i) = Cx<R>::one(bits);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long bits() const { return bits_; }

  Cx<R>& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Cx<R>& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix r(a.rows_, a.cols_, a.bits_ > b.bits_ ? a.bits_ : b.bits_);
    for (size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] + b.a_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix r(a.rows_, a.cols_, a.bits_ > b.bits_ ? a.bits_ : b.bits_);
    for (size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix r(a.rows_, b.cols_, a.bits_ > b.bits_ ? a.bits_ : b.bits_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int j = 0; j < b.cols_; ++j) {
        Cx<R> acc = Cx<R>::zero(r.bits_);
        for (int k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
        r(i, j) = acc;
      }
    }
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Cx<R>& s) {
    Matrix r(a.rows_, a.cols_, a.bits_);
    for (size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] * s;
    return r;
  }
  friend Matrix operator*(const Cx<R>& s, const Matrix& a) { return a * s; }
  friend Matrix operator*(const Matrix& a, double s) {
    Matrix r(a.rows_, a.cols_, a.bits_);
    for (size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] * s;
    return r;
  }
  Matrix& operator+=(const Matrix& b) {
    check_same_shape(b);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (auto& e : a_) e *= s;
    return *this;
  }

  Cx<R> trace() const {
    Cx<R> t = Cx<R>::zero(bits_);
    for (int i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  // max column sum of |re|+|im|
  R norm1() const {
    R best = Rt<R>::make(0.0, bits_);
    for (int j = 0; j < cols_; ++j) {
      R s = Rt<R>::make(0.0, bits_);
      for (int i = 0; i < rows_; ++i) s += abs1((*this)(i, j));
      if (s > best) best = s;
    }
    return best;
  }
  R max_abs() const {
    R best = Rt<R>::make(0.0, bits_);
    for (const auto& e : a_) {
      R m = abs1(e);
      if (m > best) best = m;
    }
    return best;
  }
  bool all_finite() const {
    for (const auto& e : a_)
      if (!e.is_finite()) return false;
    return true;
  }
  Matrix<double> to_double() const {
    Matrix<double> m(rows_, cols_, 53);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).to_double();
    return m;
  }

 private:
  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw std::invalid_argument("matrix shape mismatch");
  }
  int rows_, cols_;
  long bits_;
  std::vector<Cx<R>> a_;
};

// LU factorization with partial pivoting.
template <class R>
class Lu {
 public:
  explicit Lu(Matrix<R> m) : lu_(std::move(m)), piv_(lu_.rows()), sign_(1) {
    const int n = lu_.rows();
    if (n != lu_.cols()) throw std::invalid_argument("Lu: square matrix required");
    for (int k = 0; k < n; ++k) {
      int p = k;
      R best = abs1(lu_(k, k));
      for (int i = k + 1; i < n; ++i) {
        R m2 = abs1(lu_(i, k));
        if (m2 > best) {
          best = m2;
          p = i;
        }
      }
      piv_[k] = p;
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        sign_ = -sign_;
      }
      if (best == 0.0) {
        singular_ = true;
        continue;
      }
      for (int i = k + 1; i < n; ++i) {
        lu_(i, k) = lu_(i, k) / lu_(k, k);
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= lu_(i, k) * lu_(k, j);
      }
    }
  }

  bool singular() const { return singular_; }
  long bits() const { return lu_.bits(); }

  // Ratio of smallest to largest pivot magnitude; a cheap conditioning signal.
  R pivot_ratio() const {
    const int n = lu_.rows();
    R lo = abs1(lu_(0, 0)), hi = lo;
    for (int i = 1; i < n; ++i) {
      R m = abs1(lu_(i, i));
      if (m < lo) lo = m;
      if (m > hi) hi = m;
    }
    if (hi == 0.0) return Rt<R>::make(0.0, lu_.bits());
    return lo / hi;
  }

  Cx<R> det() const {
    Cx<R> d = Cx<R>::make(sign_, 0.0, lu_.bits());
    for (int i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
    return d;
  }

  std::vector<Cx<R>> solve(std::vector<Cx<R>> b) const {
    require_nonsingular();
    const int n = lu_.rows();
    for (int k = 0; k < n; ++k)
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    for (int k = 0; k < n; ++k)
      for (int i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
    for (int k = n - 1; k >= 0; --k) {
      for (int j = k + 1; j < n; ++j) b[k] -= lu_(k, j) * b[j];
      b[k] = b[k] / lu_(k, k);
    }
    return b;
  }

  Matrix<R> solve(const Matrix<R>& bmat) const {
    const int n = lu_.rows();
    Matrix<R> x(n, bmat.cols(), lu_.bits() > bmat.bits() ? lu_.bits() : bmat.bits());
    std::vector<Cx<R>> col(n, Cx<R>::zero(x.bits()));
    for (int j = 0; j < bmat.cols(); ++j) {
      for (int i = 0; i < n; ++i) col[i] = bmat(i, j);
      auto s = solve(col);
      for (int i = 0; i < n; ++i) x(i, j) = s[i];
    }
    return x;
  }

  Matrix<R> inverse() const {
    return solve(Matrix<R>::identity(lu_.rows(), lu_.bits()));
  }

 private:
  void require_nonsingular() const {
    if (singular_) throw SingularMatrixError("Lu: matrix is singular");
  }
  Matrix<R> lu_;
  std::vector<int> piv_;
  int sign_;
  bool singular_ = false;
};

template <class R>
R residual_inverse(const Matrix<R>& a, const Matrix<R>& ainv) {
  Matrix<R> r = a * ainv - Matrix<R>::identity(a.rows(), a.bits());
  return r.norm1();
}

// Parlett-Reinsch balancing with radix-2 scaling. A power-of-two similarity
// is exact in binary floating point: the spectrum and the characteristic
// polynomial are preserved bit for bit while row/column norms contract
// toward the spectral radius. Physically graded matrices (stress rows vs
// displacement rows) need this before any trace-based recursion.
template <class R>
void balance_in_place(Matrix<R>& a) {
  const int n = a.rows();
  bool converged = false;
  int guard = 0;
  while (!converged && guard++ < 100) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      R c = Rt<R>::make(0.0, a.bits());
      R r = Rt<R>::make(0.0, a.bits());
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      long f = 0;
      R s = c + r;
      R g = r / 2.0;
      while (c < g) {
        f += 1;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c >= g) {
        f -= 1;
        c /= 4.0;
      }
      if (f != 0) {
        R c2 = Rt<R>::make(0.0, a.bits());
        R r2 = Rt<R>::make(0.0, a.bits());
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          c2 += abs1(a(j, i));
          r2 += abs1(a(i, j));
        }
        R news = Rt<R>::hldexp(c2, f) + Rt<R>::hldexp(r2, -f);
        if (news < s * 0.95) {
          converged = false;
          for (int j = 0; j < n; ++j) {
            a(i, j) = {Rt<R>::hldexp(a(i, j).re, -f), Rt<R>::hldexp(a(i, j).im, -f)};
            a(j, i) = {Rt<R>::hldexp(a(j, i).re, f), Rt<R>::hldexp(a(j, i).im, f)};
          }
        }
      }
    }
  }
}

}  // namespace thermobloch::num
