#pragma once

// Dense real matrices stored column-major, the vec operator, Kronecker
// products and the commutation (vec-permutation) matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tcs/error.hpp"

namespace tcs {

namespace detail {

inline std::size_t checked_mul(std::size_t a, std::size_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    throw CapacityError(std::string(what) + ": dimension product overflows");
  }
  return a * b;
}

inline void require_finite(std::span<const double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw ValueError("non-finite matrix entry");
  }
}

// C(m x p) += alpha * A(m x k) * B(k x p), all column-major with leading
// dimensions. The 8x4 register block is what keeps the LU trailing update
// reasonably fast without BLAS.
inline void gemm_acc(std::size_t m, std::size_t p, std::size_t k, double alpha,
                     const double* a, std::size_t lda, const double* b, std::size_t ldb,
                     double* c, std::size_t ldc) {
  constexpr std::size_t MR = 8;
  constexpr std::size_t NR = 4;
  std::size_t j = 0;
  for (; j + NR <= p; j += NR) {
    std::size_t i = 0;
    for (; i + MR <= m; i += MR) {
      double acc[NR][MR] = {};
      for (std::size_t l = 0; l < k; ++l) {
        const double* ap = a + i + l * lda;
        for (std::size_t jj = 0; jj < NR; ++jj) {
          const double bv = b[l + (j + jj) * ldb];
          for (std::size_t ii = 0; ii < MR; ++ii) acc[jj][ii] += ap[ii] * bv;
        }
      }
      for (std::size_t jj = 0; jj < NR; ++jj) {
        double* cp = c + i + (j + jj) * ldc;
        for (std::size_t ii = 0; ii < MR; ++ii) cp[ii] += alpha * acc[jj][ii];
      }
    }
    for (; i < m; ++i) {
      for (std::size_t jj = 0; jj < NR; ++jj) {
        double s = 0.0;
        for (std::size_t l = 0; l < k; ++l) s += a[i + l * lda] * b[l + (j + jj) * ldb];
        c[i + (j + jj) * ldc] += alpha * s;
      }
    }
  }
  for (; j < p; ++j) {
    double* cp = c + j * ldc;
    for (std::size_t l = 0; l < k; ++l) {
      const double bv = alpha * b[l + j * ldb];
      const double* ap = a + l * lda;
      for (std::size_t i = 0; i < m; ++i) cp[i] += ap[i] * bv;
    }
  }
}

}  // namespace detail

class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t len) : data_(len, 0.0) {}
  explicit Vec(std::vector<double> data) : data_(std::move(data)) { detail::require_finite(data_); }
  Vec(std::initializer_list<double> xs) : Vec(std::vector<double>(xs)) {}

  std::size_t size() const noexcept { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::vector<double> release() && { return std::move(data_); }

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> data_;
};

class Mat {
 public:
  Mat() = default;

  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(detail::checked_mul(rows, cols, "Mat"), 0.0) {}

  // Column-major entries.
  Mat(std::size_t rows, std::size_t cols, std::vector<double> col_major)
      : rows_(rows), cols_(cols), data_(std::move(col_major)) {
    if (data_.size() != detail::checked_mul(rows, cols, "Mat")) {
      throw DimensionError("Mat: entry count " + std::to_string(data_.size()) + " != " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
    detail::require_finite(data_);
  }

  // Row-by-row literal, e.g. Mat::from_rows({{1, 3}, {2, 4}}).
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    Mat m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("Mat::from_rows: ragged rows");
      std::size_t j = 0;
      for (double x : row) m(i, j++) = x;
      ++i;
    }
    detail::require_finite(m.data_);
    return m;
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat diag(std::initializer_list<double> d) {
    Mat m(d.size(), d.size());
    std::size_t i = 0;
    for (double x : d) {
      m(i, i) = x;
      ++i;
    }
    detail::require_finite(m.data_);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  std::vector<double> release() && {
    rows_ = cols_ = 0;
    return std::move(data_);
  }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Column stacking. Storage is already column-major, so an rvalue argument is
// relabeled without copying.
inline Vec vec(Mat a) { return Vec(std::move(a).release()); }

inline Mat unvec(Vec v, std::size_t m, std::size_t n) {
  if (v.size() != detail::checked_mul(m, n, "unvec")) {
    throw DimensionError("unvec: length " + std::to_string(v.size()) + " cannot be shaped " +
                         std::to_string(m) + "x" + std::to_string(n));
  }
  return Mat(m, n, std::move(v).release());
}

inline Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Mat c(a.rows(), b.cols());
  if (c.size() == 0 || a.cols() == 0) return c;
  detail::gemm_acc(a.rows(), b.cols(), a.cols(), 1.0, a.data().data(), a.rows(), b.data().data(),
                   b.rows(), c.data().data(), c.rows());
  return c;
}

inline Vec matvec(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: length mismatch");
  Vec y(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double xj = x[j];
    const auto cj = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += cj[i] * xj;
  }
  return y;
}

namespace detail {
inline void require_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch");
  }
}
}  // namespace detail

inline Mat add(Mat a, const Mat& b) {
  detail::require_same_shape(a, b, "add");
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < ad.size(); ++k) ad[k] += bd[k];
  return a;
}

inline Mat sub(Mat a, const Mat& b) {
  detail::require_same_shape(a, b, "sub");
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < ad.size(); ++k) ad[k] -= bd[k];
  return a;
}

inline Mat scale(Mat a, double s) {
  for (double& x : a.data()) x *= s;
  return a;
}

inline Mat operator+(const Mat& a, const Mat& b) { return add(a, b); }
inline Mat operator-(const Mat& a, const Mat& b) { return sub(a, b); }
inline Mat operator-(const Mat& a) { return scale(a, -1.0); }
inline Mat operator*(const Mat& a, const Mat& b) { return matmul(a, b); }
inline Mat operator*(double s, const Mat& a) { return scale(a, s); }

inline double norm2(std::span<const double> xs) {
  // Scaled accumulation so huge/tiny entries neither overflow nor underflow.
  double amax = 0.0;
  for (double x : xs) amax = std::max(amax, std::abs(x));
  if (amax == 0.0) return 0.0;
  double s = 0.0;
  for (double x : xs) {
    const double t = x / amax;
    s += t * t;
  }
  return amax * std::sqrt(s);
}

inline double frobenius(const Mat& a) { return norm2(a.data()); }
inline double norm2(const Vec& v) { return norm2(v.data()); }

inline double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

// ||a - b||_F / ||b||_F, or the absolute difference when b is zero.
inline double rel_diff(const Mat& a, const Mat& b) {
  const double d = frobenius(a - b);
  const double s = frobenius(b);
  return s > 0.0 ? d / s : d;
}

inline Mat kron(const Mat& a, const Mat& b) {
  const std::size_t r = detail::checked_mul(a.rows(), b.rows(), "kron");
  const std::size_t c = detail::checked_mul(a.cols(), b.cols(), "kron");
  detail::checked_mul(r, c, "kron");
  Mat k(r, c);
  for (std::size_t ja = 0; ja < a.cols(); ++ja)
    for (std::size_t jb = 0; jb < b.cols(); ++jb) {
      const std::size_t col = ja * b.cols() + jb;
      for (std::size_t ia = 0; ia < a.rows(); ++ia) {
        const double s = a(ia, ja);
        for (std::size_t ib = 0; ib < b.rows(); ++ib) k(ia * b.rows() + ib, col) = s * b(ib, jb);
      }
    }
  return k;
}

// The mn x mn permutation P_mn with vec(A) = P_mn vec(A^T) for A of size m x n.
// Row r = i + j*m holds its single 1 in column sigma(r) = j + i*n.
class Commutation {
 public:
  Commutation(std::size_t m, std::size_t n) : m_(m), n_(n) { detail::checked_mul(m, n, "Commutation"); }

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return m_ * n_; }

  std::size_t sigma(std::size_t r) const noexcept {
    const std::size_t i = r % m_;
    const std::size_t j = r / m_;
    return j + i * n_;
  }

  Mat explicit_matrix() const {
    const std::size_t d = dim();
    detail::checked_mul(d, d, "Commutation::explicit_matrix");
    Mat p(d, d);
    for (std::size_t r = 0; r < d; ++r) p(r, sigma(r)) = 1.0;
    return p;
  }

  Vec apply(const Vec& v) const {
    if (v.size() != dim()) {
      throw DimensionError("apply_commutation: length " + std::to_string(v.size()) +
                           " != " + std::to_string(dim()));
    }
    Vec out(v.size());
    for (std::size_t r = 0; r < v.size(); ++r) out[r] = v[sigma(r)];
    return out;
  }

 private:
  std::size_t m_;
  std::size_t n_;
};

inline Commutation commutation(std::size_t m, std::size_t n) { return Commutation(m, n); }

inline Vec apply_commutation(std::size_t m, std::size_t n, const Vec& v) {
  return Commutation(m, n).apply(v);
}

// unvec(P_nn vec(Y)) for square Y, through the implicit permutation.
inline Mat commute_square(const Mat& y) {
  if (!y.square()) throw DimensionError("commute_square: matrix is not square");
  const std::size_t n = y.rows();
  return unvec(apply_commutation(n, n, vec(y)), n, n);
}

}  // namespace tcs
