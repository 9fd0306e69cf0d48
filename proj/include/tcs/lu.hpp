#pragma once

// Partial-pivoted LU factorization with a scale-invariant singularity test
// and a Hager-Higham reciprocal condition estimate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/matcore.hpp"

namespace tcs {

class LuFactorization {
 public:
  LuFactorization() = default;

  explicit LuFactorization(Mat a) : lu_(std::move(a)) {
    if (!lu_.square()) throw DimensionError("LU: matrix is not square");
    factor();
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  // True when some pivot satisfied |pivot| <= eps * max|original column| * rows.
  bool singular() const noexcept { return singular_; }

  // Reciprocal 1-norm condition estimate; 0 for a singular factorization.
  double rcond() const {
    const std::size_t n = size();
    if (singular_) return 0.0;
    if (n == 0) return 1.0;
    if (anorm1_ == 0.0) return 0.0;
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    std::size_t last_j = n;
    for (int iter = 0; iter < 5; ++iter) {
      std::vector<double> y = x;
      solve_inplace(y.data(), n, 1);
      est = 0.0;
      for (double v : y) est += std::abs(v);
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = y[i] >= 0.0 ? 1.0 : -1.0;
      solve_transpose_inplace(z.data(), n, 1);
      std::size_t j = 0;
      double zmax = -1.0;
      double ztx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(z[i]) > zmax) {
          zmax = std::abs(z[i]);
          j = i;
        }
        ztx += z[i] * x[i];
      }
      if (iter > 0 && (zmax <= ztx || j == last_j)) break;
      std::fill(x.begin(), x.end(), 0.0);
      x[j] = 1.0;
      last_j = j;
    }
    return est > 0.0 ? 1.0 / (anorm1_ * est) : 0.0;
  }

  // Z with A Z = rhs.
  Mat solve(Mat rhs) const {
    check_rhs(rhs);
    solve_inplace(rhs.data().data(), rhs.rows(), rhs.cols());
    return rhs;
  }

  Vec solve(Vec rhs) const {
    if (rhs.size() != size()) throw DimensionError("LU solve: rhs length mismatch");
    require_nonsingular();
    solve_inplace(rhs.data().data(), rhs.size(), 1);
    return rhs;
  }

  // Z with A^T Z = rhs.
  Mat solve_transpose(Mat rhs) const {
    check_rhs(rhs);
    solve_transpose_inplace(rhs.data().data(), rhs.rows(), rhs.cols());
    return rhs;
  }

  const Mat& factors() const noexcept { return lu_; }
  const std::vector<std::size_t>& pivots() const noexcept { return piv_; }

 private:
  static constexpr std::size_t kBlock = 64;

  void require_nonsingular() const {
    if (singular_) throw SingularMatrix("LU: matrix is singular to pivot tolerance");
  }

  void check_rhs(const Mat& rhs) const {
    if (rhs.rows() != size()) {
      throw DimensionError("LU solve: rhs has " + std::to_string(rhs.rows()) + " rows, expected " +
                           std::to_string(size()));
    }
    require_nonsingular();
  }

  void factor() {
    const std::size_t n = lu_.rows();
    piv_.resize(n);
    double* a = lu_.data().data();
    const std::size_t ld = n;
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<double> thresh(n);
    for (std::size_t j = 0; j < n; ++j) {
      double colsum = 0.0;
      double colmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        colsum += std::abs(a[i + j * ld]);
        colmax = std::max(colmax, std::abs(a[i + j * ld]));
      }
      anorm1_ = std::max(anorm1_, colsum);
      thresh[j] = eps * colmax * static_cast<double>(n);
    }

    for (std::size_t k0 = 0; k0 < n; k0 += kBlock) {
      const std::size_t kend = std::min(n, k0 + kBlock);

      // Unblocked factorization of the panel columns [k0, kend).
      for (std::size_t k = k0; k < kend; ++k) {
        std::size_t p = k;
        double pmax = std::abs(a[k + k * ld]);
        for (std::size_t i = k + 1; i < n; ++i) {
          const double v = std::abs(a[i + k * ld]);
          if (v > pmax) {
            pmax = v;
            p = i;
          }
        }
        piv_[k] = p;
        if (pmax <= thresh[k]) singular_ = true;
        if (p != k) {
          for (std::size_t j = 0; j < n; ++j) std::swap(a[k + j * ld], a[p + j * ld]);
        }
        const double pivot = a[k + k * ld];
        if (pivot != 0.0) {
          const double inv = 1.0 / pivot;
          for (std::size_t i = k + 1; i < n; ++i) a[i + k * ld] *= inv;
        }
        for (std::size_t j = k + 1; j < kend; ++j) {
          const double ukj = a[k + j * ld];
          if (ukj == 0.0) continue;
          double* cj = a + j * ld;
          const double* ck = a + k * ld;
          for (std::size_t i = k + 1; i < n; ++i) cj[i] -= ck[i] * ukj;
        }
      }

      if (kend == n) break;

      // U12 = L11^{-1} A12.
      for (std::size_t j = kend; j < n; ++j) {
        double* cj = a + j * ld;
        for (std::size_t k = k0; k < kend; ++k) {
          const double ukj = cj[k];
          if (ukj == 0.0) continue;
          const double* ck = a + k * ld;
          for (std::size_t i = k + 1; i < kend; ++i) cj[i] -= ck[i] * ukj;
        }
      }

      // A22 -= L21 U12.
      detail::gemm_acc(n - kend, n - kend, kend - k0, -1.0, a + kend + k0 * ld, ld,
                       a + k0 + kend * ld, ld, a + kend + kend * ld, ld);
    }
  }

  void solve_inplace(double* x, std::size_t ldx, std::size_t nrhs) const {
    const std::size_t n = size();
    const double* a = lu_.data().data();
    for (std::size_t c = 0; c < nrhs; ++c) {
      double* b = x + c * ldx;
      for (std::size_t k = 0; k < n; ++k) {
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double bk = b[k];
        if (bk == 0.0) continue;
        const double* ck = a + k * n;
        for (std::size_t i = k + 1; i < n; ++i) b[i] -= ck[i] * bk;
      }
      for (std::size_t k = n; k-- > 0;) {
        const double* ck = a + k * n;
        b[k] /= ck[k];
        const double bk = b[k];
        if (bk == 0.0) continue;
        for (std::size_t i = 0; i < k; ++i) b[i] -= ck[i] * bk;
      }
    }
  }

  // P A = L U, so A^T = U^T L^T P.
  void solve_transpose_inplace(double* x, std::size_t ldx, std::size_t nrhs) const {
    const std::size_t n = size();
    const double* a = lu_.data().data();
    for (std::size_t c = 0; c < nrhs; ++c) {
      double* b = x + c * ldx;
      for (std::size_t k = 0; k < n; ++k) {
        const double* ck = a + k * n;
        double s = b[k];
        for (std::size_t i = 0; i < k; ++i) s -= ck[i] * b[i];
        b[k] = s / ck[k];
      }
      for (std::size_t k = n; k-- > 0;) {
        const double* ck = a + k * n;
        double s = b[k];
        for (std::size_t i = k + 1; i < n; ++i) s -= ck[i] * b[i];
        b[k] = s;
      }
      for (std::size_t k = n; k-- > 0;) {
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      }
    }
  }

  Mat lu_;
  std::vector<std::size_t> piv_;
  bool singular_ = false;
  double anorm1_ = 0.0;
};

// Z with a Z = rhs; throws SingularMatrix when a is singular to tolerance.
inline Mat lu_solve(const Mat& a, const Mat& rhs) {
  if (!a.square()) throw DimensionError("lu_solve: matrix is not square");
  return LuFactorization(a).solve(rhs);
}

}  // namespace tcs
