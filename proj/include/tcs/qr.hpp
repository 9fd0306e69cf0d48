#pragma once

// Householder QR with column pivoting, used for numerical rank decisions and
// basic least-squares solutions on singular operators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "tcs/matcore.hpp"

namespace tcs {

class PivotedQr {
 public:
  // Factors a P = Q R. Columns whose |R(k,k)| falls to tol or below end the
  // numerical rank.
  PivotedQr(Mat a, double tol) : qr_(std::move(a)), tol_(tol) {
    const std::size_t m = qr_.rows();
    const std::size_t n = qr_.cols();
    const std::size_t kmax = std::min(m, n);
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    tau_.assign(kmax, 0.0);

    std::vector<double> norms(n);
    std::vector<double> norms_ref(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = norms_ref[j] = norm2(qr_.col(j));

    for (std::size_t k = 0; k < kmax; ++k) {
      const auto best = std::max_element(norms.begin() + static_cast<std::ptrdiff_t>(k), norms.end());
      const std::size_t p = static_cast<std::size_t>(best - norms.begin());
      if (p != k) {
        std::swap_ranges(qr_.col(k).begin(), qr_.col(k).end(), qr_.col(p).begin());
        std::swap(norms[k], norms[p]);
        std::swap(norms_ref[k], norms_ref[p]);
        std::swap(perm_[k], perm_[p]);
      }

      auto ck = qr_.col(k);
      const double xnorm = norm2(ck.subspan(k));
      if (xnorm == 0.0) continue;
      const double x0 = ck[k];
      const double beta = x0 >= 0.0 ? -xnorm : xnorm;
      const double tau = (beta - x0) / beta;
      const double inv = 1.0 / (x0 - beta);
      for (std::size_t i = k + 1; i < m; ++i) ck[i] *= inv;
      ck[k] = beta;
      tau_[k] = tau;

      for (std::size_t j = k + 1; j < n; ++j) {
        auto cj = qr_.col(j);
        double w = cj[k];
        for (std::size_t i = k + 1; i < m; ++i) w += ck[i] * cj[i];
        w *= tau;
        cj[k] -= w;
        for (std::size_t i = k + 1; i < m; ++i) cj[i] -= w * ck[i];

        if (norms[j] != 0.0) {
          const double t = std::abs(cj[k]) / norms[j];
          const double f = std::max(0.0, (1.0 - t) * (1.0 + t));
          if (f * (norms[j] / norms_ref[j]) * (norms[j] / norms_ref[j]) <= 1e-8) {
            norms[j] = norm2(cj.subspan(k + 1));
            norms_ref[j] = norms[j];
          } else {
            norms[j] *= std::sqrt(f);
          }
        }
      }
    }

    rank_ = 0;
    while (rank_ < kmax && std::abs(qr_(rank_, rank_)) > tol_) ++rank_;
  }

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<std::size_t>& permutation() const noexcept { return perm_; }
  double r_diag(std::size_t k) const { return qr_(k, k); }

  // Basic solution of min ||A x - b||: the trailing n - rank permuted
  // components are zero.
  Vec basic_solution(const Vec& b) const {
    const std::size_t m = qr_.rows();
    const std::size_t n = qr_.cols();
    if (b.size() != m) throw DimensionError("PivotedQr: rhs length mismatch");
    std::vector<double> y(b.data().begin(), b.data().end());
    for (std::size_t k = 0; k < tau_.size(); ++k) {
      if (tau_[k] == 0.0) continue;
      const auto ck = qr_.col(k);
      double w = y[k];
      for (std::size_t i = k + 1; i < m; ++i) w += ck[i] * y[i];
      w *= tau_[k];
      y[k] -= w;
      for (std::size_t i = k + 1; i < m; ++i) y[i] -= w * ck[i];
    }
    std::vector<double> z(n, 0.0);
    for (std::size_t k = rank_; k-- > 0;) {
      double s = y[k];
      for (std::size_t j = k + 1; j < rank_; ++j) s -= qr_(k, j) * z[j];
      z[k] = s / qr_(k, k);
    }
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[perm_[j]] = z[j];
    return x;
  }

 private:
  Mat qr_;
  double tol_;
  std::vector<double> tau_;
  std::vector<std::size_t> perm_;
  std::size_t rank_ = 0;
};

inline std::size_t numerical_rank(const Mat& a, double tol) { return PivotedQr(a, tol).rank(); }

}  // namespace tcs
