#pragma once

// Test-only helpers. The brute-force routines here deliberately avoid the
// library's kron/commutation/LU code paths so they can serve as oracles.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcs/matcore.hpp"
#include "tcs/random.hpp"

namespace tcs::testing {

inline Mat random_int_matrix(std::size_t r, std::size_t c, SplitMix64& rng, int lo = -9, int hi = 9) {
  Mat m(r, c);
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  for (double& x : m.data()) x = static_cast<double>(lo + static_cast<int>(rng.next() % span));
  return m;
}

inline Mat random_matrix(std::size_t r, std::size_t c, SplitMix64& rng) {
  Mat m(r, c);
  for (double& x : m.data()) x = rng.uniform(-1.0, 1.0);
  return m;
}

inline Mat naive_product(const Mat& a, const Mat& b) {
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

// Column k of the T-congruence operator is vec(A E_k + E_k^T B) for the
// unit matrix E_k with vec(E_k) = e_k.
inline Mat operator_by_definition(const Mat& a, const Mat& b) {
  const std::size_t n = a.rows();
  Mat l(n * n, n * n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p) {
      Mat e(n, n);
      e(p, q) = 1.0;
      Mat et(n, n);
      et(q, p) = 1.0;
      const Mat col = naive_product(a, e) + naive_product(et, b);
      for (std::size_t r = 0; r < n * n; ++r) l(r, p + q * n) = col.data()[r];
    }
  return l;
}

// Gauss-Jordan elimination with complete pivoting.
inline std::vector<double> gauss_jordan(Mat a, std::vector<double> rhs) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> colperm(n);
  for (std::size_t i = 0; i < n; ++i) colperm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    double best = 0.0;
    for (std::size_t j = k; j < n; ++j)
      for (std::size_t i = k; i < n; ++i)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    if (best == 0.0) throw std::runtime_error("gauss_jordan: singular");
    for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
    std::swap(rhs[k], rhs[pr]);
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pc));
    std::swap(colperm[k], colperm[pc]);
    const double piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) a(k, j) /= piv;
    rhs[k] /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0.0) continue;
      const double f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[colperm[k]] = rhs[k];
  return x;
}

// Brute-force solution of A X + X^T B = C.
inline Mat brute_force_tcs(const Mat& a, const Mat& b, const Mat& c) {
  const std::size_t n = a.rows();
  std::vector<double> rhs(c.data().begin(), c.data().end());
  auto x = gauss_jordan(operator_by_definition(a, b), std::move(rhs));
  return Mat(n, n, std::move(x));
}

// Brute-force solution of X - M X M^T = Q, columns built from the definition.
inline Mat brute_force_stein(const Mat& m, const Mat& q) {
  const std::size_t n = m.rows();
  Mat op(n * n, n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    Mat e(n, n);
    e.data()[k] = 1.0;
    const Mat col = e - naive_product(naive_product(m, e), transpose(m));
    for (std::size_t r = 0; r < n * n; ++r) op(r, k) = col.data()[r];
  }
  auto x = gauss_jordan(op, std::vector<double>(q.data().begin(), q.data().end()));
  return Mat(n, n, std::move(x));
}

}  // namespace tcs::testing
