#pragma once

// Reproducible test instances and the oracle-vs-pipeline benchmark cell.
//
// Instance algorithm, all draws from one SplitMix64 stream seeded with `seed`:
//   1. A = U D V. U and V are each a product of three Householder reflectors
//      I - 2 v v^T / v^T v with v uniform in [-1, 1)^n; D is diagonal with
//      D_ii = a_cond^u, u uniform in [0, 1), so cond(A) < a_cond.
//      Draw order: U's reflectors, D, V's reflectors.
//   2. B0 is uniform in [-1, 1)^{n x n} (or drawn like A when b_cond > 0).
//   3. B = B0 * rho / r0 with r0 the spectral radius estimate of B0^T A^{-1},
//      so that the estimate for M = B^T A^{-1} is rho.
//   4. X_true uniform in [-1, 1)^{n x n}; C = A X_true + X_true^T B.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tcs/matcore.hpp"
#include "tcs/oracle.hpp"
#include "tcs/random.hpp"
#include "tcs/solvers.hpp"
#include "tcs/transform.hpp"

namespace tcs {

struct GeneratorConfig {
  std::size_t n = 4;
  std::uint64_t seed = 0;
  double rho = 0.8;
  double a_cond = 1e3;
  // 0 draws B0 with plain uniform entries.
  double b_cond = 0.0;
};

struct Instance {
  TcsProblem problem;
  Mat x_true;
};

inline Mat random_uniform(std::size_t rows, std::size_t cols, SplitMix64& rng) {
  Mat m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(-1.0, 1.0);
  return m;
}

// Left-multiplies `a` by a random Householder reflector.
inline void apply_random_reflector(Mat& a, SplitMix64& rng) {
  const std::size_t n = a.rows();
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  double vv = 0.0;
  for (double x : v) vv += x * x;
  if (vv == 0.0) return;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    auto cj = a.col(j);
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += v[i] * cj[i];
    w *= 2.0 / vv;
    for (std::size_t i = 0; i < n; ++i) cj[i] -= w * v[i];
  }
}

inline Mat random_orthogonal(std::size_t n, SplitMix64& rng, int reflectors = 3) {
  Mat q = Mat::identity(n);
  for (int k = 0; k < reflectors; ++k) apply_random_reflector(q, rng);
  return q;
}

// U D V with cond(D) < cond.
inline Mat random_well_conditioned(std::size_t n, double cond, SplitMix64& rng) {
  const Mat u = random_orthogonal(n, rng);
  Mat d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = std::pow(cond, rng.uniform());
  const Mat v = random_orthogonal(n, rng);
  return u * d * v;
}

inline Instance generate_instance(const GeneratorConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const std::size_t n = cfg.n;
  Mat a = random_well_conditioned(n, cfg.a_cond, rng);
  Mat b = cfg.b_cond > 0.0 ? random_well_conditioned(n, cfg.b_cond, rng) : random_uniform(n, n, rng);
  const LuFactorization a_lu(a);
  const double r0 = spectral_radius_estimate(transpose(a_lu.solve_transpose(b)));
  if (r0 > 0.0) b = scale(std::move(b), cfg.rho / r0);
  Mat x = random_uniform(n, n, rng);
  Mat c = a * x + transpose(x) * b;
  return Instance{TcsProblem(std::move(a), std::move(b), std::move(c)), std::move(x)};
}

struct BenchRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string method;
  double wall_time_ms = 0.0;
  // NaN when the solver raised.
  double residual = 0.0;
};

// Times the dense oracle against the Smith pipeline through A on one
// generated instance.
inline std::vector<BenchRow> bench_cell(std::size_t n, std::uint64_t seed, double rho) {
  const Instance inst = generate_instance({.n = n, .seed = seed, .rho = rho});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  using ms = std::chrono::duration<double, std::milli>;
  std::vector<BenchRow> rows;

  {
    BenchRow row{n, seed, "oracle", 0.0, nan};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Mat x = solve_dense_oracle(inst.problem);
      row.wall_time_ms = ms(std::chrono::steady_clock::now() - t0).count();
      row.residual = residual(inst.problem, x);
    } catch (const Error&) {
      row.wall_time_ms = ms(std::chrono::steady_clock::now() - t0).count();
    }
    rows.push_back(row);
  }
  {
    BenchRow row{n, seed, "pipeline", 0.0, nan};
    SolveOptions opts;
    opts.method = Method::LyapunovViaA;
    opts.stein_solver = SteinSolver::Smith;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const SolveReport rep = solve_tcs(inst.problem, opts);
      row.wall_time_ms = ms(std::chrono::steady_clock::now() - t0).count();
      row.residual = rep.residual_original;
    } catch (const Error&) {
      row.wall_time_ms = ms(std::chrono::steady_clock::now() - t0).count();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tcs
