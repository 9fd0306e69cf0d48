#pragma once

// Solvers for the reduced Stein and Sylvester equations, back-substitution,
// and the end-to-end pipeline for A X + X^T B = C.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/lu.hpp"
#include "tcs/matcore.hpp"
#include "tcs/oracle.hpp"
#include "tcs/random.hpp"
#include "tcs/transform.hpp"

namespace tcs {

enum class Method { LyapunovViaA, LyapunovViaB, Sylvester, Oracle, Auto };

// None marks routes that do not solve a Stein equation.
enum class SteinSolver { Direct, Smith, Auto, None };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::LyapunovViaA: return "lyapunov-a";
    case Method::LyapunovViaB: return "lyapunov-b";
    case Method::Sylvester: return "sylvester";
    case Method::Oracle: return "oracle";
    default: return "auto";
  }
}

inline const char* to_string(SteinSolver s) {
  switch (s) {
    case SteinSolver::Direct: return "direct";
    case SteinSolver::Smith: return "smith";
    case SteinSolver::Auto: return "auto";
    default: return "none";
  }
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::LyapunovViaA, Method::LyapunovViaB, Method::Sylvester, Method::Oracle,
                   Method::Auto}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

inline std::optional<SteinSolver> parse_stein_solver(std::string_view s) {
  for (SteinSolver v : {SteinSolver::Direct, SteinSolver::Smith, SteinSolver::Auto}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

struct SolveOptions {
  double tol = 1e-8;
  std::size_t max_iter = 64;
  SteinSolver stein_solver = SteinSolver::Auto;
  Method method = Method::Auto;
  // Largest n for which an explicit n^2 x n^2 reduced operator is formed.
  std::size_t operator_cap = kOracleCap;
};

struct SolveReport {
  Mat x;
  double residual_original = 0.0;
  double residual_reduced = 0.0;
  Method method_used = Method::Auto;
  SteinSolver stein_solver_used = SteinSolver::None;
  double spectral_radius_estimate = 0.0;
  std::size_t iterations = 0;
  std::chrono::nanoseconds wall_time{0};
  std::vector<std::string> warnings;
};

// The reduced equation was solved but X fails the original equation. The
// candidate and both residuals stay available for inspection.
class SpuriousSolution : public Error {
 public:
  explicit SpuriousSolution(SolveReport report)
      : Error("spurious solution: original residual " + std::to_string(report.residual_original) +
              " exceeds tolerance (reduced residual " + std::to_string(report.residual_reduced) +
              ")"),
        report_(std::move(report)) {}

  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

// Power iteration from a fixed pseudo-random start. Each step fits
// M^2 v ~ alpha M v + beta v and takes the larger root of z^2 - alpha z - beta,
// which also tracks a dominant complex pair. An estimate, not a bound.
inline double spectral_radius_estimate(const Mat& m) {
  if (!m.square()) throw DimensionError("spectral_radius_estimate: M is not square");
  const std::size_t n = m.rows();
  if (n == 0 || max_abs(m.data()) == 0.0) return 0.0;

  SplitMix64 rng(0x7263686fULL);
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
  const double v0 = norm2(v);
  for (std::size_t i = 0; i < n; ++i) v[i] /= v0;

  auto dot = [](const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };

  double est = 0.0;
  double prev = -1.0;
  for (int it = 0; it < 100; ++it) {
    const Vec y1 = matvec(m, v);
    const Vec y2 = matvec(m, y1);
    const double g11 = dot(y1, y1);
    const double g12 = dot(y1, v);
    const double g22 = dot(v, v);
    const double det = g11 * g22 - g12 * g12;
    if (g11 == 0.0) return 0.0;
    if (det > 1e-10 * g11 * g22) {
      const double r1 = dot(y1, y2);
      const double r2 = dot(v, y2);
      const double alpha = (r1 * g22 - r2 * g12) / det;
      const double beta = (g11 * r2 - g12 * r1) / det;
      const double disc = alpha * alpha + 4.0 * beta;
      if (disc < 0.0) {
        est = std::sqrt(-beta);
      } else {
        const double s = std::sqrt(disc);
        est = 0.5 * std::max(std::abs(alpha + s), std::abs(alpha - s));
      }
    } else {
      est = std::sqrt(g11 / g22);
    }
    const double y2n = norm2(y2);
    if (y2n == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = y2[i] / y2n;
    if (prev >= 0.0 && std::abs(est - prev) <= 1e-6 * est) break;
    prev = est;
  }
  return est;
}

// ||X - M X M^T - Q||_F / (||X||_F (1 + ||M||_F^2) + ||Q||_F).
inline double stein_residual(const Mat& m, const Mat& q, const Mat& x) {
  const Mat r = x - m * x * transpose(m) - q;
  const double mn = frobenius(m);
  const double scale = frobenius(x) * (1.0 + mn * mn) + frobenius(q);
  return scale > 0.0 ? frobenius(r) / scale : frobenius(r);
}

// Residual of -M X~ + X~ M^{-T} = Q', scaled like stein_residual.
inline double sylvester_residual(const SylvesterForm& f, const Mat& x) {
  const Mat r = f.neg_m * x + x * f.m_inv_t - f.q_prime;
  const double scale =
      frobenius(x) * (frobenius(f.neg_m) + frobenius(f.m_inv_t)) + frobenius(f.q_prime);
  return scale > 0.0 ? frobenius(r) / scale : frobenius(r);
}

// ||A X + X^T B - C||_F / (||A||_F ||X||_F + ||X||_F ||B||_F + ||C||_F).
inline double residual(const TcsProblem& p, const Mat& x) {
  if (x.rows() != p.n() || x.cols() != p.n()) throw DimensionError("residual: X has wrong shape");
  const Mat r = p.a() * x + transpose(x) * p.b() - p.c();
  const double xn = frobenius(x);
  const double scale = frobenius(p.a()) * xn + xn * frobenius(p.b()) + frobenius(p.c());
  return scale > 0.0 ? frobenius(r) / scale : frobenius(r);
}

namespace detail {
inline void require_stein_shapes(const Mat& m, const Mat& q) {
  if (!m.square() || !q.square() || m.rows() != q.rows()) {
    throw DimensionError("Stein equation: M and Q must be square of equal size");
  }
}
}  // namespace detail

// (I - M (x) M) vec(X~) = vec(Q) by dense LU.
inline Mat solve_stein_direct(const Mat& m, const Mat& q, std::size_t cap = kDefaultOperatorCap) {
  detail::require_stein_shapes(m, q);
  const std::size_t n = m.rows();
  const LuFactorization lu(assemble_stein_operator(m, cap));
  if (lu.singular()) {
    throw SingularOperator("Stein operator I - M (x) M is singular (some eigenvalue product of M is 1)");
  }
  return unvec(lu.solve(vec(q)), n, n);
}

struct SmithResult {
  Mat x;
  std::size_t iterations = 0;
  double rho_estimate = 0.0;
};

// Squared Smith iteration: X <- X + S X S^T, S <- S^2, from X = Q, S = M.
// Stops once the increment is below rounding level, then checks the Stein
// residual against opts.tol.
inline SmithResult solve_stein_smith(const Mat& m, const Mat& q, const SolveOptions& opts = {}) {
  detail::require_stein_shapes(m, q);
  SmithResult out;
  out.rho_estimate = spectral_radius_estimate(m);
  if (!(out.rho_estimate < 1.0 - 1e-6)) {
    throw NotConvergent("Smith iteration needs spectral radius < 1, estimate is " +
                        std::to_string(out.rho_estimate));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  Mat x = q;
  Mat s = m;
  for (std::size_t k = 1; k <= opts.max_iter; ++k) {
    const Mat d = s * x * transpose(s);
    x = x + d;
    out.iterations = k;
    if (frobenius(d) <= eps * frobenius(x)) break;
    s = s * s;
  }
  const double res = stein_residual(m, q, x);
  if (!(res <= opts.tol)) {
    throw NotConvergent("Smith iteration stalled at Stein residual " + std::to_string(res) +
                        " after " + std::to_string(out.iterations) + " doublings");
  }
  out.x = std::move(x);
  return out;
}

// {(M^{-1} (x) I) + (I (x) (-M))} vec(X~) = vec(Q') by dense LU.
inline Mat solve_sylvester_direct(const SylvesterForm& f, std::size_t cap = kDefaultOperatorCap) {
  const std::size_t n = f.n();
  const LuFactorization lu(assemble_sylvester_operator(f, cap));
  if (lu.singular()) {
    throw SingularOperator("Sylvester operator is singular: spec(-M) meets spec(-M^{-T})");
  }
  return unvec(lu.solve(vec(f.q_prime)), n, n);
}

// ViaA: A X = X~. ViaB: B^T X = X^^T.
inline Mat back_substitute(const SteinForm& s, const Mat& reduced_solution) {
  std::optional<LuFactorization> local;
  if (s.back_lu.size() != s.back_ref.rows()) local.emplace(s.back_ref);
  const LuFactorization& lu = local ? *local : s.back_lu;
  if (lu.singular()) throw SingularMatrix("back-substitution factor is singular");
  if (s.side == SteinSide::ViaA) return lu.solve(reduced_solution);
  return lu.solve_transpose(transpose(reduced_solution));
}

namespace detail {

inline void validate(const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

// Solves X~ - M X~ M^T = Q with the requested solver, recording what ran.
inline Mat solve_stein(const SteinForm& s, const SolveOptions& opts, SolveReport& rep) {
  rep.spectral_radius_estimate = spectral_radius_estimate(s.m_coef);
  SteinSolver choice = opts.stein_solver;
  if (choice == SteinSolver::Auto || choice == SteinSolver::None) {
    choice = rep.spectral_radius_estimate < 0.95 ? SteinSolver::Smith : SteinSolver::Direct;
  }
  if (choice == SteinSolver::Smith) {
    try {
      SmithResult r = solve_stein_smith(s.m_coef, s.q, opts);
      rep.stein_solver_used = SteinSolver::Smith;
      rep.iterations = r.iterations;
      return std::move(r.x);
    } catch (const NotConvergent& e) {
      if (opts.stein_solver != SteinSolver::Auto) throw;
      rep.warnings.push_back(std::string(e.what()) + "; retrying with the direct solver");
    }
  }
  rep.stein_solver_used = SteinSolver::Direct;
  rep.iterations = 0;
  try {
    return solve_stein_direct(s.m_coef, s.q, opts.operator_cap);
  } catch (const CapacityError& e) {
    if (opts.stein_solver == SteinSolver::Direct) throw;
    throw NotConvergent(std::string("Smith iteration unavailable and ") + e.what());
  }
}

inline void run_route(const TcsProblem& p, Method route, const SolveOptions& opts, SolveReport& rep) {
  rep.method_used = route;
  rep.stein_solver_used = SteinSolver::None;
  rep.iterations = 0;
  rep.spectral_radius_estimate = 0.0;
  switch (route) {
    case Method::LyapunovViaA:
    case Method::LyapunovViaB: {
      const SteinForm s = route == Method::LyapunovViaA ? to_stein_via_a(p) : to_stein_via_b(p);
      const Mat reduced = solve_stein(s, opts, rep);
      rep.residual_reduced = stein_residual(s.m_coef, s.q, reduced);
      rep.x = back_substitute(s, reduced);
      break;
    }
    case Method::Sylvester: {
      const SylvesterForm f = to_sylvester(p);
      rep.spectral_radius_estimate = spectral_radius_estimate(f.neg_m);
      const Mat reduced = solve_sylvester_direct(f, opts.operator_cap);
      rep.residual_reduced = sylvester_residual(f, reduced);
      rep.x = LuFactorization(p.a()).solve(reduced);
      break;
    }
    case Method::Oracle: {
      try {
        rep.x = solve_dense_oracle(p);
      } catch (const SingularOperator& e) {
        throw NoUniqueSolution(std::string("no unique solution: ") + e.what(), e.consistency());
      }
      rep.residual_reduced = residual(p, rep.x);
      break;
    }
    case Method::Auto:
      throw std::logic_error("run_route: Auto is not a concrete route");
  }
  rep.residual_original = residual(p, rep.x);
  if (!(rep.residual_original <= opts.tol)) throw SpuriousSolution(rep);
}

inline Method auto_route(const TcsProblem& p) {
  if (!LuFactorization(p.a()).singular()) return Method::LyapunovViaA;
  if (!LuFactorization(p.b()).singular()) return Method::LyapunovViaB;
  return Method::Oracle;
}

}  // namespace detail

// Transform, solve the reduced equation, back-substitute, and verify against
// the original equation. Method::Auto prefers the reduction through A, then
// through B, and falls back to the dense oracle when the chosen reduction
// cannot produce a verified solution.
inline SolveReport solve_tcs(const TcsProblem& p, const SolveOptions& opts = {}) {
  detail::validate(opts);
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  auto stamp = [&](SolveReport& r) { r.wall_time = std::chrono::steady_clock::now() - t0; };

  try {
    if (opts.method != Method::Auto) {
      detail::run_route(p, opts.method, opts, rep);
    } else {
      const Method route = detail::auto_route(p);
      if (route == Method::Oracle) {
        rep.warnings.push_back("A and B are both singular; using the dense oracle");
        detail::run_route(p, Method::Oracle, opts, rep);
      } else {
        try {
          detail::run_route(p, route, opts, rep);
        } catch (const Error& e) {
          const bool recoverable = dynamic_cast<const SingularOperator*>(&e) ||
                                   dynamic_cast<const SpuriousSolution*>(&e) ||
                                   dynamic_cast<const NotConvergent*>(&e);
          if (!recoverable || p.n() > kOracleCap) throw;
          const std::string reason = std::string(to_string(route)) + " failed (" + e.what() + ")";
          rep.warnings.push_back(reason + "; falling back to the dense oracle");
          try {
            detail::run_route(p, Method::Oracle, opts, rep);
          } catch (const NoUniqueSolution& u) {
            throw NoUniqueSolution(reason + "; " + u.what(), u.consistency());
          }
        }
      }
    }
  } catch (SpuriousSolution& e) {
    SolveReport r = e.report();
    stamp(r);
    throw SpuriousSolution(std::move(r));
  }
  stamp(rep);
  return rep;
}

}  // namespace tcs
