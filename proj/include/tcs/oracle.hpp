#pragma once

// Brute-force ground truth: A X + X^T B = C solved as one n^2 x n^2 dense
// system, with rank-based solvability classification.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "tcs/error.hpp"
#include "tcs/lu.hpp"
#include "tcs/matcore.hpp"
#include "tcs/qr.hpp"
#include "tcs/transform.hpp"

namespace tcs {

inline constexpr std::size_t kOracleCap = 64;
inline constexpr std::size_t kClassifyCap = 32;

enum class Solvability { Unique, InfinitelyMany, None };

inline const char* to_string(Solvability s) {
  switch (s) {
    case Solvability::Unique: return "Unique";
    case Solvability::InfinitelyMany: return "InfinitelyMany";
    default: return "None";
  }
}

struct Classification {
  Solvability kind = Solvability::Unique;
  std::size_t dim = 0;  // n^2
  std::size_t rank_operator = 0;
  std::size_t rank_augmented = 0;
};

namespace detail {

inline double rank_tolerance(const Mat& l) {
  const double dim = static_cast<double>(l.rows());
  return std::numeric_limits<double>::epsilon() * dim * frobenius(l);
}

// Consistency of a singular L x = c from the residual of the basic
// least-squares solution.
inline Consistency consistency_of(const Mat& l, const Vec& c) {
  const PivotedQr qr(l, rank_tolerance(l));
  const Vec x = qr.basic_solution(c);
  Vec r = matvec(l, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c[i];
  const double scale = frobenius(l) * norm2(x) + norm2(c);
  const double tol = std::sqrt(std::numeric_limits<double>::epsilon()) * scale;
  return norm2(r) <= tol ? Consistency::ConsistentUnderdetermined : Consistency::Inconsistent;
}

}  // namespace detail

inline Mat solve_dense_oracle(const TcsProblem& p, std::size_t cap = kOracleCap) {
  const std::size_t n = p.n();
  detail::check_cap(n, cap, "solve_dense_oracle");
  Mat l = assemble_operator(p, cap);
  const LuFactorization lu(l);
  if (lu.singular()) {
    const Consistency c = detail::consistency_of(l, vec(p.c()));
    throw SingularOperator(std::string("oracle: T-congruence operator is singular (") +
                               to_string(c) + ")",
                           c);
  }
  return unvec(lu.solve(vec(p.c())), n, n);
}

inline Classification classify_solvability(const TcsProblem& p, std::size_t cap = kClassifyCap) {
  detail::check_cap(p.n(), cap, "classify_solvability");
  Classification out;
  const Mat l = assemble_operator(p, cap);
  out.dim = l.rows();
  if (!LuFactorization(l).singular()) {
    out.rank_operator = out.rank_augmented = out.dim;
    return out;
  }

  const double tol = detail::rank_tolerance(l);
  out.rank_operator = numerical_rank(l, tol);

  // [L | c] with c rescaled to the mean column norm of L; rank is invariant
  // to the scaling.
  Mat aug(l.rows(), l.cols() + 1);
  std::copy(l.data().begin(), l.data().end(), aug.data().begin());
  const double cnorm = frobenius(p.c());
  if (cnorm > 0.0) {
    const double s = frobenius(l) / std::sqrt(static_cast<double>(l.cols())) / cnorm;
    auto last = aug.col(l.cols());
    const auto c = p.c().data();
    for (std::size_t i = 0; i < c.size(); ++i) last[i] = c[i] * s;
  }
  out.rank_augmented = numerical_rank(aug, tol);

  if (out.rank_operator == out.dim) {
    out.kind = Solvability::Unique;
  } else if (out.rank_augmented > out.rank_operator) {
    out.kind = Solvability::None;
  } else {
    out.kind = Solvability::InfinitelyMany;
  }
  return out;
}

}  // namespace tcs
