#pragma once

// Reductions of the T-congruence Sylvester equation A X + X^T B = C to a
// Stein equation X~ - M X~ M^T = Q (through A or through B) or to a
// Sylvester equation -M X~ + X~ M^{-T} = Q', plus the explicit n^2 x n^2
// operators used for brute-force checks.

#include <cstddef>
#include <string>
#include <utility>

#include "tcs/error.hpp"
#include "tcs/lu.hpp"
#include "tcs/matcore.hpp"

namespace tcs {

inline constexpr std::size_t kDefaultOperatorCap = 128;

// The triple (A, B, C) of A X + X^T B = C, all n x n.
class TcsProblem {
 public:
  TcsProblem(Mat a, Mat b, Mat c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    for (const Mat* m : {&a_, &b_, &c_}) {
      if (!m->square()) {
        throw UnsupportedShape("only square coefficients are supported, got " +
                               std::to_string(m->rows()) + "x" + std::to_string(m->cols()));
      }
    }
    if (b_.rows() != a_.rows() || c_.rows() != a_.rows()) {
      throw DimensionError("A, B and C must share one dimension");
    }
  }

  const Mat& a() const noexcept { return a_; }
  const Mat& b() const noexcept { return b_; }
  const Mat& c() const noexcept { return c_; }
  std::size_t n() const noexcept { return a_.rows(); }

 private:
  Mat a_;
  Mat b_;
  Mat c_;
};

enum class SteinSide { ViaA, ViaB };

inline const char* to_string(SteinSide s) { return s == SteinSide::ViaA ? "via-a" : "via-b"; }

struct SteinForm {
  Mat m_coef;
  Mat q;
  SteinSide side = SteinSide::ViaA;
  // A for ViaA, B for ViaB, kept factored for the back-substitution.
  Mat back_ref;
  LuFactorization back_lu;

  std::size_t n() const noexcept { return q.rows(); }
};

struct SylvesterForm {
  Mat neg_m;
  Mat m_inv_t;
  Mat q_prime;

  std::size_t n() const noexcept { return q_prime.rows(); }
};

namespace detail {

inline LuFactorization factor_nonsingular(const Mat& a, const char* name) {
  LuFactorization lu(a);
  if (lu.singular()) throw SingularMatrix(std::string(name) + " is singular to pivot tolerance");
  return lu;
}

// M = B^T A^{-1}, from A^T Z = B and M = Z^T.
inline Mat stein_coefficient(const LuFactorization& a_lu, const Mat& b) {
  return transpose(a_lu.solve_transpose(b));
}

inline void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap) {
    throw CapacityError(std::string(what) + ": n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
  }
}

}  // namespace detail

inline SteinForm to_stein_via_a(const TcsProblem& p) {
  LuFactorization a_lu = detail::factor_nonsingular(p.a(), "A");
  Mat m = detail::stein_coefficient(a_lu, p.b());
  Mat q = p.c() - commute_square(m * p.c());
  return SteinForm{std::move(m), std::move(q), SteinSide::ViaA, p.a(), std::move(a_lu)};
}

// M^ = A B^{-T} from B M^T = A^T; Q^ = C - unvec(P vec(C M^T)).
inline SteinForm to_stein_via_b(const TcsProblem& p) {
  LuFactorization b_lu = detail::factor_nonsingular(p.b(), "B");
  Mat m_t = b_lu.solve(transpose(p.a()));
  Mat q = p.c() - commute_square(p.c() * m_t);
  return SteinForm{transpose(m_t), std::move(q), SteinSide::ViaB, p.b(), std::move(b_lu)};
}

// c' = vec(C) - P vec(M C) is vec(Q); Q' = unvec((M^{-1} (x) I) c') = Q M^{-T},
// evaluated as M Q'^T = Q^T.
inline SylvesterForm to_sylvester(const TcsProblem& p) {
  LuFactorization a_lu = detail::factor_nonsingular(p.a(), "A");
  detail::factor_nonsingular(p.b(), "B");
  Mat m = detail::stein_coefficient(a_lu, p.b());
  LuFactorization m_lu = detail::factor_nonsingular(m, "M = B^T A^{-1}");
  Mat q = p.c() - commute_square(m * p.c());
  Mat q_prime = transpose(m_lu.solve(transpose(q)));
  Mat m_inv_t = m_lu.solve_transpose(Mat::identity(p.n()));
  return SylvesterForm{-m, std::move(m_inv_t), std::move(q_prime)};
}

// L = (I (x) A) + P_nn (I (x) B^T), so that L vec(X) = vec(A X + X^T B).
inline Mat assemble_operator(const TcsProblem& p, std::size_t cap = kDefaultOperatorCap) {
  const std::size_t n = p.n();
  detail::check_cap(n, cap, "assemble_operator");
  const std::size_t nn = n * n;
  Mat l(nn, nn);
  for (std::size_t blk = 0; blk < n; ++blk)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) l(blk * n + i, blk * n + j) = p.a()(i, j);

  // Row r of P (I (x) B^T) is row sigma(r) of the block-diagonal I (x) B^T.
  const Commutation perm(n, n);
  for (std::size_t r = 0; r < nn; ++r) {
    const std::size_t src = perm.sigma(r);
    const std::size_t blk = src / n;
    const std::size_t row_in_blk = src % n;
    for (std::size_t k = 0; k < n; ++k) l(r, blk * n + k) += p.b()(k, row_in_blk);
  }
  return l;
}

// I - M (x) M.
inline Mat assemble_stein_operator(const Mat& m_coef, std::size_t cap = kDefaultOperatorCap) {
  if (!m_coef.square()) throw DimensionError("assemble_stein_operator: M is not square");
  detail::check_cap(m_coef.rows(), cap, "assemble_stein_operator");
  Mat k = -kron(m_coef, m_coef);
  for (std::size_t i = 0; i < k.rows(); ++i) k(i, i) += 1.0;
  return k;
}

inline Mat assemble_stein_operator(const SteinForm& s, std::size_t cap = kDefaultOperatorCap) {
  return assemble_stein_operator(s.m_coef, cap);
}

// (M^{-1} (x) I) + (I (x) (-M)).
inline Mat assemble_sylvester_operator(const SylvesterForm& f, std::size_t cap = kDefaultOperatorCap) {
  const std::size_t n = f.n();
  detail::check_cap(n, cap, "assemble_sylvester_operator");
  const Mat id = Mat::identity(n);
  return kron(transpose(f.m_inv_t), id) + kron(id, f.neg_m);
}

}  // namespace tcs
