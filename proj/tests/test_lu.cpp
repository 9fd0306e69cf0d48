#include <gtest/gtest.h>

#include <cmath>

#include "tcs/lu.hpp"
#include "test_util.hpp"

using namespace tcs;
using tcs::testing::random_matrix;

TEST(LuSolve, Examples) {
  const Mat c = Mat::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(lu_solve(Mat::identity(2), c), c);
  EXPECT_EQ(lu_solve(Mat::diag({2, 4}), Mat::from_rows({{2}, {8}})), Mat::from_rows({{1}, {2}}));
  EXPECT_THROW(lu_solve(Mat(2, 2), Mat::identity(2)), SingularMatrix);
}

TEST(LuSolve, RejectsBadShapes) {
  EXPECT_THROW(lu_solve(Mat(2, 3), Mat(2, 1)), DimensionError);
  EXPECT_THROW(lu_solve(Mat::identity(2), Mat(3, 1)), DimensionError);
}

TEST(LuSolve, EmptyAndScalar) {
  EXPECT_EQ(lu_solve(Mat(0, 0), Mat(0, 0)), Mat(0, 0));
  EXPECT_EQ(lu_solve(Mat::from_rows({{4}}), Mat::from_rows({{2}})), Mat::from_rows({{0.5}}));
}

class LuRandom : public ::testing::TestWithParam<std::size_t> {};

TEST_P(LuRandom, SolvesAndTransposeSolves) {
  const std::size_t n = GetParam();
  SplitMix64 rng(100 + n);
  Mat a = random_matrix(n, n, rng);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 2.0;
  const Mat x = random_matrix(n, 3, rng);
  const LuFactorization lu(a);
  ASSERT_FALSE(lu.singular());
  EXPECT_LE(rel_diff(lu.solve(a * x), x), 1e-11);
  EXPECT_LE(rel_diff(lu.solve_transpose(transpose(a) * x), x), 1e-11);
}

// Sizes straddle the 64-column panel so the blocked update is exercised.
INSTANTIATE_TEST_SUITE_P(Sizes, LuRandom, ::testing::Values(1, 2, 7, 63, 64, 65, 130, 200));

TEST(LuSingularity, ScaleInvariant) {
  const Mat rank_one = Mat::from_rows({{1, 2}, {2, 4}});
  for (double s : {1e-200, 1.0, 1e200}) {
    EXPECT_TRUE(LuFactorization(scale(rank_one, s)).singular()) << s;
    EXPECT_FALSE(LuFactorization(scale(Mat::from_rows({{1, 2}, {3, 4}}), s)).singular()) << s;
  }
}

TEST(LuSingularity, ExactlyDependentColumns) {
  SplitMix64 rng(7);
  Mat a = random_matrix(6, 6, rng);
  for (std::size_t i = 0; i < 6; ++i) a(i, 5) = a(i, 0) + a(i, 1);
  EXPECT_TRUE(LuFactorization(a).singular());
  EXPECT_EQ(LuFactorization(a).rcond(), 0.0);
}

TEST(LuCondition, EstimateTracksTrueOneNormCondition) {
  SplitMix64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 6;
    const Mat a = random_matrix(n, n, rng);
    const LuFactorization lu(a);
    if (lu.singular()) continue;
    const Mat inv = lu.solve(Mat::identity(n));
    auto norm1 = [](const Mat& m) {
      double best = 0.0;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (double v : m.col(j)) s += std::abs(v);
        best = std::max(best, s);
      }
      return best;
    };
    const double true_rcond = 1.0 / (norm1(a) * norm1(inv));
    const double est = lu.rcond();
    // The estimator bounds ||A^{-1}||_1 from below, so rcond from above.
    EXPECT_GE(est, true_rcond * (1 - 1e-10));
    EXPECT_LE(est, true_rcond * 10.0);
  }
  EXPECT_DOUBLE_EQ(LuFactorization(Mat::identity(4)).rcond(), 1.0);
}
