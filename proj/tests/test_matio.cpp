#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "tcs/matio.hpp"
#include "tcs/random.hpp"

using namespace tcs;

namespace {

bool bitwise_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::bit_cast<std::uint64_t>(a.data()[k]) != std::bit_cast<std::uint64_t>(b.data()[k])) return false;
  }
  return true;
}

// Finite doubles drawn from raw bit patterns, so subnormals, huge exponents
// and negative zero all show up.
double random_finite(SplitMix64& rng) {
  for (;;) {
    const double d = std::bit_cast<double>(rng.next());
    if (std::isfinite(d)) return d;
  }
}

}  // namespace

TEST(ReadMatrix, Examples) {
  EXPECT_EQ(read_matrix("2 2\n1 3\n2 4\n"), Mat::from_rows({{1, 3}, {2, 4}}));
  EXPECT_EQ(read_matrix("% note\n1 1\n5\n"), Mat::from_rows({{5}}));
  try {
    read_matrix("2 2\n1 2\n3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ReadMatrix, LineEndingsAreEquivalent) {
  EXPECT_EQ(read_matrix("% c\r\n2 2\r\n1 3\r\n2 4\r\n"), read_matrix("% c\n2 2\n1 3\n2 4\n"));
  EXPECT_EQ(read_matrix("1 2\n1.5\t-2e3"), Mat::from_rows({{1.5, -2000}}));
}

TEST(ReadMatrix, ValueAndDimensionErrors) {
  EXPECT_THROW(read_matrix("1 1\nnan\n"), ValueError);
  EXPECT_THROW(read_matrix("1 2\n1 inf\n"), ValueError);
  EXPECT_THROW(read_matrix("1 1\n1e400\n"), ValueError);
  EXPECT_THROW(read_matrix("3 1\n1\n2\n"), DimensionError);
  try {
    read_matrix("2 1\n1\n-inf\n");
    FAIL();
  } catch (const ValueError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ReadMatrix, AcceptsPlusSignAndTrailingBlankLines) {
  EXPECT_EQ(read_matrix("1 1\n+2.5\n\n  \n"), Mat::from_rows({{2.5}}));
}

TEST(WriteMatrix, Examples) {
  EXPECT_EQ(to_text(Mat::from_rows({{1, 3}, {2, 4}})), "2 2\n1 3\n2 4\n");
  EXPECT_EQ(to_text(Mat(0, 0)), "0 0\n");
  EXPECT_EQ(read_matrix(to_text(Mat(0, 0))), Mat(0, 0));
  EXPECT_EQ(to_text(Mat::from_rows({{0.1, -0.0}})), "1 2\n0.1 -0\n");
}

TEST(WriteMatrix, EmptyRowsRoundTrip) {
  EXPECT_EQ(read_matrix(to_text(Mat(3, 0))), Mat(3, 0));
  EXPECT_EQ(read_matrix(to_text(Mat(0, 4))), Mat(0, 4));
}

TEST(RoundTrip, BitwiseForRandomFiniteDoubles) {
  SplitMix64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    Mat m(1 + rng.next() % 7, 1 + rng.next() % 7);
    for (double& x : m.data()) x = random_finite(rng);
    ASSERT_TRUE(bitwise_equal(read_matrix(to_text(m)), m)) << to_text(m);
  }
  Mat edge = Mat::from_rows({{std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max(),
                              -std::numeric_limits<double>::min(), -0.0, 0.1 + 0.2}});
  EXPECT_TRUE(bitwise_equal(read_matrix(to_text(edge)), edge));
}

TEST(MatrixMarket, ArrayRealGeneral) {
  std::istringstream in("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n");
  EXPECT_EQ(read_matrix_market(in), Mat::from_rows({{1, 3}, {2, 4}}));
  std::istringstream bad("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n");
  EXPECT_THROW(read_matrix_market(bad), ParseError);
  std::istringstream too_many("%%MatrixMarket matrix array real general\n1 1\n1\n2\n");
  EXPECT_THROW(read_matrix_market(too_many), ParseError);
  std::istringstream too_few("%%MatrixMarket matrix array real general\n2 1\n1\n");
  EXPECT_THROW(read_matrix_market(too_few), DimensionError);
}

TEST(Files, MalformedFixturesReportLines) {
  const std::string dir = TCS_FIXTURE_DIR "/bad/";
  std::ifstream manifest(dir + "MANIFEST");
  ASSERT_TRUE(manifest);
  std::string name;
  std::size_t line = 0;
  int checked = 0;
  std::string row;
  while (std::getline(manifest, row)) {
    if (row.empty() || row[0] == '#') continue;
    std::istringstream fields(row);
    fields >> name >> line;
    try {
      read_matrix_file(dir + name);
      ADD_FAILURE() << name << " parsed";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << name << ": " << e.what();
    }
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_THROW(read_matrix_file("/nonexistent/dir/x.txt"), IoError);
  EXPECT_THROW(write_matrix_file("/nonexistent/dir/x.txt", Mat(1, 1)), IoError);
}
