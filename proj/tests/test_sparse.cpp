#include <gtest/gtest.h>

#include <sstream>

#include "eigenbound/errors.hpp"
#include "eigenbound/smalleig.hpp"
#include "eigenbound/sparse.hpp"

using namespace eigenbound;

namespace {

SymmetricSparseMatrix small() {
  // [[4, 1, 0], [1, 3, -2], [0, -2, 5]] with the (1,1) entry given in two parts
  return SymmetricSparseMatrix::from_upper_triplets(
      3, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 1, 1.0}, {1, 2, -2.0}, {1, 1, 2.0}, {2, 2, 5.0}});
}

}  // namespace

TEST(Sparse, MirrorsAndSumsDuplicates) {
  const auto m = small();
  EXPECT_EQ(m.order(), 3u);
  EXPECT_EQ(m.nonzeros(), 7u);
  EXPECT_DOUBLE_EQ(m.coeff(1, 1), 3.0);
  EXPECT_DOUBLE_EQ(m.coeff(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.coeff(2, 1), -2.0);
  EXPECT_DOUBLE_EQ(m.coeff(0, 2), 0.0);
  EXPECT_EQ(m.asymmetry(), 0.0);
  EXPECT_DOUBLE_EQ(m.max_abs(), 5.0);
}

TEST(Sparse, ProductMatchesDense) {
  const auto m = small();
  const std::vector<double> x{1.0, -1.0, 2.0};
  const auto y = m * x;
  EXPECT_DOUBLE_EQ(y[0], 3.0);
  EXPECT_DOUBLE_EQ(y[1], -6.0);
  EXPECT_DOUBLE_EQ(y[2], 12.0);
  const DenseSymMatrix d = m.to_dense();
  EXPECT_EQ(d.multiply(x), y);
  EXPECT_DOUBLE_EQ(m.scaled(2.0).coeff(2, 2), 10.0);
}

TEST(Sparse, RejectsOutOfRange) {
  EXPECT_THROW(SymmetricSparseMatrix::from_upper_triplets(2, {{0, 2, 1.0}}), IndexError);
  EXPECT_THROW(small().coeff(3, 0), IndexError);
  std::vector<double> x(2), y(3);
  EXPECT_THROW(small().multiply(x, y), ContractError);
}

TEST(Sparse, MatrixMarketLowerTriangle) {
  std::ostringstream out;
  write_matrix_market(out, small());
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("%%MatrixMarket matrix coordinate real symmetric", 0), 0u);
  EXPECT_NE(text.find("3 3 5\n"), std::string::npos);
  EXPECT_NE(text.find("3 2 -2\n"), std::string::npos);
  EXPECT_EQ(text.find("2 3 "), std::string::npos);
}

TEST(Sparse, EmptyMatrix) {
  const auto m = SymmetricSparseMatrix::from_upper_triplets(0, {});
  EXPECT_EQ(m.order(), 0u);
  EXPECT_TRUE((m * std::vector<double>{}).empty());
}
