#include "ncjulia/free_polynomial.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "ncjulia/errors.h"
#include "ncjulia/matrix_tuple.h"
#include "test_util.h"

namespace ncjulia {
namespace {

using testing::RandomPolynomial;
using testing::RandomTuple;
using testing::ScalarEval;

FreePolynomial Poly(int d, std::vector<Term> terms) { return FreePolynomial(d, std::move(terms)); }

TEST(FreePolynomialTest, ParseReadsNonCommutativeProducts) {
  EXPECT_EQ(ParsePoly("x0*x1 - 2", 2), Poly(2, {{1.0, {0, 1}}, {-2.0, {}}}));
  EXPECT_EQ(ParsePoly("x0^2 + x1*x0", 2), Poly(2, {{1.0, {0, 0}}, {1.0, {1, 0}}}));
  EXPECT_NE(ParsePoly("x0*x1", 2), ParsePoly("x1*x0", 2));
}

TEST(FreePolynomialTest, ParseComplexLiteralsAndGroups) {
  EXPECT_EQ(ParsePoly("(1+2i)*x0", 1), Poly(1, {{Complex(1, 2), {0}}}));
  EXPECT_EQ(ParsePoly("i*x0 - i*x0", 1), FreePolynomial(1));
  EXPECT_EQ(ParsePoly("(x0 + x1)^2", 2),
            Poly(2, {{1.0, {0, 0}}, {1.0, {0, 1}}, {1.0, {1, 0}}, {1.0, {1, 1}}}));
  EXPECT_EQ(ParsePoly("x0^0", 1), FreePolynomial::Constant(1, 1.0));
  EXPECT_EQ(ParsePoly("-(x0)", 1), Poly(1, {{-1.0, {0}}}));
  EXPECT_EQ(ParsePoly("2.5e-1*x0", 1), Poly(1, {{0.25, {0}}}));
}

TEST(FreePolynomialTest, ParseErrors) {
  try {
    ParsePoly("x5", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("variable index out of range"), std::string::npos);
    EXPECT_EQ(e.position(), 0u);
  }
  try {
    ParsePoly("x0^-1", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("negative exponent"), std::string::npos);
    EXPECT_EQ(e.position(), 3u);
  }
  try {
    ParsePoly("x0 + * x1", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(ParsePoly("x0 x1", 2), ParseError);
  EXPECT_THROW(ParsePoly("2x0", 1), ParseError);
  EXPECT_THROW(ParsePoly("(x0", 1), ParseError);
  EXPECT_THROW(ParsePoly("", 1), ParseError);
  EXPECT_THROW(ParsePoly("y0", 1), ParseError);
  EXPECT_THROW(ParsePoly("2^2", 1), ParseError);
}

TEST(FreePolynomialTest, FormatExamples) {
  EXPECT_EQ(FormatPoly(Poly(2, {{1.0, {0, 1}}})), "x0*x1");
  EXPECT_EQ(FormatPoly(FreePolynomial(2)), "0");
  EXPECT_EQ(FormatPoly(Poly(1, {{-2.0, {}}, {1.0, {0, 0}}})), "x0^2 - 2");
}

TEST(FreePolynomialTest, FormatParseRoundTripProperty) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = testing::UniformInt(rng, 1, 4);
    const FreePolynomial p = RandomPolynomial(d, 5, 6, rng);
    const std::string text = FormatPoly(p);
    EXPECT_EQ(ParsePoly(text, d), p) << text;
  }
}

TEST(FreePolynomialTest, CanonicalFormMergesAndDropsZeros) {
  const FreePolynomial p = Poly(2, {{1.0, {0}}, {2.0, {0}}, {0.0, {1}}, {1.0, {1}}, {-1.0, {1}}});
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.terms()[0].coeff, Complex(3.0));
  EXPECT_THROW(Poly(2, {{1.0, {2}}}), DimensionError);
}

TEST(FreePolynomialTest, EvalExamples) {
  ComplexMatrix e12 = ComplexMatrix::Zero(2, 2), e21 = ComplexMatrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  e21(1, 0) = 1.0;
  const MatrixTuple x({e12, e21});
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_EQ(EvalPoly(Poly(2, {{1.0, {0, 1}}}), x), expected);
  const MatrixTuple zero3 = MatrixTuple::Zero(1, 3);
  EXPECT_EQ(EvalPoly(FreePolynomial::Constant(1, 2.0), zero3), 2.0 * ComplexMatrix::Identity(3, 3));
  EXPECT_EQ(EvalPoly(FreePolynomial(1), zero3), ComplexMatrix::Zero(3, 3));
  EXPECT_THROW(EvalPoly(FreePolynomial(2), zero3), DimensionError);
}

TEST(FreePolynomialTest, ScalarEvaluationMatchesCommutativeOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = testing::UniformInt(rng, 1, 3);
    const FreePolynomial p = RandomPolynomial(d, 4, 6, rng);
    std::vector<Complex> values;
    for (int r = 0; r < d; ++r) values.push_back(testing::RandomComplex(rng));
    const Complex got = EvalPoly(p, MatrixTuple::Scalars(values))(0, 0);
    const Complex want = ScalarEval(p, values);
    EXPECT_LE(std::abs(got - want), 1e-9 * (1.0 + std::abs(want)));
  }
}

TEST(FreePolynomialTest, EvaluationIsLinear) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const FreePolynomial p = RandomPolynomial(2, 3, 5, rng);
    const FreePolynomial q = RandomPolynomial(2, 3, 5, rng);
    const MatrixTuple x = RandomTuple(2, 3, rng, 0.7);
    const ComplexMatrix lhs = EvalPoly(p + q, x);
    const ComplexMatrix rhs = EvalPoly(p, x) + EvalPoly(q, x);
    EXPECT_LE(OperatorNorm(lhs - rhs), 1e-9 * (1.0 + OperatorNorm(rhs)));
  }
}

TEST(FreePolynomialTest, ProductIsConcatenation) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const FreePolynomial p = RandomPolynomial(2, 2, 3, rng);
    const FreePolynomial q = RandomPolynomial(2, 2, 3, rng);
    const MatrixTuple x = RandomTuple(2, 2, rng, 0.7);
    const ComplexMatrix lhs = EvalPoly(p * q, x);
    const ComplexMatrix rhs = EvalPoly(p, x) * EvalPoly(q, x);
    EXPECT_LE(OperatorNorm(lhs - rhs), 1e-9 * (1.0 + OperatorNorm(rhs)));
  }
}

TEST(FreePolynomialTest, DerivativeProductRule) {
  Rng rng(12);
  const MatrixTuple t = RandomTuple(2, 2, rng);
  const MatrixTuple h = RandomTuple(2, 2, rng);
  const ComplexMatrix got = DirectionalDerivativePoly(Poly(2, {{1.0, {0, 1}}}), t, h);
  EXPECT_LE(OperatorNorm(got - (h[0] * t[1] + t[0] * h[1])), 1e-14);
  EXPECT_EQ(DirectionalDerivativePoly(FreePolynomial::Constant(2, 3.0), t, h),
            ComplexMatrix::Zero(2, 2));
}

TEST(FreePolynomialTest, DerivativeMatchesCentralDifference) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = testing::UniformInt(rng, 1, 3);
    const FreePolynomial p = testing::RandomNonConstantPolynomial(d, 4, 5, rng);
    const MatrixTuple t = RandomTuple(d, 2, rng, 0.5);
    const MatrixTuple h = RandomTuple(d, 2, rng, 0.5);
    const double step = 1e-5;
    const ComplexMatrix fd = (EvalPoly(p, t + step * h) - EvalPoly(p, t - step * h)) / (2 * step);
    const ComplexMatrix exact = DirectionalDerivativePoly(p, t, h);
    EXPECT_LE(OperatorNorm(exact - fd), 1e-6 * std::max(1.0, OperatorNorm(exact)));
  }
}

TEST(FreePolynomialTest, DirectSumAndSimilarityAxioms) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const FreePolynomial p = RandomPolynomial(2, 3, 5, rng);
    const MatrixTuple x = RandomTuple(2, 2, rng, 0.6);
    const MatrixTuple y = RandomTuple(2, 3, rng, 0.6);
    const ComplexMatrix sum = EvalPoly(p, DirectSum(x, y));
    const ComplexMatrix blocks = BlockDiagonal(EvalPoly(p, x), EvalPoly(p, y));
    EXPECT_LE(OperatorNorm(sum - blocks), 1e-9 * (1.0 + OperatorNorm(blocks)));

    const ComplexMatrix s = testing::RandomInvertible(2, rng);
    const ComplexMatrix lhs = EvalPoly(p, Similarity(x, s));
    const ComplexMatrix rhs = s.inverse() * EvalPoly(p, x) * s;
    EXPECT_LE(OperatorNorm(lhs - rhs), 1e-9 * (1.0 + OperatorNorm(rhs)));
  }
}

TEST(MatrixTupleTest, ShapesAndHelpers) {
  EXPECT_THROW(MatrixTuple(std::vector<ComplexMatrix>{}), DimensionError);
  EXPECT_THROW(MatrixTuple({ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)}), DimensionError);
  EXPECT_THROW(MatrixTuple({ComplexMatrix::Zero(2, 3)}), DimensionError);
  const MatrixTuple one = MatrixTuple::Scalars({1.0, -1.0});
  const MatrixTuple sum = DirectSum(MatrixTuple::Scalars({1.0}), MatrixTuple::Scalars({-1.0}));
  EXPECT_EQ(sum.n(), 2);
  EXPECT_EQ(sum[0](1, 1), Complex(-1.0));
  EXPECT_EQ(one.Norm(), 1.0);
  EXPECT_EQ(Similarity(one, 2.0 * ComplexMatrix::Identity(1, 1))[1](0, 0), Complex(-1.0));
  ComplexMatrix singular = ComplexMatrix::Zero(1, 1);
  EXPECT_THROW(Similarity(one, singular), SingularMatrixError);
}

}  // namespace
}  // namespace ncjulia
