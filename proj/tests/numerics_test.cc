#include "ncjulia/numerics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ncjulia/errors.h"
#include "test_util.h"

namespace ncjulia {
namespace {

using testing::RandomMatrixWithNorm;

TEST(NumericsTest, OperatorNormOfDiagonal) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m.diagonal() << 1.0, Complex(0.0, -4.0), 2.0;
  EXPECT_NEAR(OperatorNorm(m), 4.0, 1e-14);
  EXPECT_NEAR(SmallestSingularValue(m), 1.0, 1e-14);
  EXPECT_NEAR(ConditionNumber(m), 4.0, 1e-13);
  EXPECT_EQ(OperatorNorm(ComplexMatrix(0, 0)), 0.0);
}

TEST(NumericsTest, ConditionNumberOfSingularIsInfinite) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  EXPECT_TRUE(std::isinf(ConditionNumber(m)));
  EXPECT_THROW(CheckedInverse(m), SingularMatrixError);
}

TEST(NumericsTest, HermitianPartEigenvalues) {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0.0, 3.0), Complex(0.0, 3.0), -2.0;  // Hermitian part diag(1, -2)
  EXPECT_NEAR(HermitianPartMaxEig(m), 1.0, 1e-14);
  EXPECT_NEAR(HermitianPartMinEig(m), -2.0, 1e-14);
  EXPECT_THROW(HermitianPartMaxEig(ComplexMatrix::Zero(2, 3)), DimensionError);
  EXPECT_FALSE(IsSelfAdjoint(m, 1e-10));
  EXPECT_TRUE(IsSelfAdjoint(m + m.adjoint(), 1e-12));
}

TEST(NumericsTest, RandomUnitaryIsUnitaryAndSeeded) {
  Rng a(7), b(7);
  const ComplexMatrix u = RandomUnitary(5, a);
  EXPECT_LE(IsometryDefect(u), 1e-13);
  EXPECT_LE(IsometryDefect(u.adjoint()), 1e-13);
  EXPECT_EQ(u, RandomUnitary(5, b));
}

TEST(NumericsTest, MinNormSolveIsOrthogonalToKernel) {
  Rng rng(3);
  // rank-2 matrix on C^4
  const ComplexMatrix left = RandomGaussian(4, 2, rng);
  const ComplexMatrix m = left * RandomGaussian(2, 4, rng);
  const ComplexMatrix b = m * RandomGaussian(4, 1, rng);
  const SolveOutcome s = MinNormSolve(m, b);
  EXPECT_TRUE(s.consistent);
  EXPECT_LE(s.residual_norm, 1e-10);
  const ComplexMatrix kernel = KernelBasis(m);
  ASSERT_EQ(kernel.cols(), 2);
  EXPECT_LE(OperatorNorm(kernel.adjoint() * s.solution), 1e-10);
  EXPECT_LE(OperatorNorm(m * kernel), 1e-10);
  EXPECT_EQ(RangeBasis(m).cols(), 2);
}

TEST(NumericsTest, MinNormSolveReportsInconsistency) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  ComplexMatrix b(2, 1);
  b << 1.0, 1.0;
  const SolveOutcome s = MinNormSolve(m, b);
  EXPECT_FALSE(s.consistent);
  EXPECT_NEAR(s.residual_norm, 1.0, 1e-14);
}

TEST(NumericsTest, NearestUnitaryIsPolarFactor) {
  Rng rng(11);
  const ComplexMatrix u = RandomUnitary(3, rng);
  ComplexMatrix p = RandomGaussian(3, 3, rng);
  p = p * p.adjoint() + ComplexMatrix::Identity(3, 3);
  const ComplexMatrix w = NearestUnitary(u * p);
  EXPECT_LE(OperatorNorm(w - u), 1e-12);
  EXPECT_THROW(NearestUnitary(ComplexMatrix::Zero(2, 2)), SingularMatrixError);
}

TEST(NumericsTest, NumericalRank) {
  std::vector<ComplexMatrix> v;
  EXPECT_EQ(NumericalRank(v), 0);
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(0, 1) = 1.0;
  v = {a, b, Complex(2.0, 1.0) * a + b};
  EXPECT_EQ(NumericalRank(v), 2);
}

TEST(NumericsTest, KronLayoutPutsLeftFactorSlowest) {
  ComplexMatrix a(2, 2);
  a << 1, 2, 3, 4;
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix k = Kron(a, id);
  // block (i, j) of a (x) I is a(i, j) I
  EXPECT_EQ(k(0, 2), Complex(2.0));
  EXPECT_EQ(k(1, 3), Complex(2.0));
  EXPECT_EQ(k(0, 1), Complex(0.0));
  EXPECT_EQ(Kron(id, a)(0, 1), Complex(2.0));
}

TEST(NumericsTest, ExtrapolateLimitRemovesFirstOrderTerm) {
  std::vector<LimitSample> samples;
  for (int k = 0; k < 8; ++k) {
    const double t = std::ldexp(0.5, -k);
    samples.push_back({t, ComplexMatrix::Constant(1, 1, 1.0 + 2.0 * t + 3.0 * t * t)});
  }
  const LimitEstimate e = ExtrapolateLimit(samples);
  // 2 f(t/2) - f(t) = 1 - 3 t^2 / 2 with t the second-to-last step
  const double t = samples[samples.size() - 2].t;
  EXPECT_NEAR(e.value(0, 0).real(), 1.0 - 1.5 * t * t, 1e-14);
  ASSERT_EQ(e.increments.size(), 7u);
  for (std::size_t k = 1; k < e.increments.size(); ++k) {
    EXPECT_LT(e.increments[k], e.increments[k - 1]);
  }
}

TEST(NumericsTest, ExtrapolateLimitRejectsBadLadders) {
  std::vector<LimitSample> one{{0.5, ComplexMatrix::Zero(1, 1)}};
  EXPECT_THROW(ExtrapolateLimit(one), PreconditionError);
  std::vector<LimitSample> uneven{{0.5, ComplexMatrix::Zero(1, 1)},
                                  {0.3, ComplexMatrix::Zero(1, 1)}};
  EXPECT_THROW(ExtrapolateLimit(uneven), PreconditionError);
}

TEST(NumericsTest, RandomMatrixWithNormHelper) {
  Rng rng(5);
  EXPECT_NEAR(OperatorNorm(RandomMatrixWithNorm(4, 0.7, rng)), 0.7, 1e-13);
}

}  // namespace
}  // namespace ncjulia
