#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ncjulia {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Tolerances shared by the numerical kernels. All norms are spectral.
struct Tolerances {
  double isometry = 1e-8;        // consistency of solves, isometry tests
  double orthogonality = 1e-10;  // kernel orthogonality
  double rank = 1e-10;           // relative singular-value cutoff for rank
  double pinv_cutoff = 1e-12;    // relative cutoff inside the pseudoinverse
};

/// Largest singular value; 0 for an empty matrix.
double OperatorNorm(const ComplexMatrix& m);

/// Smallest singular value; 0 for an empty matrix.
double SmallestSingularValue(const ComplexMatrix& m);

/// sigma_max / sigma_min, +inf when sigma_min is 0.
double ConditionNumber(const ComplexMatrix& m);

bool AllFinite(const ComplexMatrix& m);

/// Smallest / largest eigenvalue of the Hermitian part (M + M*)/2.
/// Throws DimensionError for non-square input.
double HermitianPartMinEig(const ComplexMatrix& m);
double HermitianPartMaxEig(const ComplexMatrix& m);

/// ||M - M*|| <= tol. Throws DimensionError for non-square input.
bool IsSelfAdjoint(const ComplexMatrix& m, double tol);

/// ||M* M - I||.
double IsometryDefect(const ComplexMatrix& m);

struct SolveOutcome {
  ComplexMatrix solution;
  double residual_norm = 0.0;
  bool consistent = false;
};

/// Minimum-Frobenius-norm least-squares solution of M X = b via the SVD
/// pseudoinverse. The solution is orthogonal to ker M.
SolveOutcome MinNormSolve(const ComplexMatrix& m, const ComplexMatrix& b,
                          const Tolerances& tol = {});

/// Orthonormal basis (as columns) of ker M, using a relative cutoff.
ComplexMatrix KernelBasis(const ComplexMatrix& m, double relative_cutoff = 1e-12);

/// Orthonormal basis (as columns) of Ran M, using a relative cutoff.
ComplexMatrix RangeBasis(const ComplexMatrix& m, double relative_cutoff = 1e-12);

/// Unitary polar factor U of M = U P. Throws SingularMatrixError when the
/// smallest singular value is below `relative_cutoff * max(1, sigma_max)`.
ComplexMatrix NearestUnitary(const ComplexMatrix& m, double relative_cutoff = 1e-12);

/// Number of singular values of the stacked vectors above tol * sigma_max.
/// Each entry of `vectors` is flattened column-major.
int NumericalRank(std::span<const ComplexMatrix> vectors, double tol = 1e-10);

/// A sample f(t) of a function whose limit at t -> 0+ is sought.
struct LimitSample {
  double t = 0.0;
  ComplexMatrix value;
};

struct LimitEstimate {
  ComplexMatrix value;
  // ||f(t_{k+1}) - f(t_k)|| for consecutive samples.
  std::vector<double> increments;
};

/// Richardson extrapolation assuming a first-order error term. Samples
/// must have t halving at every step; the estimate uses the last pair:
/// 2 f(t/2) - f(t). Throws PreconditionError on fewer than two samples or
/// non-geometric spacing.
LimitEstimate ExtrapolateLimit(std::span<const LimitSample> samples);

/// Kronecker product a (x) b.
ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Inverse with a condition-number guard. Throws SingularMatrixError when
/// cond(M) exceeds `max_condition`.
ComplexMatrix CheckedInverse(const ComplexMatrix& m, double max_condition = 1e12);

using Rng = std::mt19937_64;

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts
/// N(0, 1/2)).
ComplexMatrix RandomGaussian(int rows, int cols, Rng& rng);

/// Haar-distributed unitary: QR of a complex Gaussian, with the phases of
/// R's diagonal moved into Q.
ComplexMatrix RandomUnitary(int n, Rng& rng);

}  // namespace ncjulia
