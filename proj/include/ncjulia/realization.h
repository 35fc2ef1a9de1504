#pragma once

#include <cstdint>

#include "ncjulia/domain.h"
#include "ncjulia/matrix_tuple.h"
#include "ncjulia/numerics.h"

namespace ncjulia {

/// Colligation (A B; C D) on C (+) (E (x) C^J) with dim E = m, E the
/// slowest tensor factor. A is 1x1, B is 1x(mJ), C is (mJ)x1, D is (mJ)x(mJ).
class Realization {
 public:
  /// Throws DimensionError on inconsistent block shapes and
  /// PreconditionError when the stacked matrix is not an isometry within
  /// `isometry_tol`.
  Realization(int dim_e, int j, ComplexMatrix a, ComplexMatrix b, ComplexMatrix c, ComplexMatrix d,
              double isometry_tol = 1e-8);

  /// Shape-checked only. For negative controls with non-isometric
  /// colligations; verified() reports false.
  static Realization Unchecked(int dim_e, int j, ComplexMatrix a, ComplexMatrix b, ComplexMatrix c,
                               ComplexMatrix d);

  /// Splits a square (1 + mJ) colligation into blocks.
  static Realization FromColligation(int dim_e, int j, const ComplexMatrix& colligation,
                                     double isometry_tol = 1e-8);

  int dim_e() const { return dim_e_; }
  int J() const { return j_; }
  const ComplexMatrix& A() const { return a_; }
  const ComplexMatrix& B() const { return b_; }
  const ComplexMatrix& C() const { return c_; }
  const ComplexMatrix& D() const { return d_; }
  bool verified() const { return verified_; }

  ComplexMatrix Colligation() const;
  double IsometryDefect() const;

 private:
  Realization(int dim_e, int j, ComplexMatrix a, ComplexMatrix b, ComplexMatrix c, ComplexMatrix d,
              bool verified);

  int dim_e_;
  int j_;
  ComplexMatrix a_, b_, c_, d_;
  bool verified_;
};

/// A Schur-class nc function phi given by a realization over G_delta.
class NcFunctionHandle {
 public:
  /// Throws DimensionError when realization.J() != delta.J().
  NcFunctionHandle(Realization realization, DeltaMatrix delta);

  const Realization& realization() const { return realization_; }
  const DeltaMatrix& delta() const { return delta_; }

 private:
  Realization realization_;
  DeltaMatrix delta_;
};

/// I - (D (x) I_n)(I_E (x) delta_value), with delta_value (Jn)x(Jn).
ComplexMatrix ResolventMatrix(const Realization& r, const ComplexMatrix& delta_value, int n);

/// C (x) I_n, (mJn) x n.
ComplexMatrix LiftedC(const Realization& r, int n);

struct PointEvaluation {
  ComplexMatrix phi;    // n x n
  ComplexMatrix u;      // (mJn) x n
  ComplexMatrix delta;  // (Jn) x (Jn)
  double delta_norm = 0.0;
  double condition = 0.0;      // of the resolvent
  bool near_singular = false;  // condition > 1e12
};

/// u(x) = [I - (D (x) I)(I (x) delta(x))]^{-1} (C (x) I) and
/// phi(x) = A (x) I + (B (x) I)(I (x) delta(x)) u(x), from one direct solve.
/// Throws PreconditionError when x is not in G_delta and
/// SingularMatrixError when the resolvent is exactly singular.
PointEvaluation Evaluate(const NcFunctionHandle& h, const MatrixTuple& x);

struct UEvaluation {
  ComplexMatrix u;
  double condition = 0.0;
  bool near_singular = false;
};

UEvaluation EvalU(const NcFunctionHandle& h, const MatrixTuple& x);
ComplexMatrix EvalPhi(const NcFunctionHandle& h, const MatrixTuple& x);

struct NeumannEvaluation {
  ComplexMatrix phi;
  double q = 0.0;                 // ||(D (x) I)(I (x) delta(x))||
  double truncation_bound = 0.0;  // q^{terms+1} / (1 - q)
  int terms = 0;
};

/// Oracle for EvalPhi: the resolvent expanded as a truncated Neumann
/// series sum_{k=0}^{terms}. Throws PreconditionError when q >= 1.
NeumannEvaluation EvalPhiNeumann(const NcFunctionHandle& h, const MatrixTuple& x, int terms);

/// Smallest number of terms whose truncation bound is <= target, capped at
/// max_terms. Throws PreconditionError when q >= 1.
int NeumannTermsFor(const NcFunctionHandle& h, const MatrixTuple& x, double target,
                    int max_terms = 5000);

/// || I - phi(y)* phi(x) - u(y)* (I_E (x) (I - delta(y)* delta(x))) u(x) ||.
double ModelResidual(const NcFunctionHandle& h, const MatrixTuple& x, const MatrixTuple& y);

/// Haar-random unitary colligation of size 1 + dim_e * j.
Realization RandomRealization(int dim_e, int j, std::uint64_t seed);

}  // namespace ncjulia
