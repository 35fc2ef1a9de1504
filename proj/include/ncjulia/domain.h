#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncjulia/free_polynomial.h"
#include "ncjulia/matrix_tuple.h"
#include "ncjulia/numerics.h"

namespace ncjulia {

/// A matrix delta of free polynomials defining the polynomial polyhedron
/// G_delta = { x : ||delta(x)|| < 1 }.
///
/// The grid keeps its original rows x cols shape and is padded with zero
/// polynomials to a square J x J, J = max(rows, cols). Realizations work on
/// the padded square form. Isometry, inward-cone and boundary-geometry tests
/// use the original shape: zero columns added by padding would otherwise
/// make every delta(T) fail to be an isometry (e.g. the column ball).
class DeltaMatrix {
 public:
  /// Throws DimensionError for an empty or ragged grid, or mixed d.
  DeltaMatrix(int d, std::vector<std::vector<FreePolynomial>> grid);

  int d() const { return d_; }
  int J() const { return j_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Entry of the padded square matrix.
  const FreePolynomial& entry(int row, int col) const {
    return entries_[static_cast<std::size_t>(row * j_ + col)];
  }

  /// Every entry is homogeneous of degree 1, so delta(r x) = r delta(x).
  bool IsLinear() const;

 private:
  int d_;
  int rows_;
  int cols_;
  int j_;
  std::vector<FreePolynomial> entries_;
};

/// (Jn) x (Jn) block matrix, block (j, k) = entry(j, k)(x). Row-block index
/// slowest, intra-block index fastest.
ComplexMatrix EvalDelta(const DeltaMatrix& delta, const MatrixTuple& x);

/// Same layout over the original (unpadded) rows x cols shape.
ComplexMatrix EvalDeltaRect(const DeltaMatrix& delta, const MatrixTuple& x);

/// Blockwise directional derivative of the unpadded delta at T along H.
ComplexMatrix DeltaDerivativeRect(const DeltaMatrix& delta, const MatrixTuple& t,
                                  const MatrixTuple& h);

struct Membership {
  bool inside = false;
  double norm = 0.0;    // ||delta(x)||
  double margin = 0.0;  // 1 - ||delta(x)||
};

Membership InGDelta(const DeltaMatrix& delta, const MatrixTuple& x);

/// ||delta(T)* delta(T) - I|| over the unpadded shape.
double DistinguishedBoundaryDefect(const DeltaMatrix& delta, const MatrixTuple& t);

bool OnDistinguishedBoundary(const DeltaMatrix& delta, const MatrixTuple& t, double tol = 1e-8);

/// I - delta(y)* delta(x) over the unpadded shape.
ComplexMatrix DeltaGramDefect(const DeltaMatrix& delta, const MatrixTuple& y, const MatrixTuple& x);

/// c(Z) = ||delta(Z) - delta(T)|| / (1 - ||delta(Z)||^2); +inf when the
/// denominator is not positive. A sequence approaches T non-tangentially
/// iff sup c(Z_j) is finite.
double NontangentialConstant(const DeltaMatrix& delta, const MatrixTuple& z, const MatrixTuple& t);

/// delta(T)* grad delta(T)[H], the matrix that defines the inward cones.
ComplexMatrix InwardMatrix(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h);

/// Inward set: ||H|| <= 1 and Re[delta(T)* grad delta(T)[H]] <= -beta.
/// Throws PreconditionError when ||H|| > 1 or T is not on the
/// distinguished boundary.
bool InGamma(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h,
             double beta = 1e-12);

/// Transverse set: the inward matrix is self-adjoint within `tol` and its
/// largest eigenvalue is <= -beta.
bool InDelta(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h,
             double beta = 1e-12, double tol = 1e-10);

/// Sigma(T): the inward matrix is self-adjoint within `tol`.
bool InSigma(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h,
             double tol = 1e-10);

struct AssumptionOptions {
  int random_starts = 50;
  int iterations = 200;
  std::uint64_t seed = 1;
  double min_beta = 1e-9;
  double self_adjoint_tol = 1e-10;
  double rank_tol = 1e-10;
  double boundary_tol = 1e-8;
};

struct AssumptionReport {
  // (A1): a witness K in Delta(T) was found. False means "no witness found"
  // and is inconclusive.
  bool a1 = false;
  bool a1_inconclusive = true;
  std::optional<MatrixTuple> witness;
  double beta = 0.0;  // -lambda_max of the inward matrix at the witness
  // (A2): the complex span of Sigma(T) is all of M_n^d.
  bool a2 = false;
  int span_dimension = 0;
  int full_dimension = 0;
  bool a = false;
};

/// Checks (A1) by projected subgradient descent of lambda_max over the
/// self-adjoint slice Sigma(T), trying K = -T first, and (A2) via the rank
/// of a real basis of Sigma(T). Throws PreconditionError when T is not on
/// the distinguished boundary.
AssumptionReport CheckAssumptionA(const DeltaMatrix& delta, const MatrixTuple& t,
                                  const AssumptionOptions& options = {});

enum class ApproachRule {
  kRadial,  // Z = r T, steps are 1 - r
  kRay,     // Z = T + t K, steps are t
};

struct ApproachSequence {
  MatrixTuple base;
  ApproachRule rule = ApproachRule::kRadial;
  std::optional<MatrixTuple> direction;  // K, required for kRay
  std::vector<double> steps;             // t values (for kRadial, t = 1 - r)
};

/// t_k = t0 * 2^-k for k = 0 .. count-1.
std::vector<double> GeometricSteps(double t0, int count);

/// Radial sequence r_k = 1 - 2^-k, k = 1..count.
ApproachSequence RadialSequence(const MatrixTuple& t, int count = 20);

/// Ray sequence T + t_k K with t_k = t0 * 2^-k.
ApproachSequence RaySequence(const MatrixTuple& t, const MatrixTuple& k, double t0 = 0.5,
                             int count = 20);

struct GeneratedSequence {
  std::vector<MatrixTuple> points;
  std::vector<double> steps;  // steps of the retained points
  int dropped = 0;            // points outside G_delta, removed
};

MatrixTuple SequencePoint(const ApproachSequence& seq, double step);

/// Materializes the sequence, dropping points outside G_delta. Radial
/// sequences require delta.IsLinear(). Throws PreconditionError when no
/// point lies in G_delta or the radial rule is not applicable.
GeneratedSequence GenerateSequence(const ApproachSequence& seq, const DeltaMatrix& delta);

/// Largest t0 = t_start * 2^-j (down to t_min) such that T + t0 2^-k H lies
/// in G_delta for every k < ladder_length.
std::optional<double> FindInwardStep(const DeltaMatrix& delta, const MatrixTuple& t,
                                     const MatrixTuple& h, double t_start, int ladder_length,
                                     double t_min = 1e-8);

/// A random point of G_delta at level n with 1 - ||delta(x)|| >= min_margin,
/// or nullopt after `attempts` rejected draws.
std::optional<MatrixTuple> RandomInteriorPoint(const DeltaMatrix& delta, int n, Rng& rng,
                                               double min_margin = 0.0, int attempts = 200);

}  // namespace ncjulia
