#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncjulia/domain.h"
#include "ncjulia/matrix_tuple.h"
#include "ncjulia/numerics.h"
#include "ncjulia/realization.h"

namespace ncjulia {

struct JuliaQuotient {
  double quotient = 0.0;
  double numerator = 0.0;    // ||I - phi(Z)* phi(Z)||
  double denominator = 0.0;  // 1 - ||delta(Z)||^2
};

/// ||I - phi(Z)* phi(Z)|| / (1 - ||delta(Z)||^2). Throws PreconditionError
/// when Z is not in G_delta.
JuliaQuotient ComputeJuliaQuotient(const NcFunctionHandle& h, const MatrixTuple& z);

struct AlphaOptions {
  double convergence_tol = 1e-6;  // relative change of successive Richardson values
  double growth_factor = 1.5;     // per-step quotient growth that signals blow-up
};

struct AlphaEstimate {
  double alpha = 0.0;  // +inf when the quotients blow up
  std::vector<double> steps;
  std::vector<double> quotients;
  std::vector<double> increments;  // |q_{k+1} - q_k|
  bool converged = false;
  bool diverged = false;
  // True for radial sequences with linear delta, where the radial limit is
  // the liminf over G_delta; otherwise alpha is a sequence-wise estimate.
  bool is_liminf = false;
  int dropped = 0;
};

/// Extrapolated limit of the Julia quotient along the sequence.
AlphaEstimate EstimateAlpha(const NcFunctionHandle& h, const ApproachSequence& seq,
                            const AlphaOptions& options = {});

struct WExtraction {
  ComplexMatrix W;          // unitary
  ComplexMatrix raw_limit;  // extrapolated limit of phi(Z_j)
  double distance = 0.0;    // ||raw_limit - W||
};

/// Boundary value W = lim phi(Z_j), projected to the nearest unitary.
/// Throws InconsistencyError when the raw limit is farther than
/// `max_distance` from the unitaries, which indicates T is not a B-point.
WExtraction ExtractW(const NcFunctionHandle& h, const ApproachSequence& seq,
                     double max_distance = 1e-4);

struct UTSolution {
  ComplexMatrix u_t;                  // (mJn) x n
  double range_residual = 0.0;        // ||R u_T - (C (x) I)||
  double kernel_orthogonality = 0.0;  // max |<k, u_T>| over unit kernel vectors
  int kernel_dimension = 0;
  // ||P_ker P_ran|| of R = I - (D (x) I)(I (x) delta(T)); zero when R is
  // built from a contraction, where ker R is orthogonal to ran R.
  double kernel_range_overlap = 0.0;
};

/// Minimum-norm solution of [I - (D (x) I)(I (x) delta(T))] u_T = C (x) I.
/// Throws PreconditionError when T is not on the distinguished boundary.
UTSolution SolveUT(const NcFunctionHandle& h, const MatrixTuple& t, double boundary_tol = 1e-8);

struct RangeTestVerdict {
  bool bpoint = false;
  bool conditional = false;  // (A1) could not be confirmed at T
  double range_residual = 0.0;
};

/// C (x) I in Ran[I - (D (x) I)(I (x) delta(T))], decided by the residual
/// of SolveUT. Runs CheckAssumptionA unless `assumption` is supplied.
RangeTestVerdict IsBPointRangeTest(const NcFunctionHandle& h, const MatrixTuple& t,
                                   double tol = 1e-8, const AssumptionReport* assumption = nullptr);

struct JuliaCheck {
  double lhs = 0.0;  // ||phi(Z) - W||^2 / ||I - phi(Z)* phi(Z)||
  double rhs = 0.0;  // alpha ||I - delta(T)* delta(Z)||^2 / (1 - ||delta(Z)||^2)
  bool holds = true;
  bool skipped = false;  // ||I - phi(Z)* phi(Z)|| too small to divide by
};

JuliaCheck JuliaInequalityCheck(const NcFunctionHandle& h, const MatrixTuple& t,
                                const ComplexMatrix& w, double alpha, const MatrixTuple& z,
                                double relative_tol = 1e-8);

/// || I - W* phi(Z) - u_T* (I_E (x) (I - delta(T)* delta(Z))) u(Z) ||.
double BoundaryModelResidual(const NcFunctionHandle& h, const MatrixTuple& t,
                             const ComplexMatrix& w, const ComplexMatrix& u_t,
                             const MatrixTuple& z);

struct TfaePoint {
  double step = 0.0;
  double gram_ratio = 0.0;   // (i)  ||I - phi* phi|| / ||I - delta* delta||
  double julia_ratio = 0.0;  // (ii) ||I - phi* phi|| / (1 - ||delta||^2)
  double u_norm_sq = 0.0;    // (iii)/(iv) ||u(Z)||^2
  double aperture = 0.0;     // nontangential constant c(Z)
};

struct TfaeReport {
  std::vector<TfaePoint> points;
  double sup_gram_ratio = 0.0;
  double sup_julia_ratio = 0.0;
  double sup_u_norm_sq = 0.0;
  double sup_aperture = 0.0;
  // 1 <= (ii)/(i) <= 2c at every point.
  bool comparable_within_2c = true;
  // ||I - phi* phi|| <= ||u||^2 ||I - delta* delta|| at every point (the
  // step (iii) => (i) with M = M'').
  bool u_bound_implies_gram_bound = true;
  // ||u||^2 <= M c (1 + ||delta||) with M = sup (i) (the step (i) => (iv)).
  bool gram_bound_implies_u_bound = true;
};

/// Quantities of the four equivalent boundedness conditions along a
/// non-tangential sequence. Throws PreconditionError when the sequence
/// approaches tangentially (unbounded or growing aperture).
TfaeReport ComputeTfae(const NcFunctionHandle& h, const ApproachSequence& seq, double slack = 1e-9);

struct BPointOptions {
  std::optional<MatrixTuple> ray_direction;  // forces a ray sequence
  bool force_radial = false;
  int steps = 20;
  double ray_t0 = 0.5;
  int samples = 50;  // random interior Z for the inequality and boundary-model sweeps
  std::uint64_t seed = 1;
  double boundary_tol = 1e-8;
  double range_tol = 1e-8;
  double julia_relative_tol = 1e-8;
  AssumptionOptions assumption;
};

struct BPointReport {
  explicit BPointReport(MatrixTuple point) : t(std::move(point)) {}

  MatrixTuple t;
  bool on_distinguished_boundary = false;
  double boundary_defect = 0.0;

  std::string sequence_rule;  // "radial" or "ray"
  std::vector<double> sequence_steps;
  int sequence_dropped = 0;

  AlphaEstimate alpha;
  std::optional<WExtraction> w;
  std::string w_error;

  std::optional<AssumptionReport> assumption;
  std::optional<UTSolution> u_t;
  double u_t_norm_sq = 0.0;
  std::optional<RangeTestVerdict> range_test;
  // | ||u_T||^2 - alpha |, only for linear delta and radial sequences.
  std::optional<double> u_t_alpha_gap;

  double boundary_model_residual = 0.0;  // max over the sample set
  int julia_checked = 0;
  int julia_violations = 0;
  int julia_skipped = 0;

  std::optional<TfaeReport> tfae;
  std::string tfae_error;
  // (ii) <= 4 alpha c(Z)^2 at every sequence point, when alpha converged.
  std::optional<bool> approach_bound_holds;

  bool bpoint = false;
  bool conditional = false;
};

/// Full B-point diagnostics at T. T must not lie in G_delta
/// (PreconditionError). When T is off the distinguished boundary only the
/// quotient-based parts run.
BPointReport AnalyzeBPoint(const NcFunctionHandle& h, const MatrixTuple& t,
                           const BPointOptions& options = {});

}  // namespace ncjulia
