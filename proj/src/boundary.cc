#include "ncjulia/boundary.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ncjulia/errors.h"

namespace ncjulia {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Index of the first sample in the longest trailing run whose steps halve
// at every stage.
std::size_t GeometricTailStart(const std::vector<double>& steps) {
  if (steps.empty()) return 0;
  std::size_t start = steps.size() - 1;
  while (start > 0) {
    const double ratio = steps[start] / steps[start - 1];
    if (std::abs(ratio - 0.5) > 1e-9) break;
    --start;
  }
  return start;
}

double GramNorm(const ComplexMatrix& phi) {
  const Eigen::Index n = phi.rows();
  return OperatorNorm(ComplexMatrix::Identity(n, n) - phi.adjoint() * phi);
}

bool TailGrows(const std::vector<double>& values, double factor, int window) {
  if (static_cast<int>(values.size()) < window + 1) return false;
  for (std::size_t k = values.size() - window; k < values.size(); ++k) {
    if (!(values[k] >= factor * values[k - 1])) return false;
  }
  return true;
}

}  // namespace

JuliaQuotient ComputeJuliaQuotient(const NcFunctionHandle& h, const MatrixTuple& z) {
  const PointEvaluation e = Evaluate(h, z);
  JuliaQuotient out;
  out.numerator = GramNorm(e.phi);
  out.denominator = 1.0 - e.delta_norm * e.delta_norm;
  out.quotient = out.numerator / out.denominator;
  return out;
}

AlphaEstimate EstimateAlpha(const NcFunctionHandle& h, const ApproachSequence& seq,
                            const AlphaOptions& options) {
  const GeneratedSequence generated = GenerateSequence(seq, h.delta());
  AlphaEstimate out;
  out.steps = generated.steps;
  out.dropped = generated.dropped;
  out.is_liminf = seq.rule == ApproachRule::kRadial && h.delta().IsLinear();
  for (const MatrixTuple& z : generated.points) {
    out.quotients.push_back(ComputeJuliaQuotient(h, z).quotient);
  }
  for (std::size_t k = 1; k < out.quotients.size(); ++k) {
    out.increments.push_back(std::abs(out.quotients[k] - out.quotients[k - 1]));
  }
  const double last = out.quotients.back();
  if (!std::isfinite(last) || last > 1e12 || TailGrows(out.quotients, options.growth_factor, 3)) {
    out.diverged = true;
    out.alpha = kInf;
    return out;
  }

  const std::size_t start = GeometricTailStart(out.steps);
  std::vector<double> richardson;
  for (std::size_t k = start + 1; k < out.quotients.size(); ++k) {
    richardson.push_back(2.0 * out.quotients[k] - out.quotients[k - 1]);
  }
  if (richardson.empty()) {
    out.alpha = last;
    return out;
  }
  out.alpha = richardson.back();
  if (richardson.size() >= 2) {
    const double change = std::abs(richardson.back() - richardson[richardson.size() - 2]);
    out.converged = change <= options.convergence_tol * std::max(1.0, std::abs(out.alpha));
  }
  return out;
}

WExtraction ExtractW(const NcFunctionHandle& h, const ApproachSequence& seq, double max_distance) {
  const GeneratedSequence generated = GenerateSequence(seq, h.delta());
  const std::size_t start = GeometricTailStart(generated.steps);
  std::vector<LimitSample> samples;
  for (std::size_t k = start; k < generated.points.size(); ++k) {
    samples.push_back({generated.steps[k], EvalPhi(h, generated.points[k])});
  }
  if (samples.size() < 2) {
    throw PreconditionError("ExtractW: fewer than two geometrically spaced sequence points");
  }
  WExtraction out;
  out.raw_limit = ExtrapolateLimit(samples).value;
  try {
    out.W = NearestUnitary(out.raw_limit);
  } catch (const SingularMatrixError&) {
    throw InconsistencyError("ExtractW: limit of phi(Z_j) is singular, not unitary");
  }
  out.distance = OperatorNorm(out.raw_limit - out.W);
  if (!(out.distance <= max_distance)) {
    throw InconsistencyError("ExtractW: limit of phi(Z_j) is " + std::to_string(out.distance) +
                             " from the unitaries");
  }
  return out;
}

UTSolution SolveUT(const NcFunctionHandle& h, const MatrixTuple& t, double boundary_tol) {
  if (!OnDistinguishedBoundary(h.delta(), t, boundary_tol)) {
    throw PreconditionError("SolveUT: T is not on the distinguished boundary");
  }
  const Realization& r = h.realization();
  const int n = t.n();
  const ComplexMatrix resolvent = ResolventMatrix(r, EvalDelta(h.delta(), t), n);
  const ComplexMatrix rhs = LiftedC(r, n);
  const SolveOutcome solved = MinNormSolve(resolvent, rhs);

  UTSolution out;
  out.u_t = solved.solution;
  out.range_residual = solved.residual_norm;
  const ComplexMatrix kernel = KernelBasis(resolvent);
  out.kernel_dimension = static_cast<int>(kernel.cols());
  if (kernel.cols() > 0) {
    out.kernel_orthogonality = OperatorNorm(kernel.adjoint() * out.u_t);
    const ComplexMatrix range = RangeBasis(resolvent);
    if (range.cols() > 0) out.kernel_range_overlap = OperatorNorm(kernel.adjoint() * range);
  }
  return out;
}

RangeTestVerdict IsBPointRangeTest(const NcFunctionHandle& h, const MatrixTuple& t, double tol,
                                   const AssumptionReport* assumption) {
  RangeTestVerdict out;
  if (assumption != nullptr) {
    out.conditional = !assumption->a1;
  } else {
    out.conditional = !CheckAssumptionA(h.delta(), t).a1;
  }
  out.range_residual = SolveUT(h, t).range_residual;
  out.bpoint = out.range_residual <= tol;
  return out;
}

JuliaCheck JuliaInequalityCheck(const NcFunctionHandle& h, const MatrixTuple& t,
                                const ComplexMatrix& w, double alpha, const MatrixTuple& z,
                                double relative_tol) {
  if (t.d() != z.d() || t.n() != z.n() || w.rows() != z.n() || w.cols() != z.n()) {
    throw DimensionError("JuliaInequalityCheck: T, W and Z differ in shape");
  }
  const PointEvaluation e = Evaluate(h, z);
  JuliaCheck out;
  const double phi_gram = GramNorm(e.phi);
  const double delta_gap = 1.0 - e.delta_norm * e.delta_norm;
  if (phi_gram <= 1e-14 || delta_gap <= 1e-14) {
    out.skipped = true;
    return out;
  }
  const double diff = OperatorNorm(e.phi - w);
  const double cross = OperatorNorm(DeltaGramDefect(h.delta(), t, z));
  out.lhs = diff * diff / phi_gram;
  out.rhs = alpha * cross * cross / delta_gap;
  out.holds = out.lhs <= out.rhs * (1.0 + relative_tol);
  return out;
}

double BoundaryModelResidual(const NcFunctionHandle& h, const MatrixTuple& t,
                             const ComplexMatrix& w, const ComplexMatrix& u_t,
                             const MatrixTuple& z) {
  if (t.d() != z.d() || t.n() != z.n())
    throw DimensionError("BoundaryModelResidual: T and Z differ in shape");
  const int n = z.n();
  if (w.rows() != n || w.cols() != n)
    throw DimensionError("BoundaryModelResidual: W has the wrong size");
  const PointEvaluation e = Evaluate(h, z);
  if (u_t.rows() != e.u.rows() || u_t.cols() != n) {
    throw DimensionError("BoundaryModelResidual: u_T has the wrong size");
  }
  const ComplexMatrix delta_t = EvalDelta(h.delta(), t);
  const Eigen::Index jn = delta_t.rows();
  const ComplexMatrix gram = ComplexMatrix::Identity(jn, jn) - delta_t.adjoint() * e.delta;
  const int m = h.realization().dim_e();
  const ComplexMatrix lifted = Kron(ComplexMatrix::Identity(m, m), gram);
  const ComplexMatrix residual =
      ComplexMatrix::Identity(n, n) - w.adjoint() * e.phi - u_t.adjoint() * lifted * e.u;
  return OperatorNorm(residual);
}

TfaeReport ComputeTfae(const NcFunctionHandle& h, const ApproachSequence& seq, double slack) {
  const GeneratedSequence generated = GenerateSequence(seq, h.delta());
  TfaeReport out;
  std::vector<double> apertures;
  std::vector<double> delta_norms;
  std::vector<double> model_grams;
  for (std::size_t k = 0; k < generated.points.size(); ++k) {
    const MatrixTuple& z = generated.points[k];
    const PointEvaluation e = Evaluate(h, z);
    const double phi_gram = GramNorm(e.phi);
    const double rect_gram = OperatorNorm(DeltaGramDefect(h.delta(), z, z));
    const Eigen::Index jn = e.delta.rows();
    model_grams.push_back(
        OperatorNorm(ComplexMatrix::Identity(jn, jn) - e.delta.adjoint() * e.delta));
    delta_norms.push_back(e.delta_norm);

    TfaePoint p;
    p.step = generated.steps[k];
    p.gram_ratio = phi_gram / rect_gram;
    p.julia_ratio = phi_gram / (1.0 - e.delta_norm * e.delta_norm);
    p.u_norm_sq = std::pow(OperatorNorm(e.u), 2);
    p.aperture = NontangentialConstant(h.delta(), z, seq.base);
    apertures.push_back(p.aperture);
    out.points.push_back(p);
  }
  if (std::any_of(apertures.begin(), apertures.end(), [](double c) { return !std::isfinite(c); }) ||
      TailGrows(apertures, 1.5, 3)) {
    throw PreconditionError("ComputeTfae: sequence approaches tangentially");
  }
  for (const TfaePoint& p : out.points) {
    out.sup_gram_ratio = std::max(out.sup_gram_ratio, p.gram_ratio);
    out.sup_julia_ratio = std::max(out.sup_julia_ratio, p.julia_ratio);
    out.sup_u_norm_sq = std::max(out.sup_u_norm_sq, p.u_norm_sq);
    out.sup_aperture = std::max(out.sup_aperture, p.aperture);
  }
  const double up = 1.0 + slack;
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    const TfaePoint& p = out.points[k];
    const double phi_gram = p.julia_ratio * (1.0 - delta_norms[k] * delta_norms[k]);
    if (!(p.gram_ratio <= p.julia_ratio * up &&
          p.julia_ratio <= 2.0 * p.aperture * p.gram_ratio * up)) {
      out.comparable_within_2c = false;
    }
    if (!(phi_gram <= p.u_norm_sq * model_grams[k] * up + slack)) {
      out.u_bound_implies_gram_bound = false;
    }
    if (!(p.u_norm_sq <= out.sup_gram_ratio * p.aperture * (1.0 + delta_norms[k]) * up + slack)) {
      out.gram_bound_implies_u_bound = false;
    }
  }
  return out;
}

BPointReport AnalyzeBPoint(const NcFunctionHandle& h, const MatrixTuple& t,
                           const BPointOptions& options) {
  const DeltaMatrix& delta = h.delta();
  if (InGDelta(delta, t).inside) throw PreconditionError("AnalyzeBPoint: T lies in G_delta");

  BPointReport report(t);
  report.boundary_defect = DistinguishedBoundaryDefect(delta, t);
  report.on_distinguished_boundary = report.boundary_defect <= options.boundary_tol;
  if (report.on_distinguished_boundary) {
    AssumptionOptions assumption_options = options.assumption;
    assumption_options.boundary_tol = options.boundary_tol;
    report.assumption = CheckAssumptionA(delta, t, assumption_options);
  }

  const ApproachSequence seq = [&]() {
    if (options.ray_direction) {
      const MatrixTuple& k = *options.ray_direction;
      const double t0 =
          FindInwardStep(delta, t, k, options.ray_t0, options.steps).value_or(options.ray_t0);
      return RaySequence(t, k, t0, options.steps);
    }
    if (delta.IsLinear() || options.force_radial) return RadialSequence(t, options.steps);
    if (report.assumption && report.assumption->witness) {
      const MatrixTuple& k = *report.assumption->witness;
      const double t0 =
          FindInwardStep(delta, t, k, options.ray_t0, options.steps).value_or(options.ray_t0);
      return RaySequence(t, k, t0, options.steps);
    }
    throw PreconditionError(
        "AnalyzeBPoint: delta is not linear and no transverse direction is available");
  }();
  report.sequence_rule = seq.rule == ApproachRule::kRadial ? "radial" : "ray";

  report.alpha = EstimateAlpha(h, seq);
  report.sequence_steps = report.alpha.steps;
  report.sequence_dropped = report.alpha.dropped;
  if (report.alpha.converged) {
    try {
      report.w = ExtractW(h, seq);
    } catch (const Error& e) {
      report.w_error = e.what();
    }
  }

  if (report.on_distinguished_boundary) {
    report.u_t = SolveUT(h, t, options.boundary_tol);
    const double u_norm = OperatorNorm(report.u_t->u_t);
    report.u_t_norm_sq = u_norm * u_norm;
    RangeTestVerdict verdict;
    verdict.range_residual = report.u_t->range_residual;
    verdict.bpoint = verdict.range_residual <= options.range_tol;
    verdict.conditional = !report.assumption->a1;
    report.range_test = verdict;
    if (report.alpha.is_liminf && report.alpha.converged) {
      report.u_t_alpha_gap = std::abs(report.u_t_norm_sq - report.alpha.alpha);
    }
    if (delta.rows() == delta.cols()) {
      report.bpoint = verdict.bpoint;
      report.conditional = verdict.conditional;
    } else {
      // The range criterion needs the square delta(T) to be an isometry,
      // which zero padding breaks; fall back to the quotients.
      report.bpoint = report.alpha.converged && report.w.has_value();
    }
  } else {
    report.bpoint = report.alpha.converged && report.w.has_value();
  }

  if (options.samples > 0 && (report.w || report.u_t)) {
    Rng rng(options.seed);
    const bool sweep_boundary_model =
        report.w && report.range_test && report.range_test->bpoint && delta.rows() == delta.cols();
    for (int s = 0; s < options.samples; ++s) {
      const std::optional<MatrixTuple> z = RandomInteriorPoint(delta, t.n(), rng);
      if (!z) continue;
      try {
        if (report.w) {
          const JuliaCheck check = JuliaInequalityCheck(h, t, report.w->W, report.alpha.alpha, *z,
                                                        options.julia_relative_tol);
          if (check.skipped) {
            ++report.julia_skipped;
          } else {
            ++report.julia_checked;
            if (!check.holds) ++report.julia_violations;
          }
        }
        if (sweep_boundary_model) {
          report.boundary_model_residual =
              std::max(report.boundary_model_residual,
                       BoundaryModelResidual(h, t, report.w->W, report.u_t->u_t, *z));
        }
      } catch (const SingularMatrixError&) {
        // a resolvent pole inside the sample set; skip the point
      }
    }
  }

  try {
    report.tfae = ComputeTfae(h, seq);
    if (report.alpha.converged) {
      bool holds = true;
      for (const TfaePoint& p : report.tfae->points) {
        const double bound = 4.0 * report.alpha.alpha * p.aperture * p.aperture;
        if (!(p.julia_ratio <= bound * (1.0 + 1e-8) + 1e-12)) holds = false;
      }
      report.approach_bound_holds = holds;
    }
  } catch (const Error& e) {
    report.tfae_error = e.what();
  }
  return report;
}

}  // namespace ncjulia
