#include "ncjulia/derivative.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ncjulia/domain.h"
#include "ncjulia/errors.h"

namespace ncjulia {
namespace {

struct Ladder {
  double t0 = 0.0;
  std::vector<double> steps;
  bool partial = false;
};

Ladder BuildLadder(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& direction,
                   double t_start, const DerivativeOptions& options) {
  const std::optional<double> t0 =
      FindInwardStep(delta, t, direction, t_start, options.ladder_length, options.t_min);
  if (!t0) {
    throw PreconditionError("no admissible t0 >= " + std::to_string(options.t_min) +
                            ": T + tH leaves G_delta");
  }
  Ladder ladder;
  ladder.t0 = *t0;
  for (int k = 0; k < options.ladder_length; ++k) {
    const double step = std::ldexp(*t0, -k);
    if (step < options.t_min) {
      ladder.partial = true;
      break;
    }
    ladder.steps.push_back(step);
  }
  if (ladder.steps.size() < 2) {
    throw PreconditionError("ladder has fewer than two steps above t_min");
  }
  return ladder;
}

struct LadderLimit {
  ComplexMatrix value;
  std::vector<double> increments;
  bool converged = false;
};

LadderLimit ExtrapolateLadder(const std::vector<double>& steps,
                              const std::function<ComplexMatrix(double)>& quotient, double tol) {
  std::vector<LimitSample> samples;
  samples.reserve(steps.size());
  for (double s : steps) samples.push_back({s, quotient(s)});
  const LimitEstimate estimate = ExtrapolateLimit(samples);
  LadderLimit out{estimate.value, estimate.increments, false};
  if (samples.size() >= 3) {
    const std::size_t k = samples.size() - 1;
    const ComplexMatrix previous = 2.0 * samples[k - 1].value - samples[k - 2].value;
    const double change = OperatorNorm(out.value - previous);
    out.converged = change <= tol * std::max(1.0, OperatorNorm(out.value));
  }
  return out;
}

DirectionalDerivativeResult RunEta(const NcFunctionHandle& h, const MatrixTuple& t,
                                   const ComplexMatrix& w, const MatrixTuple& direction,
                                   double t_start, const DerivativeOptions& options) {
  if (t.d() != direction.d() || t.n() != direction.n()) {
    throw DimensionError("EtaNumeric: T and H differ in shape");
  }
  if (w.rows() != t.n() || w.cols() != t.n())
    throw DimensionError("EtaNumeric: W has the wrong size");
  const DeltaMatrix& delta = h.delta();
  DirectionalDerivativeResult out(direction);
  const bool on_boundary = OnDistinguishedBoundary(delta, t);
  if (on_boundary) {
    out.beta = -HermitianPartMaxEig(InwardMatrix(delta, t, direction));
    out.in_gamma = direction.Norm() <= 1.0 + 1e-12 && out.beta >= options.gamma_beta;
  }
  if (options.require_gamma) {
    if (!on_boundary) throw PreconditionError("EtaNumeric: T is not on the distinguished boundary");
    if (!out.in_gamma) throw PreconditionError("EtaNumeric: H is not in Gamma(T)");
  }
  const Ladder ladder = BuildLadder(delta, t, direction, t_start, options);
  out.t0 = ladder.t0;
  out.steps = ladder.steps;
  out.partial = ladder.partial;
  const LadderLimit limit = ExtrapolateLadder(
      ladder.steps,
      [&](double s) -> ComplexMatrix { return (EvalPhi(h, t + s * direction) - w) / s; },
      options.convergence_tol);
  out.eta = limit.value;
  out.increments = limit.increments;
  out.converged = limit.converged;
  return out;
}

}  // namespace

DirectionalDerivativeResult EtaNumeric(const NcFunctionHandle& h, const MatrixTuple& t,
                                       const ComplexMatrix& w, const MatrixTuple& direction,
                                       const DerivativeOptions& options) {
  return RunEta(h, t, w, direction, options.t_start, options);
}

double HomogeneityCheck(const NcFunctionHandle& h, const MatrixTuple& t, const ComplexMatrix& w,
                        const DirectionalDerivativeResult& result, double s,
                        const DerivativeOptions& options) {
  if (!(s > 0.0 && s <= 1.0)) throw PreconditionError("HomogeneityCheck: s must lie in (0, 1]");
  if (s == 1.0) return 0.0;
  const DirectionalDerivativeResult scaled = EtaNumeric(h, t, w, s * result.h, options);
  return OperatorNorm(scaled.eta - s * result.eta);
}

double LadderIndependence(const NcFunctionHandle& h, const MatrixTuple& t, const ComplexMatrix& w,
                          const MatrixTuple& direction, const DerivativeOptions& options) {
  const DirectionalDerivativeResult first = EtaNumeric(h, t, w, direction, options);
  const DirectionalDerivativeResult second = RunEta(h, t, w, direction, first.t0 / 3.0, options);
  return OperatorNorm(first.eta - second.eta);
}

ScalarDerivative ScalarAngularDerivative(const NcFunctionHandle& h, const MatrixTuple& t,
                                         const ComplexMatrix& w, const MatrixTuple& direction,
                                         std::optional<ComplexVector> v,
                                         const DerivativeOptions& options) {
  const int n = t.n();
  if (direction.d() != t.d() || direction.n() != n) {
    throw DimensionError("ScalarAngularDerivative: T and K differ in shape");
  }
  if (w.rows() != n || w.cols() != n) {
    throw DimensionError("ScalarAngularDerivative: W has the wrong size");
  }
  if (!InDelta(h.delta(), t, direction)) {
    throw PreconditionError("ScalarAngularDerivative: K is not in Delta(T)");
  }
  ComplexVector unit = v.value_or(ComplexVector::Unit(n, 0));
  if (unit.size() != n) throw DimensionError("ScalarAngularDerivative: v has the wrong size");
  const double norm = unit.norm();
  if (!(norm > 0.0)) throw PreconditionError("ScalarAngularDerivative: v is zero");
  unit /= norm;
  const ComplexVector wv = w * unit;
  const Complex f0 = wv.dot(wv);

  const Ladder ladder = BuildLadder(h.delta(), t, direction, options.t_start, options);
  const LadderLimit limit = ExtrapolateLadder(
      ladder.steps,
      [&](double s) -> ComplexMatrix {
        const ComplexVector image = EvalPhi(h, t + s * direction) * unit;
        ComplexMatrix q(1, 1);
        q(0, 0) = (wv.dot(image) - f0) / s;
        return q;
      },
      options.convergence_tol);
  return {limit.value(0, 0), ladder.steps, limit.increments, limit.converged};
}

Complex EtaPairing(const ComplexMatrix& eta, const ComplexMatrix& w, const ComplexVector& v) {
  const ComplexVector wv = w * v;
  return wv.dot(eta * v);
}

}  // namespace ncjulia
