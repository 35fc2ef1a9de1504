#include "ncjulia/realization.h"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ncjulia/errors.h"

namespace ncjulia {
namespace {

void CheckBlockShapes(int dim_e, int j, const ComplexMatrix& a, const ComplexMatrix& b,
                      const ComplexMatrix& c, const ComplexMatrix& d) {
  if (dim_e < 1 || j < 1) throw DimensionError("Realization: dim_E and J must be >= 1");
  const Eigen::Index mj = static_cast<Eigen::Index>(dim_e) * j;
  auto check = [](const ComplexMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols) {
      throw DimensionError(std::string("Realization: block ") + name + " is " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                           ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!AllFinite(m))
      throw DimensionError(std::string("Realization: block ") + name + " is not finite");
  };
  check(a, 1, 1, "A");
  check(b, 1, mj, "B");
  check(c, mj, 1, "C");
  check(d, mj, mj, "D");
}

}  // namespace

Realization::Realization(int dim_e, int j, ComplexMatrix a, ComplexMatrix b, ComplexMatrix c,
                         ComplexMatrix d, bool verified)
    : dim_e_(dim_e),
      j_(j),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      verified_(verified) {
  CheckBlockShapes(dim_e_, j_, a_, b_, c_, d_);
}

Realization::Realization(int dim_e, int j, ComplexMatrix a, ComplexMatrix b, ComplexMatrix c,
                         ComplexMatrix d, double isometry_tol)
    : Realization(dim_e, j, std::move(a), std::move(b), std::move(c), std::move(d), true) {
  const double defect = IsometryDefect();
  if (!(defect <= isometry_tol)) {
    throw PreconditionError("Realization: colligation is not an isometry (defect " +
                            std::to_string(defect) + ")");
  }
}

Realization Realization::Unchecked(int dim_e, int j, ComplexMatrix a, ComplexMatrix b,
                                   ComplexMatrix c, ComplexMatrix d) {
  return Realization(dim_e, j, std::move(a), std::move(b), std::move(c), std::move(d), false);
}

Realization Realization::FromColligation(int dim_e, int j, const ComplexMatrix& colligation,
                                         double isometry_tol) {
  const Eigen::Index size = 1 + static_cast<Eigen::Index>(dim_e) * j;
  if (colligation.rows() != size || colligation.cols() != size) {
    throw DimensionError("Realization: colligation must be " + std::to_string(size) + "x" +
                         std::to_string(size));
  }
  const Eigen::Index mj = size - 1;
  return Realization(dim_e, j, colligation.topLeftCorner(1, 1), colligation.topRightCorner(1, mj),
                     colligation.bottomLeftCorner(mj, 1), colligation.bottomRightCorner(mj, mj),
                     isometry_tol);
}

ComplexMatrix Realization::Colligation() const {
  const Eigen::Index mj = d_.rows();
  ComplexMatrix out(1 + mj, 1 + mj);
  out << a_, b_, c_, d_;
  return out;
}

double Realization::IsometryDefect() const { return ncjulia::IsometryDefect(Colligation()); }

NcFunctionHandle::NcFunctionHandle(Realization realization, DeltaMatrix delta)
    : realization_(std::move(realization)), delta_(std::move(delta)) {
  if (realization_.J() != delta_.J()) {
    throw DimensionError("NcFunctionHandle: realization has J=" + std::to_string(realization_.J()) +
                         " but delta has J=" + std::to_string(delta_.J()));
  }
}

ComplexMatrix ResolventMatrix(const Realization& r, const ComplexMatrix& delta_value, int n) {
  const ComplexMatrix lifted_d = Kron(r.D(), ComplexMatrix::Identity(n, n));
  const ComplexMatrix lifted_delta =
      Kron(ComplexMatrix::Identity(r.dim_e(), r.dim_e()), delta_value);
  const Eigen::Index size = lifted_d.rows();
  return ComplexMatrix::Identity(size, size) - lifted_d * lifted_delta;
}

ComplexMatrix LiftedC(const Realization& r, int n) {
  return Kron(r.C(), ComplexMatrix::Identity(n, n));
}

namespace {

ComplexMatrix LiftedDelta(const Realization& r, const ComplexMatrix& delta_value) {
  return Kron(ComplexMatrix::Identity(r.dim_e(), r.dim_e()), delta_value);
}

ComplexMatrix PhiFromU(const Realization& r, const ComplexMatrix& delta_value,
                       const ComplexMatrix& u, int n) {
  const ComplexMatrix lifted_b = Kron(r.B(), ComplexMatrix::Identity(n, n));
  return r.A()(0, 0) * ComplexMatrix::Identity(n, n) + lifted_b * LiftedDelta(r, delta_value) * u;
}

}  // namespace

PointEvaluation Evaluate(const NcFunctionHandle& h, const MatrixTuple& x) {
  const Realization& r = h.realization();
  PointEvaluation out;
  out.delta = EvalDelta(h.delta(), x);
  out.delta_norm = OperatorNorm(out.delta);
  if (!(out.delta_norm < 1.0)) {
    throw PreconditionError(
        "point not in G_delta (||delta(x)|| = " + std::to_string(out.delta_norm) + ")");
  }
  const int n = x.n();
  const ComplexMatrix resolvent = ResolventMatrix(r, out.delta, n);
  out.condition = ConditionNumber(resolvent);
  if (!std::isfinite(out.condition)) {
    throw SingularMatrixError("resolvent is singular", 0.0);
  }
  out.near_singular = out.condition > 1e12;
  out.u = resolvent.partialPivLu().solve(LiftedC(r, n));
  out.phi = PhiFromU(r, out.delta, out.u, n);
  return out;
}

UEvaluation EvalU(const NcFunctionHandle& h, const MatrixTuple& x) {
  PointEvaluation e = Evaluate(h, x);
  return {std::move(e.u), e.condition, e.near_singular};
}

ComplexMatrix EvalPhi(const NcFunctionHandle& h, const MatrixTuple& x) {
  return Evaluate(h, x).phi;
}

namespace {

double NeumannRatio(const NcFunctionHandle& h, const MatrixTuple& x, ComplexMatrix* step,
                    ComplexMatrix* delta_value) {
  const Realization& r = h.realization();
  const int n = x.n();
  *delta_value = EvalDelta(h.delta(), x);
  *step = Kron(r.D(), ComplexMatrix::Identity(n, n)) * LiftedDelta(r, *delta_value);
  const double q = OperatorNorm(*step);
  if (!(q < 1.0)) {
    throw PreconditionError(
        "Neumann oracle inapplicable: ||(D x I)(I x delta(x))|| = " + std::to_string(q) + " >= 1");
  }
  return q;
}

}  // namespace

NeumannEvaluation EvalPhiNeumann(const NcFunctionHandle& h, const MatrixTuple& x, int terms) {
  if (terms < 0) throw PreconditionError("EvalPhiNeumann: negative term count");
  const Realization& r = h.realization();
  const int n = x.n();
  ComplexMatrix step, delta_value;
  NeumannEvaluation out;
  out.q = NeumannRatio(h, x, &step, &delta_value);
  out.terms = terms;
  ComplexMatrix power_times_c = LiftedC(r, n);
  ComplexMatrix sum = power_times_c;
  for (int k = 1; k <= terms; ++k) {
    power_times_c = step * power_times_c;
    sum += power_times_c;
  }
  out.phi = PhiFromU(r, delta_value, sum, n);
  out.truncation_bound = std::pow(out.q, terms + 1) / (1.0 - out.q);
  return out;
}

int NeumannTermsFor(const NcFunctionHandle& h, const MatrixTuple& x, double target, int max_terms) {
  ComplexMatrix step, delta_value;
  const double q = NeumannRatio(h, x, &step, &delta_value);
  if (q == 0.0) return 0;
  // q^{k+1} / (1 - q) <= target
  const double k = std::log(target * (1.0 - q)) / std::log(q) - 1.0;
  if (!std::isfinite(k)) return max_terms;
  return std::clamp(static_cast<int>(std::ceil(k)), 0, max_terms);
}

double ModelResidual(const NcFunctionHandle& h, const MatrixTuple& x, const MatrixTuple& y) {
  if (x.n() != y.n() || x.d() != y.d())
    throw DimensionError("ModelResidual: x and y differ in shape");
  const PointEvaluation ex = Evaluate(h, x);
  const PointEvaluation ey = Evaluate(h, y);
  const int n = x.n();
  const Eigen::Index jn = ex.delta.rows();
  const ComplexMatrix gram = ComplexMatrix::Identity(jn, jn) - ey.delta.adjoint() * ex.delta;
  const ComplexMatrix lifted = LiftedDelta(h.realization(), gram);
  const ComplexMatrix residual =
      ComplexMatrix::Identity(n, n) - ey.phi.adjoint() * ex.phi - ey.u.adjoint() * lifted * ex.u;
  return OperatorNorm(residual);
}

Realization RandomRealization(int dim_e, int j, std::uint64_t seed) {
  if (dim_e < 1 || j < 1) throw DimensionError("RandomRealization: dim_E and J must be >= 1");
  Rng rng(seed);
  return Realization::FromColligation(dim_e, j, RandomUnitary(1 + dim_e * j, rng), 1e-8);
}

}  // namespace ncjulia
