#include "ncjulia/domain.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ncjulia/errors.h"

namespace ncjulia {

DeltaMatrix::DeltaMatrix(int d, std::vector<std::vector<FreePolynomial>> grid) : d_(d) {
  if (grid.empty() || grid.front().empty()) throw DimensionError("DeltaMatrix: empty grid");
  rows_ = static_cast<int>(grid.size());
  cols_ = static_cast<int>(grid.front().size());
  for (const auto& row : grid) {
    if (static_cast<int>(row.size()) != cols_) throw DimensionError("DeltaMatrix: ragged grid");
    for (const auto& p : row) {
      if (p.d() != d) {
        throw DimensionError("DeltaMatrix: entry has d=" + std::to_string(p.d()) + ", expected " +
                             std::to_string(d));
      }
    }
  }
  j_ = std::max(rows_, cols_);
  entries_.assign(static_cast<std::size_t>(j_ * j_), FreePolynomial(d));
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      entries_[static_cast<std::size_t>(r * j_ + c)] =
          std::move(grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
  }
}

bool DeltaMatrix::IsLinear() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const FreePolynomial& p) { return p.IsHomogeneous(1); });
}

namespace {

void RequireMatchingD(const DeltaMatrix& delta, const MatrixTuple& x, const char* op) {
  if (delta.d() != x.d()) {
    throw DimensionError(std::string(op) + ": delta has d=" + std::to_string(delta.d()) +
                         " but the point has " + std::to_string(x.d()) + " components");
  }
}

ComplexMatrix EvalBlocks(const DeltaMatrix& delta, const MatrixTuple& x, int rows, int cols) {
  RequireMatchingD(delta, x, "EvalDelta");
  const int n = x.n();
  ComplexMatrix out = ComplexMatrix::Zero(rows * n, cols * n);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto& p = delta.entry(r, c);
      if (!p.IsZero()) out.block(r * n, c * n, n, n) = EvalPoly(p, x);
    }
  }
  return out;
}

void RequireBoundary(const DeltaMatrix& delta, const MatrixTuple& t, double tol, const char* op) {
  const double defect = DistinguishedBoundaryDefect(delta, t);
  if (defect > tol) {
    throw PreconditionError(std::string(op) +
                            ": T is not on the distinguished boundary (isometry defect " +
                            std::to_string(defect) + ")");
  }
}

void RequireContractiveDirection(const MatrixTuple& h, const char* op) {
  const double norm = h.Norm();
  if (norm > 1.0 + 1e-12) {
    throw PreconditionError(std::string(op) + ": direction has norm " + std::to_string(norm) +
                            " > 1");
  }
}

}  // namespace

ComplexMatrix EvalDelta(const DeltaMatrix& delta, const MatrixTuple& x) {
  return EvalBlocks(delta, x, delta.J(), delta.J());
}

ComplexMatrix EvalDeltaRect(const DeltaMatrix& delta, const MatrixTuple& x) {
  return EvalBlocks(delta, x, delta.rows(), delta.cols());
}

ComplexMatrix DeltaDerivativeRect(const DeltaMatrix& delta, const MatrixTuple& t,
                                  const MatrixTuple& h) {
  RequireMatchingD(delta, t, "DeltaDerivativeRect");
  const int n = t.n();
  ComplexMatrix out = ComplexMatrix::Zero(delta.rows() * n, delta.cols() * n);
  for (int r = 0; r < delta.rows(); ++r) {
    for (int c = 0; c < delta.cols(); ++c) {
      const auto& p = delta.entry(r, c);
      if (!p.IsZero()) out.block(r * n, c * n, n, n) = DirectionalDerivativePoly(p, t, h);
    }
  }
  return out;
}

Membership InGDelta(const DeltaMatrix& delta, const MatrixTuple& x) {
  Membership m;
  m.norm = OperatorNorm(EvalDelta(delta, x));
  m.margin = 1.0 - m.norm;
  m.inside = m.norm < 1.0;
  return m;
}

double DistinguishedBoundaryDefect(const DeltaMatrix& delta, const MatrixTuple& t) {
  return IsometryDefect(EvalDeltaRect(delta, t));
}

bool OnDistinguishedBoundary(const DeltaMatrix& delta, const MatrixTuple& t, double tol) {
  return DistinguishedBoundaryDefect(delta, t) <= tol;
}

ComplexMatrix DeltaGramDefect(const DeltaMatrix& delta, const MatrixTuple& y,
                              const MatrixTuple& x) {
  const ComplexMatrix dy = EvalDeltaRect(delta, y);
  const ComplexMatrix dx = EvalDeltaRect(delta, x);
  return ComplexMatrix::Identity(dx.cols(), dx.cols()) - dy.adjoint() * dx;
}

double NontangentialConstant(const DeltaMatrix& delta, const MatrixTuple& z, const MatrixTuple& t) {
  const ComplexMatrix dz = EvalDeltaRect(delta, z);
  const double norm = OperatorNorm(dz);
  const double denom = 1.0 - norm * norm;
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return OperatorNorm(dz - EvalDeltaRect(delta, t)) / denom;
}

ComplexMatrix InwardMatrix(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h) {
  return EvalDeltaRect(delta, t).adjoint() * DeltaDerivativeRect(delta, t, h);
}

bool InGamma(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h, double beta) {
  RequireContractiveDirection(h, "InGamma");
  RequireBoundary(delta, t, 1e-8, "InGamma");
  return HermitianPartMaxEig(InwardMatrix(delta, t, h)) <= -beta;
}

bool InDelta(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h, double beta,
             double tol) {
  RequireContractiveDirection(h, "InDelta");
  RequireBoundary(delta, t, 1e-8, "InDelta");
  const ComplexMatrix m = InwardMatrix(delta, t, h);
  return IsSelfAdjoint(m, tol) && HermitianPartMaxEig(m) <= -beta;
}

bool InSigma(const DeltaMatrix& delta, const MatrixTuple& t, const MatrixTuple& h, double tol) {
  RequireContractiveDirection(h, "InSigma");
  RequireBoundary(delta, t, 1e-8, "InSigma");
  return IsSelfAdjoint(InwardMatrix(delta, t, h), tol);
}

namespace {

// Complex coordinates of M_n^d: index (r * n + i) * n + j.
MatrixTuple TupleFromCoordinates(const ComplexVector& coords, int d, int n) {
  std::vector<ComplexMatrix> comps;
  for (int r = 0; r < d; ++r) {
    ComplexMatrix c(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) c(i, j) = coords((r * n + i) * n + j);
    }
    comps.push_back(std::move(c));
  }
  return MatrixTuple(std::move(comps));
}

ComplexVector CoordinatesFromTuple(const MatrixTuple& h) {
  const int d = h.d();
  const int n = h.n();
  ComplexVector out(d * n * n);
  for (int r = 0; r < d; ++r) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out((r * n + i) * n + j) = h[r](i, j);
    }
  }
  return out;
}

double LambdaMax(const ComplexMatrix& hermitian, ComplexVector* top) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian);
  const Eigen::Index last = eig.eigenvalues().size() - 1;
  if (top != nullptr) *top = eig.eigenvectors().col(last);
  return eig.eigenvalues()(last);
}

}  // namespace

AssumptionReport CheckAssumptionA(const DeltaMatrix& delta, const MatrixTuple& t,
                                  const AssumptionOptions& options) {
  RequireBoundary(delta, t, options.boundary_tol, "CheckAssumptionA");
  const int d = t.d();
  const int n = t.n();
  const int dim = d * n * n;
  AssumptionReport report;
  report.full_dimension = dim;

  // Inward matrix of every complex coordinate direction. The map is
  // complex-linear, so the imaginary directions are i times these.
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(k) = 1.0;
    images.push_back(InwardMatrix(delta, t, TupleFromCoordinates(e, d, n)));
  }
  const Eigen::Index c = images.front().rows();

  // Real-linear constraint M(H) - M(H)* = 0 on 2*dim real coordinates.
  Eigen::MatrixXd constraint(2 * c * c, 2 * dim);
  for (int k = 0; k < dim; ++k) {
    for (int part = 0; part < 2; ++part) {
      const ComplexMatrix m = part == 0 ? images[static_cast<std::size_t>(k)]
                                        : Complex(0.0, 1.0) * images[static_cast<std::size_t>(k)];
      const ComplexMatrix skew = m - m.adjoint();
      for (Eigen::Index idx = 0; idx < c * c; ++idx) {
        constraint(2 * idx, 2 * k + part) = skew.data()[idx].real();
        constraint(2 * idx + 1, 2 * k + part) = skew.data()[idx].imag();
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = options.rank_tol * (s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  }
  const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(2 * dim - rank);
  const Eigen::Index p = null_basis.cols();

  auto to_complex = [&](const Eigen::VectorXd& real) {
    ComplexVector z(dim);
    for (int k = 0; k < dim; ++k) z(k) = Complex(real(2 * k), real(2 * k + 1));
    return z;
  };
  auto to_real = [&](const ComplexVector& z) {
    Eigen::VectorXd real(2 * dim);
    for (int k = 0; k < dim; ++k) {
      real(2 * k) = z(k).real();
      real(2 * k + 1) = z(k).imag();
    }
    return real;
  };

  std::vector<ComplexMatrix> sigma_vectors;
  std::vector<ComplexMatrix> hermitian_basis;
  for (Eigen::Index l = 0; l < p; ++l) {
    const ComplexVector h = to_complex(null_basis.col(l));
    sigma_vectors.push_back(h);
    ComplexMatrix m = ComplexMatrix::Zero(c, c);
    for (int k = 0; k < dim; ++k) m += h(k) * images[static_cast<std::size_t>(k)];
    hermitian_basis.push_back(0.5 * (m + m.adjoint()));
  }
  report.span_dimension = NumericalRank(sigma_vectors, options.rank_tol);
  report.a2 = report.span_dimension == dim;

  if (p > 0) {
    auto combine = [&](const Eigen::VectorXd& y) {
      ComplexMatrix m = ComplexMatrix::Zero(c, c);
      for (Eigen::Index l = 0; l < p; ++l) m += y(l) * hermitian_basis[static_cast<std::size_t>(l)];
      return m;
    };
    auto evaluate_witness =
        [&](const Eigen::VectorXd& y) -> std::optional<std::pair<MatrixTuple, double>> {
      const ComplexVector coords = to_complex(null_basis * y);
      MatrixTuple k = TupleFromCoordinates(coords, d, n);
      const double norm = k.Norm();
      if (!(norm > 0.0)) return std::nullopt;
      k = k * Complex(1.0 / norm);
      const ComplexMatrix m = InwardMatrix(delta, t, k);
      if (!IsSelfAdjoint(m, options.self_adjoint_tol)) return std::nullopt;
      return std::make_pair(k, -HermitianPartMaxEig(m));
    };
    auto consider = [&](const Eigen::VectorXd& y) {
      auto w = evaluate_witness(y);
      if (w && (!report.witness || w->second > report.beta)) {
        report.witness = w->first;
        report.beta = w->second;
      }
    };

    // K = -T, projected onto Sigma(T).
    const Eigen::VectorXd heuristic =
        null_basis.transpose() * to_real(CoordinatesFromTuple(t * Complex(-1.0)));
    if (heuristic.norm() > 0.0) consider(heuristic / heuristic.norm());

    if (!(report.witness && report.beta > options.min_beta)) {
      Rng rng(options.seed);
      std::normal_distribution<double> normal;
      for (int start = 0; start < options.random_starts; ++start) {
        Eigen::VectorXd y(p);
        for (Eigen::Index l = 0; l < p; ++l) y(l) = normal(rng);
        y /= y.norm();
        Eigen::VectorXd best_y = y;
        double best = LambdaMax(combine(y), nullptr);
        for (int it = 0; it < options.iterations; ++it) {
          ComplexVector v;
          LambdaMax(combine(y), &v);
          Eigen::VectorXd g(p);
          for (Eigen::Index l = 0; l < p; ++l) {
            g(l) = (v.adjoint() * hermitian_basis[static_cast<std::size_t>(l)] * v)(0, 0).real();
          }
          const double gnorm = g.norm();
          if (gnorm == 0.0) break;
          y -= (0.5 / std::sqrt(it + 1.0)) * g / gnorm;
          if (y.norm() > 1.0) y /= y.norm();
          const double value = LambdaMax(combine(y), nullptr);
          if (value < best) {
            best = value;
            best_y = y;
          }
        }
        consider(best_y);
        if (report.witness && report.beta > options.min_beta) break;
      }
    }
  }
  report.a1 = report.witness.has_value() && report.beta > options.min_beta;
  report.a1_inconclusive = !report.a1;
  report.a = report.a1 && report.a2;
  return report;
}

std::vector<double> GeometricSteps(double t0, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  double t = t0;
  for (int k = 0; k < count; ++k) {
    out.push_back(t);
    t *= 0.5;
  }
  return out;
}

ApproachSequence RadialSequence(const MatrixTuple& t, int count) {
  return {t, ApproachRule::kRadial, std::nullopt, GeometricSteps(0.5, count)};
}

ApproachSequence RaySequence(const MatrixTuple& t, const MatrixTuple& k, double t0, int count) {
  return {t, ApproachRule::kRay, k, GeometricSteps(t0, count)};
}

MatrixTuple SequencePoint(const ApproachSequence& seq, double step) {
  if (seq.rule == ApproachRule::kRadial) return seq.base * Complex(1.0 - step);
  if (!seq.direction) throw PreconditionError("ray sequence needs a direction");
  return seq.base + *seq.direction * Complex(step);
}

GeneratedSequence GenerateSequence(const ApproachSequence& seq, const DeltaMatrix& delta) {
  if (seq.rule == ApproachRule::kRadial && !delta.IsLinear()) {
    throw PreconditionError(
        "radial sequences need delta homogeneous of degree 1 (every term of every entry linear)");
  }
  if (seq.rule == ApproachRule::kRay) {
    if (!seq.direction) throw PreconditionError("ray sequence needs a direction");
    if (seq.direction->d() != seq.base.d() || seq.direction->n() != seq.base.n()) {
      throw DimensionError("ray direction and base point differ in shape");
    }
  }
  GeneratedSequence out;
  for (double step : seq.steps) {
    MatrixTuple z = SequencePoint(seq, step);
    if (InGDelta(delta, z).inside) {
      out.points.push_back(std::move(z));
      out.steps.push_back(step);
    } else {
      ++out.dropped;
    }
  }
  if (out.points.empty())
    throw PreconditionError("no point of the approach sequence lies in G_delta");
  return out;
}

std::optional<double> FindInwardStep(const DeltaMatrix& delta, const MatrixTuple& t,
                                     const MatrixTuple& h, double t_start, int ladder_length,
                                     double t_min) {
  for (double t0 = t_start; t0 >= t_min; t0 *= 0.5) {
    bool ok = true;
    double step = t0;
    for (int k = 0; k < ladder_length && ok; ++k, step *= 0.5) {
      ok = InGDelta(delta, t + h * Complex(step)).inside;
    }
    if (ok) return t0;
  }
  return std::nullopt;
}

std::optional<MatrixTuple> RandomInteriorPoint(const DeltaMatrix& delta, int n, Rng& rng,
                                               double min_margin, int attempts) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double top = 1.0 - min_margin;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<ComplexMatrix> comps;
    for (int r = 0; r < delta.d(); ++r) comps.push_back(RandomGaussian(n, n, rng));
    MatrixTuple x(std::move(comps));
    if (delta.IsLinear()) {
      const double norm = OperatorNorm(EvalDelta(delta, x));
      if (!(norm > 0.0)) return x;  // delta vanishes identically
      x = x * Complex(top * uniform(rng) / norm);
    } else {
      x = x * Complex(1.5 * uniform(rng) / std::max(x.Norm(), 1e-300));
    }
    const Membership m = InGDelta(delta, x);
    if (m.inside && m.margin >= min_margin) return x;
  }
  return std::nullopt;
}

}  // namespace ncjulia
