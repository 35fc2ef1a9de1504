#include "ncjulia/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ncjulia/errors.h"

namespace ncjulia {
namespace {

void RequireSquare(const ComplexMatrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(op) + ": expected a square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Eigen::VectorXd SingularValues(const ComplexMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

Eigen::VectorXd HermitianPartEigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

}  // namespace

double OperatorNorm(const ComplexMatrix& m) {
  const Eigen::VectorXd s = SingularValues(m);
  return s.size() == 0 ? 0.0 : s(0);
}

double SmallestSingularValue(const ComplexMatrix& m) {
  const Eigen::VectorXd s = SingularValues(m);
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

double ConditionNumber(const ComplexMatrix& m) {
  const Eigen::VectorXd s = SingularValues(m);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

bool AllFinite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double HermitianPartMinEig(const ComplexMatrix& m) {
  RequireSquare(m, "HermitianPartMinEig");
  if (m.size() == 0) return 0.0;
  return HermitianPartEigenvalues(m)(0);
}

double HermitianPartMaxEig(const ComplexMatrix& m) {
  RequireSquare(m, "HermitianPartMaxEig");
  if (m.size() == 0) return 0.0;
  const Eigen::VectorXd ev = HermitianPartEigenvalues(m);
  return ev(ev.size() - 1);
}

bool IsSelfAdjoint(const ComplexMatrix& m, double tol) {
  RequireSquare(m, "IsSelfAdjoint");
  return OperatorNorm(m - m.adjoint()) <= tol;
}

double IsometryDefect(const ComplexMatrix& m) {
  const ComplexMatrix gram = m.adjoint() * m;
  return OperatorNorm(gram - ComplexMatrix::Identity(m.cols(), m.cols()));
}

SolveOutcome MinNormSolve(const ComplexMatrix& m, const ComplexMatrix& b, const Tolerances& tol) {
  if (m.rows() != b.rows()) {
    throw DimensionError("MinNormSolve: system has " + std::to_string(m.rows()) +
                         " rows but right-hand side has " + std::to_string(b.rows()));
  }
  SolveOutcome out;
  out.solution = ComplexMatrix::Zero(m.cols(), b.cols());
  if (m.size() != 0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cutoff = tol.pinv_cutoff * (s.size() > 0 ? s(0) : 0.0);
    const ComplexMatrix ub = svd.matrixU().adjoint() * b;
    ComplexMatrix scaled = ComplexMatrix::Zero(m.cols(), b.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > cutoff && s(i) > 0.0) scaled.row(i) = ub.row(i) / s(i);
    }
    out.solution = svd.matrixV() * scaled;
  }
  out.residual_norm = OperatorNorm(m * out.solution - b);
  out.consistent = out.residual_norm <= tol.isometry;
  return out;
}

ComplexMatrix KernelBasis(const ComplexMatrix& m, double relative_cutoff) {
  if (m.cols() == 0) return ComplexMatrix(0, 0);
  if (m.rows() == 0) return ComplexMatrix::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = relative_cutoff * std::max(s(0), 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

ComplexMatrix RangeBasis(const ComplexMatrix& m, double relative_cutoff) {
  if (m.size() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = relative_cutoff * s(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

ComplexMatrix NearestUnitary(const ComplexMatrix& m, double relative_cutoff) {
  RequireSquare(m, "NearestUnitary");
  if (m.size() == 0) return m;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= relative_cutoff * std::max(1.0, s(0))) {
    throw SingularMatrixError(
        "NearestUnitary: matrix is rank deficient, smallest singular value " + std::to_string(smin),
        smin);
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

int NumericalRank(std::span<const ComplexMatrix> vectors, double tol) {
  if (vectors.empty()) return 0;
  const Eigen::Index len = vectors.front().size();
  ComplexMatrix stacked(len, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != len) {
      throw DimensionError("NumericalRank: vectors have different lengths");
    }
    stacked.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const ComplexVector>(vectors[k].data(), len);
  }
  const Eigen::VectorXd s = SingularValues(stacked);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++rank;
  }
  return rank;
}

LimitEstimate ExtrapolateLimit(std::span<const LimitSample> samples) {
  if (samples.size() < 2) {
    throw PreconditionError("ExtrapolateLimit: need at least two samples");
  }
  LimitEstimate out;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double t = samples[k].t;
    const double next = samples[k + 1].t;
    if (!(t > 0.0) || std::abs(next / t - 0.5) > 1e-9) {
      throw PreconditionError("ExtrapolateLimit: sample steps must halve (t, t/2, t/4, ...)");
    }
    if (samples[k].value.rows() != samples[k + 1].value.rows() ||
        samples[k].value.cols() != samples[k + 1].value.cols()) {
      throw DimensionError("ExtrapolateLimit: sample values have different shapes");
    }
    out.increments.push_back(OperatorNorm(samples[k + 1].value - samples[k].value));
  }
  const auto& coarse = samples[samples.size() - 2].value;
  const auto& fine = samples.back().value;
  out.value = 2.0 * fine - coarse;
  return out;
}

ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix CheckedInverse(const ComplexMatrix& m, double max_condition) {
  RequireSquare(m, "CheckedInverse");
  const Eigen::VectorXd s = SingularValues(m);
  if (s.size() == 0) return m;
  const double smin = s(s.size() - 1);
  if (smin == 0.0 || s(0) / smin > max_condition) {
    throw SingularMatrixError("matrix is singular to working precision (condition number " +
                                  std::to_string(smin == 0.0 ? INFINITY : s(0) / smin) + ")",
                              smin);
  }
  return m.partialPivLu().inverse();
}

ComplexMatrix RandomGaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

ComplexMatrix RandomUnitary(int n, Rng& rng) {
  const ComplexMatrix g = RandomGaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace ncjulia
