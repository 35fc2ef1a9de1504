#include "ncjulia/matrix_tuple.h"

#include <algorithm>
#include <string>
#include <utility>

#include "ncjulia/errors.h"

namespace ncjulia {

MatrixTuple::MatrixTuple(std::vector<ComplexMatrix> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DimensionError("MatrixTuple: need at least one component");
  const Eigen::Index n = components_.front().rows();
  if (n < 1) throw DimensionError("MatrixTuple: components must be non-empty");
  for (const auto& c : components_) {
    if (c.rows() != n || c.cols() != n) {
      throw DimensionError("MatrixTuple: components must all be " + std::to_string(n) + "x" +
                           std::to_string(n) + ", got " + std::to_string(c.rows()) + "x" +
                           std::to_string(c.cols()));
    }
  }
}

MatrixTuple MatrixTuple::Scalars(std::initializer_list<Complex> values) {
  return Scalars(std::vector<Complex>(values));
}

MatrixTuple MatrixTuple::Scalars(const std::vector<Complex>& values) {
  return ScalarMultiplesOfIdentity(values, 1);
}

MatrixTuple MatrixTuple::Zero(int d, int n) {
  return MatrixTuple(
      std::vector<ComplexMatrix>(static_cast<std::size_t>(d), ComplexMatrix::Zero(n, n)));
}

MatrixTuple MatrixTuple::ScalarMultiplesOfIdentity(const std::vector<Complex>& values, int n) {
  std::vector<ComplexMatrix> comps;
  comps.reserve(values.size());
  for (Complex v : values) comps.push_back(v * ComplexMatrix::Identity(n, n));
  return MatrixTuple(std::move(comps));
}

double MatrixTuple::Norm() const {
  double out = 0.0;
  for (const auto& c : components_) out = std::max(out, OperatorNorm(c));
  return out;
}

MatrixTuple MatrixTuple::operator+(const MatrixTuple& other) const {
  if (other.d() != d() || other.n() != n()) {
    throw DimensionError("MatrixTuple: sum of tuples with different shapes");
  }
  std::vector<ComplexMatrix> comps(components_);
  for (int r = 0; r < d(); ++r) comps[static_cast<std::size_t>(r)] += other[r];
  return MatrixTuple(std::move(comps));
}

MatrixTuple MatrixTuple::operator-(const MatrixTuple& other) const {
  return *this + other * Complex(-1.0);
}

MatrixTuple MatrixTuple::operator*(Complex s) const {
  std::vector<ComplexMatrix> comps(components_);
  for (auto& c : comps) c *= s;
  return MatrixTuple(std::move(comps));
}

ComplexMatrix BlockDiagonal(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

MatrixTuple DirectSum(const MatrixTuple& x, const MatrixTuple& y) {
  if (x.d() != y.d()) {
    throw DimensionError("DirectSum: tuples have " + std::to_string(x.d()) + " and " +
                         std::to_string(y.d()) + " components");
  }
  std::vector<ComplexMatrix> comps;
  comps.reserve(static_cast<std::size_t>(x.d()));
  for (int r = 0; r < x.d(); ++r) comps.push_back(BlockDiagonal(x[r], y[r]));
  return MatrixTuple(std::move(comps));
}

MatrixTuple Similarity(const MatrixTuple& x, const ComplexMatrix& s) {
  if (s.rows() != x.n() || s.cols() != x.n()) {
    throw DimensionError("Similarity: s must be " + std::to_string(x.n()) + "x" +
                         std::to_string(x.n()));
  }
  const ComplexMatrix s_inv = CheckedInverse(s, 1e12);
  std::vector<ComplexMatrix> comps;
  comps.reserve(static_cast<std::size_t>(x.d()));
  for (const auto& c : x.components()) comps.push_back(s_inv * c * s);
  return MatrixTuple(std::move(comps));
}

}  // namespace ncjulia
