#pragma once

#include <initializer_list>
#include <vector>

#include "ncjulia/numerics.h"

namespace ncjulia {

/// A point x = (x^1, ..., x^d) of M_n^d: d square matrices of one size n.
class MatrixTuple {
 public:
  /// Throws DimensionError unless every component is n x n for one n >= 1
  /// and there is at least one component.
  explicit MatrixTuple(std::vector<ComplexMatrix> components);

  /// Level-1 tuple from scalars.
  static MatrixTuple Scalars(std::initializer_list<Complex> values);
  static MatrixTuple Scalars(const std::vector<Complex>& values);

  static MatrixTuple Zero(int d, int n);

  /// (c_1 I_n, ..., c_d I_n).
  static MatrixTuple ScalarMultiplesOfIdentity(const std::vector<Complex>& values, int n);

  int d() const { return static_cast<int>(components_.size()); }
  int n() const { return static_cast<int>(components_.front().rows()); }

  const ComplexMatrix& operator[](int r) const { return components_[static_cast<std::size_t>(r)]; }
  const std::vector<ComplexMatrix>& components() const { return components_; }

  /// max_r ||x^r||, the tuple norm of the noncommutative polydisk.
  double Norm() const;

  MatrixTuple operator+(const MatrixTuple& other) const;
  MatrixTuple operator-(const MatrixTuple& other) const;
  MatrixTuple operator*(Complex s) const;

 private:
  std::vector<ComplexMatrix> components_;
};

inline MatrixTuple operator*(Complex s, const MatrixTuple& x) { return x * s; }

/// Componentwise block-diagonal sum x (+) y of size x.n() + y.n().
MatrixTuple DirectSum(const MatrixTuple& x, const MatrixTuple& y);

/// Joint similarity (s^{-1} x^1 s, ..., s^{-1} x^d s). Throws
/// SingularMatrixError when cond(s) > 1e12.
MatrixTuple Similarity(const MatrixTuple& x, const ComplexMatrix& s);

/// Block-diagonal a (+) b.
ComplexMatrix BlockDiagonal(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace ncjulia
