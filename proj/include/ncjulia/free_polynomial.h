#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ncjulia/matrix_tuple.h"
#include "ncjulia/numerics.h"

namespace ncjulia {

/// A monomial in non-commuting variables: letters are variable indices,
/// read left to right. The empty word is the identity.
using FreeWord = std::vector<int>;

struct Term {
  Complex coeff;
  FreeWord word;

  bool operator==(const Term&) const = default;
};

/// Canonical word order: total degree first, then lexicographic.
bool CanonicalWordLess(const FreeWord& a, const FreeWord& b);

/// Complex linear combination of words in d non-commuting variables, kept
/// in canonical form: words pairwise distinct, no zero coefficients, terms
/// sorted by CanonicalWordLess.
class FreePolynomial {
 public:
  /// The zero polynomial in d variables.
  explicit FreePolynomial(int d);

  /// Canonicalizes `terms`: merges repeated words, drops zero coefficients.
  /// Throws DimensionError when a letter is outside [0, d).
  FreePolynomial(int d, std::vector<Term> terms);

  static FreePolynomial Constant(int d, Complex c);
  static FreePolynomial Variable(int d, int index);

  int d() const { return d_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool IsZero() const { return terms_.empty(); }

  /// Maximum word length; -1 for the zero polynomial.
  int Degree() const;

  /// True when every term has word length exactly k (the zero polynomial
  /// qualifies).
  bool IsHomogeneous(int k) const;

  FreePolynomial operator+(const FreePolynomial& other) const;
  FreePolynomial operator-(const FreePolynomial& other) const;
  FreePolynomial operator-() const;
  /// Order-preserving product: words concatenate.
  FreePolynomial operator*(const FreePolynomial& other) const;
  FreePolynomial operator*(Complex s) const;
  FreePolynomial Pow(int k) const;

  bool operator==(const FreePolynomial&) const = default;

 private:
  int d_;
  std::vector<Term> terms_;
};

/// sum coeff * x^{i1} ... x^{ik}; the empty word evaluates to I_n.
/// Throws DimensionError when p.d() != x.d().
ComplexMatrix EvalPoly(const FreePolynomial& p, const MatrixTuple& x);

/// Exact product-rule derivative of p at T in direction H:
/// sum over words, sum over positions m of T..T H^{i_m} T..T.
ComplexMatrix DirectionalDerivativePoly(const FreePolynomial& p, const MatrixTuple& t,
                                        const MatrixTuple& h);

/// Parses the text grammar: variables x0..x{d-1}, real literals, imaginary
/// literals (`2i`, `0.5i`, `i`), binary `+ - *`, unary minus, `^k` (k >= 0)
/// on variables and parenthesized groups, and parentheses. Multiplication
/// must be explicit. Throws ParseError with the offending position.
FreePolynomial ParsePoly(std::string_view text, int d);

/// Deterministic text that ParsePoly maps back to p exactly. Terms are
/// printed by descending degree, lexicographically within a degree.
std::string FormatPoly(const FreePolynomial& p);

}  // namespace ncjulia
