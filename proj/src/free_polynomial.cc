#include "ncjulia/free_polynomial.h"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "ncjulia/errors.h"

namespace ncjulia {

bool CanonicalWordLess(const FreeWord& a, const FreeWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

struct WordOrder {
  bool operator()(const FreeWord& a, const FreeWord& b) const { return CanonicalWordLess(a, b); }
};

}  // namespace

FreePolynomial::FreePolynomial(int d) : d_(d) {
  if (d < 1) throw DimensionError("FreePolynomial: need at least one variable");
}

FreePolynomial::FreePolynomial(int d, std::vector<Term> terms) : FreePolynomial(d) {
  std::map<FreeWord, Complex, WordOrder> merged;
  for (auto& term : terms) {
    for (int letter : term.word) {
      if (letter < 0 || letter >= d) {
        throw DimensionError("FreePolynomial: variable index " + std::to_string(letter) +
                             " out of range for d=" + std::to_string(d));
      }
    }
    merged[std::move(term.word)] += term.coeff;
  }
  terms_.reserve(merged.size());
  for (auto& [word, coeff] : merged) {
    if (coeff != Complex(0.0)) terms_.push_back({coeff, word});
  }
}

FreePolynomial FreePolynomial::Constant(int d, Complex c) { return FreePolynomial(d, {{c, {}}}); }

FreePolynomial FreePolynomial::Variable(int d, int index) {
  return FreePolynomial(d, {{Complex(1.0), {index}}});
}

int FreePolynomial::Degree() const {
  return terms_.empty() ? -1 : static_cast<int>(terms_.back().word.size());
}

bool FreePolynomial::IsHomogeneous(int k) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [k](const Term& t) { return static_cast<int>(t.word.size()) == k; });
}

FreePolynomial FreePolynomial::operator+(const FreePolynomial& other) const {
  if (other.d_ != d_) throw DimensionError("FreePolynomial: sum with different d");
  std::vector<Term> all(terms_);
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return FreePolynomial(d_, std::move(all));
}

FreePolynomial FreePolynomial::operator-(const FreePolynomial& other) const {
  return *this + (-other);
}

FreePolynomial FreePolynomial::operator-() const { return *this * Complex(-1.0); }

FreePolynomial FreePolynomial::operator*(const FreePolynomial& other) const {
  if (other.d_ != d_) throw DimensionError("FreePolynomial: product with different d");
  std::vector<Term> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      FreeWord w(a.word);
      w.insert(w.end(), b.word.begin(), b.word.end());
      out.push_back({a.coeff * b.coeff, std::move(w)});
    }
  }
  return FreePolynomial(d_, std::move(out));
}

FreePolynomial FreePolynomial::operator*(Complex s) const {
  std::vector<Term> out(terms_);
  for (auto& t : out) t.coeff *= s;
  return FreePolynomial(d_, std::move(out));
}

FreePolynomial FreePolynomial::Pow(int k) const {
  if (k < 0) throw PreconditionError("FreePolynomial::Pow: negative exponent");
  FreePolynomial out = Constant(d_, 1.0);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

namespace {

void RequireMatchingVariables(const FreePolynomial& p, const MatrixTuple& x, const char* op) {
  if (p.d() != x.d()) {
    throw DimensionError(std::string(op) + ": polynomial has d=" + std::to_string(p.d()) +
                         " but the point has " + std::to_string(x.d()) + " components");
  }
}

}  // namespace

ComplexMatrix EvalPoly(const FreePolynomial& p, const MatrixTuple& x) {
  RequireMatchingVariables(p, x, "EvalPoly");
  const int n = x.n();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& term : p.terms()) {
    if (term.word.empty()) {
      out.diagonal().array() += term.coeff;
      continue;
    }
    ComplexMatrix prod = x[term.word.front()];
    for (std::size_t k = 1; k < term.word.size(); ++k) prod = prod * x[term.word[k]];
    out += term.coeff * prod;
  }
  return out;
}

ComplexMatrix DirectionalDerivativePoly(const FreePolynomial& p, const MatrixTuple& t,
                                        const MatrixTuple& h) {
  RequireMatchingVariables(p, t, "DirectionalDerivativePoly");
  RequireMatchingVariables(p, h, "DirectionalDerivativePoly");
  if (t.n() != h.n()) throw DimensionError("DirectionalDerivativePoly: T and H differ in size");
  const int n = t.n();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& term : p.terms()) {
    const std::size_t k = term.word.size();
    if (k == 0) continue;
    // prefix[m] = T^{i_0} ... T^{i_{m-1}}, suffix[m] = T^{i_m} ... T^{i_{k-1}}.
    std::vector<ComplexMatrix> prefix(k + 1), suffix(k + 1);
    prefix[0] = ComplexMatrix::Identity(n, n);
    for (std::size_t m = 0; m < k; ++m) prefix[m + 1] = prefix[m] * t[term.word[m]];
    suffix[k] = ComplexMatrix::Identity(n, n);
    for (std::size_t m = k; m-- > 0;) suffix[m] = t[term.word[m]] * suffix[m + 1];
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t m = 0; m < k; ++m) sum += prefix[m] * h[term.word[m]] * suffix[m + 1];
    out += term.coeff * sum;
  }
  return out;
}

}  // namespace ncjulia
