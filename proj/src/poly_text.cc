#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "ncjulia/errors.h"
#include "ncjulia/free_polynomial.h"

namespace ncjulia {
namespace {

// Recursive descent over
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := ('+' | '-') factor | power
//   power  := atom ('^' integer)?     -- only on variables and groups
//   atom   := number | number 'i' | 'i' | 'x' digits | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, int d) : text_(text), d_(d) {}

  FreePolynomial Run() {
    SkipSpace();
    if (AtEnd()) throw ParseError("empty expression", pos_);
    FreePolynomial out = Expr();
    SkipSpace();
    if (!AtEnd()) throw ParseError("unexpected '" + std::string(1, Peek()) + "'", pos_);
    return out;
  }

 private:
  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }

  void SkipSpace() {
    while (!AtEnd() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool Accept(char c) {
    SkipSpace();
    if (Peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  FreePolynomial Expr() {
    FreePolynomial acc = Term();
    for (;;) {
      if (Accept('+')) {
        acc = acc + Term();
      } else if (Accept('-')) {
        acc = acc - Term();
      } else {
        return acc;
      }
    }
  }

  FreePolynomial Term() {
    FreePolynomial acc = Factor();
    while (Accept('*')) acc = acc * Factor();
    return acc;
  }

  FreePolynomial Factor() {
    if (Accept('-')) return -Factor();
    if (Accept('+')) return Factor();
    return Power();
  }

  FreePolynomial Power() {
    SkipSpace();
    const std::size_t start = pos_;
    bool exponentiable = false;
    FreePolynomial base = Atom(exponentiable);
    if (!Accept('^')) return base;
    if (!exponentiable) {
      throw ParseError("exponent applies only to variables and parenthesized groups", start);
    }
    SkipSpace();
    const std::size_t exp_pos = pos_;
    if (Peek() == '-') throw ParseError("negative exponent", exp_pos);
    if (!std::isdigit(static_cast<unsigned char>(Peek()))) {
      throw ParseError("expected a non-negative integer exponent", exp_pos);
    }
    int k = 0;
    while (std::isdigit(static_cast<unsigned char>(Peek()))) {
      k = k * 10 + (Peek() - '0');
      if (k > 64) throw ParseError("exponent too large", exp_pos);
      ++pos_;
    }
    return base.Pow(k);
  }

  FreePolynomial Atom(bool& exponentiable) {
    SkipSpace();
    if (AtEnd()) throw ParseError("unexpected end of input", pos_);
    const char c = Peek();
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      FreePolynomial inner = Expr();
      if (!Accept(')'))
        throw ParseError("missing ')' for '(' opened at " + std::to_string(open), pos_);
      exponentiable = true;
      return inner;
    }
    if (c == 'x') {
      const std::size_t start = pos_;
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(Peek()))) {
        throw ParseError("expected a variable index after 'x'", pos_);
      }
      long index = 0;
      while (std::isdigit(static_cast<unsigned char>(Peek()))) {
        index = index * 10 + (Peek() - '0');
        if (index > 1'000'000) break;
        ++pos_;
      }
      if (std::isalpha(static_cast<unsigned char>(Peek()))) {
        throw ParseError("unexpected '" + std::string(1, Peek()) + "'", pos_);
      }
      if (index >= d_) {
        throw ParseError("variable index out of range: x" + std::to_string(index) +
                             " with d=" + std::to_string(d_),
                         start);
      }
      exponentiable = true;
      return FreePolynomial::Variable(d_, static_cast<int>(index));
    }
    if (c == 'i' && !IsIdentChar(pos_ + 1)) {
      ++pos_;
      return FreePolynomial::Constant(d_, Complex(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      throw ParseError("unknown identifier starting with '" + std::string(1, c) + "'", pos_);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  bool IsIdentChar(std::size_t at) const {
    return at < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[at])) || text_[at] == '_');
  }

  FreePolynomial Number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
      if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        end = exp;
        digits();
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + end;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      throw ParseError("malformed number", start);
    }
    pos_ = end;
    if (Peek() == 'i' && !IsIdentChar(pos_ + 1)) {
      ++pos_;
      return FreePolynomial::Constant(d_, Complex(0.0, value));
    }
    if (IsIdentChar(pos_)) {
      throw ParseError("expected an operator; juxtaposition is not multiplication", pos_);
    }
    return FreePolynomial::Constant(d_, Complex(value, 0.0));
  }

  std::string_view text_;
  int d_;
  std::size_t pos_ = 0;
};

std::string ShortestDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string FormatWord(const FreeWord& word) {
  std::string out;
  std::size_t k = 0;
  while (k < word.size()) {
    std::size_t run = 1;
    while (k + run < word.size() && word[k + run] == word[k]) ++run;
    if (!out.empty()) out += '*';
    out += 'x' + std::to_string(word[k]);
    if (run > 1) out += '^' + std::to_string(run);
    k += run;
  }
  return out;
}

// Appends one term. Real and purely imaginary coefficients carry their sign
// in the separator; general complex ones are parenthesized.
void AppendTerm(std::string& out, const Term& term, bool first) {
  const double re = term.coeff.real();
  const double im = term.coeff.imag();
  const std::string word = FormatWord(term.word);
  bool negative = false;
  std::string magnitude;
  if (im == 0.0) {
    negative = std::signbit(re);
    const double a = std::abs(re);
    if (a != 1.0 || word.empty()) magnitude = ShortestDouble(a);
  } else if (re == 0.0) {
    negative = std::signbit(im);
    magnitude = ShortestDouble(std::abs(im)) + "i";
  } else {
    magnitude = "(" + ShortestDouble(re) + (std::signbit(im) ? "-" : "+") +
                ShortestDouble(std::abs(im)) + "i)";
  }
  if (first) {
    if (negative) out += '-';
  } else {
    out += negative ? " - " : " + ";
  }
  out += magnitude;
  if (!magnitude.empty() && !word.empty()) out += '*';
  out += word;
}

}  // namespace

FreePolynomial ParsePoly(std::string_view text, int d) {
  if (d < 1) throw DimensionError("ParsePoly: need at least one variable");
  return Parser(text, d).Run();
}

std::string FormatPoly(const FreePolynomial& p) {
  if (p.IsZero()) return "0";
  const auto& terms = p.terms();
  std::string out;
  bool first = true;
  // Terms are stored ascending by degree; print degree blocks from the top.
  std::size_t block_end = terms.size();
  while (block_end > 0) {
    std::size_t block_start = block_end;
    const std::size_t degree = terms[block_end - 1].word.size();
    while (block_start > 0 && terms[block_start - 1].word.size() == degree) --block_start;
    for (std::size_t k = block_start; k < block_end; ++k) {
      AppendTerm(out, terms[k], first);
      first = false;
    }
    block_end = block_start;
  }
  return out;
}

}  // namespace ncjulia
