#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "ncck/rational.hpp"
#include "ncck/word.hpp"

namespace ncck {

/// Noncommutative polynomial with exact Gaussian-rational coefficients.
/// Terms are kept in graded-lex order of their words; zero coefficients are
/// never stored.
class NcPolynomial {
 public:
  using Terms = std::map<Word, GaussianRational>;

  NcPolynomial() = default;
  NcPolynomial(const GaussianRational& c);  // NOLINT(google-explicit-constructor)
  NcPolynomial(const Word& w, GaussianRational c = GaussianRational(1));

  static NcPolynomial variable(Letter i) { return NcPolynomial(letter(i)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// -1 for the zero polynomial.
  long degree() const;
  Letter max_letter() const;
  GaussianRational coeff(const Word& w) const;
  bool has_real_coefficients() const;

  void add_term(const Word& w, const GaussianRational& c);

  NcPolynomial& operator+=(const NcPolynomial& o);
  NcPolynomial& operator-=(const NcPolynomial& o);
  NcPolynomial& operator*=(const GaussianRational& c);

  friend NcPolynomial operator+(NcPolynomial a, const NcPolynomial& b) { return a += b; }
  friend NcPolynomial operator-(NcPolynomial a, const NcPolynomial& b) { return a -= b; }
  friend NcPolynomial operator-(NcPolynomial a) { return a *= GaussianRational(-1); }
  friend NcPolynomial operator*(NcPolynomial a, const GaussianRational& c) { return a *= c; }
  friend NcPolynomial operator*(const GaussianRational& c, NcPolynomial a) { return a *= c; }
  friend NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b);
  friend bool operator==(const NcPolynomial&, const NcPolynomial&) = default;

  NcPolynomial pow(std::size_t e) const;

 private:
  Terms terms_;
};

NcPolynomial multiply(const NcPolynomial& p, const NcPolynomial& q);

/// Conjugates coefficients and reverses words.
NcPolynomial star(const NcPolynomial& p);
bool is_selfadjoint(const NcPolynomial& p);

/// Text form: "3 - 3*X1^2 + 8*X1^4", "0" for the zero polynomial.
std::string to_string(const NcPolynomial& p);

/// Element of C<X> (x) C<X> in bilinear normal form: a map from word pairs to
/// coefficients. Product is (a (x) b)(c (x) d) = ac (x) bd.
class TensorPolynomial {
 public:
  using Key = std::pair<Word, Word>;
  using Terms = std::map<Key, GaussianRational>;

  TensorPolynomial() = default;
  static TensorPolynomial tensor(const NcPolynomial& left, const NcPolynomial& right);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& left, const Word& right, const GaussianRational& c);

  TensorPolynomial& operator+=(const TensorPolynomial& o);
  TensorPolynomial& operator-=(const TensorPolynomial& o);
  TensorPolynomial& operator*=(const GaussianRational& c);
  friend TensorPolynomial operator+(TensorPolynomial a, const TensorPolynomial& b) { return a += b; }
  friend TensorPolynomial operator-(TensorPolynomial a, const TensorPolynomial& b) { return a -= b; }
  friend TensorPolynomial operator*(const TensorPolynomial& a, const TensorPolynomial& b);
  friend bool operator==(const TensorPolynomial&, const TensorPolynomial&) = default;

  /// Applies f to the left factor and g to the right factor of each term and
  /// returns sum c * f(u) * g(v) when both are scalar-valued.
  template <class LeftFn, class RightFn>
  GaussianRational contract(LeftFn&& f, RightFn&& g) const {
    GaussianRational acc;
    for (const auto& [key, c] : terms_) acc += c * f(key.first) * g(key.second);
    return acc;
  }

 private:
  Terms terms_;
};

/// (a (x) b)* = a* (x) b*.
TensorPolynomial star(const TensorPolynomial& t);
/// Swaps the tensor factors.
TensorPolynomial flip(const TensorPolynomial& t);
std::string to_string(const TensorPolynomial& t);

/// Free difference quotient with respect to X_i: on a monomial l_1..l_p it
/// returns the sum over positions j with l_j = X_i of
/// (l_1..l_{j-1}) (x) (l_{j+1}..l_p).
TensorPolynomial free_difference_quotient(const NcPolynomial& p, Letter i);

/// Multiplication map m_c(p (x) q) = p c q for a polynomial c.
NcPolynomial contract_with(const TensorPolynomial& t, const NcPolynomial& c);

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the expression grammar
///   expr   := term (('+'|'-') term)*
///   term   := [coeff '*'] factor ('*' factor)*
///   factor := 'X' int ['^' int] | '(' expr ')' ['^' int] | coeff
/// with rational (p/q) or decimal coefficients. Noncommutative order is
/// preserved. Throws ParseError on malformed text or letter index > n.
NcPolynomial parse_poly(std::string_view text, std::size_t n);

}  // namespace ncck
