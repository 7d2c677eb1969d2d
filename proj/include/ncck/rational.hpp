#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace ncck {

/// Exact rational backed by GMP.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal such as "-0.125" or "1e-3" into an
/// exact rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
/// True if the text was written as a decimal (contains '.' or an exponent).
bool is_decimal_literal(std::string_view text);

std::string to_string(const Rational& q);

/// Exact complex rational a + b i.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(long v) : re(v), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational m = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(m);
    return *this;
  }
  /// Throws std::domain_error on division by zero.
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::string to_string(const GaussianRational& z);

}  // namespace ncck
