#include "ncck/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ncck {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool is_decimal_literal(std::string_view text) {
  return text.find_first_of(".eE") != std::string_view::npos;
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("empty number");

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = trim(s.substr(0, slash));
    auto den = trim(s.substr(slash + 1));
    if (!all_digits(num) || !all_digits(den)) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else {
    std::string_view mant = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mant = s.substr(0, e);
      std::string_view ex = s.substr(e + 1);
      bool eneg = false;
      if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
        eneg = ex.front() == '-';
        ex.remove_prefix(1);
      }
      if (!all_digits(ex) || ex.size() > 6) throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
      exponent = std::stol(std::string(ex));
      if (eneg) exponent = -exponent;
    }
    std::string digits;
    long frac_len = 0;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
      auto ip = mant.substr(0, dot);
      auto fp = mant.substr(dot + 1);
      if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
      digits = std::string(ip) + std::string(fp);
      frac_len = static_cast<long>(fp.size());
    } else {
      if (!all_digits(mant)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
      digits = std::string(mant);
    }
    mpz_class num(digits, 10);
    long shift = exponent - frac_len;
    mpz_class ten = 10;
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift < 0 ? -shift : shift));
    value = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
    value.canonicalize();
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  Rational den = o.re * o.re + o.im * o.im;
  if (sgn(den) == 0) throw std::domain_error("division by zero");
  Rational r = (re * o.re + im * o.im) / den;
  Rational m = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(m);
  return *this;
}

std::string to_string(const GaussianRational& z) {
  if (z.is_real()) return z.re.get_str();
  if (sgn(z.re) == 0) return z.im.get_str() + "*i";
  std::string im = z.im.get_str();
  if (sgn(z.im) > 0) im = "+" + im;
  return "(" + z.re.get_str() + im + "*i)";
}

}  // namespace ncck
