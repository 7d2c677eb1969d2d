#include "ncck/poly.hpp"

#include <cctype>

namespace ncck {

NcPolynomial::NcPolynomial(const GaussianRational& c) { add_term(Word{}, c); }

NcPolynomial::NcPolynomial(const Word& w, GaussianRational c) { add_term(w, c); }

long NcPolynomial::degree() const {
  if (terms_.empty()) return -1;
  // Graded order: the last key has maximal length.
  return static_cast<long>(terms_.rbegin()->first.size());
}

Letter NcPolynomial::max_letter() const {
  Letter m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, w.max_letter());
  return m;
}

GaussianRational NcPolynomial::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? GaussianRational() : it->second;
}

bool NcPolynomial::has_real_coefficients() const {
  for (const auto& [w, c] : terms_)
    if (!c.is_real()) return false;
  return true;
}

void NcPolynomial::add_term(const Word& w, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

NcPolynomial& NcPolynomial::operator+=(const NcPolynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

NcPolynomial& NcPolynomial::operator-=(const NcPolynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

NcPolynomial& NcPolynomial::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b) {
  NcPolynomial out;
  for (const auto& [u, cu] : a.terms_)
    for (const auto& [v, cv] : b.terms_) out.add_term(u * v, cu * cv);
  return out;
}

NcPolynomial NcPolynomial::pow(std::size_t e) const {
  NcPolynomial out(GaussianRational(1));
  for (std::size_t i = 0; i < e; ++i) out = out * *this;
  return out;
}

NcPolynomial multiply(const NcPolynomial& p, const NcPolynomial& q) { return p * q; }

NcPolynomial star(const NcPolynomial& p) {
  NcPolynomial out;
  for (const auto& [w, c] : p.terms()) out.add_term(star(w), c.conj());
  return out;
}

bool is_selfadjoint(const NcPolynomial& p) { return star(p) == p; }

namespace {

void append_term(std::string& out, const GaussianRational& c, const std::string& word_text, bool is_constant) {
  bool negative = c.is_real() && sgn(c.re) < 0;
  GaussianRational mag = negative ? -c : c;
  if (out.empty()) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  bool unit = mag.is_real() && mag.re == 1;
  if (is_constant) {
    out += to_string(mag);
  } else if (unit) {
    out += word_text;
  } else {
    out += to_string(mag) + "*" + word_text;
  }
}

}  // namespace

std::string to_string(const NcPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : p.terms()) append_term(out, c, to_power_string(w), w.empty());
  return out;
}

TensorPolynomial TensorPolynomial::tensor(const NcPolynomial& left, const NcPolynomial& right) {
  TensorPolynomial t;
  for (const auto& [u, cu] : left.terms())
    for (const auto& [v, cv] : right.terms()) t.add_term(u, v, cu * cv);
  return t;
}

void TensorPolynomial::add_term(const Word& left, const Word& right, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(Key{left, right}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TensorPolynomial& TensorPolynomial::operator+=(const TensorPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

TensorPolynomial& TensorPolynomial::operator-=(const TensorPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
  return *this;
}

TensorPolynomial& TensorPolynomial::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

TensorPolynomial operator*(const TensorPolynomial& a, const TensorPolynomial& b) {
  TensorPolynomial out;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) out.add_term(ka.first * kb.first, ka.second * kb.second, ca * cb);
  return out;
}

TensorPolynomial star(const TensorPolynomial& t) {
  TensorPolynomial out;
  for (const auto& [k, c] : t.terms()) out.add_term(star(k.first), star(k.second), c.conj());
  return out;
}

TensorPolynomial flip(const TensorPolynomial& t) {
  TensorPolynomial out;
  for (const auto& [k, c] : t.terms()) out.add_term(k.second, k.first, c);
  return out;
}

std::string to_string(const TensorPolynomial& t) {
  if (t.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : t.terms())
    append_term(out, c, to_power_string(k.first) + " (x) " + to_power_string(k.second), false);
  return out;
}

TensorPolynomial free_difference_quotient(const NcPolynomial& p, Letter i) {
  TensorPolynomial out;
  for (const auto& [w, c] : p.terms()) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] != i) continue;
      out.add_term(w.sub(0, j), w.sub(j + 1, w.size() - j - 1), c);
    }
  }
  return out;
}

NcPolynomial contract_with(const TensorPolynomial& t, const NcPolynomial& c) {
  NcPolynomial out;
  for (const auto& [k, coeff] : t.terms())
    for (const auto& [w, cw] : c.terms()) out.add_term(k.first * w * k.second, coeff * cw);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

  NcPolynomial parse() {
    NcPolynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool at_number() {
    skip_ws();
    return pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
  }

  NcPolynomial expr() {
    skip_ws();
    bool negate = false;
    if (peek('-') || peek('+')) {
      negate = text_[pos_] == '-';
      ++pos_;
    }
    NcPolynomial acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  NcPolynomial term() {
    NcPolynomial acc = factor();
    while (peek('*')) {
      ++pos_;
      acc = acc * factor();
    }
    return acc;
  }

  std::size_t integer() {
    skip_ws();
    std::size_t start = pos_;
    std::size_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(text_[pos_] - '0');
      if (v > 100000) throw ParseError("integer too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected integer", start);
    return v;
  }

  std::size_t exponent() {
    if (peek('^')) {
      ++pos_;
      return integer();
    }
    return 1;
  }

  Rational number() {
    skip_ws();
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
      std::size_t exp_start = pos_;
      digits();
      if (pos_ == exp_start) pos_ = save;
    }
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      std::size_t den_start = pos_;
      digits();
      if (pos_ == den_start) throw ParseError("expected denominator", den_start);
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), start);
    }
  }

  NcPolynomial factor() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (c == 'X' || c == 'x') {
      std::size_t start = pos_;
      ++pos_;
      std::size_t idx = integer();
      if (idx < 1 || idx > n_) throw ParseError("letter X" + std::to_string(idx) + " exceeds variable count " + std::to_string(n_), start);
      return NcPolynomial(power(static_cast<Letter>(idx), exponent()));
    }
    if (c == '(') {
      ++pos_;
      NcPolynomial inner = expr();
      if (!peek(')')) throw ParseError("expected ')'", pos_);
      ++pos_;
      return inner.pow(exponent());
    }
    if (at_number()) {
      Rational q = number();
      NcPolynomial p{GaussianRational(q)};
      return p.pow(exponent());
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

NcPolynomial parse_poly(std::string_view text, std::size_t n) { return PolyParser(text, n).parse(); }

}  // namespace ncck
