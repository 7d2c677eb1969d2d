#include "ncck/word.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace ncck {

Letter Word::max_letter() const {
  Letter m = 0;
  for (Letter l : letters_) m = std::max(m, l);
  return m;
}

Word Word::sub(std::size_t pos, std::size_t len) const {
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

Word Word::rotated(std::size_t k) const {
  if (letters_.empty()) return *this;
  std::vector<Letter> out(letters_.size());
  std::rotate_copy(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(k % letters_.size()),
                   letters_.end(), out.begin());
  return Word(std::move(out));
}

Word& Word::operator*=(const Word& rhs) {
  letters_.insert(letters_.end(), rhs.letters_.begin(), rhs.letters_.end());
  return *this;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return std::strong_ordering::equal;
}

Word letter(Letter i) { return Word{i}; }

Word power(Letter i, std::size_t e) { return Word(std::vector<Letter>(e, i)); }

std::strong_ordering compare_gradlex(const Word& u, const Word& v) { return u <=> v; }

Word star(const Word& w) {
  std::vector<Letter> r(w.begin(), w.end());
  std::reverse(r.begin(), r.end());
  return Word(std::move(r));
}

Word cyclic_canonical(const Word& w, bool use_star) {
  if (w.size() <= 1) return w;
  Word best = w;
  auto scan = [&best](const Word& base) {
    for (std::size_t k = 1; k < base.size(); ++k) {
      Word r = base.rotated(k);
      if (r < best) best = std::move(r);
    }
  };
  scan(w);
  if (use_star) {
    Word s = star(w);
    if (s < best) best = s;
    scan(s);
  }
  return best;
}

std::size_t word_count(std::size_t n, std::size_t d) {
  std::size_t total = 0;
  std::size_t layer = 1;
  for (std::size_t i = 0; i <= d; ++i) {
    total += layer;
    layer *= n;
  }
  return total;
}

std::vector<Word> enumerate_words_of_length(std::size_t n, std::size_t len) {
  std::vector<Word> out;
  if (n == 0) {
    if (len == 0) out.emplace_back();
    return out;
  }
  std::vector<Letter> cur(len, 1);
  while (true) {
    out.emplace_back(cur);
    // Odometer increment, last letter fastest.
    std::size_t pos = len;
    while (pos > 0) {
      --pos;
      if (cur[pos] < n) {
        ++cur[pos];
        break;
      }
      cur[pos] = 1;
      if (pos == 0) return out;
    }
    if (len == 0) return out;
  }
}

std::vector<Word> enumerate_words(std::size_t n, std::size_t d) {
  std::vector<Word> out;
  out.reserve(word_count(n, d));
  for (std::size_t len = 0; len <= d; ++len) {
    auto layer = enumerate_words_of_length(n, len);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (Letter l : w) {
    s += 'X';
    s += std::to_string(l);
  }
  return s;
}

std::string to_power_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (auto [l, e] : runs(w)) {
    if (!s.empty()) s += '*';
    s += 'X';
    s += std::to_string(l);
    if (e > 1) {
      s += '^';
      s += std::to_string(e);
    }
  }
  return s;
}

Word parse_word(std::string_view text) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto read_int = [&]() -> std::size_t {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      throw std::invalid_argument("expected digit at position " + std::to_string(i) + " in word '" +
                                  std::string(text) + "'");
    std::size_t v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + static_cast<std::size_t>(text[i] - '0');
      if (v > 1000000) throw std::invalid_argument("integer too large in word");
      ++i;
    }
    return v;
  };
  skip_ws();
  if (i < text.size() && text[i] == '1') {
    ++i;
    skip_ws();
    if (i != text.size()) throw std::invalid_argument("trailing characters after identity word");
    return Word{};
  }
  bool any = false;
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    if (any && text[i] == '*') {
      ++i;
      skip_ws();
    }
    if (i >= text.size() || (text[i] != 'X' && text[i] != 'x'))
      throw std::invalid_argument("expected 'X' at position " + std::to_string(i) + " in word '" +
                                  std::string(text) + "'");
    ++i;
    std::size_t idx = read_int();
    if (idx < 1 || idx > 255) throw std::invalid_argument("letter index out of range in word");
    std::size_t e = 1;
    skip_ws();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip_ws();
      e = read_int();
    }
    letters.insert(letters.end(), e, static_cast<Letter>(idx));
    any = true;
  }
  if (!any) throw std::invalid_argument("empty word text");
  return Word(std::move(letters));
}

std::vector<std::pair<Letter, std::size_t>> runs(const Word& w) {
  std::vector<std::pair<Letter, std::size_t>> out;
  for (Letter l : w) {
    if (!out.empty() && out.back().first == l)
      ++out.back().second;
    else
      out.emplace_back(l, 1);
  }
  return out;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  // FNV-1a
  std::size_t h = 1469598103934665603ull;
  for (Letter l : w) {
    h ^= l;
    h *= 1099511628211ull;
  }
  h ^= w.size();
  return h;
}

}  // namespace ncck
