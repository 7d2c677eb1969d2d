#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace ncck {

using Letter = std::uint8_t;

/// A word in the free monoid on letters X1..Xn. The empty word is the
/// identity 1. Letters are stored 1-based.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<Letter>& letters() const { return letters_; }

  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  Letter max_letter() const;

  /// Subword [pos, pos+len).
  Word sub(std::size_t pos, std::size_t len) const;
  Word rotated(std::size_t k) const;

  Word& operator*=(const Word& rhs);
  friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

  friend bool operator==(const Word&, const Word&) = default;

  /// Graded lexicographic order: shorter words first, then letter by letter.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  std::vector<Letter> letters_;
};

/// Single-letter word X_i.
Word letter(Letter i);
/// X_i^e.
Word power(Letter i, std::size_t e);

std::strong_ordering compare_gradlex(const Word& u, const Word& v);

/// Word reversal; the star involution on monomials.
Word star(const Word& w);

/// Graded-lex minimal representative of the rotation orbit of w, closed
/// under reversal when use_star is set.
Word cyclic_canonical(const Word& w, bool use_star);

/// sigma(n, d) = number of words of length <= d over n letters.
std::size_t word_count(std::size_t n, std::size_t d);

/// All words of length <= d over n letters, sorted in graded-lex order.
std::vector<Word> enumerate_words(std::size_t n, std::size_t d);

/// Words of length exactly len, in lex order.
std::vector<Word> enumerate_words_of_length(std::size_t n, std::size_t len);

/// Text form: X1X2X2 or 1 for the identity. Repeated letters are not
/// compressed; see to_power_string for the X1*X2^2 form.
std::string to_string(const Word& w);
/// Product form used for polynomial output: X1*X2^2, or 1.
std::string to_power_string(const Word& w);

/// Parses the juxtaposition text form. Also accepts X1^2 and X1*X2
/// factors. Throws std::invalid_argument on malformed input.
Word parse_word(std::string_view text);

/// Maximal constant-letter runs as (letter, length) pairs.
std::vector<std::pair<Letter, std::size_t>> runs(const Word& w);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace ncck
