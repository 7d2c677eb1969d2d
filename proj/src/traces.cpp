#include "ncck/traces.hpp"

#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

namespace ncck {

// ---------------------------------------------------------------------------
// Cumulants

const Rational& CumulantTable::at(std::size_t m) const {
  if (m >= 1 && m <= prefix_.size()) return prefix_[m - 1];
  if (m >= 1 && tail_) return *tail_;
  throw MissingMomentError("cumulant of order " + std::to_string(m) + " not available");
}

namespace {

// Coefficients of z^0..z^max_t in (sum_i m_i z^i)^s, m_0 = 1.
std::vector<Rational> series_power(const std::vector<Rational>& m, std::size_t s, std::size_t max_t) {
  std::vector<Rational> acc(max_t + 1, Rational(0));
  acc[0] = 1;
  for (std::size_t r = 0; r < s; ++r) {
    std::vector<Rational> next(max_t + 1, Rational(0));
    for (std::size_t a = 0; a <= max_t; ++a) {
      if (sgn(acc[a]) == 0) continue;
      for (std::size_t b = 0; a + b <= max_t && b < m.size(); ++b) next[a + b] += acc[a] * m[b];
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

std::vector<Rational> moments_from_cumulants(const CumulantTable& cumulants, std::size_t order) {
  // m_p = sum_s k_s [z^{p-s}] M(z)^s, splitting off the block of the first element.
  std::vector<Rational> m{Rational(1)};
  for (std::size_t p = 1; p <= order; ++p) {
    Rational mp = 0;
    for (std::size_t s = 1; s <= p; ++s) {
      const Rational& k = cumulants.at(s);
      if (sgn(k) == 0) continue;
      mp += k * series_power(m, s, p - s)[p - s];
    }
    m.push_back(mp);
  }
  return {m.begin() + 1, m.end()};
}

CumulantTable cumulants_from_moments(const std::vector<Rational>& moments) {
  std::vector<Rational> m{Rational(1)};
  m.insert(m.end(), moments.begin(), moments.end());
  std::vector<Rational> kappa;
  for (std::size_t p = 1; p < m.size(); ++p) {
    Rational rest = 0;
    for (std::size_t s = 1; s < p; ++s) {
      if (sgn(kappa[s - 1]) == 0) continue;
      rest += kappa[s - 1] * series_power(m, s, p - s)[p - s];
    }
    kappa.push_back(m[p] - rest);
  }
  return CumulantTable(std::move(kappa));
}

// ---------------------------------------------------------------------------
// TracialState

Rational TracialState::moment(const Word& w) const {
  if (w.empty()) return Rational(1);
  if (w.max_letter() > n_) throw MissingMomentError("word " + to_string(w) + " uses a letter beyond X" + std::to_string(n_));
  if (w.size() > max_length()) throw MissingMomentError("moment of " + to_string(w) + " exceeds available length");
  if (!use_cache_) return raw_moment(w);
  Word key = cyclic_canonical(w, true);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  Rational value = raw_moment(key);
  std::unique_lock lock(mutex_);
  // Concurrent writers compute the same value; keep whichever landed first.
  cache_.try_emplace(std::move(key), value);
  return value;
}

GaussianRational TracialState::trace(const NcPolynomial& p) const {
  GaussianRational acc;
  for (const auto& [w, c] : p.terms()) acc += c * GaussianRational(moment(w));
  return acc;
}

std::size_t TracialState::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

// ---------------------------------------------------------------------------
// Free products

namespace {

// Largest cumulant order <= limit that may be nonzero.
std::size_t max_live_order(const CumulantTable& t, std::size_t limit) {
  std::size_t best = 0;
  for (std::size_t s = 1; s <= limit; ++s) {
    if (!t.has(s)) break;
    if (sgn(t.at(s)) != 0) best = s;
    if (s > t.prefix_size()) {
      // Constant tail: every larger order behaves the same.
      return sgn(t.at(s)) != 0 ? limit : best;
    }
  }
  return best;
}

template <class MomentFn>
Rational monochromatic_nc_sum(const Word& w, const std::vector<CumulantTable>& tables, MomentFn&& moment_of) {
  const Letter first = w[0];
  const CumulantTable& table = tables.at(first - 1);
  std::vector<std::size_t> candidates;
  for (std::size_t j = 1; j < w.size(); ++j)
    if (w[j] == first) candidates.push_back(j);
  const std::size_t max_order = max_live_order(table, candidates.size() + 1);

  Rational total = 0;
  // Depth-first over the block containing position 0; gaps between chosen
  // positions are closed as soon as the next position is picked.
  auto dfs = [&](auto&& self, std::size_t next_candidate, std::size_t last, std::size_t size, const Rational& product) -> void {
    if (table.has(size) && sgn(table.at(size)) != 0) {
      Rational tail = moment_of(w.sub(last + 1, w.size() - last - 1));
      if (sgn(tail) != 0) total += table.at(size) * product * tail;
    }
    if (size >= max_order) return;
    for (std::size_t c = next_candidate; c < candidates.size(); ++c) {
      std::size_t pos = candidates[c];
      Rational gap = moment_of(w.sub(last + 1, pos - last - 1));
      if (sgn(gap) == 0) continue;
      self(self, c + 1, pos, size + 1, product * gap);
    }
  };
  dfs(dfs, 0, 0, 1, Rational(1));
  return total;
}

}  // namespace

FreeProductState::FreeProductState(std::vector<CumulantTable> tables, std::string name, bool use_cache)
    : TracialState(tables.size(), use_cache), tables_(std::move(tables)), name_(std::move(name)),
      sequences_(tables_.size()) {}

std::vector<Rational> FreeProductState::single_moments(Letter i, std::size_t order) const {
  std::vector<Rational> out;
  for (std::size_t p = 1; p <= order; ++p) out.push_back(single_moment(i, p));
  return out;
}

Rational FreeProductState::single_moment(Letter i, std::size_t len) const {
  if (len == 0) return Rational(1);
  {
    std::shared_lock lock(seq_mutex_);
    const auto& seq = sequences_.at(i - 1);
    if (len <= seq.size()) return seq[len - 1];
  }
  std::unique_lock lock(seq_mutex_);
  auto& seq = sequences_.at(i - 1);
  if (len > seq.size()) seq = moments_from_cumulants(tables_.at(i - 1), std::max(len, 2 * seq.size()));
  return seq[len - 1];
}

Rational FreeProductState::raw_moment(const Word& w) const {
  if (w.empty()) return Rational(1);
  if (w.max_letter() > variables()) throw MissingMomentError("word " + to_string(w) + " has no law for some letter");
  auto rs = runs(w);
  if (rs.size() == 1) return single_moment(rs[0].first, w.size());
  return monochromatic_nc_sum(w, tables_, [this](const Word& sub) { return moment(sub); });
}

Rational free_product_moment(const Word& w, const std::vector<CumulantTable>& tables) {
  if (w.empty()) return Rational(1);
  return monochromatic_nc_sum(w, tables, [&tables](const Word& sub) { return free_product_moment(sub, tables); });
}

std::shared_ptr<FreeProductState> semicircle_state(const Rational& variance, std::size_t n, bool use_cache) {
  if (sgn(variance) <= 0) throw std::invalid_argument("semicircle variance must be positive");
  if (n < 1) throw std::invalid_argument("need at least one variable");
  std::vector<CumulantTable> tables(n, CumulantTable::semicircle(variance));
  return std::make_shared<FreeProductState>(std::move(tables), "semicircle(variance=" + variance.get_str() + ")", use_cache);
}

std::shared_ptr<FreeProductState> free_poisson_state(const Rational& c, std::size_t n, bool use_cache) {
  if (sgn(c) <= 0) throw std::invalid_argument("free Poisson rate must be positive");
  if (n < 1) throw std::invalid_argument("need at least one variable");
  std::vector<CumulantTable> tables(n, CumulantTable::free_poisson(c));
  return std::make_shared<FreeProductState>(std::move(tables), "poisson(c=" + c.get_str() + ")", use_cache);
}

// ---------------------------------------------------------------------------
// Moment tables

MomentTableState::MomentTableState(const std::map<Word, Rational>& entries, std::size_t n, std::size_t d_max, bool exact)
    : TracialState(n), d_max_(d_max), exact_(exact) {
  for (const auto& [w, v] : entries) {
    if (w.max_letter() > n) throw std::invalid_argument("moment table word " + to_string(w) + " exceeds variable count");
    Word key = cyclic_canonical(w, true);
    auto [it, inserted] = table_.try_emplace(key, v);
    if (!inserted && it->second != v)
      throw std::invalid_argument("inconsistent moments for cyclically equivalent words " + to_string(w) + " and " +
                                  to_string(key));
  }
  auto one = table_.find(Word{});
  if (one == table_.end()) table_.emplace(Word{}, Rational(1));
  else if (one->second != 1) throw std::invalid_argument("moment of the identity word must be 1");
}

Rational MomentTableState::raw_moment(const Word& w) const {
  auto it = table_.find(cyclic_canonical(w, true));
  if (it == table_.end()) throw MissingMomentError("moment table has no entry for " + to_string(w));
  return it->second;
}

std::shared_ptr<MomentTableState> moment_table_state(const std::map<Word, Rational>& entries, std::size_t n,
                                                     std::size_t d_max, bool exact) {
  return std::make_shared<MomentTableState>(entries, n, d_max, exact);
}

std::shared_ptr<MomentTableState> read_moment_table(std::istream& in, std::size_t n) {
  std::map<Word, Rational> entries;
  bool exact = true;
  std::size_t longest = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("moment table line " + std::to_string(lineno) + ": expected word,value");
    std::string word_text = line.substr(0, comma);
    std::string value_text = line.substr(comma + 1);
    auto ws = word_text.find_first_not_of(" \t");
    if (ws != std::string::npos && word_text.compare(ws, 4, "word") == 0) continue;  // header
    Word w;
    Rational v;
    try {
      w = parse_word(word_text);
      v = parse_rational(value_text);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("moment table line " + std::to_string(lineno) + ": " + e.what());
    }
    if (is_decimal_literal(value_text)) exact = false;
    longest = std::max(longest, w.size());
    Word key = cyclic_canonical(w, true);
    if (auto it = entries.find(key); it != entries.end() && it->second != v)
      throw std::invalid_argument("moment table line " + std::to_string(lineno) + ": inconsistent value for " + to_string(w));
    entries[key] = v;
  }
  return moment_table_state(entries, n, longest / 2, exact);
}

std::shared_ptr<MomentTableState> read_moment_table_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open moment file '" + path + "'");
  return read_moment_table(in, n);
}

void write_moment_table(std::ostream& out, const TracialState& state, std::size_t d) {
  std::set<Word> classes;
  for (const Word& w : enumerate_words(state.variables(), 2 * d)) classes.insert(cyclic_canonical(w, true));
  out << "word,value\n";
  for (const Word& w : classes) out << to_string(w) << ',' << state.moment(w).get_str() << '\n';
}

}  // namespace ncck
