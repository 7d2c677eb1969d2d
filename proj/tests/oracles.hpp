// Independent reference computations used by the tests. None of these call
// into the library code paths they check.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Letters = std::vector<int>;

inline Q binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Q(r);
}

inline Q catalan(unsigned m) { return binomial(2 * m, m) / Q(m + 1); }

/// Semicircle moments of the given variance.
inline Q semicircle_moment(unsigned p, const Q& v = 1) {
  if (p % 2) return 0;
  Q r = catalan(p / 2);
  for (unsigned i = 0; i < p / 2; ++i) r *= v;
  return r;
}

/// Free Poisson moments via Narayana numbers: m_p = sum_k N(p,k) c^k.
inline Q free_poisson_moment(unsigned p, const Q& c) {
  if (p == 0) return 1;
  Q total = 0;
  Q ck = 1;
  for (unsigned k = 1; k <= p; ++k) {
    ck *= c;
    total += binomial(p, k) * binomial(p, k - 1) / Q(p) * ck;
  }
  return total;
}

/// All set partitions of {0..m-1} as restricted growth strings.
inline void set_partitions(std::size_t m, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> a(m, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int maxb) {
    if (i == m) {
      visit(a);
      return;
    }
    for (int b = 0; b <= maxb + 1; ++b) {
      a[i] = b;
      rec(i + 1, std::max(maxb, b));
    }
  };
  if (m == 0) visit(a);
  else {
    a[0] = 0;
    rec(1, 0);
  }
}

inline bool crossing(const std::vector<int>& block_of) {
  const std::size_t m = block_of.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c)
        for (std::size_t d = c + 1; d < m; ++d)
          if (block_of[a] == block_of[c] && block_of[b] == block_of[d] && block_of[a] != block_of[b]) return true;
  return false;
}

/// Factor of an alternating product: a polynomial (coefficients by power) in
/// one variable.
struct Factor {
  int letter;
  std::vector<Q> poly;
};

inline std::vector<Q> poly_mul(const std::vector<Q>& a, const std::vector<Q>& b) {
  std::vector<Q> r(a.size() + b.size() - 1, Q(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

/// tau of a product of single-variable polynomials in free variables, by
/// centering: every alternating product of centered factors has trace zero.
/// `single(letter, p)` returns the moment tau(X_letter^p).
inline Q free_trace(std::vector<Factor> fs, const std::function<Q(int, unsigned)>& single) {
  // Merge neighbours in the same variable.
  std::vector<Factor> merged;
  for (auto& f : fs) {
    if (!merged.empty() && merged.back().letter == f.letter) merged.back().poly = poly_mul(merged.back().poly, f.poly);
    else merged.push_back(std::move(f));
  }
  auto tau1 = [&](const Factor& f) {
    Q t = 0;
    for (std::size_t e = 0; e < f.poly.size(); ++e)
      if (f.poly[e] != 0) t += f.poly[e] * single(f.letter, static_cast<unsigned>(e));
    return t;
  };
  if (merged.empty()) return 1;
  if (merged.size() == 1) return tau1(merged[0]);

  const std::size_t l = merged.size();
  std::vector<Q> t(l);
  std::vector<Factor> centered = merged;
  for (std::size_t j = 0; j < l; ++j) {
    t[j] = tau1(merged[j]);
    centered[j].poly[0] -= t[j];
  }
  // p_j = p_j^o + t_j; the subset S keeps the centered factors.
  Q total = 0;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << l); ++mask) {
    Q scalar = 1;
    std::vector<Factor> sub;
    for (std::size_t j = 0; j < l; ++j) {
      if (mask & (std::size_t{1} << j)) sub.push_back(centered[j]);
      else scalar *= t[j];
    }
    if (scalar == 0) continue;
    if (sub.size() == 1) continue;  // a single centered factor has trace 0
    total += scalar * free_trace(sub, single);
  }
  return total;
}

/// Moment of a word (1-based letters) in free variables with the given
/// single-variable moments.
inline Q free_word_moment(const Letters& w, const std::function<Q(int, unsigned)>& single) {
  std::vector<Factor> fs;
  for (int l : w) fs.push_back({l, {Q(0), Q(1)}});
  return free_trace(fs, single);
}

/// Number of orbits of words of the given length under rotation and
/// reversal, by explicit orbit closure.
inline std::size_t cyclic_star_classes(int n, std::size_t len) {
  std::vector<Letters> all{{}};
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<Letters> next;
    for (const auto& w : all)
      for (int a = 1; a <= n; ++a) {
        Letters x = w;
        x.push_back(a);
        next.push_back(x);
      }
    all = std::move(next);
  }
  std::set<Letters> seen;
  std::size_t classes = 0;
  for (const auto& w : all) {
    if (seen.count(w)) continue;
    ++classes;
    std::vector<Letters> stack{w};
    while (!stack.empty()) {
      Letters x = stack.back();
      stack.pop_back();
      if (!seen.insert(x).second) continue;
      Letters r = x;
      if (!r.empty()) std::rotate(r.begin(), r.begin() + 1, r.end());
      stack.push_back(r);
      Letters v(x.rbegin(), x.rend());
      stack.push_back(v);
    }
  }
  return classes;
}

}  // namespace oracle
