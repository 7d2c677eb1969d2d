#include "ncck/gram.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ncck {

Eigen::MatrixXd to_double(const RationalMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
  return out;
}

RationalMatrix inverse(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("inverse of a non-square matrix");
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a(pivot, col)) == 0) ++pivot;
    if (pivot == n) throw InvalidStateError("singular matrix");
    if (pivot != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(a(i, col)) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

bool is_psd_exact(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  for (std::size_t k = 0; k < n; ++k) {
    const Rational& p = a(k, k);
    if (sgn(p) < 0) return false;
    if (sgn(p) == 0) {
      // A zero pivot of a PSD matrix forces its whole remaining row to vanish.
      for (std::size_t j = k + 1; j < n; ++j)
        if (sgn(a(k, j)) != 0) return false;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      Rational f = a(i, k) / p;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

MomentMatrix moment_matrix(const TracialState& state, std::size_t d) {
  if (state.max_length() < 2 * d)
    throw MissingMomentError("state provides moments only up to length " + std::to_string(state.max_length()));
  MomentMatrix m;
  m.degree = d;
  m.index = enumerate_words(state.variables(), d);
  const std::size_t s = m.index.size();
  m.entries = RationalMatrix(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    Word ui = star(m.index[i]);
    for (std::size_t j = i; j < s; ++j) {
      m.entries(i, j) = state.moment(ui * m.index[j]);
      m.entries(j, i) = m.entries(i, j);
    }
  }
  return m;
}

LocalizingMatrix localizing_matrix(const TracialState& state, const NcPolynomial& g, std::size_t d) {
  if (!is_selfadjoint(g)) throw std::invalid_argument("localizing polynomial must be selfadjoint");
  const long deg = g.degree();
  if (deg > static_cast<long>(2 * d)) throw std::invalid_argument("constraint degree exceeds 2d");
  const std::size_t dj = deg <= 0 ? 0 : static_cast<std::size_t>((deg + 1) / 2);
  LocalizingMatrix m;
  m.constraint = g;
  m.degree = d;
  m.index = enumerate_words(state.variables(), d - dj);
  const std::size_t s = m.index.size();
  m.entries = ExactMatrix<GaussianRational>(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    Word vi = star(m.index[i]);
    for (std::size_t j = 0; j < s; ++j) {
      GaussianRational acc;
      for (const auto& [w, c] : g.terms()) acc += c * GaussianRational(state.moment(vi * w * m.index[j]));
      m.entries(i, j) = acc;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

std::size_t OrthoBasis::index_of(const Word& w) const {
  for (std::size_t r = 0; r < retained.size(); ++r)
    if (retained[r] == w) return r;
  throw std::out_of_range("word " + to_string(w) + " is not a retained basis word");
}

NcPolynomial OrthoBasis::monic(std::size_t r) const {
  NcPolynomial p;
  for (std::size_t j = 0; j < words.size(); ++j)
    if (sgn(coefficients(r, j)) != 0) p.add_term(words[j], GaussianRational(coefficients(r, j)));
  return p;
}

NcPolynomial OrthoBasis::monic(const Word& w) const { return monic(index_of(w)); }

Eigen::MatrixXd OrthoBasis::orthonormal_matrix() const {
  Eigen::MatrixXd d = to_double(coefficients);
  for (std::size_t r = 0; r < retained.size(); ++r) d.row(static_cast<Eigen::Index>(r)) /= std::sqrt(norms[r].get_d());
  return d;
}

namespace {

// <p, q> = sum_{u,v} p_u q_v M(u, v) for real coefficient vectors.
Rational inner(const std::vector<Rational>& p, const std::vector<Rational>& q, const RationalMatrix& m) {
  Rational acc = 0;
  for (std::size_t u = 0; u < p.size(); ++u) {
    if (sgn(p[u]) == 0) continue;
    Rational row = 0;
    for (std::size_t v = 0; v < q.size(); ++v)
      if (sgn(q[v]) != 0) row += q[v] * m(u, v);
    acc += p[u] * row;
  }
  return acc;
}

bool should_drop(const Rational& nu, const Rational& diag, bool exact, const Word& w) {
  if (exact) {
    if (sgn(nu) < 0) throw InvalidStateError("negative squared norm at word " + to_string(w) + ": not a positive state");
    return sgn(nu) == 0;
  }
  const double tol = 1e-12 * std::abs(diag.get_d());
  if (nu.get_d() <= tol) {
    if (nu.get_d() < -tol) throw InvalidStateError("negative squared norm at word " + to_string(w) + ": not a positive state");
    return true;
  }
  return false;
}

}  // namespace

OrthoBasis gram_schmidt(const TracialState& state, std::size_t d) {
  MomentMatrix mm = moment_matrix(state, d);
  const RationalMatrix& m = mm.entries;
  const std::size_t s = mm.index.size();

  OrthoBasis b;
  b.variables = state.variables();
  b.degree = d;
  b.words = mm.index;
  std::vector<std::vector<Rational>> rows;
  std::vector<std::size_t> retained_cols;

  for (std::size_t j = 0; j < s; ++j) {
    std::vector<Rational> q(s, Rational(0));
    q[j] = 1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      // <Q_v, w> = sum_u Q_v[u] M(u, w)
      Rational proj = 0;
      for (std::size_t u = 0; u <= retained_cols[r]; ++u)
        if (sgn(rows[r][u]) != 0) proj += rows[r][u] * m(u, j);
      if (sgn(proj) == 0) continue;
      proj /= b.norms[r];
      for (std::size_t u = 0; u <= retained_cols[r]; ++u)
        if (sgn(rows[r][u]) != 0) q[u] -= proj * rows[r][u];
    }
    Rational nu = inner(q, q, m);
    if (should_drop(nu, m(j, j), state.exact(), mm.index[j])) {
      b.dropped.push_back(mm.index[j]);
      continue;
    }
    rows.push_back(std::move(q));
    retained_cols.push_back(j);
    b.retained.push_back(mm.index[j]);
    b.norms.push_back(nu);
  }

  b.coefficients = RationalMatrix(rows.size(), s);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t u = 0; u < s; ++u) b.coefficients(r, u) = rows[r][u];
  return b;
}

InverseFactorization inverse_factorization(const MomentMatrix& m, const OrthoBasis& basis) {
  if (!basis.faithful()) throw InvalidStateError("inverse factorization needs a faithful state (no dropped words)");
  if (basis.words.size() != m.index.size()) throw std::invalid_argument("basis and moment matrix degrees differ");
  InverseFactorization f;
  f.l = basis.coefficients;
  f.norms = basis.norms;
  const std::size_t s = m.index.size();

  RationalMatrix ninv_l = f.l;
  for (std::size_t r = 0; r < s; ++r)
    for (std::size_t j = 0; j < s; ++j) ninv_l(r, j) /= f.norms[r];
  f.factored_inverse = f.l.transpose() * ninv_l;
  f.direct_inverse = inverse(m.entries);
  f.exact_match = f.factored_inverse == f.direct_inverse;
  f.identity_check = m.entries * f.factored_inverse == RationalMatrix::identity(s);

  f.d = basis.orthonormal_matrix();
  Eigen::MatrixXd dtd = f.d.transpose() * f.d;
  f.max_abs_error = (dtd - to_double(f.direct_inverse)).cwiseAbs().maxCoeff();
  return f;
}

// ---------------------------------------------------------------------------

namespace {

using GVec = std::vector<GaussianRational>;

GaussianRational inner_complex(const GVec& p, const GVec& q, const RationalMatrix& m) {
  GaussianRational acc;
  for (std::size_t u = 0; u < p.size(); ++u) {
    if (p[u].is_zero()) continue;
    GaussianRational row;
    for (std::size_t v = 0; v < q.size(); ++v)
      if (!q[v].is_zero()) row += q[v] * GaussianRational(m(u, v));
    acc += p[u].conj() * row;
  }
  return acc;
}

}  // namespace

SelfAdjointBasis selfadjoint_basis(const TracialState& state, std::size_t d) {
  MomentMatrix mm = moment_matrix(state, d);
  const RationalMatrix& m = mm.entries;
  const std::size_t s = mm.index.size();
  std::unordered_map<Word, std::size_t, WordHash> pos;
  for (std::size_t j = 0; j < s; ++j) pos.emplace(mm.index[j], j);

  // Hermitized monomials in slot order.
  std::vector<GVec> hermitized(s, GVec(s));
  const GaussianRational half(Rational(1, 2));
  const GaussianRational minus_half_i(Rational(0), Rational(-1, 2));  // 1/(2i)
  for (std::size_t j = 0; j < s; ++j) {
    const Word& w = mm.index[j];
    Word ws = star(w);
    std::size_t js = pos.at(ws);
    if (js == j) {
      hermitized[j][j] = 1;
    } else if (w < ws) {
      hermitized[j][j] = half;
      hermitized[j][js] = half;
    } else {
      // Slot w with w^* <_gl w holds Im X^{w*} = (X^{w*} - X^w)/(2i).
      hermitized[j][js] = minus_half_i;
      hermitized[j][j] = -minus_half_i;
    }
  }

  SelfAdjointBasis out;
  std::vector<GVec> rows;
  for (std::size_t j = 0; j < s; ++j) {
    GVec q = hermitized[j];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      GaussianRational proj = inner_complex(rows[r], hermitized[j], m);
      if (proj.is_zero()) continue;
      proj /= GaussianRational(out.norms[r]);
      for (std::size_t u = 0; u < s; ++u)
        if (!rows[r][u].is_zero()) q[u] -= proj * rows[r][u];
    }
    GaussianRational nu = inner_complex(q, q, m);
    if (should_drop(nu.re, m(j, j), state.exact(), mm.index[j])) continue;
    NcPolynomial p;
    for (std::size_t u = 0; u < s; ++u) p.add_term(mm.index[u], q[u]);
    out.slots.push_back(mm.index[j]);
    out.polys.push_back(std::move(p));
    out.norms.push_back(nu.re);
    rows.push_back(std::move(q));
  }
  return out;
}

// ---------------------------------------------------------------------------

OrthoBasis free_product_orthobasis(const std::vector<OrthoBasis>& singles, std::size_t d) {
  const std::size_t n = singles.size();
  for (const auto& b : singles)
    if (b.variables != 1 || b.degree < d) throw std::invalid_argument("free product needs single-variable bases of degree >= d");

  OrthoBasis out;
  out.variables = n;
  out.degree = d;
  out.words = enumerate_words(n, d);
  out.free_factors = std::make_shared<const std::vector<OrthoBasis>>(singles);
  const std::size_t s = out.words.size();
  std::unordered_map<Word, std::size_t, WordHash> pos;
  for (std::size_t j = 0; j < s; ++j) pos.emplace(out.words[j], j);

  // Sparse rows keyed by column for every word, built from the suffix after the first run.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows(s);
  std::vector<Rational> norms(s);
  std::vector<bool> alive(s, false);
  rows[0] = {{0, Rational(1)}};
  norms[0] = 1;
  alive[0] = true;

  for (std::size_t j = 1; j < s; ++j) {
    const Word& w = out.words[j];
    const Letter first = w[0];
    std::size_t r = 1;
    while (r < w.size() && w[r] == first) ++r;
    const std::size_t suffix = pos.at(w.sub(r, w.size() - r));
    const OrthoBasis& single = singles[first - 1];
    const Word run_word = power(1, r);
    auto found = std::find(single.retained.begin(), single.retained.end(), run_word);
    if (!alive[suffix] || found == single.retained.end()) continue;
    const std::size_t sr = static_cast<std::size_t>(found - single.retained.begin());

    std::vector<std::pair<std::size_t, Rational>> row;
    std::unordered_map<std::size_t, std::size_t> slot;
    for (std::size_t e = 0; e < single.words.size(); ++e) {
      const Rational& a = single.coefficients(sr, e);
      if (sgn(a) == 0) continue;
      const Word prefix = power(first, single.words[e].size());
      for (const auto& [col, b] : rows[suffix]) {
        std::size_t target = pos.at(prefix * out.words[col]);
        auto [it, inserted] = slot.try_emplace(target, row.size());
        if (inserted) row.emplace_back(target, a * b);
        else row[it->second].second += a * b;
      }
    }
    rows[j] = std::move(row);
    norms[j] = single.norms[sr] * norms[suffix];
    alive[j] = true;
  }

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < s; ++j) {
    if (alive[j]) {
      kept.push_back(j);
      out.retained.push_back(out.words[j]);
      out.norms.push_back(norms[j]);
    } else {
      out.dropped.push_back(out.words[j]);
    }
  }
  out.coefficients = RationalMatrix(kept.size(), s);
  for (std::size_t r = 0; r < kept.size(); ++r)
    for (const auto& [col, v] : rows[kept[r]]) out.coefficients(r, col) = v;
  return out;
}

std::vector<OrthoBasis> single_variable_bases(const FreeProductState& state, std::size_t d) {
  std::vector<OrthoBasis> out;
  for (std::size_t i = 1; i <= state.variables(); ++i) {
    FreeProductState single({state.cumulants(static_cast<Letter>(i))}, "single");
    out.push_back(gram_schmidt(single, d));
  }
  return out;
}

}  // namespace ncck
