#include "ncck/kernel.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

namespace ncck {

KernelRep::KernelRep(std::shared_ptr<const TracialState> state, OrthoBasis basis)
    : state_(std::move(state)), basis_(std::move(basis)) {}

const RationalMatrix& KernelRep::inverse_moments() const {
  std::call_once(minv_once_, [this] {
    const std::size_t s = basis_.words.size();
    minv_ = RationalMatrix(s, s);
    for (std::size_t r = 0; r < basis_.retained.size(); ++r) {
      std::vector<std::pair<std::size_t, Rational>> row;
      for (std::size_t u = 0; u < s; ++u)
        if (sgn(basis_.coefficients(r, u)) != 0) row.emplace_back(u, basis_.coefficients(r, u));
      for (const auto& [u, a] : row) {
        Rational scaled = a / basis_.norms[r];
        for (const auto& [v, b] : row) minv_(u, v) += scaled * b;
      }
    }
  });
  return minv_;
}

const Eigen::MatrixXd& KernelRep::inverse_moments_numeric() const {
  std::call_once(minv_numeric_once_, [this] { minv_numeric_ = to_double(inverse_moments()); });
  return minv_numeric_;
}

const Eigen::MatrixXd& KernelRep::orthonormal() const {
  std::call_once(d_once_, [this] { d_ = basis_.orthonormal_matrix(); });
  return d_;
}

const NcPolynomial& KernelRep::diagonal() const {
  std::call_once(diag_once_, [this] {
    std::map<Word, Rational> acc;
    const std::size_t s = basis_.words.size();
    for (std::size_t r = 0; r < basis_.retained.size(); ++r) {
      std::vector<std::pair<std::size_t, Rational>> row;
      for (std::size_t u = 0; u < s; ++u)
        if (sgn(basis_.coefficients(r, u)) != 0) row.emplace_back(u, basis_.coefficients(r, u));
      for (const auto& [u, a] : row) {
        Rational scaled = a / basis_.norms[r];
        for (const auto& [v, b] : row) acc[basis_.words[u] * star(basis_.words[v])] += scaled * b;
      }
    }
    for (const auto& [w, c] : acc)
      if (sgn(c) != 0) diagonal_.add_term(w, GaussianRational(c));
  });
  return diagonal_;
}

TensorPolynomial KernelRep::tensor() const {
  const RationalMatrix& m = inverse_moments();
  TensorPolynomial t;
  for (std::size_t u = 0; u < m.rows(); ++u)
    for (std::size_t v = 0; v < m.cols(); ++v)
      if (sgn(m(u, v)) != 0) t.add_term(basis_.words[u], star(basis_.words[v]), GaussianRational(m(u, v)));
  return t;
}

std::shared_ptr<const KernelRep> cd_kernel(std::shared_ptr<const TracialState> state, std::size_t d,
                                           const KernelOptions& options) {
  if (state->max_length() < 2 * d)
    throw MissingMomentError("state provides moments only up to length " + std::to_string(state->max_length()));
  OrthoBasis basis;
  const auto* fp = dynamic_cast<const FreeProductState*>(state.get());
  if (fp && options.free_product_closed_form)
    basis = free_product_orthobasis(single_variable_bases(*fp, d), d);
  else
    basis = gram_schmidt(*state, d);
  return std::make_shared<const KernelRep>(std::move(state), std::move(basis));
}

// ---------------------------------------------------------------------------

namespace {

// A^w for every word of the basis, in basis order.
std::vector<CMatrix> all_monomials(const std::vector<Word>& words, const MatrixTuple& a) {
  const auto k = static_cast<Eigen::Index>(tuple_size(a));
  std::unordered_map<Word, std::size_t, WordHash> pos;
  std::vector<CMatrix> out;
  out.reserve(words.size());
  for (std::size_t j = 0; j < words.size(); ++j) {
    const Word& w = words[j];
    pos.emplace(w, j);
    if (w.empty()) {
      out.push_back(CMatrix::Identity(k, k));
      continue;
    }
    const Letter last = w[w.size() - 1];
    if (last > a.size()) throw DimensionError("tuple has fewer matrices than kernel variables");
    out.push_back(out[pos.at(w.sub(0, w.size() - 1))] * a[last - 1]);
  }
  return out;
}

std::vector<std::size_t> star_positions(const std::vector<Word>& words) {
  std::unordered_map<Word, std::size_t, WordHash> pos;
  for (std::size_t j = 0; j < words.size(); ++j) pos.emplace(words[j], j);
  std::vector<std::size_t> out(words.size());
  for (std::size_t j = 0; j < words.size(); ++j) out[j] = pos.at(star(words[j]));
  return out;
}

void check_sizes(const KernelRep& k, const MatrixTuple& a, const MatrixTuple& b, const CMatrix& c) {
  const std::size_t ka = tuple_size(a);
  if (tuple_size(b) != ka || static_cast<std::size_t>(c.rows()) != ka || static_cast<std::size_t>(c.cols()) != ka)
    throw DimensionError("kernel arguments must share one matrix size");
  if (a.size() < k.variables() || b.size() < k.variables())
    throw DimensionError("tuple has fewer matrices than kernel variables");
}

}  // namespace

CMatrix evaluate_kernel(const KernelRep& k, const MatrixTuple& a, const MatrixTuple& b, const CMatrix& c) {
  check_sizes(k, a, b, c);
  const auto& words = k.words();
  const Eigen::MatrixXd& minv = k.inverse_moments_numeric();
  auto ma = all_monomials(words, a);
  auto mb = all_monomials(words, b);
  auto sp = star_positions(words);
  const auto kk = c.rows();
  CMatrix out = CMatrix::Zero(kk, kk);
  for (std::size_t u = 0; u < words.size(); ++u) {
    CMatrix right = CMatrix::Zero(kk, kk);
    bool any = false;
    for (std::size_t v = 0; v < words.size(); ++v) {
      const double x = minv(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (x == 0.0) continue;
      right += x * mb[sp[v]];
      any = true;
    }
    if (any) out += ma[u] * c * right;
  }
  return out;
}

CMatrix evaluate_kernel_orthonormal(const KernelRep& k, const MatrixTuple& a, const MatrixTuple& b, const CMatrix& c) {
  check_sizes(k, a, b, c);
  const auto& words = k.words();
  const Eigen::MatrixXd& d = k.orthonormal();
  auto ma = all_monomials(words, a);
  auto mb = all_monomials(words, b);
  auto sp = star_positions(words);
  const auto kk = c.rows();
  CMatrix out = CMatrix::Zero(kk, kk);
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    CMatrix pa = CMatrix::Zero(kk, kk);
    CMatrix pb = CMatrix::Zero(kk, kk);
    for (std::size_t u = 0; u < words.size(); ++u) {
      const double x = d(r, static_cast<Eigen::Index>(u));
      if (x == 0.0) continue;
      pa += x * ma[u];
      pb += x * mb[sp[u]];
    }
    out += pa * c * pb;
  }
  return out;
}

namespace {

CMatrix kernel_at(const KernelRep& k, const MatrixTuple& a) {
  const auto kk = static_cast<Eigen::Index>(tuple_size(a));
  return evaluate_kernel(k, a, adjoint(a), CMatrix::Identity(kk, kk));
}

}  // namespace

CMatrix christoffel_function(const KernelRep& k, const MatrixTuple& a) {
  CMatrix value = kernel_at(k, a);
  Eigen::JacobiSVD<CMatrix> svd(value);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || smax / smin > 1e12) throw NonInvertibleKernelError("kernel value is not invertible");
  const auto kk = value.rows();
  return value.partialPivLu().solve(CMatrix::Identity(kk, kk));
}

MatrixNcPolynomial variational_minimizer(const KernelRep& k, const MatrixTuple& a) {
  const std::size_t kk = tuple_size(a);
  CMatrix lambda = christoffel_function(k, a);
  const auto& words = k.words();
  const Eigen::MatrixXd& d = k.orthonormal();
  auto ma = all_monomials(words, a);
  const auto ki = static_cast<Eigen::Index>(kk);

  std::vector<CMatrix> p(static_cast<std::size_t>(d.rows()), CMatrix::Zero(ki, ki));
  for (Eigen::Index r = 0; r < d.rows(); ++r)
    for (std::size_t u = 0; u < words.size(); ++u)
      if (const double x = d(r, static_cast<Eigen::Index>(u)); x != 0.0) p[static_cast<std::size_t>(r)] += x * ma[u];

  // Coefficient of X^{u*} is Lambda sum_w D(w, u) P_w(A).
  MatrixNcPolynomial out(kk);
  for (std::size_t u = 0; u < words.size(); ++u) {
    CMatrix acc = CMatrix::Zero(ki, ki);
    bool any = false;
    for (Eigen::Index r = 0; r < d.rows(); ++r)
      if (const double x = d(r, static_cast<Eigen::Index>(u)); x != 0.0) {
        acc += x * p[static_cast<std::size_t>(r)];
        any = true;
      }
    if (any) out.add_term(star(words[u]), lambda * acc);
  }
  return out;
}

CMatrix trace_gram(const MatrixNcPolynomial& q, const TracialState& state) {
  const auto kk = static_cast<Eigen::Index>(q.coefficient_size());
  CMatrix out = CMatrix::Zero(kk, kk);
  for (const auto& [u, cu] : q.terms())
    for (const auto& [v, cv] : q.terms()) {
      const double t = state.moment(u * star(v)).get_d();
      if (t != 0.0) out += t * (cu * cv.adjoint());
    }
  return out;
}

double siciak_trace(const KernelRep& k, const MatrixTuple& a) {
  if (k.degree() < 1) throw std::invalid_argument("Siciak approximants need degree >= 1");
  CMatrix value = kernel_at(k, a);
  const double tr = value.trace().real() / static_cast<double>(value.rows());
  return std::pow(tr, 1.0 / static_cast<double>(k.degree()));
}

double siciak_norm(const KernelRep& k, const MatrixTuple& a) {
  if (k.degree() < 1) throw std::invalid_argument("Siciak approximants need degree >= 1");
  CMatrix value = kernel_at(k, a);
  Eigen::JacobiSVD<CMatrix> svd(value);
  return std::pow(svd.singularValues()(0), 1.0 / static_cast<double>(k.degree()));
}

bool in_band(const LevelSetSpec& spec, double value) {
  return value >= spec.target - spec.epsilon && value <= spec.target + spec.epsilon;
}

bool level_set_contains(const KernelRep& k, const LevelSetSpec& spec, const MatrixTuple& a) {
  if (tuple_size(a) != spec.k) throw DimensionError("tuple size differs from the level-set matrix size");
  return in_band(spec, siciak_trace(k, a));
}

// ---------------------------------------------------------------------------

NcPolynomial partial_trace_right(const TensorPolynomial& t, const TracialState& state) {
  NcPolynomial out;
  for (const auto& [key, c] : t.terms()) {
    Rational tv = state.moment(key.second);
    if (sgn(tv) != 0) out.add_term(key.first, c * GaussianRational(tv));
  }
  return out;
}

KernelIdentityReport kernel_identities(const KernelRep& k) {
  KernelIdentityReport report;
  const TracialState& tau = k.state();
  report.expected = k.words().size();
  if (!k.basis().faithful())
    report.failures.push_back("state is not faithful at degree " + std::to_string(k.degree()));

  TensorPolynomial kappa = k.tensor();
  auto moment = [&tau](const Word& w) { return GaussianRational(tau.moment(w)); };
  GaussianRational norm = (star(kappa) * kappa).contract(moment, moment);
  report.normalization = norm.re;
  report.normalization_ok = norm.is_real() && norm.re == Rational(static_cast<long>(report.expected));
  if (!report.normalization_ok) report.failures.push_back("normalization is " + to_string(norm));

  report.reproducing_ok = true;
  for (const Word& w : k.words()) {
    NcPolynomial back = partial_trace_right(kappa * TensorPolynomial::tensor(NcPolynomial(Word{}), NcPolynomial(w)), tau);
    if (back != NcPolynomial(w)) {
      report.reproducing_ok = false;
      report.failures.push_back("reproducing property fails at " + to_string(w) + ": got " + to_string(back));
    }
  }

  report.symmetric = kappa == flip(kappa);
  if (!report.symmetric) report.failures.push_back("kernel is not symmetric under swapping factors");
  return report;
}

}  // namespace ncck
