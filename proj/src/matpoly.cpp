#include "ncck/matpoly.hpp"

#include <cstdint>
#include <string>

namespace ncck {

std::size_t tuple_size(const MatrixTuple& a) {
  if (a.empty()) throw DimensionError("empty matrix tuple");
  const auto k = static_cast<std::size_t>(a.front().rows());
  for (const auto& m : a)
    if (static_cast<std::size_t>(m.rows()) != k || static_cast<std::size_t>(m.cols()) != k)
      throw DimensionError("matrix tuple coordinates must be square and of equal size");
  return k;
}

CMatrix monomial(const MatrixTuple& a, const Word& w) {
  const auto k = static_cast<Eigen::Index>(tuple_size(a));
  CMatrix out = CMatrix::Identity(k, k);
  for (Letter l : w) {
    if (l < 1 || l > a.size()) throw DimensionError("word letter X" + std::to_string(l) + " has no matrix");
    out = out * a[l - 1];
  }
  return out;
}

MatrixTuple adjoint(const MatrixTuple& a) {
  MatrixTuple out;
  out.reserve(a.size());
  for (const auto& m : a) out.push_back(m.adjoint());
  return out;
}

MatrixNcPolynomial MatrixNcPolynomial::from_scalar(const NcPolynomial& p, std::size_t k) {
  MatrixNcPolynomial out(k);
  const auto kk = static_cast<Eigen::Index>(k);
  for (const auto& [w, c] : p.terms()) out.add_term(w, c.to_complex() * CMatrix::Identity(kk, kk));
  return out;
}

long MatrixNcPolynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<long>(terms_.rbegin()->first.size());
}

void MatrixNcPolynomial::add_term(const Word& w, const CMatrix& c) {
  if (static_cast<std::size_t>(c.rows()) != k_ || static_cast<std::size_t>(c.cols()) != k_)
    throw DimensionError("coefficient size mismatch");
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) it->second += c;
}

CMatrix MatrixNcPolynomial::coeff(const Word& w) const {
  auto it = terms_.find(w);
  const auto kk = static_cast<Eigen::Index>(k_);
  return it == terms_.end() ? CMatrix::Zero(kk, kk) : it->second;
}

MatrixNcPolynomial& MatrixNcPolynomial::operator+=(const MatrixNcPolynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

MatrixNcPolynomial& MatrixNcPolynomial::operator-=(const MatrixNcPolynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

MatrixNcPolynomial operator*(const MatrixNcPolynomial& a, const MatrixNcPolynomial& b) {
  if (a.k_ != b.k_) throw DimensionError("coefficient size mismatch");
  MatrixNcPolynomial out(a.k_);
  for (const auto& [u, cu] : a.terms_)
    for (const auto& [v, cv] : b.terms_) out.add_term(u * v, cu * cv);
  return out;
}

MatrixNcPolynomial operator*(const CMatrix& m, const MatrixNcPolynomial& a) {
  MatrixNcPolynomial out(a.k_);
  for (const auto& [w, c] : a.terms_) out.add_term(w, m * c);
  return out;
}

MatrixNcPolynomial star(const MatrixNcPolynomial& p) {
  MatrixNcPolynomial out(p.coefficient_size());
  for (const auto& [w, c] : p.terms()) out.add_term(star(w), c.adjoint());
  return out;
}

CMatrix evaluate_tuple(const MatrixNcPolynomial& p, const MatrixTuple& a, const CMatrix& c) {
  const std::size_t k = tuple_size(a);
  if (p.coefficient_size() != k || static_cast<std::size_t>(c.rows()) != k || static_cast<std::size_t>(c.cols()) != k)
    throw DimensionError("polynomial coefficient size, tuple size and argument size must agree");
  const auto kk = static_cast<Eigen::Index>(k);
  CMatrix out = CMatrix::Zero(kk, kk);
  for (const auto& [w, cw] : p.terms()) out += cw * c * monomial(a, w);
  return out;
}

CMatrix evaluate(const NcPolynomial& p, const MatrixTuple& a) {
  const auto kk = static_cast<Eigen::Index>(tuple_size(a));
  CMatrix out = CMatrix::Zero(kk, kk);
  for (const auto& [w, c] : p.terms()) out += c.to_complex() * monomial(a, w);
  return out;
}

EvaluationMap::EvaluationMap(const MatrixNcPolynomial& p, const MatrixTuple& a) : k_(tuple_size(a)) {
  if (p.coefficient_size() != k_) throw DimensionError("polynomial coefficient size and tuple size must agree");
  const auto k = static_cast<Eigen::Index>(k_);
  op_ = CMatrix::Zero(k * k, k * k);
  // vec(c C R) = (R^T (x) c) vec(C) for column-major vec.
  for (const auto& [w, cw] : p.terms()) {
    CMatrix r = monomial(a, w);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) op_.block(i * k, j * k, k, k) += r(j, i) * cw;
  }
}

CMatrix EvaluationMap::apply(const CMatrix& c) const {
  const auto k = static_cast<Eigen::Index>(k_);
  if (c.rows() != k || c.cols() != k) throw DimensionError("argument size mismatch");
  CVector v = Eigen::Map<const CVector>(c.data(), k * k);
  CVector r = op_ * v;
  return Eigen::Map<const CMatrix>(r.data(), k, k);
}

double EvaluationMap::norm() const {
  Eigen::JacobiSVD<CMatrix> svd(op_);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

EvaluationMap evaluate_as_map(const MatrixNcPolynomial& p, const MatrixTuple& a) { return EvaluationMap(p, a); }

CMatrix row_times_column(const MatrixNcPolynomial& p, const MatrixTuple& a) {
  const std::size_t k = tuple_size(a);
  if (p.coefficient_size() != k) throw DimensionError("polynomial coefficient size and tuple size must agree");
  const auto kk = static_cast<Eigen::Index>(k);
  const auto count = static_cast<Eigen::Index>(p.terms().size());
  CMatrix row(kk, kk * count);
  CMatrix column(kk * count, kk);
  Eigen::Index b = 0;
  for (const auto& [w, cw] : p.terms()) {
    row.block(0, b * kk, kk, kk) = cw;
    column.block(b * kk, 0, kk, kk) = monomial(a, w);
    ++b;
  }
  if (count == 0) return CMatrix::Zero(kk, kk);
  return row * column;
}

Complex hs_inner(const CMatrix& x, const CMatrix& y) { return (x.adjoint() * y).trace(); }

CMatrix eval_horner(std::span<const Complex> coefficients, const CMatrix& a) {
  const auto k = a.rows();
  CMatrix out = CMatrix::Zero(k, k);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    out = out * a;
    out.diagonal().array() += *it;
  }
  return out;
}

namespace {

Complex eval_scalar(std::span<const Complex> coefficients, Complex z) {
  Complex acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

CMatrix eval_upper_triangular(std::span<const Complex> coefficients, const CMatrix& a) {
  const auto k = a.rows();
  if (a.cols() != k) throw DimensionError("matrix must be square");
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (a(i, j) != Complex(0)) throw DimensionError("matrix is not upper triangular");
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (a(i, i) == a(j, j)) throw RepeatedEigenvalueError("repeated diagonal entry; use direct evaluation");

  std::vector<Complex> values(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) values[static_cast<std::size_t>(i)] = eval_scalar(coefficients, a(i, i));

  // p[z_s : s in path] = sum_s p(z_s) / prod_{r != s} (z_s - z_r)
  auto divided_difference = [&](const std::vector<Eigen::Index>& path) {
    Complex sum = 0;
    for (Eigen::Index s : path) {
      Complex den = 1;
      for (Eigen::Index r : path)
        if (r != s) den *= a(s, s) - a(r, r);
      sum += values[static_cast<std::size_t>(s)] / den;
    }
    return sum;
  };

  CMatrix out = CMatrix::Zero(k, k);
  std::vector<Eigen::Index> path;
  for (Eigen::Index i = 0; i < k; ++i) {
    out(i, i) = values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j) {
      // Enumerate interior subsets of (i, j) as bitmasks.
      const Eigen::Index inner = j - i - 1;
      Complex entry = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inner); ++mask) {
        path.assign(1, i);
        for (Eigen::Index b = 0; b < inner; ++b)
          if (mask & (std::uint64_t{1} << b)) path.push_back(i + 1 + b);
        path.push_back(j);
        Complex weight = 1;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) weight *= a(path[s], path[s + 1]);
        if (weight == Complex(0)) continue;
        entry += divided_difference(path) * weight;
      }
      out(i, j) = entry;
    }
  }
  return out;
}

}  // namespace ncck
