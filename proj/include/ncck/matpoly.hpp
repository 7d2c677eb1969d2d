#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "ncck/poly.hpp"
#include "ncck/word.hpp"

namespace ncck {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
/// One k x k matrix per variable.
using MatrixTuple = std::vector<CMatrix>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluates the monomial A^w = A_{w1} A_{w2} ... A_{wl}; the identity for w = 1.
CMatrix monomial(const MatrixTuple& a, const Word& w);
/// Coordinatewise conjugate transpose.
MatrixTuple adjoint(const MatrixTuple& a);
/// Matrix size shared by every coordinate; throws DimensionError otherwise.
std::size_t tuple_size(const MatrixTuple& a);

/// Polynomial with k x k complex matrix coefficients, P(X) = sum_w c_w (x) X^w.
class MatrixNcPolynomial {
 public:
  using Terms = std::map<Word, CMatrix>;

  explicit MatrixNcPolynomial(std::size_t k) : k_(k) {}
  /// I_k (x) p.
  static MatrixNcPolynomial from_scalar(const NcPolynomial& p, std::size_t k);

  std::size_t coefficient_size() const { return k_; }
  const Terms& terms() const { return terms_; }
  long degree() const;

  void add_term(const Word& w, const CMatrix& c);
  CMatrix coeff(const Word& w) const;

  MatrixNcPolynomial& operator+=(const MatrixNcPolynomial& o);
  MatrixNcPolynomial& operator-=(const MatrixNcPolynomial& o);
  friend MatrixNcPolynomial operator+(MatrixNcPolynomial a, const MatrixNcPolynomial& b) { return a += b; }
  friend MatrixNcPolynomial operator-(MatrixNcPolynomial a, const MatrixNcPolynomial& b) { return a -= b; }
  /// (c (x) u)(e (x) v) = ce (x) uv.
  friend MatrixNcPolynomial operator*(const MatrixNcPolynomial& a, const MatrixNcPolynomial& b);
  /// Left multiplication of every coefficient by m.
  friend MatrixNcPolynomial operator*(const CMatrix& m, const MatrixNcPolynomial& a);

 private:
  std::size_t k_;
  Terms terms_;
};

/// c_w -> c_w^*, w -> w^*.
MatrixNcPolynomial star(const MatrixNcPolynomial& p);

/// P(A)(C) = sum_w c_w C A^w.
CMatrix evaluate_tuple(const MatrixNcPolynomial& p, const MatrixTuple& a, const CMatrix& c);
/// Scalar polynomial evaluated as sum_w c_w A^w.
CMatrix evaluate(const NcPolynomial& p, const MatrixTuple& a);

/// C -> P(A)(C) as a linear operator on k x k matrices, stored as its k^2 x k^2
/// matrix acting on column-major vec(C).
class EvaluationMap {
 public:
  EvaluationMap(const MatrixNcPolynomial& p, const MatrixTuple& a);

  CMatrix apply(const CMatrix& c) const;
  const CMatrix& matrix() const { return op_; }
  /// Operator norm with respect to the Hilbert-Schmidt norm on matrices.
  double norm() const;
  std::size_t size() const { return k_; }

 private:
  std::size_t k_;
  CMatrix op_;
};

EvaluationMap evaluate_as_map(const MatrixNcPolynomial& p, const MatrixTuple& a);

/// P(A)(I_k) computed as the block row [c_w] times the block column [A^w].
CMatrix row_times_column(const MatrixNcPolynomial& p, const MatrixTuple& a);

/// <X, Y>_HS = tr(X^* Y).
Complex hs_inner(const CMatrix& x, const CMatrix& y);

class RepeatedEigenvalueError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// p(A) for an upper triangular A with pairwise distinct diagonal entries,
/// using the divided-difference path sum: entry (i, j) collects, over all
/// increasing index paths i = s_0 < s_1 < ... < s_l = j, the divided
/// difference p[z_{s_0}, ..., z_{s_l}] times t_{s_0 s_1} ... t_{s_{l-1} s_l}.
/// Coefficients are in increasing degree. Throws RepeatedEigenvalueError if
/// two diagonal entries coincide and DimensionError if A is not upper
/// triangular.
CMatrix eval_upper_triangular(std::span<const Complex> coefficients, const CMatrix& a);

/// Horner evaluation of a single-variable polynomial at a square matrix.
CMatrix eval_horner(std::span<const Complex> coefficients, const CMatrix& a);

}  // namespace ncck
