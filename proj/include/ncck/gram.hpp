#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ncck/poly.hpp"
#include "ncck/rational.hpp"
#include "ncck/traces.hpp"
#include "ncck/word.hpp"

namespace ncck {

class InvalidStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dense exact matrix, row-major.
template <class T>
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    ExactMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t p = 0; p < a.cols_; ++p) {
        const T& x = a(i, p);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(p, j);
      }
    return out;
  }
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = ExactMatrix<Rational>;

Eigen::MatrixXd to_double(const RationalMatrix& m);
/// Exact Gauss-Jordan inverse; throws InvalidStateError if singular.
RationalMatrix inverse(const RationalMatrix& m);
/// Signs of an exact symmetric LDL^T elimination: true iff m is PSD.
bool is_psd_exact(const RationalMatrix& m);

/// M_d(tau) with entry (u, v) = tau(u^* v) over words of length <= d.
struct MomentMatrix {
  std::size_t degree = 0;
  std::vector<Word> index;
  RationalMatrix entries;
};

/// Entry (v, w) = tau(v^* g w), v and w of length <= d - ceil(deg g / 2).
struct LocalizingMatrix {
  NcPolynomial constraint;
  std::size_t degree = 0;
  std::vector<Word> index;
  ExactMatrix<GaussianRational> entries;
};

MomentMatrix moment_matrix(const TracialState& state, std::size_t d);
/// Throws std::invalid_argument when g is not selfadjoint or deg g > 2d.
LocalizingMatrix localizing_matrix(const TracialState& state, const NcPolynomial& g, std::size_t d);

/// Monic orthogonal polynomials Q_w with squared norms nu_w = tau(Q_w^* Q_w).
/// Row r of `coefficients` holds Q_{retained[r]} in the monomial basis
/// `words`; P_w = Q_w / sqrt(nu_w).
struct OrthoBasis {
  std::size_t variables = 0;
  std::size_t degree = 0;
  std::vector<Word> words;
  std::vector<Word> retained;
  std::vector<Word> dropped;
  RationalMatrix coefficients;
  std::vector<Rational> norms;
  /// Per-variable single-variable bases when this basis is the closed-form
  /// free-product system.
  std::shared_ptr<const std::vector<OrthoBasis>> free_factors;

  bool faithful() const { return dropped.empty(); }
  std::size_t index_of(const Word& w) const;
  NcPolynomial monic(std::size_t r) const;
  /// D = N^{-1/2} L as doubles: rows are retained P_w, columns all words.
  Eigen::MatrixXd orthonormal_matrix() const;
  NcPolynomial monic(const Word& w) const;
};

/// Classical Gram-Schmidt over words in graded-lex order. A word whose
/// residual has zero norm is dropped. Throws InvalidStateError on a negative
/// norm.
OrthoBasis gram_schmidt(const TracialState& state, std::size_t d);

struct InverseFactorization {
  RationalMatrix l;
  std::vector<Rational> norms;
  /// L^T N^{-1} L.
  RationalMatrix factored_inverse;
  /// Independent exact inverse of M.
  RationalMatrix direct_inverse;
  bool exact_match = false;
  bool identity_check = false;
  Eigen::MatrixXd d;
  double max_abs_error = 0.0;
};

/// Verifies M^{-1} = L^T N^{-1} L exactly and the numeric D^T D against the
/// exact inverse. Throws InvalidStateError when words were dropped.
InverseFactorization inverse_factorization(const MomentMatrix& m, const OrthoBasis& basis);

struct SelfAdjointBasis {
  std::vector<Word> slots;
  std::vector<NcPolynomial> polys;
  std::vector<Rational> norms;
};

/// Gram-Schmidt on the hermitized monomials: for w <_gl w^*, slot w holds
/// (X^w + X^{w*})/2 and slot w^* holds (X^w - X^{w*})/(2i).
SelfAdjointBasis selfadjoint_basis(const TracialState& state, std::size_t d);

/// Free-product orthogonal system: for w with maximal constant-letter runs
/// pi_1..pi_l, Q_w is the product of the single-variable Q_{|pi_j|}(X_{i_j}).
OrthoBasis free_product_orthobasis(const std::vector<OrthoBasis>& singles, std::size_t d);

/// Single-variable bases for each coordinate of a free product state.
std::vector<OrthoBasis> single_variable_bases(const FreeProductState& state, std::size_t d);

}  // namespace ncck
