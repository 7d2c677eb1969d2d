#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncck/gram.hpp"
#include "ncck/matpoly.hpp"
#include "ncck/poly.hpp"
#include "ncck/traces.hpp"

namespace ncck {

class NonInvertibleKernelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Degree-d Christoffel-Darboux kernel
///   kappa(X, Y) = sum_w Q_w(X) (x) Q_w^*(Y) / nu_w
///               = sum_{u,v} Minv(u, v) X^u (x) Y^{v*},
/// where Minv = L^T N^{-1} L is the inverse moment matrix when the state is
/// faithful. Derived forms are computed on first use.
class KernelRep {
 public:
  KernelRep(std::shared_ptr<const TracialState> state, OrthoBasis basis);
  KernelRep(const KernelRep&) = delete;
  KernelRep& operator=(const KernelRep&) = delete;

  std::size_t degree() const { return basis_.degree; }
  std::size_t variables() const { return basis_.variables; }
  const OrthoBasis& basis() const { return basis_; }
  const TracialState& state() const { return *state_; }
  const std::vector<Word>& words() const { return basis_.words; }

  const RationalMatrix& inverse_moments() const;
  const Eigen::MatrixXd& inverse_moments_numeric() const;
  /// D: rows are the orthonormal P_w in the monomial basis.
  const Eigen::MatrixXd& orthonormal() const;
  /// kappa(X, X)(1) = sum_w Q_w Q_w^* / nu_w as one polynomial.
  const NcPolynomial& diagonal() const;
  /// sum_{u,v} Minv(u, v) u (x) v^*.
  TensorPolynomial tensor() const;

 private:
  std::shared_ptr<const TracialState> state_;
  OrthoBasis basis_;

  mutable std::once_flag minv_once_, minv_numeric_once_, d_once_, diag_once_;
  mutable RationalMatrix minv_;
  mutable Eigen::MatrixXd minv_numeric_;
  mutable Eigen::MatrixXd d_;
  mutable NcPolynomial diagonal_;
};

struct KernelOptions {
  /// Use the closed-form product basis for free product states.
  bool free_product_closed_form = true;
};

std::shared_ptr<const KernelRep> cd_kernel(std::shared_ptr<const TracialState> state, std::size_t d,
                                           const KernelOptions& options = {});

/// sum_{u,v} Minv(u, v) A^u C B^{v*}.
CMatrix evaluate_kernel(const KernelRep& k, const MatrixTuple& a, const MatrixTuple& b, const CMatrix& c);
/// sum_w P_w(A) C P_w^*(B) through the orthonormal system.
CMatrix evaluate_kernel_orthonormal(const KernelRep& k, const MatrixTuple& a, const MatrixTuple& b, const CMatrix& c);

/// Lambda(A) = kappa(A, A^*)(I)^{-1}. Throws NonInvertibleKernelError when the
/// kernel value has condition number above 1e12.
CMatrix christoffel_function(const KernelRep& k, const MatrixTuple& a);

/// P_d(X) = (Lambda(A) (x) 1) sum_w P_w(A) (x) P_w^*(X) for selfadjoint A.
MatrixNcPolynomial variational_minimizer(const KernelRep& k, const MatrixTuple& a);

/// (Id (x) tau)(Q Q^*) = sum_{u,v} c_u c_v^* tau(u v^*).
CMatrix trace_gram(const MatrixNcPolynomial& q, const TracialState& state);

/// (tr_k kappa(A, A^*)(I_k))^{1/d} with the normalized trace.
double siciak_trace(const KernelRep& k, const MatrixTuple& a);
/// ||kappa(A, A^*)(I_k)||^{1/d} in operator norm.
double siciak_norm(const KernelRep& k, const MatrixTuple& a);

struct LevelSetSpec {
  double target = 1.0;
  double epsilon = 0.0;
  std::size_t k = 1;
  std::size_t degree = 1;
};

/// Closed band: |siciak_trace - target| <= epsilon.
bool in_band(const LevelSetSpec& spec, double value);
bool level_set_contains(const KernelRep& k, const LevelSetSpec& spec, const MatrixTuple& a);

struct KernelIdentityReport {
  Rational normalization;
  std::size_t expected = 0;
  bool normalization_ok = false;
  bool reproducing_ok = false;
  bool symmetric = false;
  std::vector<std::string> failures;
};

/// (Id (x) tau)(t) = sum c tau(v) u.
NcPolynomial partial_trace_right(const TensorPolynomial& t, const TracialState& state);

/// Exact checks of normalization, reproducing property and symmetry.
KernelIdentityReport kernel_identities(const KernelRep& k);

}  // namespace ncck
