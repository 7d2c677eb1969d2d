#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ncck/kernel.hpp"
#include "ncck/simd/kernels.hpp"

namespace ncck {

/// Real representation of a complex k x k matrix,
///   R(M) = [[Re M, -Im M], [Im M, Re M]],
/// written row-major into a 2k x 2k buffer.
void realify(const CMatrix& m, std::span<double> out);
/// tr_k M recovered from R(M): real part from the upper-left block, imaginary
/// part from the lower-left block, divided by k.
Complex normalized_trace_of_realified(std::span<const double> r, std::size_t k);

/// Evaluates (1/m) sum_w ||P_w(A)||_F^2 = tr_m kappa(A, A^*)(I) for a tuple of
/// real m x m matrices. A complex tuple is passed in realified form.
class TraceEvaluator {
 public:
  enum class Strategy { automatic, monomial, factorized };

  explicit TraceEvaluator(const KernelRep& k, const simd::Kernels& kernels = simd::active_kernels(),
                          Strategy strategy = Strategy::automatic);

  Strategy strategy() const { return strategy_; }
  std::size_t degree() const { return degree_; }

  /// mats[i] points to the m x m row-major matrix of variable i + 1.
  double normalized_trace(std::span<const double* const> mats, std::size_t m);
  /// normalized_trace^(1/d).
  double siciak(std::span<const double* const> mats, std::size_t m);

 private:
  struct SparseRow {
    std::vector<std::size_t> cols;
    std::vector<double> values;
  };

  double monomial_path(std::span<const double* const> mats, std::size_t m);
  double factorized_path(std::span<const double* const> mats, std::size_t m);

  const simd::Kernels* kernels_;
  Strategy strategy_;
  std::size_t degree_;
  std::size_t variables_;
  // Monomial path: prefix structure and orthonormal rows.
  std::vector<std::size_t> parent_;
  std::vector<Letter> last_;
  std::vector<SparseRow> rows_;
  // Factorized path: per-variable orthonormal rows over powers, and for every
  // live word its first run and suffix.
  std::vector<std::vector<SparseRow>> single_rows_;
  struct Step {
    Letter letter;
    std::size_t run;
    std::size_t suffix;
  };
  std::vector<std::size_t> live_;
  std::vector<Step> steps_;
  std::vector<double> buffer_;
};

/// Normalized trace of an observable, Re tr_k f(A), on real matrices; with
/// `realified` the inputs are R(A) of size 2k.
class ObservableEvaluator {
 public:
  ObservableEvaluator(const NcPolynomial& f, const simd::Kernels& kernels = simd::active_kernels());
  double evaluate(std::span<const double* const> mats, std::size_t m, bool realified);

 private:
  struct Node {
    std::size_t parent;
    Letter letter;
  };
  const simd::Kernels* kernels_;
  std::vector<Node> nodes_;
  std::vector<std::pair<std::size_t, Complex>> terms_;
  std::vector<double> buffer_;
};

}  // namespace ncck
