#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ncck/gram.hpp"
#include "ncck/poly.hpp"
#include "ncck/traces.hpp"
#include "ncck/word.hpp"

namespace ncck {

/// Moment variables y_1..y_m, one per cyclic+star class of nonempty words of
/// length <= 2d. The identity word maps to id 0 (the constant 1).
class MomentVariableIndex {
 public:
  MomentVariableIndex(std::size_t n, std::size_t d);

  std::size_t variables() const { return n_; }
  std::size_t degree() const { return d_; }
  std::size_t size() const { return classes_.size(); }
  /// Canonical representative of variable id (1-based).
  const Word& representative(std::size_t id) const { return classes_.at(id - 1); }
  const std::vector<Word>& classes() const { return classes_; }
  /// Throws std::out_of_range for words longer than 2d.
  std::size_t id(const Word& w) const;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<Word> classes_;
  std::unordered_map<Word, std::size_t, WordHash> ids_;
};

/// min c^T y subject to sum_i y_i F_i - F_0 >= 0 blockwise. Coefficients are
/// exact; entries are kept for i <= j with 1-based positions.
struct SdpProblem {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;  // matno, block, i, j

  std::size_t n = 0;
  std::size_t degree = 0;
  std::size_t m = 0;
  std::vector<std::size_t> block_sizes;
  std::vector<Rational> objective;
  /// Identity coefficient of f, not representable in the file format.
  Rational objective_constant;
  std::map<Key, Rational> entries;
  std::vector<Word> classes;
  std::vector<NcPolynomial> constraints;
};

MomentVariableIndex moment_variable_index(std::size_t n, std::size_t d);

/// Throws std::invalid_argument for non-selfadjoint or non-real input and for
/// d below the degrees required by f or some g_j.
SdpProblem build_relaxation(const NcPolynomial& f, const std::vector<NcPolynomial>& constraints, std::size_t n,
                            std::size_t d);

/// Blocks of sum_i y_i F_i - F_0 for exact y (index 0 unused).
std::vector<RationalMatrix> assemble_blocks(const SdpProblem& p, const std::vector<Rational>& y);

/// File-level view of an SDPA sparse problem.
struct SdpaData {
  std::size_t m = 0;
  std::vector<long> block_sizes;
  std::vector<double> objective;
  std::map<SdpProblem::Key, double> entries;
  friend bool operator==(const SdpaData&, const SdpaData&) = default;
};

SdpaData to_sdpa_data(const SdpProblem& p);
void write_sdpa(std::ostream& out, const SdpProblem& p);
/// Atomic: writes a temporary file and renames it.
void export_sdpa(const SdpProblem& p, const std::string& path);
SdpaData read_sdpa(std::istream& in);
SdpaData read_sdpa_file(const std::string& path);

struct FeasibilityReport {
  bool feasible = false;
  std::vector<double> min_eigenvalues;
  /// tau(f) including the constant term.
  double objective = 0.0;
  Rational objective_exact;
  std::vector<std::string> failures;
  /// Set when an external optimum was supplied.
  std::optional<double> solver_optimum;
  std::optional<bool> bound_consistent;
};

/// Throws MissingMomentError when the state lacks moments up to 2d.
FeasibilityReport check_feasibility(const SdpProblem& p, const TracialState& state, double tol = 1e-9);

/// Records the one-sided check optimum <= witness objective + tol.
void attach_solver_optimum(FeasibilityReport& report, double optimum, double tol = 1e-6);

/// Reads {"optimum": value, ...} written by an external solver run.
double read_solver_optimum(const std::string& path);

/// One polynomial per non-empty line; '#' starts a comment.
std::vector<NcPolynomial> read_constraints(std::istream& in, std::size_t n);
std::vector<NcPolynomial> read_constraints_file(const std::string& path, std::size_t n);

}  // namespace ncck
