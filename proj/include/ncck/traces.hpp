#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncck/poly.hpp"
#include "ncck/rational.hpp"
#include "ncck/word.hpp"

namespace ncck {

class MissingMomentError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Free cumulants k_1, k_2, ... of a single-variable law. Orders beyond the
/// stored prefix take the tail value when one is set.
class CumulantTable {
 public:
  CumulantTable() = default;
  explicit CumulantTable(std::vector<Rational> prefix, std::optional<Rational> tail = std::nullopt)
      : prefix_(std::move(prefix)), tail_(std::move(tail)) {}

  static CumulantTable semicircle(const Rational& variance) { return CumulantTable({Rational(0), variance}, Rational(0)); }
  static CumulantTable free_poisson(const Rational& rate) { return CumulantTable({}, rate); }

  /// Cumulant of order m >= 1. Throws MissingMomentError past a finite table.
  const Rational& at(std::size_t m) const;
  bool has(std::size_t m) const { return m >= 1 && (m <= prefix_.size() || tail_.has_value()); }
  std::size_t prefix_size() const { return prefix_.size(); }

 private:
  std::vector<Rational> prefix_;
  std::optional<Rational> tail_;
};

/// m_1..m_order from cumulants via m_p = sum over NC(p) of products of
/// block cumulants.
std::vector<Rational> moments_from_cumulants(const CumulantTable& cumulants, std::size_t order);
/// Inverse transform; moments[0] is m_1.
CumulantTable cumulants_from_moments(const std::vector<Rational>& moments);

/// A tracial state given by its moment functional w -> tau(w). Built-in
/// states are real-valued, so moments are memoized under the cyclic+star
/// canonical form of the word.
class TracialState {
 public:
  explicit TracialState(std::size_t n, bool use_cache = true) : n_(n), use_cache_(use_cache) {}
  virtual ~TracialState() = default;
  TracialState(const TracialState&) = delete;
  TracialState& operator=(const TracialState&) = delete;

  std::size_t variables() const { return n_; }

  /// tau(w). Throws MissingMomentError when unavailable.
  Rational moment(const Word& w) const;
  /// tau(p) extended linearly.
  GaussianRational trace(const NcPolynomial& p) const;

  /// Evaluates tau(w) without consulting the memo for w itself.
  virtual Rational raw_moment(const Word& w) const = 0;
  /// Longest word length with a known moment.
  virtual std::size_t max_length() const { return std::numeric_limits<std::size_t>::max(); }
  /// False when moments came from decimal (inexact) input.
  virtual bool exact() const { return true; }
  virtual std::string describe() const = 0;

  std::size_t cache_size() const;

 private:
  std::size_t n_;
  bool use_cache_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Word, Rational, WordHash> cache_;
};

/// Free product of single-variable laws given by their free cumulants. Mixed
/// moments come from the non-crossing partitions of the letter positions
/// whose blocks are monochromatic.
class FreeProductState final : public TracialState {
 public:
  FreeProductState(std::vector<CumulantTable> tables, std::string name, bool use_cache = true);

  Rational raw_moment(const Word& w) const override;
  std::string describe() const override { return name_; }

  const CumulantTable& cumulants(Letter i) const { return tables_.at(i - 1); }
  /// Moment sequence of the single variable X_i up to the given order.
  std::vector<Rational> single_moments(Letter i, std::size_t order) const;

 private:
  Rational single_moment(Letter i, std::size_t len) const;

  std::vector<CumulantTable> tables_;
  std::string name_;
  mutable std::shared_mutex seq_mutex_;
  mutable std::vector<std::vector<Rational>> sequences_;
};

/// User-supplied moment table keyed by cyclic+star canonical words.
class MomentTableState final : public TracialState {
 public:
  /// Throws std::invalid_argument on inconsistent duplicates or tau(1) != 1.
  MomentTableState(const std::map<Word, Rational>& entries, std::size_t n, std::size_t d_max, bool exact = true);

  Rational raw_moment(const Word& w) const override;
  std::size_t max_length() const override { return 2 * d_max_; }
  bool exact() const override { return exact_; }
  std::string describe() const override { return "table"; }
  const std::map<Word, Rational>& entries() const { return table_; }

 private:
  std::map<Word, Rational> table_;
  std::size_t d_max_;
  bool exact_;
};

/// Free semicirculars of the given variance. Requires variance > 0; with
/// n > 1 the variables are free.
std::shared_ptr<FreeProductState> semicircle_state(const Rational& variance, std::size_t n, bool use_cache = true);
/// Free Poisson laws of rate c, mutually free.
std::shared_ptr<FreeProductState> free_poisson_state(const Rational& c, std::size_t n, bool use_cache = true);
std::shared_ptr<MomentTableState> moment_table_state(const std::map<Word, Rational>& entries, std::size_t n,
                                                     std::size_t d_max, bool exact = true);

/// tau(w) by the monochromatic non-crossing partition sum.
Rational free_product_moment(const Word& w, const std::vector<CumulantTable>& tables);

/// Reads a moment table from CSV text with rows "word,value"; '#' starts a
/// comment. Returns the table state; d_max is half the longest word length.
std::shared_ptr<MomentTableState> read_moment_table(std::istream& in, std::size_t n);
std::shared_ptr<MomentTableState> read_moment_table_file(const std::string& path, std::size_t n);
/// CSV rows for every canonical word of length <= 2d.
void write_moment_table(std::ostream& out, const TracialState& state, std::size_t d);

struct StateReport {
  std::size_t degree = 0;
  bool psd = false;
  double min_eigenvalue = 0.0;
  /// Set when exact pivot checking was requested.
  std::optional<bool> exact_psd;
  bool tracial = false;
  bool star_symmetric = false;
  double growth = 0.0;
  std::vector<std::string> failures;
};

struct VerifyOptions {
  bool exact = false;
  std::size_t random_pairs = 200;
  std::uint64_t seed = 7;
};

StateReport verify_state(const TracialState& state, std::size_t d, const VerifyOptions& options = {});

}  // namespace ncck
