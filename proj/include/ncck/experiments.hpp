#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncck/kernel.hpp"
#include "ncck/matpoly.hpp"
#include "ncck/poly.hpp"
#include "ncck/simd/kernels.hpp"
#include "ncck/traces.hpp"

namespace ncck {

/// GOE normalization policy.
///   half:   A = (X + X^T)/2, X_ij ~ N(0, sigma^2)
///   wigner: A = sigma (X + X^T)/sqrt(2k), X_ij ~ N(0, 1); spectrum close to
///           the semicircle of variance sigma^2 for large k.
enum class GoeScaling { half, wigner };
enum class SamplerLaw { goe, wishart };

struct SamplerConfig {
  SamplerLaw law = SamplerLaw::goe;
  std::size_t k = 2;
  double sigma = 1.0;
  GoeScaling scaling = GoeScaling::half;
  /// Wishart aspect ratio; M = c k columns.
  double c = 1.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  /// Throws std::invalid_argument on k = 0, sigma <= 0, or non-integral c k.
  void validate() const;
  std::size_t wishart_columns() const;
};

Eigen::MatrixXd sample_goe(std::size_t k, double sigma, std::mt19937_64& rng, GoeScaling scaling = GoeScaling::half);
/// A = (1/k) G G^* with G k x M standard complex Gaussian.
CMatrix sample_wishart(std::size_t k, std::size_t m, std::mt19937_64& rng);

class AcceptanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RejectionOptions {
  /// Hard cap on raw draws per grid point.
  std::uint64_t max_draws = 1'000'000'000;
  /// After this many draws the acceptance rate must reach min_accept_rate.
  std::uint64_t probe_draws = 10'000'000;
  double min_accept_rate = 1e-6;
  /// Keep up to this many accepted tuples for inspection.
  std::size_t keep_samples = 0;
  /// Force a SIMD variant; nullptr selects the active one.
  const simd::Kernels* kernels = nullptr;
};

struct SampleReport {
  SamplerConfig sampler;
  std::size_t degree = 0;
  double epsilon = 0.0;
  double target = 0.0;
  std::size_t requested = 0;
  std::size_t accepted = 0;
  std::uint64_t draws = 0;
  double accept_rate = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double wall_seconds = 0.0;
  std::string simd;
  std::vector<MatrixTuple> kept;
};

/// Draws tuples (one matrix per variable) until n_accept land in the band and
/// averages Re tr_k f over them. Results depend only on (seed, workers).
/// Throws AcceptanceError when the acceptance rate is too small.
SampleReport rejection_sample(const KernelRep& kernel, const LevelSetSpec& spec, const SamplerConfig& sampler,
                              std::size_t n_accept, const NcPolynomial& f, const RejectionOptions& options = {});

/// Builds a state from a law name: semicircle, poisson or table.
std::shared_ptr<TracialState> make_state(const std::string& law, std::size_t vars, const Rational& variance,
                                         const Rational& c, const std::string& moments_path);

struct FigureConfig {
  std::string law = "semicircle";
  std::size_t vars = 1;
  std::vector<std::size_t> degrees;
  std::vector<std::size_t> ks;
  /// Explicit (d, k) points; when empty the grid is degrees x ks.
  std::vector<std::pair<std::size_t, std::size_t>> points;
  double epsilon = 0.7;
  std::size_t samples = 100000;
  std::string observable = "X1^2";
  std::uint64_t seed = 1;
  double sigma = 1.0;
  Rational variance = 1;
  Rational c = 1;
  std::string moments;
  SamplerLaw sampler = SamplerLaw::goe;
  GoeScaling scaling = GoeScaling::half;
  std::size_t workers = 1;
  /// Level; defaults to the variable count.
  double target = 0.0;
  RejectionOptions rejection;

  std::vector<std::pair<std::size_t, std::size_t>> grid() const;
};

/// Parses flat "key = value" lines; '#' starts a comment. Lists are comma or
/// space separated; points are written "d:k".
FigureConfig parse_figure_config(std::istream& in);
FigureConfig read_figure_config(const std::string& path);

/// Seed of one grid point, mixed from the base seed and (d, k).
std::uint64_t point_seed(std::uint64_t seed, std::size_t d, std::size_t k);

std::vector<SampleReport> run_figure(const FigureConfig& config);

/// Header d,k,epsilon,N,accept_rate,mean,stderr and one row per report.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SampleReport& r);
void write_csv(std::ostream& out, const std::vector<SampleReport>& reports);

}  // namespace ncck
