#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "ncck/gram.hpp"
#include "ncck/traces.hpp"

namespace ncck {

namespace {

Word random_word(std::mt19937_64& rng, std::size_t n, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<int> letter_dist(1, static_cast<int>(n));
  const std::size_t len = len_dist(rng);
  std::vector<Letter> letters(len);
  for (auto& l : letters) l = static_cast<Letter>(letter_dist(rng));
  return Word(std::move(letters));
}

}  // namespace

StateReport verify_state(const TracialState& state, std::size_t d, const VerifyOptions& options) {
  StateReport report;
  report.degree = d;

  MomentMatrix mm;
  try {
    mm = moment_matrix(state, d);
  } catch (const std::exception& e) {
    report.failures.push_back(e.what());
    return report;
  }

  Eigen::MatrixXd m = to_double(mm.entries);
  const auto dim = static_cast<double>(m.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.psd = report.min_eigenvalue >= -1e-10 * dim;
  if (!report.psd) report.failures.push_back("moment matrix has eigenvalue " + std::to_string(report.min_eigenvalue));
  if (options.exact) {
    report.exact_psd = is_psd_exact(mm.entries);
    if (!*report.exact_psd) report.failures.push_back("exact elimination found a negative pivot");
  }

  // Pairs are checked through raw_moment so the canonicalizing memo cannot
  // hide an asymmetric provider.
  const std::size_t n = state.variables();
  const std::size_t half = std::min(state.max_length() / 2, d);
  std::mt19937_64 rng(options.seed);
  report.tracial = true;
  report.star_symmetric = true;
  for (std::size_t t = 0; t < options.random_pairs; ++t) {
    Word u = random_word(rng, n, half);
    Word v = random_word(rng, n, half);
    try {
      Rational uv = state.raw_moment(u * v);
      if (uv != state.raw_moment(v * u)) {
        report.tracial = false;
        report.failures.push_back("tau(" + to_string(u * v) + ") != tau(" + to_string(v * u) + ")");
      }
      if (uv != state.raw_moment(star(u * v))) {
        report.star_symmetric = false;
        report.failures.push_back("tau(" + to_string(u * v) + ") != tau of its reversal");
      }
    } catch (const MissingMomentError& e) {
      report.failures.push_back(e.what());
      report.tracial = false;
      break;
    }
  }

  double growth = 0.0;
  for (const Word& w : enumerate_words(n, 2 * d)) {
    if (w.empty()) continue;
    const double v = std::abs(state.moment(w).get_d());
    growth = std::max(growth, std::pow(v, 1.0 / static_cast<double>(w.size())));
  }
  report.growth = growth;
  return report;
}

}  // namespace ncck
