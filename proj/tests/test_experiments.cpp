#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "ncck/evaluator.hpp"
#include "ncck/experiments.hpp"

using namespace ncck;

namespace {

// E[((X + Y)/2)^2] for independent N(0, s^2) by a tensor trapezoid rule on
// [-10s, 10s]^2; E[X^2] likewise in one dimension.
double integrate_offdiag(double s) {
  const int steps = 600;
  const double h = 20.0 * s / steps;
  const double norm = 1.0 / (2.0 * M_PI * s * s);
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      const double x = -10 * s + i * h, y = -10 * s + j * h;
      const double w = (i == 0 || i == steps ? 0.5 : 1.0) * (j == 0 || j == steps ? 0.5 : 1.0);
      acc += w * 0.25 * (x + y) * (x + y) * norm * std::exp(-(x * x + y * y) / (2 * s * s));
    }
  return acc * h * h;
}

double integrate_diag(double s) {
  const int steps = 4000;
  const double h = 20.0 * s / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = -10 * s + i * h;
    acc += (i == 0 || i == steps ? 0.5 : 1.0) * x * x * std::exp(-x * x / (2 * s * s));
  }
  return acc * h / (s * std::sqrt(2 * M_PI));
}

}  // namespace

TEST_CASE("GOE sampler entries") {
  std::mt19937_64 rng(3);
  const double sigma = 1.3;
  const int draws = 100000;
  double s11 = 0, s12 = 0, q11 = 0, q12 = 0;
  for (int t = 0; t < draws; ++t) {
    const Eigen::MatrixXd a = sample_goe(3, sigma, rng);
    REQUIRE(a == a.transpose());
    const double x = a(0, 0) * a(0, 0), y = a(0, 1) * a(0, 1);
    s11 += x;
    q11 += x * x;
    s12 += y;
    q12 += y * y;
  }
  auto within = [&](double s, double q, double target) {
    const double mean = s / draws;
    const double se = std::sqrt((q / draws - mean * mean) / draws);
    return std::abs(mean - target) <= 3 * se;
  };
  CHECK(within(s11, q11, sigma * sigma));
  CHECK(within(s12, q12, sigma * sigma / 2));
}

TEST_CASE("Wishart sampler") {
  std::mt19937_64 rng(5);
  const std::size_t k = 4, m = 8;
  const double c = static_cast<double>(m) / k;
  const int draws = 40000;
  double s1 = 0, q1 = 0, s2 = 0, q2 = 0;
  for (int t = 0; t < draws; ++t) {
    const CMatrix a = sample_wishart(k, m, rng);
    if (t < 50) {
      CHECK((a - a.adjoint()).norm() < 1e-12);
      CHECK(testing_util::min_eig(a) >= -1e-12);
    }
    const double t1 = a.trace().real() / k, t2 = (a * a).trace().real() / k;
    s1 += t1;
    q1 += t1 * t1;
    s2 += t2;
    q2 += t2 * t2;
  }
  auto check = [&](double s, double q, double target) {
    const double mean = s / draws;
    const double se = std::sqrt((q / draws - mean * mean) / draws);
    CHECK(std::abs(mean - target) <= 3 * se);
  };
  check(s1, q1, c);
  // Complex Gaussian: E tr_k (G G^*)^2 / k^2 = c (1 + c) exactly at any k.
  check(s2, q2, c + c * c);
}

TEST_CASE("sampler configuration validation") {
  SamplerConfig s;
  s.k = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.k = 3;
  s.sigma = -1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.sigma = 1;
  s.law = SamplerLaw::wishart;
  s.c = 0.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.c = 2.0 / 3.0;
  CHECK(s.wishart_columns() == 2);
}

TEST_CASE("rejection sampling without rejection matches the GOE second moment") {
  auto kernel = cd_kernel(semicircle_state(1, 1), 2);
  const double sigma = 1.0;
  const double e_diag = integrate_diag(sigma), e_off = integrate_offdiag(sigma);
  CHECK(std::abs(e_diag - 1.0) < 1e-8);
  CHECK(std::abs(e_off - 0.5) < 1e-8);
  for (std::size_t k : {2, 3, 5}) {
    const double expected = (k * e_diag + k * (k - 1) * e_off) / k;
    SamplerConfig s;
    s.k = k;
    s.seed = 100 + k;
    const auto r = rejection_sample(*kernel, {1.0, 1e9, k, 2}, s, 50000, parse_poly("X1^2", 1));
    CHECK(r.accept_rate == 1.0);
    CHECK(std::abs(r.mean - expected) <= 3 * r.std_error);
  }
}

TEST_CASE("rejection sampling is deterministic and honours the band") {
  auto kernel = cd_kernel(semicircle_state(1, 2), 2);
  const auto f = parse_poly("X1*X1*X2*X2*X1*X1", 2);
  SamplerConfig s;
  s.k = 3;
  s.seed = 9;
  const LevelSetSpec spec{2.0, 0.7, 3, 2};
  RejectionOptions o;
  o.keep_samples = 50;
  for (std::size_t workers : {1, 3}) {
    s.workers = workers;
    const auto a = rejection_sample(*kernel, spec, s, 400, f, o);
    const auto b = rejection_sample(*kernel, spec, s, 400, f, o);
    CHECK(a.mean == b.mean);
    CHECK(a.draws == b.draws);
    CHECK(a.accepted == 400);
    REQUIRE(a.kept.size() == 50);
    for (const auto& t : a.kept) CHECK(level_set_contains(*kernel, spec, t));
    std::ostringstream x, y;
    write_csv(x, {a});
    write_csv(y, {b});
    CHECK(x.str() == y.str());
  }
}

TEST_CASE("Wishart rejection sampling keeps Hermitian tuples in the band") {
  auto kernel = cd_kernel(free_poisson_state(2, 2), 1);
  SamplerConfig s;
  s.law = SamplerLaw::wishart;
  s.k = 3;
  s.c = 2;
  s.seed = 4;
  RejectionOptions o;
  o.keep_samples = 20;
  const LevelSetSpec spec{2.0, 1.0, 3, 1};
  const auto r = rejection_sample(*kernel, spec, s, 200, parse_poly("X1 + X2", 2), o);
  for (const auto& t : r.kept) {
    CHECK(level_set_contains(*kernel, spec, t));
    CHECK((t[0] - t[0].adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("unreachable band raises an acceptance error") {
  auto kernel = cd_kernel(semicircle_state(1, 1), 2);
  SamplerConfig s;
  s.k = 2;
  RejectionOptions o;
  o.probe_draws = 2000;
  CHECK_THROWS_AS(rejection_sample(*kernel, {0.5, 0.01, 2, 2}, s, 10, parse_poly("X1^2", 1), o), AcceptanceError);
  o.probe_draws = 1'000'000;
  o.max_draws = 3000;
  CHECK_THROWS_AS(rejection_sample(*kernel, {0.5, 0.01, 2, 2}, s, 10, parse_poly("X1^2", 1), o), AcceptanceError);
}

TEST_CASE("figure configuration") {
  std::istringstream in(
      "# comment\n"
      "law = semicircle\n"
      "vars = 2\n"
      "degrees = 1-3\n"
      "k = 2, 4\n"
      "epsilon = 0.7\n"
      "samples = 100\n"
      "observable = X1*X1*X2*X2*X1*X1\n"
      "seed = 42\n"
      "sigma = 1\n");
  const auto cfg = parse_figure_config(in);
  CHECK(cfg.vars == 2);
  CHECK(cfg.degrees == std::vector<std::size_t>{1, 2, 3});
  CHECK(cfg.ks == std::vector<std::size_t>{2, 4});
  CHECK(cfg.grid().size() == 6);
  CHECK(cfg.seed == 42);

  std::istringstream pts("law = poisson\nvars = 2\nc = 5\npoints = 1:5 2:5\nepsilon = 10\n");
  const auto p = parse_figure_config(pts);
  CHECK(p.sampler == SamplerLaw::wishart);
  CHECK(p.grid() == std::vector<std::pair<std::size_t, std::size_t>>{{1, 5}, {2, 5}});

  std::istringstream bad("law = semicircle\nfrobnicate = 1\n");
  CHECK_THROWS_AS(parse_figure_config(bad), std::invalid_argument);
  CHECK(point_seed(1, 2, 3) != point_seed(1, 3, 2));
  CHECK(point_seed(1, 2, 3) == point_seed(1, 2, 3));
}

TEST_CASE("shipped figure configurations parse") {
  const std::string dir = NCCK_CONFIG_DIR;
  const auto f1 = read_figure_config(dir + "/figure1.cfg");
  CHECK(f1.grid().size() == 60);
  CHECK(f1.scaling == GoeScaling::wigner);
  const auto f2 = read_figure_config(dir + "/figure2.cfg");
  CHECK(f2.grid().size() == 24);
  CHECK(f2.vars == 2);
  const auto w = read_figure_config(dir + "/wishart.cfg");
  CHECK(w.sampler == SamplerLaw::wishart);
  CHECK(w.c == 5);
  CHECK(w.target == 2.0);
  CHECK(read_figure_config(dir + "/quick.cfg").grid().size() == 2);
}

TEST_CASE("figure runs are reproducible and write the CSV schema") {
  std::istringstream in("law = semicircle\nvars = 1\ndegrees = 1,2\nk = 2\nsamples = 300\nseed = 5\n");
  const auto cfg = parse_figure_config(in);
  std::ostringstream a, b;
  write_csv(a, run_figure(cfg));
  write_csv(b, run_figure(cfg));
  CHECK(a.str() == b.str());
  std::istringstream lines(a.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "d,k,epsilon,N,accept_rate,mean,stderr");
  std::getline(lines, row);
  CHECK(row.rfind("1,2,0.69999999999999996,300,", 0) == 0);
}

TEST_CASE("realification preserves traces") {
  std::mt19937_64 rng(2);
  const CMatrix m = testing_util::random_complex(3, rng);
  std::vector<double> r(36);
  realify(m, r);
  const Complex t = normalized_trace_of_realified(r, 3);
  CHECK(std::abs(t - m.trace() / 3.0) < 1e-14);
}
