// Acceptance harness: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kernel_formulas.hpp"
#include "ncck/experiments.hpp"
#include "ncck/gram.hpp"
#include "ncck/kernel.hpp"
#include "ncck/sdp.hpp"
#include "ncck/traces.hpp"
#include "oracles.hpp"

using namespace ncck;
using namespace testing_util;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  void fail(const std::string& why) {
    if (pass) summary = why;
    pass = false;
    std::cerr << "    failure: " << why << '\n';
  }
};

void note(const std::string& s) { std::cerr << "    " << s << '\n'; }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (const auto& f : reference::semicircle_formulas()) {
    auto k = cd_kernel(semicircle_state(1, f.vars, false), f.degree);
    if (k->diagonal() != parse_poly(f.text, f.vars))
      o.fail("semicircle n=" + std::to_string(f.vars) + " d=" + std::to_string(f.degree) + ": " +
             to_string(k->diagonal()));
    ++checked;
  }
  for (int c : {1, 5})
    for (std::size_t d = 1; d <= 2; ++d) {
      auto k = cd_kernel(free_poisson_state(c, 2, false), d);
      // Clear the 1/c and 1/c^2 denominators before comparing.
      const GaussianRational scale(Rational(c * c));
      if (scale * k->diagonal() != scale * reference::poisson_formula(d, c))
        o.fail("poisson c=" + std::to_string(c) + " d=" + std::to_string(d) + ": " + to_string(k->diagonal()));
      ++checked;
    }
  const double t = seconds_since(t0);
  if (t >= 5.0) o.fail("runtime " + fmt("%.2f", t) + " s");
  if (o.pass) o.summary = std::to_string(checked) + " kernels exact in " + fmt("%.2f", t) + " s";
  return o;
}

Outcome ac2() {
  Outcome o;
  std::vector<std::pair<std::size_t, std::size_t>> cases{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 1}, {2, 2}, {2, 3}};
  for (auto [n, d] : cases) {
    auto k = cd_kernel(semicircle_state(1, n), d);
    const auto r = kernel_identities(*k);
    const Rational expected(static_cast<long>(word_count(n, d)));
    if (r.normalization != expected)
      o.fail("(n,d)=(" + std::to_string(n) + "," + std::to_string(d) + "): " + to_string(r.normalization));
  }
  if (o.pass) o.summary = "(tau x tau)(kappa* kappa) = sigma(n,d) for 7 cases";
  return o;
}

Outcome ac3() {
  Outcome o;
  auto k = cd_kernel(semicircle_state(1, 2), 3);
  const TensorPolynomial kappa = k->tensor();
  const NcPolynomial one(GaussianRational(1));
  std::size_t count = 0;
  for (const auto& w : enumerate_words(2, 3)) {
    const NcPolynomial p(w);
    if (partial_trace_right(kappa * TensorPolynomial::tensor(one, p), k->state()) != p)
      o.fail("monomial " + to_string(w));
    ++count;
  }
  if (!kernel_identities(*k).reproducing_ok) o.fail("kernel_identities reports a reproducing failure");
  if (o.pass) o.summary = std::to_string(count) + " monomials reproduced exactly at (n,d)=(2,3)";
  return o;
}

Outcome ac4() {
  Outcome o;
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 2; ++n)
    for (std::size_t d = 0; d <= 3; ++d)
      for (auto st : {std::shared_ptr<TracialState>(semicircle_state(1, n)),
                      std::shared_ptr<TracialState>(free_poisson_state(5, n)),
                      std::shared_ptr<TracialState>(free_poisson_state(1, n))}) {
        const auto mm = moment_matrix(*st, d);
        const auto f = inverse_factorization(mm, gram_schmidt(*st, d));
        const std::string tag = st->describe() + " n=" + std::to_string(n) + " d=" + std::to_string(d);
        if (!f.exact_match) o.fail(tag + ": L^T N^-1 L differs from M^-1");
        if (!(mm.entries * f.factored_inverse == RationalMatrix::identity(mm.index.size())))
          o.fail(tag + ": M (L^T N^-1 L) is not the identity");
        if (!(f.max_abs_error <= 1e-10)) o.fail(tag + ": |M^-1 - D^T D|_max = " + fmt("%.3g", f.max_abs_error));
        worst = std::max(worst, f.max_abs_error);
        ++count;
      }
  if (o.pass) o.summary = std::to_string(count) + " factorizations exact, max float error " + fmt("%.2g", worst);
  return o;
}

Outcome ac5() {
  Outcome o;
  auto s = semicircle_state(1, 2, false);
  auto single = [](int, unsigned p) { return oracle::semicircle_moment(p); };
  std::size_t count = 0;
  for (std::size_t len = 0; len <= 8; ++len)
    for (const auto& w : enumerate_words_of_length(2, len)) {
      const oracle::Letters l(w.begin(), w.end());
      if (s->moment(w) != oracle::free_word_moment(l, single)) o.fail("word " + to_string(w));
      ++count;
    }
  if (s->moment(Word{1, 1, 2, 2, 1, 1}) != 2) o.fail("tau(X1X1X2X2X1X1) != 2");
  if (s->moment(Word{1, 2, 1}) != 0) o.fail("tau(X1X2X1) != 0");
  if (o.pass) o.summary = std::to_string(count) + " words agree with the centering oracle";
  return o;
}

Outcome ac6() {
  Outcome o;
  auto s = semicircle_state(1, 2);
  for (std::size_t d = 0; d <= 4; ++d) {
    const auto gs = gram_schmidt(*s, d);
    const auto cf = free_product_orthobasis(single_variable_bases(*s, d), d);
    if (gs.retained != cf.retained || !(gs.coefficients == cf.coefficients) || gs.norms != cf.norms)
      o.fail("bases differ at d=" + std::to_string(d));
  }
  if (o.pass) o.summary = "identical monic systems and norms for d = 0..4";
  return o;
}

Outcome ac7() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> ks(1, 3), ds(1, 3), laws(0, 2);
  std::vector<std::shared_ptr<TracialState>> states{semicircle_state(1, 1), semicircle_state(1, 2),
                                                     free_poisson_state(2, 2)};
  double worst_domination = 0.0, worst_equality = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto& st = states[laws(rng)];
    const std::size_t k = ks(rng), d = ds(rng), n = st->variables();
    auto kernel = cd_kernel(st, d);
    const auto a = random_selfadjoint_tuple(n, k, rng, 0.7);
    const CMatrix lambda = christoffel_function(*kernel, a);
    const auto p = variational_minimizer(*kernel, a);
    const CMatrix id = CMatrix::Identity(k, k);
    const double eq = (trace_gram(p, *st) - lambda).cwiseAbs().maxCoeff();
    worst_equality = std::max(worst_equality, eq);
    if (eq > 1e-9) o.fail("minimizer misses Lambda by " + fmt("%.3g", eq));
    if ((evaluate_tuple(p, a, id) - id).cwiseAbs().maxCoeff() > 1e-9) o.fail("minimizer violates P(A)(I) = I");
    for (int s = 0; s < 100; ++s) {
      MatrixNcPolynomial r0(k);
      for (const auto& w : kernel->words()) r0.add_term(w, random_complex(k, rng));
      MatrixNcPolynomial shift(k);
      shift.add_term(Word{}, evaluate_tuple(r0, a, id));
      const MatrixNcPolynomial q = p + (r0 - shift);
      const double m = min_eig(trace_gram(q, *st) - lambda);
      worst_domination = std::min(worst_domination, m);
      if (m < -1e-8) o.fail("perturbation undercuts Lambda: min eigenvalue " + fmt("%.3g", m));
    }
  }
  if (o.pass)
    o.summary = "10000 perturbations, min eigenvalue " + fmt("%.2g", worst_domination) + ", minimizer error " +
                fmt("%.2g", worst_equality);
  return o;
}

Outcome ac8() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> ks(1, 4), ds(1, 4);
  std::vector<std::shared_ptr<TracialState>> states{semicircle_state(1, 1), semicircle_state(1, 2),
                                                     free_poisson_state(5, 2)};
  for (const auto& st : states)
    for (int t = 0; t < 100; ++t) {
      const std::size_t k = ks(rng), n = st->variables();
      auto kernel = cd_kernel(st, n == 1 ? ds(rng) : std::min<std::size_t>(ds(rng), 3));
      const auto a = random_selfadjoint_tuple(n, k, rng, 1.5);
      const CMatrix id = CMatrix::Identity(k, k);
      const double lmax = max_eig(christoffel_function(*kernel, a));
      if (lmax > 1 + 1e-10) o.fail("Lambda exceeds I: " + fmt("%.12g", lmax));
      const CMatrix g = random_complex(k, rng);
      const CMatrix c = g * g.adjoint();
      const double pos = min_eig(evaluate_kernel(*kernel, a, a, c) - c);
      if (pos < -1e-9) o.fail("kappa(A,A)(C) - C has eigenvalue " + fmt("%.3g", pos));
      const double phi = siciak_trace(*kernel, a);
      if (phi < 1 - 1e-12) o.fail("siciak_trace below 1: " + fmt("%.15g", phi));
      const CMatrix u = random_unitary(k, rng);
      MatrixTuple b;
      for (const auto& x : a) b.push_back(u * x * u.adjoint());
      const double diff = std::abs(siciak_trace(*kernel, b) - phi);
      if (diff > 1e-9 * std::max(1.0, phi)) o.fail("unitary invariance off by " + fmt("%.3g", diff));
    }
  if (o.pass) o.summary = "300 random tuples: Lambda <= I, kappa >= C, invariance, Siciak >= 1";
  return o;
}

// ---------------------------------------------------------------------------

struct McPoint {
  std::size_t n, d, k;
  std::string observable;
  double target_level;
};

SampleReport mc(const McPoint& p, GoeScaling scaling, std::uint64_t seed, const RejectionOptions& opts = {}) {
  auto kernel = cd_kernel(semicircle_state(1, p.n), p.d);
  SamplerConfig s;
  s.k = p.k;
  s.scaling = scaling;
  s.seed = point_seed(seed, p.d, p.k);
  return rejection_sample(*kernel, {p.target_level, 0.7, p.k, p.d}, s, 100000, parse_poly(p.observable, p.n), opts);
}

std::string describe(const SampleReport& r) {
  return "d=" + std::to_string(r.degree) + " k=" + std::to_string(r.sampler.k) + " mean " + fmt("%.4f", r.mean) +
         " +- " + fmt("%.4f", r.std_error) + " (accept " + fmt("%.3g", r.accept_rate) + ")";
}

// Mean moves monotonically toward tau from its starting side (each step may
// retreat by at most `slack`), and the last gap is below 20% of tau.
bool monotone_approach(const std::vector<SampleReport>& chain, double tau, double slack, std::string& why) {
  const double dir = chain.front().mean <= tau ? 1.0 : -1.0;
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (dir * (chain[i].mean - chain[i - 1].mean) < -slack) {
      why = "mean retreats from " + fmt("%.4f", chain[i - 1].mean) + " to " + fmt("%.4f", chain[i].mean);
      return false;
    }
  const double gap = std::abs(chain.back().mean - tau) / std::abs(tau);
  if (gap >= 0.2) {
    why = "final gap " + fmt("%.3f", gap) + " of tau";
    return false;
  }
  if (std::abs(chain.back().mean - tau) >= std::abs(chain.front().mean - tau)) {
    why = "no net approach toward tau";
    return false;
  }
  return true;
}

Outcome ac9() {
  Outcome o;
  const std::uint64_t seed = 20240101;
  const McPoint f1a{1, 2, 2, "X1^2", 1.0}, f1b{1, 15, 10, "X1^2", 1.0};
  const McPoint f2{2, 8, 4, "X1*X1*X2*X2*X1*X1", 2.0};

  // Absolute targets under the default (half) convention.
  bool absolute = true;
  auto absolute_check = [&](const McPoint& p, double target, double tol) {
    try {
      const auto r = mc(p, GoeScaling::half, seed);
      const bool ok = std::abs(r.mean - target) <= tol;
      note(std::string(ok ? "hit " : "miss ") + "half convention " + describe(r) + " target " + fmt("%.3f", target) +
           " +- " + fmt("%.2f", tol));
      absolute = absolute && ok;
    } catch (const AcceptanceError& e) {
      note("miss half convention d=" + std::to_string(p.d) + " k=" + std::to_string(p.k) + ": " + e.what());
      absolute = false;
    }
  };
  absolute_check(f1a, 0.368, 0.1);
  absolute_check(f1b, 0.823, 0.1);
  absolute_check(f2, 2.02, 0.15);

  // Fallback: monotone approach toward tau(f) along growing (d, k) under the
  // alternative (wigner) convention.
  bool fallback = true;
  if (!absolute) {
    const std::vector<McPoint> chain1{f1a, {1, 5, 3, "X1^2", 1.0}, {1, 7, 5, "X1^2", 1.0}, f1b};
    const std::vector<McPoint> chain2{{2, 2, 2, f2.observable, 2.0}, {2, 4, 3, f2.observable, 2.0}, f2};
    for (const auto& [chain, tau] : {std::pair{chain1, 1.0}, std::pair{chain2, 2.0}}) {
      std::vector<SampleReport> rs;
      try {
        for (const auto& p : chain) {
          rs.push_back(mc(p, GoeScaling::wigner, seed));
          note("wigner convention " + describe(rs.back()));
        }
      } catch (const AcceptanceError& e) {
        note(std::string("wigner chain aborted: ") + e.what());
        fallback = false;
        continue;
      }
      std::string why;
      if (!monotone_approach(rs, tau, 0.05, why)) {
        note("fallback fails toward tau = " + fmt("%g", tau) + ": " + why);
        fallback = false;
      } else {
        note("fallback holds toward tau = " + fmt("%g", tau) + ", final gap " +
             fmt("%.3f", std::abs(rs.back().mean - tau) / tau));
      }
    }
  }
  if (!absolute && !fallback) o.fail("GOE targets missed and the fallback does not hold");

  // Wishart, c = k = 5, eps = 10, f = X1 + X2, d = 1..5.
  std::vector<SampleReport> w;
  for (std::size_t d = 1; d <= 5; ++d) {
    auto kernel = cd_kernel(free_poisson_state(5, 2), d);
    SamplerConfig s;
    s.law = SamplerLaw::wishart;
    s.k = 5;
    s.c = 5;
    s.seed = point_seed(seed, d, 5);
    w.push_back(rejection_sample(*kernel, {2.0, 10.0, 5, d}, s, 100000, parse_poly("X1 + X2", 2)));
    note("wishart " + describe(w.back()));
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].mean < 9.9 || w[i].mean > 10.6) o.fail("wishart mean " + fmt("%.4f", w[i].mean) + " outside [9.9, 10.6]");
    if (i > 0) {
      const double slack = 3 * std::hypot(w[i].std_error, w[i - 1].std_error);
      if (w[i].mean > w[i - 1].mean + slack)
        o.fail("wishart mean increases from d=" + std::to_string(i) + " to d=" + std::to_string(i + 1));
    }
  }
  if (o.pass)
    o.summary = absolute ? "absolute targets met; Wishart means non-increasing in [9.9, 10.6]"
                         : "absolute GOE targets missed (see log), fallback holds; Wishart means non-increasing in "
                           "[9.9, 10.6]";
  return o;
}

// ---------------------------------------------------------------------------

std::string read_all(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome ac10() {
  Outcome o;
  auto P = [](const char* t, std::size_t n) { return parse_poly(t, n); };

  struct Case {
    std::string name;
    NcPolynomial f;
    std::vector<NcPolynomial> g;
    std::size_t n, d;
    std::shared_ptr<TracialState> state;
  };
  const std::vector<Case> cases{
      {"semicircle n=1", P("X1^4 - X1", 1), {P("4 - X1^2", 1)}, 1, 3, semicircle_state(1, 1)},
      {"semicircle n=2", P("X1*X1*X2*X2*X1*X1", 2), {P("4 - X1^2", 2), P("4 - X2^2", 2)}, 2, 3, semicircle_state(1, 2)},
      {"poisson n=1", P("X1^2 - X1", 1), {P("X1", 1)}, 1, 3, free_poisson_state(5, 1)},
      {"poisson n=2", P("X1*X2 + X2*X1", 2), {P("X1", 2), P("X2", 2)}, 2, 2, free_poisson_state(5, 2)},
  };
  for (const auto& c : cases) {
    const auto p = build_relaxation(c.f, c.g, c.n, c.d);
    std::ostringstream text;
    write_sdpa(text, p);
    std::istringstream in(text.str());
    if (!(read_sdpa(in) == to_sdpa_data(p))) o.fail(c.name + ": round trip differs");
    const auto r = check_feasibility(p, *c.state, 1e-9);
    if (!r.feasible) o.fail(c.name + ": state rejected on its own relaxation");
  }

  std::map<Word, Rational> corrupt{{Word{}, 1}, {Word{1}, 0}, {Word{1, 1}, -1}, {Word{1, 1, 1}, 0}, {Word{1, 1, 1, 1}, 2}};
  const auto bad = check_feasibility(build_relaxation(P("X1^2", 1), {}, 1, 2), *moment_table_state(corrupt, 1, 2));
  if (bad.feasible) o.fail("corrupted table accepted");

  const std::string dir = NCCK_FIXTURE_DIR;
  struct Toy {
    std::string stem;
    NcPolynomial f;
    std::vector<NcPolynomial> g;
    double analytic;
    std::shared_ptr<TracialState> witness;
  };
  const std::vector<Toy> toys{{"toy_square", P("X1^2", 1), {}, 0.0, semicircle_state(1, 1)},
                              {"toy_ball", P("X1", 1), {P("1 - X1^2", 1)}, -1.0, semicircle_state(Rational(1, 4), 1)}};
  for (const auto& t : toys) {
    const auto p = build_relaxation(t.f, t.g, 1, 1);
    std::ostringstream text;
    write_sdpa(text, p);
    if (text.str() != read_all(dir + "/" + t.stem + ".dat-s")) o.fail(t.stem + ": export differs from the fixture");
    const double opt = read_solver_optimum(dir + "/" + t.stem + ".json");
    if (std::abs(opt - t.analytic) > 1e-6) o.fail(t.stem + ": solver optimum " + fmt("%.9g", opt));
    auto r = check_feasibility(p, *t.witness, 1e-9);
    attach_solver_optimum(r, opt);
    if (!r.feasible || !*r.bound_consistent)
      o.fail(t.stem + ": witness objective " + fmt("%.9g", r.objective) + " below optimum");
    note(t.stem + ": solver optimum " + fmt("%.3g", opt) + ", witness objective " + fmt("%g", r.objective));
  }
  if (o.pass) o.summary = "4 round trips bit-exact, states feasible, corrupted table rejected, toy optima 0 and -1";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 exact kernel reproduction", ac1},
      {"AC2 normalization identity", ac2},
      {"AC3 reproducing property", ac3},
      {"AC4 inverse factorization", ac4},
      {"AC5 free-product oracle equivalence", ac5},
      {"AC6 orthobasis equivalence", ac6},
      {"AC7 variational theorem", ac7},
      {"AC8 positivity and invariance", ac8},
      {"AC9 Monte Carlo reproduction", ac9},
      {"AC10 SDP export and feasibility", ac10},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    std::cerr << name << '\n';
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double t = seconds_since(t0);
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.summary << " [" << fmt("%.1f", t) << " s]"
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed;
}
