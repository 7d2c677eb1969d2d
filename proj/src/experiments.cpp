#include "ncck/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "ncck/evaluator.hpp"

namespace ncck {

void SamplerConfig::validate() const {
  if (k < 1) throw std::invalid_argument("matrix size k must be at least 1");
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  if (law == SamplerLaw::goe && !(sigma > 0.0)) throw std::invalid_argument("GOE sigma must be positive");
  if (law == SamplerLaw::wishart) {
    const double m = c * static_cast<double>(k);
    if (!(c > 0.0) || std::abs(m - std::round(m)) > 1e-9 || std::round(m) < 1.0)
      throw std::invalid_argument("Wishart needs M = c*k to be a positive integer");
  }
}

std::size_t SamplerConfig::wishart_columns() const {
  return static_cast<std::size_t>(std::llround(c * static_cast<double>(k)));
}

namespace {

void fill_goe(Eigen::MatrixXd& a, double sigma, GoeScaling scaling, std::mt19937_64& rng,
              std::normal_distribution<double>& normal) {
  const auto k = a.rows();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = normal(rng);
  const double scale = scaling == GoeScaling::half ? sigma / 2.0 : sigma / std::sqrt(2.0 * static_cast<double>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    a(i, i) = 2.0 * a(i, i) * scale;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double s = (a(i, j) + a(j, i)) * scale;
      a(i, j) = s;
      a(j, i) = s;
    }
  }
}

void fill_wishart(CMatrix& a, CMatrix& g, std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  const double half = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng) * half;
      const double im = normal(rng) * half;
      g(i, j) = Complex(re, im);
    }
  a.noalias() = g * g.adjoint();
  a /= static_cast<double>(g.rows());
}

}  // namespace

Eigen::MatrixXd sample_goe(std::size_t k, double sigma, std::mt19937_64& rng, GoeScaling scaling) {
  if (!(sigma > 0.0)) throw std::invalid_argument("GOE sigma must be positive");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  std::normal_distribution<double> normal;
  fill_goe(a, sigma, scaling, rng, normal);
  return a;
}

CMatrix sample_wishart(std::size_t k, std::size_t m, std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("Wishart needs M >= 1");
  const auto kk = static_cast<Eigen::Index>(k);
  CMatrix g(kk, static_cast<Eigen::Index>(m));
  CMatrix a(kk, kk);
  std::normal_distribution<double> normal;
  fill_wishart(a, g, rng, normal);
  return a;
}

// ---------------------------------------------------------------------------

namespace {

struct WorkerResult {
  std::vector<double> values;
  std::vector<MatrixTuple> kept;
  std::uint64_t draws = 0;
  std::exception_ptr error;
};

void run_worker(const KernelRep& kernel, const LevelSetSpec& spec, const SamplerConfig& sampler, const NcPolynomial& f,
                const RejectionOptions& options, const simd::Kernels& kernels, std::size_t worker, std::size_t quota,
                std::size_t keep_quota, std::atomic<bool>& abort, WorkerResult& out) {
  try {
    const std::size_t n = kernel.variables();
    const std::size_t k = sampler.k;
    const bool complex_law = sampler.law == SamplerLaw::wishart;
    const std::size_t m = complex_law ? 2 * k : k;
    const auto kk = static_cast<Eigen::Index>(k);

    std::mt19937_64 rng(sampler.seed ^ static_cast<std::uint64_t>(worker));
    std::normal_distribution<double> normal;
    TraceEvaluator evaluator(kernel, kernels);
    ObservableEvaluator observable(f, kernels);

    std::vector<Eigen::MatrixXd> real(n, Eigen::MatrixXd(kk, kk));
    std::vector<CMatrix> cplx(n, CMatrix(kk, kk));
    CMatrix g(kk, static_cast<Eigen::Index>(complex_law ? sampler.wishart_columns() : 1));
    std::vector<std::vector<double>> flat(n, std::vector<double>(m * m));
    std::vector<const double*> ptrs(n);
    for (std::size_t i = 0; i < n; ++i) ptrs[i] = flat[i].data();

    const std::uint64_t cap = std::max<std::uint64_t>(1, options.max_draws / sampler.workers);
    const std::uint64_t probe = std::max<std::uint64_t>(1, options.probe_draws / sampler.workers);
    out.values.reserve(quota);
    while (out.values.size() < quota) {
      if (abort.load(std::memory_order_relaxed)) return;
      if (out.draws >= cap)
        throw AcceptanceError("no completion within " + std::to_string(options.max_draws) + " draws");
      if (out.draws == probe) {
        const double rate = static_cast<double>(out.values.size()) / static_cast<double>(out.draws);
        if (rate < options.min_accept_rate) {
          char msg[160];
          std::snprintf(msg, sizeof msg, "acceptance rate %g after %zu draws is below %g", rate,
                        static_cast<std::size_t>(out.draws), options.min_accept_rate);
          throw AcceptanceError(msg);
        }
      }
      ++out.draws;
      for (std::size_t i = 0; i < n; ++i) {
        if (complex_law) {
          fill_wishart(cplx[i], g, rng, normal);
          realify(cplx[i], flat[i]);
        } else {
          fill_goe(real[i], sampler.sigma, sampler.scaling, rng, normal);
          // Symmetric, so column-major storage is already row-major.
          std::copy(real[i].data(), real[i].data() + m * m, flat[i].begin());
        }
      }
      const double phi = evaluator.siciak(ptrs, m);
      if (!in_band(spec, phi)) continue;
      out.values.push_back(observable.evaluate(ptrs, m, complex_law));
      if (out.kept.size() < keep_quota) {
        MatrixTuple t;
        for (std::size_t i = 0; i < n; ++i) t.push_back(complex_law ? cplx[i] : CMatrix(real[i].cast<Complex>()));
        out.kept.push_back(std::move(t));
      }
    }
  } catch (...) {
    out.error = std::current_exception();
    abort.store(true);
  }
}

}  // namespace

SampleReport rejection_sample(const KernelRep& kernel, const LevelSetSpec& spec, const SamplerConfig& sampler,
                              std::size_t n_accept, const NcPolynomial& f, const RejectionOptions& options) {
  sampler.validate();
  if (n_accept < 1) throw std::invalid_argument("need at least one accepted sample");
  if (kernel.degree() < 1) throw std::invalid_argument("level sets need degree >= 1");
  if (spec.k != sampler.k) throw std::invalid_argument("level-set matrix size differs from the sampler's");
  if (f.max_letter() > kernel.variables()) throw std::invalid_argument("observable uses more variables than the state");
  const simd::Kernels& kernels = options.kernels ? *options.kernels : simd::active_kernels();

  const auto start = std::chrono::steady_clock::now();
  const std::size_t workers = sampler.workers;
  std::vector<WorkerResult> results(workers);
  std::atomic<bool> abort{false};
  auto quota = [&](std::size_t w) { return n_accept / workers + (w < n_accept % workers ? 1 : 0); };
  auto keep = [&](std::size_t w) { return options.keep_samples / workers + (w < options.keep_samples % workers ? 1 : 0); };

  if (workers == 1) {
    run_worker(kernel, spec, sampler, f, options, kernels, 0, quota(0), keep(0), abort, results[0]);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        run_worker(kernel, spec, sampler, f, options, kernels, w, quota(w), keep(w), abort, results[w]);
      });
  }
  for (const auto& r : results)
    if (r.error) std::rethrow_exception(r.error);

  SampleReport report;
  report.sampler = sampler;
  report.degree = kernel.degree();
  report.epsilon = spec.epsilon;
  report.target = spec.target;
  report.requested = n_accept;
  report.simd = kernels.name;
  std::vector<double> values;
  values.reserve(n_accept);
  for (auto& r : results) {
    values.insert(values.end(), r.values.begin(), r.values.end());
    report.draws += r.draws;
    for (auto& t : r.kept) report.kept.push_back(std::move(t));
  }
  report.accepted = values.size();
  report.accept_rate = static_cast<double>(report.accepted) / static_cast<double>(report.draws);
  double sum = 0.0;
  for (double v : values) sum += v;
  report.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - report.mean) * (v - report.mean);
  const double var = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
  report.std_error = std::sqrt(var / static_cast<double>(values.size()));
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------

std::shared_ptr<TracialState> make_state(const std::string& law, std::size_t vars, const Rational& variance,
                                         const Rational& c, const std::string& moments_path) {
  if (law == "semicircle") return semicircle_state(variance, vars);
  if (law == "poisson") return free_poisson_state(c, vars);
  if (law == "table") {
    if (moments_path.empty()) throw std::invalid_argument("law 'table' needs a moment file");
    return read_moment_table_file(moments_path, vars);
  }
  throw std::invalid_argument("unknown law '" + law + "' (expected semicircle, poisson or table)");
}

std::vector<std::pair<std::size_t, std::size_t>> FigureConfig::grid() const {
  if (!points.empty()) return points;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k : ks)
    for (std::size_t d : degrees) out.emplace_back(d, k);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::string t = s;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string item; in >> item;) out.push_back(item);
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-') throw std::invalid_argument("config key '" + key + "': bad integer '" + v + "'");
  return static_cast<std::size_t>(x);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("config key '" + key + "': bad number '" + v + "'");
  return x;
}

std::vector<std::size_t> to_sizes(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(v)) {
    // Ranges "a-b" expand inclusively.
    if (auto dash = item.find('-'); dash != std::string::npos && dash > 0) {
      std::size_t lo = to_size(key, item.substr(0, dash)), hi = to_size(key, item.substr(dash + 1));
      for (std::size_t x = lo; x <= hi; ++x) out.push_back(x);
    } else {
      out.push_back(to_size(key, item));
    }
  }
  return out;
}

}  // namespace

FigureConfig parse_figure_config(std::istream& in) {
  FigureConfig cfg;
  bool sampler_set = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "law") cfg.law = value;
    else if (key == "vars") cfg.vars = to_size(key, value);
    else if (key == "degree" || key == "degrees") cfg.degrees = to_sizes(key, value);
    else if (key == "k") cfg.ks = to_sizes(key, value);
    else if (key == "points") {
      cfg.points.clear();
      for (const auto& item : split_list(value)) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("config key 'points': expected d:k, got '" + item + "'");
        cfg.points.emplace_back(to_size(key, item.substr(0, colon)), to_size(key, item.substr(colon + 1)));
      }
    } else if (key == "epsilon") cfg.epsilon = to_double(key, value);
    else if (key == "samples") cfg.samples = to_size(key, value);
    else if (key == "observable") cfg.observable = value;
    else if (key == "seed") cfg.seed = to_size(key, value);
    else if (key == "sigma") cfg.sigma = to_double(key, value);
    else if (key == "variance") cfg.variance = parse_rational(value);
    else if (key == "c") cfg.c = parse_rational(value);
    else if (key == "moments") cfg.moments = value;
    else if (key == "workers") cfg.workers = to_size(key, value);
    else if (key == "target") cfg.target = to_double(key, value);
    else if (key == "max_draws") cfg.rejection.max_draws = to_size(key, value);
    else if (key == "probe_draws") cfg.rejection.probe_draws = to_size(key, value);
    else if (key == "sampler") {
      if (value == "goe") cfg.sampler = SamplerLaw::goe;
      else if (value == "wishart") cfg.sampler = SamplerLaw::wishart;
      else throw std::invalid_argument("config key 'sampler': expected goe or wishart");
      sampler_set = true;
    } else if (key == "goe_scaling") {
      if (value == "half") cfg.scaling = GoeScaling::half;
      else if (value == "wigner") cfg.scaling = GoeScaling::wigner;
      else throw std::invalid_argument("config key 'goe_scaling': expected half or wigner");
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!sampler_set) cfg.sampler = cfg.law == "poisson" ? SamplerLaw::wishart : SamplerLaw::goe;
  if (cfg.points.empty() && (cfg.degrees.empty() || cfg.ks.empty()))
    throw std::invalid_argument("config needs degree and k lists or points");
  return cfg;
}

FigureConfig read_figure_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_figure_config(in);
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t d, std::size_t k) {
  // splitmix64 finalizer over the packed grid coordinates
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (1 + (static_cast<std::uint64_t>(d) << 32 | k));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<SampleReport> run_figure(const FigureConfig& cfg) {
  auto state = make_state(cfg.law, cfg.vars, cfg.variance, cfg.c, cfg.moments);
  NcPolynomial f = parse_poly(cfg.observable, cfg.vars);
  std::map<std::size_t, std::shared_ptr<const KernelRep>> kernels;
  std::vector<SampleReport> out;
  for (const auto& [d, k] : cfg.grid()) {
    auto& kernel = kernels[d];
    if (!kernel) kernel = cd_kernel(state, d);
    SamplerConfig sampler;
    sampler.law = cfg.sampler;
    sampler.k = k;
    sampler.sigma = cfg.sigma;
    sampler.scaling = cfg.scaling;
    sampler.c = cfg.c.get_d();
    sampler.seed = point_seed(cfg.seed, d, k);
    sampler.workers = cfg.workers;
    LevelSetSpec spec;
    spec.target = cfg.target > 0.0 ? cfg.target : static_cast<double>(cfg.vars);
    spec.epsilon = cfg.epsilon;
    spec.k = k;
    spec.degree = d;
    out.push_back(rejection_sample(*kernel, spec, sampler, cfg.samples, f, cfg.rejection));
  }
  return out;
}

void write_csv_header(std::ostream& out) { out << "d,k,epsilon,N,accept_rate,mean,stderr\n"; }

void write_csv_row(std::ostream& out, const SampleReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%zu,%.17g,%.17g,%.17g\n", r.degree, r.sampler.k, r.epsilon, r.accepted,
                r.accept_rate, r.mean, r.std_error);
  out << buf;
}

void write_csv(std::ostream& out, const std::vector<SampleReport>& reports) {
  write_csv_header(out);
  for (const auto& r : reports) write_csv_row(out, r);
}

}  // namespace ncck
