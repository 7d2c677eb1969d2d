// ncck: command-line front end for the kernel, sampling and relaxation tools.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "ncck/experiments.hpp"
#include "ncck/gram.hpp"
#include "ncck/io.hpp"
#include "ncck/kernel.hpp"
#include "ncck/sdp.hpp"
#include "ncck/traces.hpp"

namespace {

using ncck::Rational;
using json = nlohmann::json;

/// Bad flag values, grammar errors and unknown names.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LawFlags {
  std::string law = "semicircle";
  std::size_t vars = 1;
  std::string variance = "1";
  std::string c = "1";
  std::string moments;
};

void add_law_flags(CLI::App* app, LawFlags& f) {
  app->add_option("--law", f.law, "semicircle | poisson | table")->capture_default_str();
  app->add_option("--vars", f.vars, "number of free variables")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--variance", f.variance, "semicircle variance (p/q or decimal)")->capture_default_str();
  app->add_option("--c", f.c, "free Poisson rate c (p/q or decimal)")->capture_default_str();
  app->add_option("--moments", f.moments, "moment table CSV for --law table");
}

Rational rational_flag(const std::string& name, const std::string& text) {
  try {
    return ncck::parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

std::shared_ptr<ncck::TracialState> state_from(const LawFlags& f) {
  if (f.law != "semicircle" && f.law != "poisson" && f.law != "table")
    throw UsageError("unknown law '" + f.law + "' (expected semicircle, poisson or table)");
  if (f.law == "table" && f.moments.empty()) throw UsageError("--law table needs --moments FILE");
  return ncck::make_state(f.law, f.vars, rational_flag("variance", f.variance), rational_flag("c", f.c), f.moments);
}

ncck::NcPolynomial poly_flag(const std::string& name, const std::string& text, std::size_t n) {
  try {
    return ncck::parse_poly(text, n);
  } catch (const ncck::ParseError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) std::cout << content << std::flush;
  else ncck::write_file_atomic(out_path, content);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("NCCK_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw UsageError("NCCK_WORKERS must be a positive integer");
  }
  return 1;
}

json report_json(const ncck::StateReport& r) {
  json j;
  j["degree"] = r.degree;
  j["psd"] = r.psd;
  j["min_eigenvalue"] = r.min_eigenvalue;
  if (r.exact_psd) j["exact_psd"] = *r.exact_psd;
  j["tracial"] = r.tracial;
  j["star_symmetric"] = r.star_symmetric;
  j["growth"] = r.growth;
  j["failures"] = r.failures;
  return j;
}

ncck::GoeScaling scaling_from(const std::string& s) {
  if (s == "half") return ncck::GoeScaling::half;
  if (s == "wigner") return ncck::GoeScaling::wigner;
  throw UsageError("--goe-scaling must be half or wigner");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative Christoffel-Darboux kernels, level-set sampling and tracial relaxations"};
  app.require_subcommand(1);

  LawFlags law;
  std::size_t degree = 2;
  std::string out_path;
  std::string format = "text";
  auto format_check = CLI::IsMember({"text", "csv", "json"});

  auto* moments = app.add_subcommand("moments", "print the moments tau(w) for |w| <= 2d");
  add_law_flags(moments, law);
  moments->add_option("--degree", degree, "degree d")->capture_default_str();
  moments->add_option("--out", out_path, "output file (atomic write)");
  moments->add_option("--format", format, "text | csv | json")->check(format_check)->capture_default_str();

  bool orthonormal = false;
  auto* ortho = app.add_subcommand("ortho", "print the monic orthogonal polynomials and their squared norms");
  add_law_flags(ortho, law);
  ortho->add_option("--degree", degree, "degree d")->capture_default_str();
  ortho->add_flag("--orthonormal", orthonormal, "print the numeric orthonormal P_w instead");
  ortho->add_option("--out", out_path, "output file (atomic write)");
  ortho->add_option("--format", format, "text | csv | json")->check(format_check)->capture_default_str();

  auto* kernel = app.add_subcommand("kernel", "print the diagonal kernel polynomial kappa(X,X)(1)");
  add_law_flags(kernel, law);
  kernel->add_option("--degree", degree, "degree d")->capture_default_str();
  kernel->add_option("--out", out_path, "output file (atomic write)");
  kernel->add_option("--format", format, "text | csv | json")->check(format_check)->capture_default_str();

  bool exact = false;
  auto* verify = app.add_subcommand("verify", "check positivity, traciality and growth of a state (JSON report)");
  add_law_flags(verify, law);
  verify->add_option("--degree", degree, "degree d")->capture_default_str();
  verify->add_flag("--exact", exact, "also check positivity by exact elimination");
  verify->add_option("--out", out_path, "output file (atomic write)");
  verify->add_option("--format", format, "json")->check(CLI::IsMember({"json"}));

  std::size_t k = 2, samples = 100000, workers = 0;
  double epsilon = 0.7, sigma = 1.0, target = 0.0;
  std::string observable = "X1^2", sampler_name, goe_scaling = "half";
  std::uint64_t seed = 1, probe_draws = 10'000'000, max_draws = 1'000'000'000;
  auto* sample = app.add_subcommand("sample", "Monte Carlo mean of tr_k f over the level-set band (CSV row)");
  add_law_flags(sample, law);
  sample->add_option("--degree", degree, "degree d")->capture_default_str();
  sample->add_option("--k", k, "matrix size")->capture_default_str()->check(CLI::PositiveNumber);
  sample->add_option("--epsilon", epsilon, "band half-width")->capture_default_str();
  sample->add_option("--samples", samples, "accepted samples N")->capture_default_str()->check(CLI::PositiveNumber);
  sample->add_option("--observable", observable, "observable polynomial f")->capture_default_str();
  sample->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  sample->add_option("--workers", workers, "worker threads (default: NCCK_WORKERS or 1)");
  sample->add_option("--sigma", sigma, "GOE scale")->capture_default_str();
  sample->add_option("--sampler", sampler_name, "goe | wishart (default: wishart for poisson, else goe)");
  sample->add_option("--goe-scaling", goe_scaling, "half | wigner")->capture_default_str();
  sample->add_option("--target", target, "level (default: number of variables)");
  sample->add_option("--probe-draws", probe_draws, "draws before the acceptance-rate check")->capture_default_str();
  sample->add_option("--max-draws", max_draws, "hard cap on draws")->capture_default_str();
  sample->add_option("--out", out_path, "output file (atomic write)");
  sample->add_option("--format", format, "csv | json | text")->check(format_check);

  std::string config_path;
  auto* figure = app.add_subcommand("figure", "run a (d, k) grid from a config file (CSV)");
  figure->add_option("config", config_path, "config file with key = value lines")->required();
  figure->add_option("--workers", workers, "worker threads (default: config, NCCK_WORKERS or 1)");
  figure->add_option("--out", out_path, "output file (atomic write)");

  std::string constraints_path, solution_path;
  double tol = 1e-9;
  auto* sdp_export = app.add_subcommand("sdp-export", "write the tracial relaxation in SDPA sparse format");
  sdp_export->add_option("--vars", law.vars, "number of variables")->capture_default_str()->check(CLI::PositiveNumber);
  sdp_export->add_option("--degree", degree, "relaxation degree d")->capture_default_str();
  sdp_export->add_option("--observable", observable, "objective polynomial f")->capture_default_str();
  sdp_export->add_option("--constraints", constraints_path, "file with one constraint polynomial per line");
  sdp_export->add_option("--out", out_path, "output .dat-s file")->required();

  auto* sdp_check = app.add_subcommand("sdp-check", "check a state against the relaxation (JSON report)");
  add_law_flags(sdp_check, law);
  sdp_check->add_option("--degree", degree, "relaxation degree d")->capture_default_str();
  sdp_check->add_option("--observable", observable, "objective polynomial f")->capture_default_str();
  sdp_check->add_option("--constraints", constraints_path, "file with one constraint polynomial per line");
  sdp_check->add_option("--solution", solution_path, "external solver output with an 'optimum' field");
  sdp_check->add_option("--tol", tol, "eigenvalue tolerance")->capture_default_str();
  sdp_check->add_option("--out", out_path, "output file (atomic write)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*moments) {
      auto state = state_from(law);
      std::ostringstream out;
      if (format == "csv") {
        ncck::write_moment_table(out, *state, degree);
      } else {
        std::stringstream table;
        ncck::write_moment_table(table, *state, degree);
        std::string line;
        std::getline(table, line);  // header
        json j = json::object();
        while (std::getline(table, line)) {
          auto comma = line.find(',');
          if (format == "json") j[line.substr(0, comma)] = line.substr(comma + 1);
          else out << "tau(" << line.substr(0, comma) << ") = " << line.substr(comma + 1) << '\n';
        }
        if (format == "json") out << j.dump(2) << '\n';
      }
      emit(out_path, out.str());
    } else if (*ortho) {
      auto state = state_from(law);
      auto basis = ncck::gram_schmidt(*state, degree);
      std::ostringstream out;
      json j = json::array();
      if (format == "csv") out << (orthonormal ? "word,polynomial\n" : "word,nu,polynomial\n");
      Eigen::MatrixXd d;
      if (orthonormal) d = basis.orthonormal_matrix();
      for (std::size_t r = 0; r < basis.retained.size(); ++r) {
        const std::string w = ncck::to_string(basis.retained[r]);
        std::string poly;
        if (orthonormal) {
          std::ostringstream p;
          bool first = true;
          for (std::size_t u = 0; u < basis.words.size(); ++u) {
            const double x = d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(u));
            if (x == 0.0) continue;
            p << (first ? "" : " + ") << fmt17(x);
            if (!basis.words[u].empty()) p << '*' << ncck::to_power_string(basis.words[u]);
            first = false;
          }
          poly = p.str();
        } else {
          poly = ncck::to_string(basis.monic(r));
        }
        const std::string nu = basis.norms[r].get_str();
        if (format == "csv") out << w << ',' << (orthonormal ? "" : nu + ",") << poly << '\n';
        else if (format == "json") j.push_back(orthonormal ? json{{"word", w}, {"polynomial", poly}}
                                                           : json{{"word", w}, {"nu", nu}, {"polynomial", poly}});
        else out << (orthonormal ? "P[" : "Q[") << w << "] = " << poly << (orthonormal ? "" : "    nu = " + nu) << '\n';
      }
      if (format == "json") out << json{{"retained", j}, {"dropped", [&] {
                                            json dj = json::array();
                                            for (const auto& w : basis.dropped) dj.push_back(ncck::to_string(w));
                                            return dj;
                                          }()}}.dump(2)
                                << '\n';
      else if (format == "text" && !basis.dropped.empty()) {
        out << "dropped:";
        for (const auto& w : basis.dropped) out << ' ' << ncck::to_string(w);
        out << '\n';
      }
      emit(out_path, out.str());
    } else if (*kernel) {
      auto state = state_from(law);
      auto kr = ncck::cd_kernel(state, degree);
      const auto& p = kr->diagonal();
      std::ostringstream out;
      if (format == "csv") {
        out << "word,coefficient\n";
        for (const auto& [w, c] : p.terms()) out << ncck::to_string(w) << ',' << ncck::to_string(c) << '\n';
      } else if (format == "json") {
        out << json{{"degree", degree}, {"law", state->describe()}, {"polynomial", ncck::to_string(p)}}.dump(2) << '\n';
      } else {
        out << ncck::to_string(p) << '\n';
      }
      emit(out_path, out.str());
    } else if (*verify) {
      auto state = state_from(law);
      ncck::VerifyOptions opts;
      opts.exact = exact;
      json j = report_json(ncck::verify_state(*state, degree, opts));
      j["law"] = state->describe();
      emit(out_path, j.dump(2) + "\n");
    } else if (*sample) {
      auto state = state_from(law);
      const auto f = poly_flag("observable", observable, law.vars);
      ncck::SamplerConfig sc;
      if (sampler_name.empty()) sampler_name = law.law == "poisson" ? "wishart" : "goe";
      if (sampler_name == "goe") sc.law = ncck::SamplerLaw::goe;
      else if (sampler_name == "wishart") sc.law = ncck::SamplerLaw::wishart;
      else throw UsageError("--sampler must be goe or wishart");
      sc.k = k;
      sc.sigma = sigma;
      sc.scaling = scaling_from(goe_scaling);
      sc.c = rational_flag("c", law.c).get_d();
      sc.seed = seed;
      sc.workers = workers ? workers : default_workers();
      try {
        sc.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      ncck::LevelSetSpec spec;
      spec.target = target > 0.0 ? target : static_cast<double>(law.vars);
      spec.epsilon = epsilon;
      spec.k = k;
      spec.degree = degree;
      ncck::RejectionOptions ro;
      ro.probe_draws = probe_draws;
      ro.max_draws = max_draws;
      auto kr = ncck::cd_kernel(state, degree);
      auto report = ncck::rejection_sample(*kr, spec, sc, samples, f, ro);
      std::ostringstream out;
      if (format == "json") {
        out << json{{"d", report.degree},       {"k", k},
                    {"epsilon", epsilon},        {"N", report.accepted},
                    {"draws", report.draws},     {"accept_rate", report.accept_rate},
                    {"mean", report.mean},       {"stderr", report.std_error},
                    {"seed", seed},              {"workers", sc.workers},
                    {"simd", report.simd},       {"wall_seconds", report.wall_seconds}}
                   .dump(2)
            << '\n';
      } else {
        ncck::write_csv(out, {report});
      }
      emit(out_path, out.str());
    } else if (*figure) {
      ncck::FigureConfig cfg;
      try {
        cfg = ncck::read_figure_config(config_path);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (workers) cfg.workers = workers;
      else if (std::getenv("NCCK_WORKERS") && cfg.workers == 1) cfg.workers = default_workers();
      poly_flag("observable", cfg.observable, cfg.vars);
      std::ostringstream out;
      ncck::write_csv(out, ncck::run_figure(cfg));
      emit(out_path, out.str());
    } else if (*sdp_export) {
      const auto f = poly_flag("observable", observable, law.vars);
      std::vector<ncck::NcPolynomial> g;
      if (!constraints_path.empty()) g = ncck::read_constraints_file(constraints_path, law.vars);
      ncck::SdpProblem p;
      try {
        p = ncck::build_relaxation(f, g, law.vars, degree);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      ncck::export_sdpa(p, out_path);
      std::cerr << "m = " << p.m << ", blocks =";
      for (auto s : p.block_sizes) std::cerr << ' ' << s;
      std::cerr << ", objective constant = " << p.objective_constant.get_str() << '\n';
    } else if (*sdp_check) {
      auto state = state_from(law);
      const auto f = poly_flag("observable", observable, law.vars);
      std::vector<ncck::NcPolynomial> g;
      if (!constraints_path.empty()) g = ncck::read_constraints_file(constraints_path, law.vars);
      ncck::SdpProblem p;
      try {
        p = ncck::build_relaxation(f, g, law.vars, degree);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      auto report = ncck::check_feasibility(p, *state, tol);
      if (!solution_path.empty()) ncck::attach_solver_optimum(report, ncck::read_solver_optimum(solution_path));
      json j{{"feasible", report.feasible},
             {"min_eigenvalues", report.min_eigenvalues},
             {"objective", report.objective},
             {"objective_exact", report.objective_exact.get_str()},
             {"failures", report.failures}};
      if (report.solver_optimum) {
        j["solver_optimum"] = *report.solver_optimum;
        j["bound_consistent"] = *report.bound_consistent;
      }
      emit(out_path, j.dump(2) + "\n");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
