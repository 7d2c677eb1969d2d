#include "ncck/sdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ncck/io.hpp"

namespace ncck {

MomentVariableIndex::MomentVariableIndex(std::size_t n, std::size_t d) : n_(n), d_(d) {
  if (n < 1) throw std::invalid_argument("need at least one variable");
  std::set<Word> seen;
  for (const Word& w : enumerate_words(n, 2 * d)) {
    if (w.empty()) continue;
    Word c = cyclic_canonical(w, true);
    if (seen.insert(c).second) classes_.push_back(c);
  }
  // Classes in graded-lex order of their representatives.
  std::sort(classes_.begin(), classes_.end());
  for (std::size_t i = 0; i < classes_.size(); ++i) ids_.emplace(classes_[i], i + 1);
}

std::size_t MomentVariableIndex::id(const Word& w) const {
  if (w.empty()) return 0;
  if (w.size() > 2 * d_) throw std::out_of_range("word " + to_string(w) + " exceeds the relaxation degree");
  return ids_.at(cyclic_canonical(w, true));
}

MomentVariableIndex moment_variable_index(std::size_t n, std::size_t d) { return MomentVariableIndex(n, d); }

namespace {

std::size_t half_degree(const NcPolynomial& p) {
  const long deg = p.degree();
  return deg <= 0 ? 0 : static_cast<std::size_t>((deg + 1) / 2);
}

void require_real_selfadjoint(const NcPolynomial& p, const std::string& what) {
  if (!p.has_real_coefficients()) throw std::invalid_argument(what + " must have real coefficients");
  if (!is_selfadjoint(p)) throw std::invalid_argument(what + " must be selfadjoint");
}

}  // namespace

SdpProblem build_relaxation(const NcPolynomial& f, const std::vector<NcPolynomial>& constraints, std::size_t n,
                            std::size_t d) {
  require_real_selfadjoint(f, "objective");
  for (const auto& g : constraints) require_real_selfadjoint(g, "constraint " + to_string(g));
  if (f.max_letter() > n) throw std::invalid_argument("objective uses more than " + std::to_string(n) + " variables");
  if (half_degree(f) > d) throw std::invalid_argument("relaxation degree is below half the objective degree");
  for (const auto& g : constraints) {
    if (g.max_letter() > n) throw std::invalid_argument("constraint uses more than " + std::to_string(n) + " variables");
    if (half_degree(g) > d) throw std::invalid_argument("relaxation degree is below half a constraint degree");
  }

  MomentVariableIndex index(n, d);
  SdpProblem p;
  p.n = n;
  p.degree = d;
  p.m = index.size();
  p.classes = index.classes();
  p.constraints = constraints;
  p.objective.assign(p.m, Rational(0));
  for (const auto& [w, c] : f.terms()) {
    const std::size_t id = index.id(w);
    if (id == 0) p.objective_constant += c.re;
    else p.objective[id - 1] += c.re;
  }

  auto add = [&p](std::size_t id, std::size_t block, std::size_t i, std::size_t j, const Rational& v) {
    // Constant parts move to F0 with a sign flip.
    if (id == 0) p.entries[{0, block, i, j}] -= v;
    else p.entries[{id, block, i, j}] += v;
  };

  const auto words = enumerate_words(n, d);
  p.block_sizes.push_back(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word ui = star(words[i]);
    for (std::size_t j = i; j < words.size(); ++j) add(index.id(ui * words[j]), 1, i + 1, j + 1, Rational(1));
  }

  std::size_t block = 1;
  for (const auto& g : constraints) {
    ++block;
    const auto local = enumerate_words(n, d - half_degree(g));
    p.block_sizes.push_back(local.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
      const Word vi = star(local[i]);
      for (std::size_t j = i; j < local.size(); ++j)
        for (const auto& [w, c] : g.terms()) add(index.id(vi * w * local[j]), block, i + 1, j + 1, c.re);
    }
  }

  for (auto it = p.entries.begin(); it != p.entries.end();) {
    if (sgn(it->second) == 0) it = p.entries.erase(it);
    else ++it;
  }
  return p;
}

std::vector<RationalMatrix> assemble_blocks(const SdpProblem& p, const std::vector<Rational>& y) {
  if (y.size() != p.m + 1) throw std::invalid_argument("need y_0..y_m");
  std::vector<RationalMatrix> blocks;
  for (std::size_t s : p.block_sizes) blocks.emplace_back(s, s);
  for (const auto& [key, v] : p.entries) {
    const auto& [matno, block, i, j] = key;
    Rational x = matno == 0 ? Rational(-v) : Rational(y[matno] * v);
    RationalMatrix& b = blocks[block - 1];
    b(i - 1, j - 1) += x;
    if (i != j) b(j - 1, i - 1) += x;
  }
  return blocks;
}

// ---------------------------------------------------------------------------

SdpaData to_sdpa_data(const SdpProblem& p) {
  SdpaData d;
  d.m = p.m;
  for (std::size_t s : p.block_sizes) d.block_sizes.push_back(static_cast<long>(s));
  for (const auto& c : p.objective) d.objective.push_back(c.get_d());
  for (const auto& [key, v] : p.entries) d.entries.emplace(key, v.get_d());
  return d;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_sdpa(std::ostream& out, const SdpProblem& p) {
  const SdpaData d = to_sdpa_data(p);
  out << d.m << '\n' << d.block_sizes.size() << '\n';
  for (std::size_t b = 0; b < d.block_sizes.size(); ++b) out << (b ? " " : "") << d.block_sizes[b];
  out << '\n';
  for (std::size_t i = 0; i < d.objective.size(); ++i) out << (i ? " " : "") << format_double(d.objective[i]);
  out << '\n';
  for (const auto& [key, v] : d.entries) {
    const auto& [matno, block, i, j] = key;
    out << matno << ' ' << block << ' ' << i << ' ' << j << ' ' << format_double(v) << '\n';
  }
}

void export_sdpa(const SdpProblem& p, const std::string& path) {
  std::ostringstream out;
  write_sdpa(out, p);
  write_file_atomic(path, out.str());
}

SdpaData read_sdpa(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '*' || line[b] == '"') continue;
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    lines.push_back(line);
  }
  if (lines.size() < 3) throw std::invalid_argument("SDPA file is truncated");
  SdpaData d;
  std::size_t nblocks = 0;
  {
    std::istringstream a(lines[0]), b(lines[1]);
    if (!(a >> d.m) || !(b >> nblocks)) throw std::invalid_argument("SDPA header is malformed");
  }
  std::istringstream rest;
  std::string joined;
  for (std::size_t i = 2; i < lines.size(); ++i) joined += lines[i] + '\n';
  rest.str(joined);
  d.block_sizes.resize(nblocks);
  for (auto& s : d.block_sizes)
    if (!(rest >> s)) throw std::invalid_argument("SDPA block sizes are malformed");
  d.objective.resize(d.m);
  for (auto& c : d.objective)
    if (!(rest >> c)) throw std::invalid_argument("SDPA objective is malformed");
  std::size_t matno, block, i, j;
  double v;
  while (rest >> matno >> block >> i >> j >> v) {
    if (matno > d.m || block < 1 || block > nblocks) throw std::invalid_argument("SDPA entry out of range");
    if (i > j) std::swap(i, j);
    d.entries[{matno, block, i, j}] += v;
  }
  if (!rest.eof()) throw std::invalid_argument("SDPA entry list is malformed");
  return d;
}

SdpaData read_sdpa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open SDPA file '" + path + "'");
  return read_sdpa(in);
}

// ---------------------------------------------------------------------------

FeasibilityReport check_feasibility(const SdpProblem& p, const TracialState& state, double tol) {
  if (state.variables() < p.n) throw std::invalid_argument("state has fewer variables than the relaxation");
  std::vector<Rational> y(p.m + 1, Rational(0));
  y[0] = 1;
  for (std::size_t i = 0; i < p.m; ++i) y[i + 1] = state.moment(p.classes[i]);

  FeasibilityReport report;
  report.feasible = true;
  auto blocks = assemble_blocks(p, y);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_double(blocks[b]), Eigen::EigenvaluesOnly);
    const double mn = eig.eigenvalues().minCoeff();
    report.min_eigenvalues.push_back(mn);
    if (mn < -tol) {
      report.feasible = false;
      report.failures.push_back("block " + std::to_string(b + 1) + " has eigenvalue " + format_double(mn));
    }
  }
  report.objective_exact = p.objective_constant;
  for (std::size_t i = 0; i < p.m; ++i) report.objective_exact += p.objective[i] * y[i + 1];
  report.objective = report.objective_exact.get_d();
  return report;
}

void attach_solver_optimum(FeasibilityReport& report, double optimum, double tol) {
  report.solver_optimum = optimum;
  report.bound_consistent = optimum <= report.objective + tol;
}

double read_solver_optimum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solver output '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("solver output '" + path + "' is not JSON: " + e.what());
  }
  if (!j.contains("optimum") || !j["optimum"].is_number())
    throw std::invalid_argument("solver output '" + path + "' has no numeric 'optimum'");
  return j["optimum"].get<double>();
}

std::vector<NcPolynomial> read_constraints(std::istream& in, std::size_t n) {
  std::vector<NcPolynomial> out;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_poly(line, n));
  }
  return out;
}

std::vector<NcPolynomial> read_constraints_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open constraint file '" + path + "'");
  return read_constraints(in, n);
}

}  // namespace ncck
