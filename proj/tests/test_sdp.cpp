#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ncck/sdp.hpp"
#include "oracles.hpp"

using namespace ncck;

namespace {

NcPolynomial P(const char* t, std::size_t n = 1) { return parse_poly(t, n); }

std::string sdpa_text(const SdpProblem& p) {
  std::ostringstream out;
  write_sdpa(out, p);
  return out.str();
}

}  // namespace

TEST_CASE("moment variable index") {
  const MomentVariableIndex one(1, 1);
  CHECK(one.size() == 2);
  CHECK(one.representative(1) == Word{1});
  CHECK(one.representative(2) == Word{1, 1});
  CHECK(one.id(Word{}) == 0);
  const MomentVariableIndex two(2, 1);
  CHECK(two.id(Word{1, 2}) == two.id(Word{2, 1}));
  std::set<std::size_t> len2;
  for (const auto& w : enumerate_words_of_length(2, 2)) len2.insert(two.id(w));
  CHECK(len2.size() == 3);
  CHECK_THROWS_AS(two.id(Word{1, 1, 1}), std::out_of_range);
  CHECK_THROWS(MomentVariableIndex(0, 1));
}

TEST_CASE("class counts match brute-force orbits") {
  const MomentVariableIndex idx(2, 4);
  std::size_t expected = 0;
  for (std::size_t len = 1; len <= 8; ++len) expected += oracle::cyclic_star_classes(2, len);
  CHECK(idx.size() == expected);
}

TEST_CASE("toy relaxation f = X^2") {
  const auto p = build_relaxation(P("X1^2"), {}, 1, 1);
  CHECK(p.m == 2);
  CHECK(p.block_sizes == std::vector<std::size_t>{2});
  CHECK(p.objective == std::vector<Rational>{0, 1});
  // F0 carries -1 at (1,1); F1 at (1,2); F2 at (2,2).
  CHECK(p.entries.at({0, 1, 1, 1}) == -1);
  CHECK(p.entries.at({1, 1, 1, 2}) == 1);
  CHECK(p.entries.at({2, 1, 2, 2}) == 1);
  CHECK(p.entries.size() == 3);
  CHECK(sdpa_text(p) == "2\n1\n2\n0 1\n0 1 1 1 -1\n1 1 1 2 1\n2 1 2 2 1\n");

  const auto r = check_feasibility(p, *semicircle_state(1, 1));
  CHECK(r.feasible);
  CHECK(r.objective == 1.0);
}

TEST_CASE("toy relaxation f = X on 1 - X^2 >= 0") {
  const auto p = build_relaxation(P("X1"), {P("1 - X1^2")}, 1, 1);
  CHECK(p.block_sizes == std::vector<std::size_t>{2, 1});
  const auto blocks = assemble_blocks(p, {1, -1, 1});
  CHECK(blocks[1](0, 0) == 0);
  CHECK(blocks[0](0, 1) == -1);
}

TEST_CASE("localizing block for g = 1 equals the moment block") {
  const auto p = build_relaxation(P("X1^2 + X2^2", 2), {P("1", 2)}, 2, 2);
  REQUIRE(p.block_sizes == std::vector<std::size_t>{7, 7});
  for (const auto& [key, v] : p.entries) {
    const auto& [matno, block, i, j] = key;
    const std::size_t other = block == 1 ? 2 : 1;
    CHECK(p.entries.at({matno, other, i, j}) == v);
  }
}

TEST_CASE("block sizes and input validation") {
  const auto p = build_relaxation(P("X1*X2 + X2*X1", 2), {P("1 - X1^2 - X2^2", 2)}, 2, 2);
  std::istringstream lines(sdpa_text(p));
  std::string l1, l2, l3;
  std::getline(lines, l1);
  std::getline(lines, l2);
  std::getline(lines, l3);
  CHECK(l2 == "2");
  CHECK(l3 == "7 3");
  CHECK(build_relaxation(P("X1^2"), {}, 1, 2).block_sizes.size() == 1);
  CHECK_THROWS_AS(build_relaxation(P("X1*X2", 2), {}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_relaxation(P("X1^4"), {}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_relaxation(P("X1"), {P("1 - X1^6")}, 1, 2), std::invalid_argument);
  NcPolynomial complex_f(Word{1}, GaussianRational(Rational(1), Rational(1)));
  CHECK_THROWS_AS(build_relaxation(complex_f, {}, 1, 1), std::invalid_argument);
}

TEST_CASE("moment block reconstructs the moment matrix") {
  for (auto st : {std::shared_ptr<TracialState>(semicircle_state(1, 2)),
                  std::shared_ptr<TracialState>(free_poisson_state(5, 2))}) {
    const auto p = build_relaxation(P("X1^2", 2), {}, 2, 2);
    std::vector<Rational> y{1};
    for (const auto& w : p.classes) y.push_back(st->moment(w));
    const auto blocks = assemble_blocks(p, y);
    CHECK(blocks[0] == moment_matrix(*st, 2).entries);
  }
}

TEST_CASE("feasibility checks") {
  const auto p1 = build_relaxation(P("X1^2"), {}, 1, 2);
  CHECK(check_feasibility(p1, *semicircle_state(1, 1)).feasible);
  const auto p2 = build_relaxation(P("X1*X2 + X2*X1", 2), {}, 2, 2);
  const auto r = check_feasibility(p2, *free_poisson_state(5, 2));
  CHECK(r.feasible);
  CHECK(r.objective_exact == 50);

  std::map<Word, Rational> t{{Word{}, 1}, {Word{1}, 0}, {Word{1, 1}, -1}};
  const auto bad = check_feasibility(build_relaxation(P("X1^2"), {}, 1, 1), *moment_table_state(t, 1, 1));
  CHECK_FALSE(bad.feasible);
  CHECK(bad.min_eigenvalues[0] < 0);
  CHECK_FALSE(bad.failures.empty());

  std::map<Word, Rational> shortt{{Word{}, 1}, {Word{1}, 0}, {Word{1, 1}, 1}};
  CHECK_THROWS_AS(check_feasibility(p1, *moment_table_state(shortt, 1, 1)), MissingMomentError);

  FeasibilityReport rep = check_feasibility(p1, *semicircle_state(1, 1));
  attach_solver_optimum(rep, 0.0);
  CHECK(*rep.bound_consistent);
  attach_solver_optimum(rep, 2.0);
  CHECK_FALSE(*rep.bound_consistent);
}

TEST_CASE("SDPA round trip") {
  const auto p = build_relaxation(P("X1*X1*X2*X2*X1*X1 - 1/3*X1", 2), {P("1 - X1^2", 2), P("2 - X2^2", 2)}, 2, 3);
  const std::string text = sdpa_text(p);
  std::istringstream in(text);
  CHECK(read_sdpa(in) == to_sdpa_data(p));
  CHECK(sdpa_text(p) == text);

  const auto dir = std::filesystem::temp_directory_path() / "ncck_sdp_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "toy.dat-s").string();
  export_sdpa(p, path);
  CHECK(read_sdpa_file(path) == to_sdpa_data(p));
  std::ifstream f(path);
  std::stringstream content;
  content << f.rdbuf();
  CHECK(content.str() == text);

  std::istringstream commented("* a comment\n\"title\n1\n1\n{2}\n(1.5)\n0 1 1 1 -1\n1 1 2 1 1\n");
  const auto d = read_sdpa(commented);
  CHECK(d.m == 1);
  CHECK(d.objective[0] == 1.5);
  CHECK(d.entries.count({1, 1, 1, 2}) == 1);
  std::istringstream broken("1\n1\n2\n0\n0 1 1 1 x\n");
  CHECK_THROWS_AS(read_sdpa(broken), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("constraint files and solver outputs") {
  std::istringstream in("1 - X1^2  # ball\n\n2 - X2^2\n");
  const auto g = read_constraints(in, 2);
  REQUIRE(g.size() == 2);
  CHECK(g[1] == P("2 - X2^2", 2));
  const auto dir = std::filesystem::temp_directory_path() / "ncck_sdp_json";
  std::filesystem::create_directories(dir);
  const auto good = (dir / "good.json").string(), bad = (dir / "bad.json").string();
  std::ofstream(good) << R"({"optimum": -0.99999999, "status": "optimal"})";
  std::ofstream(bad) << R"({"status": "infeasible"})";
  CHECK(read_solver_optimum(good) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_THROWS_AS(read_solver_optimum(bad), std::invalid_argument);
  CHECK_THROWS(read_solver_optimum((dir / "missing.json").string()));
  std::filesystem::remove_all(dir);
}
