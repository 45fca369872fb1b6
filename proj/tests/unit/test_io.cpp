#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <optional>
#include <sstream>

#include <sdpkit/io.hpp>
#include <sdpkit/sdp_solver.hpp>

#include "test_support.hpp"

using namespace sdpkit;

namespace {

std::string data(const std::string& name) {
  std::ifstream f(std::string(SDPKIT_TEST_DATA) + "/" + name);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

template <class F>
std::optional<int> parse_error_line(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return std::nullopt;
}

template <class W, class T>
std::string to_text(W write, const T& v) {
  std::ostringstream os;
  write(os, v);
  return os.str();
}

}  // namespace

TEST_CASE("matrix files") {
  const SymMatrix a = parse_matrix(data("a3z2.mat"));
  Matrix want = -Matrix::Ones(3, 3);
  want.diagonal().setConstant(2.0);
  CHECK(test::max_abs(a.dense() - want) == 0.0);

  const SymMatrix s = parse_matrix(data("spd3.mat"));
  Matrix sw(3, 3);
  sw << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  CHECK(test::max_abs(s.dense() - sw) == 0.0);

  CHECK(parse_matrix(data("horn.mat")).order() == 5);
  CHECK(parse_error_line([&] { parse_matrix(data("asym.mat")); }) == 3);
  CHECK(parse_error_line([] { parse_matrix("2\n1 x\n0 1\n"); }) == 2);
  CHECK(parse_error_line([] { parse_matrix("2\n1 0\n"); }).has_value());
  CHECK(parse_error_line([] { parse_matrix("# header\n\n2 sparse\n2 1 5\n"); }) == 4);
}

TEST_CASE("property: matrix round trip") {
  for (int t = 0; t < 20; ++t) {
    const SymMatrix m = test::random_symmetric(1 + t % 7);
    CHECK(test::max_abs(parse_matrix(to_text([](std::ostream& o, const SymMatrix& x) { write_matrix(o, x); }, m))
                            .dense() -
                        m.dense()) == 0.0);
  }
}

TEST_CASE("graph files") {
  const Graph c5 = to_graph(parse_graph_data(data("c5.graph")));
  CHECK(c5.n() == 5);
  CHECK(c5.edges().size() == 5);
  CHECK(c5.has_edge(0, 4));
  const GraphData w = parse_graph_data(data("c5w.graph"));
  CHECK(w.weights == std::vector<double>(5, 1.0));
  const Graph pg = parse_graph(data("petersen.graph"));
  CHECK(pg.n() == 10);
  CHECK(pg.edges().size() == 15);
  for (int v = 0; v < 10; ++v) {
    int deg = 0;
    for (int u = 0; u < 10; ++u) deg += pg.has_edge(u, v);
    CHECK(deg == 3);
  }
  CHECK(parse_graph("3;1-2").edges().size() == 1);
  CHECK(parse_error_line([] { parse_graph_data("p 3 1\ne 1 4\n"); }) == 2);
  CHECK(parse_error_line([] { parse_graph_data("p 3 2\ne 1 2\n"); }).has_value());
  CHECK(parse_error_line([] { parse_graph_data("q 3 1\n"); }) == 1);
}

TEST_CASE("property: graph round trips") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = Graph::random(9, 0.4, s);
    std::ostringstream os;
    write_graph(os, g);
    CHECK(to_graph(parse_graph_data(os.str())).edges() == g.edges());
    CHECK(parse_graph(compact_graph(g)).edges() == g.edges());

    Matrix wm = Matrix::Zero(g.n(), g.n());
    for (const auto& [i, j] : g.edges()) wm(i, j) = wm(j, i) = test::uniform(0.1, 3.0);
    const WeightedGraph wg(wm);
    std::ostringstream ow;
    write_graph(ow, wg);
    CHECK(test::max_abs(to_weighted_graph(parse_graph_data(ow.str())).weights() - wm) == 0.0);
  }
}

TEST_CASE("polynomial files") {
  const HomPoly p = parse_poly(data("quartic.poly"));
  CHECK(p.nvars == 2);
  CHECK(p.degree == 4);
  CHECK(p.coeff({4, 0}) == 1.0);
  CHECK(p.coeff({0, 4}) == 1.0);
  CHECK(p.coeff({2, 2}) == 3.0);
  CHECK(parse_error_line([] { parse_poly("1 2 0\n1 1 0\n"); }) == 2);
  CHECK(parse_error_line([] { parse_poly("1 2 0\n1 1\n"); }) == 2);
  const HomPoly q = multiply_norm_power(p, 1);
  std::ostringstream os;
  write_poly(os, q);
  CHECK(coefficient_distance(parse_poly(os.str()), q) == 0.0);
}

TEST_CASE("binary QP files") {
  const BinQp q = parse_binqp(data("qcr_example.binqp"));
  CHECK(q.n() == 2);
  CHECK(q.p() == 1);
  CHECK(q.Q.dense()(0, 1) == -1.0);
  CHECK(q.b(0) == 1.0);
  std::ostringstream os;
  write_binqp(os, q);
  const BinQp r = parse_binqp(os.str());
  CHECK(test::max_abs(r.Q.dense() - q.Q.dense()) == 0.0);
  CHECK(test::max_abs(r.A - q.A) == 0.0);
  CHECK(test::max_abs(r.b - q.b) == 0.0);
  CHECK(test::max_abs(r.c - q.c) == 0.0);
  CHECK(parse_error_line([] { parse_binqp("2 0\n0 1\n2 0\n0 0\n"); }) == 3);

  BinQp none;
  none.Q = test::random_symmetric(3);
  none.c = test::random_matrix(3, 1);
  none.A = Matrix(0, 3);
  none.b = Vector(0);
  std::ostringstream on;
  write_binqp(on, none);
  const BinQp back = parse_binqp(on.str());
  CHECK(back.p() == 0);
  CHECK(test::max_abs(back.Q.dense() - none.Q.dense()) == 0.0);
}

TEST_CASE("SDPA files") {
  const PrimalSdp p = parse_sdpa(data("sqrt2.sdpa"));
  CHECK(p.num_vars() == 1);
  CHECK(p.c(0) == -1.0);
  const SolveReport r = solve(p);
  CHECK(std::abs(-r.pobj - std::sqrt(2.0)) <= 1e-5);

  // Two blocks, one diagonal, braces and commas as separators.
  const std::string two =
      "\"two blocks\"\n2\n2\n{2, -2}\n{1, 1}\n"
      "0 1 1 1 -1\n0 2 1 1 -1\n0 2 2 2 -1\n1 1 1 2 1\n1 2 1 1 1\n2 2 2 2 1\n";
  const PrimalSdp t = parse_sdpa(two);
  REQUIRE(t.B.num_blocks() == 2);
  CHECK_FALSE(t.B.is_diagonal(0));
  CHECK(t.B.is_diagonal(1));
  CHECK(t.A[0].block(1).dense()(0, 0) == 1.0);
  CHECK(t.A[1].block(1).dense()(1, 1) == 1.0);
  CHECK(parse_error_line([] { parse_sdpa("1\n1\n2\n1\n0 1 3 1 1\n"); }) == 5);
  CHECK(parse_error_line([] { parse_sdpa("1\n1\n-2\n1\n1 1 1 2 1\n"); }) == 5);

  std::ostringstream os;
  write_sdpa(os, t);
  const PrimalSdp back = parse_sdpa(os.str());
  CHECK(back.B.same_structure(t.B));
  for (int i = 0; i < t.num_vars(); ++i) CHECK(test::max_abs(back.A[i].to_dense() - t.A[i].to_dense()) == 0.0);
  CHECK(test::max_abs(back.B.to_dense() - t.B.to_dense()) == 0.0);
  CHECK(test::max_abs(back.c - t.c) == 0.0);

  // Nonnegative variables become a trailing diagonal block.
  PrimalSdp nn = t;
  nn.nonneg_vars = {1};
  std::ostringstream on;
  write_sdpa(on, nn);
  const PrimalSdp nb = parse_sdpa(on.str());
  REQUIRE(nb.B.num_blocks() == 3);
  CHECK(nb.B.is_diagonal(2));
  CHECK(nb.B.block(2).order() == 1);
  CHECK(nb.A[0].block(2).dense()(0, 0) == 0.0);
  CHECK(nb.A[1].block(2).dense()(0, 0) == 1.0);
  const SolveReport a = solve(nn), b = solve(nb);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(std::abs(a.pobj - b.pobj) <= 1e-6);
}
