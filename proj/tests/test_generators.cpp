#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gromovlab/generators.hpp"
#include "gromovlab/hyperbolicity.hpp"
#include "oracles.hpp"

using namespace gromovlab;

TEST_CASE("line: direct construction and trapezoid mass") {
  auto gen = gen_line(2, 1.0);
  CHECK(gen.ps.graph.order() == 5);
  CHECK(gen.ps.graph.edgeCount() == 4);
  for (const auto& e : gen.ps.graph.edges()) CHECK(e.len == 1.0);
  CHECK(gen.mu.mass[0] == doctest::Approx(0.5));
  CHECK(gen.mu.mass[2] == doctest::Approx(1.0));
  CHECK(gen.mu.total() == doctest::Approx(4.0));
  CHECK(gen.ps.base == 2);
  CHECK(gen.ps.rayTips == std::vector<int>{0, 4});
  CHECK_THROWS_AS(gen_line(2, -0.5), InputError);
  CHECK_THROWS_AS(gen_line(2, 0.3), InputError);
}

TEST_CASE("line: weighted masses match closed-form cell integrals to 1e-12") {
  // weight e^{(beta-1)|x|} with beta = 2
  auto w = Weight::expAbs(1.0);
  auto gen = gen_line(1, 0.5, w);
  auto cell = [&](double x) {
    double lo = std::max(-1.0, x - 0.25), hi = std::min(1.0, x + 0.25);
    return oracles::quad([](double t) { return std::exp(std::abs(t)); }, lo, hi, 1e-15);
  };
  for (int i = 0; i < gen.ps.graph.order(); ++i) {
    double x = -1.0 + 0.5 * i;
    CHECK(gen.mu.mass[i] == doctest::Approx(cell(x)).epsilon(1e-12));
  }
}

TEST_CASE("k-ary tree: counts, mass and mesh preconditions") {
  auto g1 = gen_kary_tree(2, 1, 1.0);
  CHECK(g1.ps.graph.order() == 3);
  CHECK(g1.ps.graph.edgeCount() == 2);

  auto g3 = gen_kary_tree(2, 3, 1.0);
  CHECK(g3.ps.graph.order() == 15);
  // total mass equals total edge length: sum of K^j for j = 1..D
  CHECK(g3.mu.total() == doctest::Approx(14.0).epsilon(1e-12));
  CHECK(static_cast<int>(g3.ps.rayTips.size()) == 8);

  auto fine = gen_kary_tree(2, 2, 0.5);
  CHECK(fine.ps.graph.order() == 1 + 2 * 2 + 4 * 2);
  CHECK(fine.mu.total() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(gen_kary_tree(1, 3, 1.0), InputError);
  CHECK_THROWS_AS(gen_kary_tree(2, 3, 0.3), InputError);
}

TEST_CASE("strip: grid construction and exact weighted mass") {
  auto gen = gen_strip(1, 1.0);
  CHECK(gen.ps.graph.order() == 9);
  CHECK(gen.ps.graph.edgeCount() == 12);
  CHECK(gen.mu.total() == doctest::Approx(4.0).epsilon(1e-12));

  auto wgen = gen_strip(2, 0.5, Weight::expAbs(1.0));
  double expect = 2.0 * oracles::quad([](double t) { return std::exp(std::abs(t)); },
                                      -2.0, 2.0, 1e-14);
  CHECK(wgen.mu.total() == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("prong: layout, lumped masses and the forced route") {
  auto lay = prong_layout(1.0, 0.5);
  CHECK(lay.upperTip + 1 == 7);
  auto pi = gen_prong("pi", 1.0, 0.5);
  CHECK(pi.ps.graph.order() == 7);

  auto dbl = gen_prong("doubling", 2.0, 1.0);
  auto L = prong_layout(2.0, 1.0);
  // mass at (x=1, y=1) is h e^x
  CHECK(dbl.mu.mass[L.upperJunction + 1] == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  // graph distance between the two tips runs through the rung
  CHECK(dbl.ps.graph.distance(L.lowerTip, L.upperTip) == doctest::Approx(5.0));
  CHECK_THROWS_AS(gen_prong("nope", 1.0, 0.5), InputError);
}

TEST_CASE("interval: boundary realization and exact boundary distance") {
  auto gen = gen_interval(0.5);
  CHECK(gen.dom.graph.order() == 5);
  CHECK(gen.dom.boundary.size() == 2);
  gen.dom.validate();
  int center = 2;
  CHECK(gen.dom.dOmega[center] == doctest::Approx(1.0));
  CHECK(gen.dom.dOmega[3] == doctest::Approx(0.5));
  // zero mass on the boundary, cells elsewhere
  CHECK(gen.mu.mass[0] == 0.0);
  CHECK(gen.mu.mass[2] == doctest::Approx(0.5));
}

TEST_CASE("disk: polar grid domain validates with positive interior cells") {
  auto gen = gen_disk_polar(0.25);
  gen.dom.validate();
  CHECK(gen.mu.total() > 0.0);
  for (int v : gen.dom.interiorVertices()) CHECK(gen.mu.mass[v] > 0.0);
  for (int b : gen.dom.boundary) CHECK(gen.mu.mass[b] == 0.0);
}

TEST_CASE("generated spaces satisfy the shared invariants") {
  auto tree = gen_kary_tree(3, 3, 0.5);
  tree.ps.graph.requireConnected();
  CHECK(delta_hyperbolicity(tree.ps.graph, 30000, 2).deltaEstimate == 0.0);
  CHECK(roughly_starlike_M(tree.ps) == 0.0);

  // mass conservation against the cell rule
  auto line = gen_line(3, 0.25, Weight::expNegAbs(0.7));
  double expect = oracles::quad([](double t) { return std::exp(-0.7 * std::abs(t)); },
                                -3.0, 3.0, 1e-14);
  CHECK(line.mu.total() == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("weight descriptors parse and integrate") {
  auto w = Weight::parse("exp:1.0");
  CHECK(w(2.0) == doctest::Approx(std::exp(2.0)));
  CHECK(w.integral(-1, 1) == doctest::Approx(2 * (std::exp(1.0) - 1)).epsilon(1e-14));
  auto table = Weight::fromTable({{-1.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}});
  CHECK(table(0.5) == doctest::Approx(1.5));
  CHECK(table.integral(-1, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(Weight::parse("warp:1"), InputError);
  auto spec = GeneratorSpec::fromJson(json::parse(
      R"({"kind":"line","T":2.0,"h":0.5,"weight":{"kind":"exp","rate":1.0}})"));
  CHECK(spec.kind == "line");
  CHECK(spec.w(1.0) == doctest::Approx(std::exp(1.0)));
}
