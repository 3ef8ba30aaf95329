#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gromovlab/doubling.hpp"
#include "gromovlab/generators.hpp"
#include "gromovlab/hyperbolize.hpp"
#include "gromovlab/products.hpp"
#include "gromovlab/rng.hpp"
#include "oracles.hpp"

using namespace gromovlab;

namespace {

// interval coordinate of an interior vertex of gen_interval(h)
double coordOf(int v, double h) { return -1.0 + v * h; }

ProductDomain unitSquare(double h) {
  auto iv = gen_interval(h);
  return product_uniform(iv.dom, iv.dom, 1.0, 1.0);
}

MeasureField squareMeasure(const ProductDomain& prod, double h) {
  auto iv = gen_interval(h);
  return product_measure(prod, iv.mu, iv.mu);
}

}  // namespace

TEST_CASE("interval quasihyperbolic distances: exact logarithms") {
  double h = 1.0 / 64.0;
  auto gen = gen_interval(h);
  auto q = quasihyperbolic(gen.dom);
  CHECK(q.droppedEdges == 2);

  int zero = q.toInterior[gen.dom.graph.indexOf(64)];  // x = 0
  REQUIRE(zero >= 0);
  auto kd = q.graph.distancesFrom(zero);

  // off-mesh target 1 - 1/e: graph distance to the bracketing vertex plus the
  // exact partial-edge integral
  double target = 1.0 - std::exp(-1.0);
  int bracket = static_cast<int>(std::floor((target + 1.0) / h));
  double xa = -1.0 + bracket * h;
  int a = q.toInterior[bracket];
  REQUIRE(a >= 0);
  double partial = std::log((1.0 - xa) / (1.0 - target));
  CHECK(std::abs(kd[a] + partial - 1.0) <= 1e-6);

  // vertex pairs on [0, 1): k(y, z) = log((1-y)/(1-z))
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    int i = 64 + rng.pick(60);
    int j = 64 + rng.pick(60);
    if (i > j) std::swap(i, j);
    double y = coordOf(i, h), z = coordOf(j, h);
    int qi = q.toInterior[i], qj = q.toInterior[j];
    double expect = std::log((1.0 - y) / (1.0 - z));
    CHECK(std::abs(q.graph.distance(qi, qj) - expect) <= 1e-6);
  }
  CHECK(q.graph.distance(zero, zero) == 0.0);
}

TEST_CASE("quasihyperbolic edge lengths recompute bit-for-bit") {
  auto gen = gen_interval(0.125);
  auto q = quasihyperbolic(gen.dom);
  int at = 0;
  for (int e = 0; e < gen.dom.graph.edgeCount(); ++e) {
    const Edge& ed = gen.dom.graph.edge(e);
    if (gen.dom.isBoundary(ed.u) || gen.dom.isBoundary(ed.v)) continue;
    auto cl = gen.dom.clearanceOf(e);
    double recomputed = clearance_inverse_integral(cl.a, cl.b, ed.len, cl.cap, 0.0, ed.len);
    CHECK(recomputed == q.graph.edge(at).len);
    ++at;
  }
}

TEST_CASE("k is a metric on small fixtures") {
  auto prod = unitSquare(0.25);
  auto q = quasihyperbolic(prod.dom);
  auto fw = oracles::allPairs(q.graph);
  const int n = q.graph.order();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(fw[i][j] == fw[j][i]);
      CHECK((fw[i][j] == 0) == (i == j));
      for (int k = 0; k < n; ++k) CHECK(fw[i][k] <= fw[i][j] + fw[j][k] + 1e-12);
    }
}

TEST_CASE("square: distance sandwich and ball inclusions at L = 1") {
  double h = 1.0 / 32.0;
  auto prod = unitSquare(h);
  auto q = quasihyperbolic(prod.dom);
  const double L = 1.0;
  Rng rng(8);
  auto interior = prod.dom.interiorVertices();
  for (int t = 0; t < 30; ++t) {
    int x = rng.pick(interior);
    int qx = q.toInterior[x];
    auto kd = q.graph.distancesFrom(qx);
    auto dd = prod.dom.graph.distancesFrom(x);
    double dOm = prod.dom.dOmega[x];
    for (int s = 0; s < 10; ++s) {
      int y = rng.pick(interior);
      int qy = q.toInterior[y];
      if (qy == qx) continue;
      double k = kd[qy], d = dd[y];
      if (d <= dOm) CHECK(k >= d / (2.0 * dOm) - 1e-12);
      if (d >= dOm) CHECK(k >= 0.5 - 1e-12);
      if (d <= dOm / (2.0 * L)) CHECK(k <= 2.0 * L * d / dOm + 1e-12);
    }
    // vertex-set inclusions B(x, r dOm/2L) in B_k(x,r) in B(x, 2 r dOm)
    double r = 0.4;
    for (int v = 0; v < prod.dom.graph.order(); ++v) {
      int qv = q.toInterior[v];
      if (dd[v] < r * dOm / (2.0 * L)) {
        REQUIRE(qv >= 0);
        CHECK(kd[qv] < r + 1e-12);
      }
      if (qv >= 0 && kd[qv] < r) CHECK(dd[v] < 2.0 * r * dOm + 1e-12);
    }
  }
}

TEST_CASE("mu_alpha: limits, center cell, and the exact quadrature identity") {
  double h = 1.0 / 32.0;
  auto gen = gen_interval(h);

  // alpha -> 0 recovers the interior measure
  auto tiny = mu_alpha(gen.dom, gen.mu, 1e-12);
  for (int v : gen.dom.interiorVertices())
    CHECK(tiny.mass[v] == doctest::Approx(gen.mu.mass[v]).epsilon(1e-9));
  for (int b : gen.dom.boundary) CHECK(tiny.mass[b] == 0.0);

  // the unit-clearance center vertex moves only by the cell correction; the
  // clearance kink at the midpoint makes it first order in h
  auto one = mu_alpha(gen.dom, gen.mu, 1.5);
  int center = gen.dom.graph.indexOf(32);
  CHECK(std::abs(one.mass[center] / gen.mu.mass[center] - 1.0) <= h);

  // total mass against adaptive quadrature over the truncated mesh
  double expect = oracles::quad(
      [](double x) { return std::pow(1.0 - std::abs(x), -1.5); }, -1.0 + h / 2,
      1.0 - h / 2, 1e-13);
  MeasureField total = mu_alpha(gen.dom, gen.mu, 1.5);
  CHECK(total.total() == doctest::Approx(expect).epsilon(1e-6));

  CHECK_THROWS_AS(mu_alpha(gen.dom, gen.mu, 0.0), InputError);
}

TEST_CASE("hyperbolized doubling: bound holds on the square, small alpha compares") {
  double h = 1.0 / 8.0;
  auto prod = unitSquare(h);
  auto mu = squareMeasure(prod, h);
  auto rep = hyperbolized_doubling_check(prod.dom, mu, 1.0, 0.125);
  CHECK(rep.passed());
  double measured = rep.measured["kBallCd"].get<double>();
  double bound = rep.predicted["bound"].get<double>();
  CHECK(measured <= bound);
  CHECK(rep.predicted["m"].get<int>() == 3);

  // alpha near zero: the small-scale quasihyperbolic doubling stays within a
  // factor two of the source constant at matching scales
  auto near0 = hyperbolized_doubling_check(prod.dom, mu, 1e-9, 0.125);
  double kCd = near0.measured["kBallCd"].get<double>();
  auto q = quasihyperbolic(prod.dom);
  double srcSmall = doubling_constant(prod.dom.graph, mu, 0.125).Cd;
  CHECK(kCd <= 2.0 * srcSmall);
  CHECK(srcSmall <= 2.0 * kCd);

  // doubled radius cap still yields a finite constant, growth logged
  auto wide = hyperbolized_doubling_check(prod.dom, mu, 1.0, 0.25);
  CHECK(std::isfinite(wide.measured["kBallCd"].get<double>()));
}

TEST_CASE("uniform curve checks: straight axis vs boundary hugging") {
  double h = 1.0 / 32.0;
  auto prod = unitSquare(h);
  const int ny = prod.factorB.graph.order();
  const int mid = ny / 2;
  // straight mid-axis curve
  std::vector<int> axis;
  for (int i = 1; i + 1 < prod.factorA.graph.order(); ++i)
    axis.push_back(prod.pairIndex(i, mid));
  Curve straight = Curve::fromPath(prod.dom.graph, axis);
  auto res = uniform_curve_check(prod.dom, straight, 1.3);
  CHECK(res.pass);
  CHECK(res.minimalA <= 1.3);

  // boundary-hugging curve between the same endpoints: out to the rim, along
  // it, and back
  std::vector<int> hug;
  for (int j = mid; j >= 2; --j) hug.push_back(prod.pairIndex(1, j));
  for (int i = 1; i + 1 < prod.factorA.graph.order(); ++i)
    hug.push_back(prod.pairIndex(i, 2));
  for (int j = 2; j <= mid; ++j)
    hug.push_back(prod.pairIndex(prod.factorA.graph.order() - 2, j));
  Curve hugging = Curve::fromPath(prod.dom.graph, hug);
  auto resHug = uniform_curve_check(prod.dom, hugging, kInf);
  CHECK(resHug.minimalA > 3.0);

  // a degenerate one-vertex curve passes with A = 1
  Curve point;
  point.verts = {axis.front()};
  point.cum = {0.0};
  auto resPt = uniform_curve_check(prod.dom, point, 1.0);
  CHECK(resPt.pass);
  CHECK(resPt.minimalA == 1.0);
}

TEST_CASE("measured uniformity of the interval is close to one") {
  auto gen = gen_interval(1.0 / 16.0);
  double A = measure_uniformity_A(gen.dom, 60, 3);
  CHECK(A >= 1.0);
  CHECK(A <= 1.05);
}

TEST_CASE("roundtrip: line and tree return a tight band, stable under refinement") {
  auto repLine8 = roundtrip_bilipschitz(gen_line(8, 0.25), 1.0, 60, 2);
  CHECK(repLine8.passed());
  double band8 = repLine8.measured["band"].get<double>();
  CHECK(band8 <= 5.0);
  auto repLine12 = roundtrip_bilipschitz(gen_line(12, 0.25), 1.0, 60, 2);
  double band12 = repLine12.measured["band"].get<double>();
  CHECK(std::abs(band12 - band8) <= 0.1 * band8);

  auto repTree = roundtrip_bilipschitz(gen_kary_tree(2, 7, 1.0), 1.0, 60, 2);
  CHECK(repTree.passed());
  // per-edge deformation makes the tree roundtrip exact
  CHECK(repTree.measured["kOverEpsDMin"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(repTree.measured["kOverEpsDMax"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("boundary-incident edges are dropped with infinite quasihyperbolic length") {
  CHECK(clearance_inverse_integral(0.0, 1.0, 1.0, kInf, 0.0, 1.0) == kInf);
  CHECK(clearance_inverse_integral(1.0, 1.0, 1.0, kInf, 0.0, 1.0) ==
        doctest::Approx(2.0 * std::log(1.5)).epsilon(1e-14));
  // capped clearance: plateau contributes linearly
  double capped = clearance_inverse_integral(1.0, 1.0, 4.0, 2.0, 0.0, 4.0);
  double expect = 2.0 * std::log(2.0) + 2.0 / 2.0;
  CHECK(capped == doctest::Approx(expect).epsilon(1e-14));
}
