#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gromovlab/doubling.hpp"
#include "gromovlab/generators.hpp"
#include "gromovlab/poincare.hpp"
#include "oracles.hpp"

using namespace gromovlab;

namespace {

// independent exhaustive doubling estimator: loops over every center and the
// full per-center grid of realized distances and halves, directly
double bruteDoubling(const MetricGraph& g, const MeasureField& mu, double R0) {
  double best = 1.0;
  for (int c = 0; c < g.order(); ++c) {
    auto dist = g.distancesFrom(c);
    std::vector<double> radii{R0};
    for (double d : dist) {
      if (d > 0 && d <= R0) radii.push_back(d);
      if (d / 2 > 0 && d / 2 <= R0) radii.push_back(d / 2);
    }
    for (double r : radii) {
      double inner = mu.ballMass(dist, r);
      double outer = mu.ballMass(dist, 2 * r);
      if (inner > 0) best = std::max(best, outer / inner);
      else if (outer > 0) return kInf;
    }
  }
  return best;
}

MeasureField unitMass(const MetricGraph& g) {
  MeasureField mu;
  mu.mass.assign(g.order(), 1.0);
  return mu;
}

}  // namespace

TEST_CASE("doubling on the unit triangle is exactly 3") {
  MetricGraph k3({0, 1, 2}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  auto rep = doubling_constant(k3, unitMass(k3), 2.0);
  CHECK(rep.Cd == doctest::Approx(3.0));
  CHECK(rep.exhaustive);
}

TEST_CASE("doubling reports are invariant under measure scaling") {
  auto gen = gen_line(4, 0.5, Weight::expAbs(0.5));
  auto a = doubling_constant(gen.ps.graph, gen.mu, 2.0);
  auto b = doubling_constant(gen.ps.graph, gen.mu.scaled(7.3), 2.0);
  // ratios are scale-free; fp summation of scaled masses moves the last ulp
  CHECK(b.Cd == doctest::Approx(a.Cd).epsilon(1e-13));
  CHECK(a.perScaleTable[0].worstCenter == b.perScaleTable[0].worstCenter);
  CHECK(a.perScaleTable[0].radius == b.perScaleTable[0].radius);
  // power-of-two scaling is exact in floating point
  auto c = doubling_constant(gen.ps.graph, gen.mu.scaled(4.0), 2.0);
  CHECK(a.toJson() == c.toJson());
}

TEST_CASE("doubling matches the brute-force oracle and grows with the radius") {
  auto gen = gen_prong("doubling", 6.0, 0.5);
  double prev = 1.0;
  for (double R0 : {0.5, 1.0, 2.0, 3.0}) {
    auto rep = doubling_constant(gen.ps.graph, gen.mu, R0);
    CHECK(rep.Cd == doctest::Approx(bruteDoubling(gen.ps.graph, gen.mu, R0)).epsilon(1e-12));
    CHECK(rep.Cd >= prev - 1e-12);
    prev = rep.Cd;
  }
  // the emulated threshold behavior: moderate at small scales, blown past e^3
  // once the double ball reaches across the junction (located empirically)
  CHECK(doubling_constant(gen.ps.graph, gen.mu, 0.5).Cd < std::exp(1.5));
  CHECK(doubling_constant(gen.ps.graph, gen.mu, 4.0).Cd > std::exp(3.0));
}

TEST_CASE("zero-mass inner ball inside a positive double reports infinity") {
  MetricGraph path({0, 1, 2}, {{0, 1, 1.0}, {1, 2, 1.0}});
  MeasureField mu;
  mu.mass = {1.0, 0.0, 1.0};
  auto rep = doubling_constant(path, mu, 1.0);
  CHECK(!std::isfinite(rep.Cd));
  CHECK(rep.infinityWitness.has_value());
}

TEST_CASE("covering numbers: trivial, path oracle, tree paper bound") {
  auto path = gen_line(5, 1.0);
  const MetricGraph& g = path.ps.graph;
  int center = path.ps.base;
  CHECK(covering_number(g, center, 1.5, 1.5).count == 1);

  auto rep = covering_number(g, center, 4.5, 1.5);
  CHECK(rep.count <= 5);
  auto dist = g.distancesFrom(center);
  auto ball = MetricGraph::ballVertices(dist, 4.5);
  int minCover = oracles::minCoverExhaustive(g, ball, ball, 1.5);
  CHECK(rep.count >= minCover);
  CHECK(minCover >= 1);

  auto tree = gen_kary_tree(2, 4, 1.0);
  double Cd = doubling_constant(tree.ps.graph, tree.mu, 1.5).Cd;
  auto trep = covering_number(tree.ps.graph, tree.ps.base, 3.5, 1.5, Cd);
  CHECK(trep.count <= trep.paperBound);

  // monotone in r, and always at least one ball
  int prev = 1 << 20;
  for (double r : {0.75, 1.5, 3.0}) {
    int c = covering_number(g, center, 4.5, r).count;
    CHECK(c >= 1);
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("poincare on the 3-path: spectral route matches dense minimization") {
  MetricGraph path({0, 1, 2}, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto mu = unitMass(path);
  auto rep = poincare_constant(path, mu, 1, 1.5, 2.0, 1.0, 48, 3);
  REQUIRE(rep.exactL2Constant.has_value());

  // dense grid minimization of the Rayleigh quotient E/V over u in R^3
  EdgeMassField em = EdgeMassField::fromVertexMasses(path, mu);
  auto rayleigh = [&](const std::vector<double>& u) {
    double mean = (u[0] + u[1] + u[2]) / 3.0;
    double V = 0.0;
    for (double x : u) V += (x - mean) * (x - mean);
    if (V < 1e-14) return 1e9;
    double E = em.m[0] * (u[0] - u[1]) * (u[0] - u[1]) +
               em.m[1] * (u[1] - u[2]) * (u[1] - u[2]);
    return E / V;
  };
  auto best = oracles::gridMinimize(rayleigh, 3, -1.0, 1.0, 9, 14);
  double diam = 2.0;
  double oracleConstant = 1.0 / (std::sqrt(best.value) * diam);
  CHECK(*rep.exactL2Constant == doctest::Approx(oracleConstant).epsilon(1e-8));
  // the certified route dominates the test-family lower bound
  CHECK(rep.lowerBoundCPI <= *rep.exactL2Constant + 1e-9);
}

TEST_CASE("poincare: graph automorphism gives identical constants") {
  auto gen = gen_line(4, 0.5);
  const MetricGraph& g = gen.ps.graph;
  int left = g.indexOf(2), right = g.indexOf(g.order() - 3);
  auto a = poincare_constant(g, gen.mu, left, 1.2, 2.0, 1.0, 32, 9);
  auto b = poincare_constant(g, gen.mu, right, 1.2, 2.0, 1.0, 32, 9);
  REQUIRE(a.exactL2Constant.has_value());
  REQUIRE(b.exactL2Constant.has_value());
  CHECK(*a.exactL2Constant == doctest::Approx(*b.exactL2Constant).epsilon(1e-12));
}

TEST_CASE("poincare: zero-mass bridge disconnects the support and gives infinity") {
  // two positive clusters joined only through two zero-mass vertices: the
  // bridging edge carries no mass, so oscillation escapes the gradient term
  MetricGraph g({0, 1, 2, 3, 4, 5},
                {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}});
  MeasureField mu;
  mu.mass = {1.0, 1.0, 0.0, 0.0, 1.0, 1.0};
  auto rep = poincare_constant(g, mu, 2, 4.5, 2.0, 1.0, 16, 4);
  CHECK(rep.infiniteWitness);
  CHECK(!std::isfinite(rep.lowerBoundCPI));
}

TEST_CASE("constant test functions contribute nothing") {
  auto gen = gen_line(3, 0.5);
  auto rep = poincare_constant(gen.ps.graph, gen.mu, gen.ps.base, 1.0, 2.0, 1.0, 8, 2);
  CHECK(rep.lowerBoundCPI > 0.0);
  CHECK(std::isfinite(rep.lowerBoundCPI));
}

TEST_CASE("local-to-global: path satisfies the covering bound, R1 = R0 degenerates") {
  auto gen = gen_line(8, 0.5);
  auto rep = local_to_global_check(gen.ps.graph, gen.mu, 0.5, 2.0);
  CHECK(rep.passed());
  double cd0 = rep.measured["CdR0"].get<double>();
  double cd1 = rep.measured["CdR1"].get<double>();
  CHECK(cd1 <= doubling_upgrade_bound(cd0, 0.5, 2.0));

  auto same = local_to_global_check(gen.ps.graph, gen.mu, 1.0, 1.0);
  CHECK(same.passed());
  CHECK(same.measured.contains("degenerate"));
}

TEST_CASE("local-to-global: prong sweep shows unbounded growth at coupled scales") {
  // with R1 tied to the truncation the measured constant blows up with T
  double prev = 0.0;
  for (double T : {4.0, 6.0, 8.0}) {
    auto gen = gen_prong("doubling", T, 0.5);
    auto rep = local_to_global_check(gen.ps.graph, gen.mu, 1.0, T / 2.0);
    double cd1 = rep.measured["CdR1"].get<double>();
    CHECK(cd1 > 1.5 * prev);
    prev = cd1;
  }
  CHECK(prev > std::exp(3.0));
}
