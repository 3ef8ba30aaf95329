#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gromovlab/doubling.hpp"
#include "gromovlab/generators.hpp"
#include "gromovlab/rng.hpp"
#include "gromovlab/uniformize.hpp"
#include "oracles.hpp"

using namespace gromovlab;

namespace {

// closed form for the deformed line distance with base point at the origin
double lineDeformed(double eps, double x, double y) {
  if (x * y >= 0)
    return std::abs(std::exp(-eps * std::abs(x)) - std::exp(-eps * std::abs(y))) / eps;
  return (2.0 - std::exp(-eps * std::abs(x)) - std::exp(-eps * std::abs(y))) / eps;
}

UniformizedSpace uniformizeGen(const GeneratedSpace& gen, double eps) {
  UniformizeOptions opt;
  opt.exactTails = gen.exactTails;
  opt.force = true;
  return uniformize(gen.ps, eps, opt);
}

}  // namespace

TEST_CASE("deformed line: the log-2 point lands at distance one half") {
  double l2 = std::log(2.0);
  MetricGraph g({0, 1}, {{0, 1, l2}});
  PointedSpace ps;
  ps.graph = std::move(g);
  ps.base = 0;
  auto us = uniformize(ps, 1.0, {});
  CHECK(us.graph.edge(0).len == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("deformed line distances match the closed form to 1e-10") {
  for (double eps : {0.5, 1.0}) {
    auto gen = gen_line(6, 0.25);
    auto us = uniformizeGen(gen, eps);
    Rng rng(77);
    const int n = us.graph.order();
    for (int k = 0; k < 50; ++k) {
      int i = rng.pick(n), j = rng.pick(n);
      double x = -6.0 + 0.25 * i, y = -6.0 + 0.25 * j;
      CHECK(std::abs(us.graph.distance(i, j) - lineDeformed(eps, x, y)) <= 1e-10);
    }
    CHECK(us.graph.distance(3, 3) == 0.0);
  }
  CHECK_THROWS_AS(uniformize(gen_line(2, 1.0).ps, -1.0, {}), InputError);
}

TEST_CASE("eps0 gate blocks unless forced") {
  auto gen = gen_line(2, 1.0);
  UniformizeOptions opt;
  opt.eps0 = 0.5;
  CHECK_THROWS_AS(uniformize(gen.ps, 1.0, opt), ConfigError);
  opt.force = true;
  CHECK_NOTHROW(uniformize(gen.ps, 1.0, opt));
}

TEST_CASE("tree tails give the exact boundary distance e^{-eps n}/eps") {
  auto gen = gen_kary_tree(2, 6, 1.0);
  auto us = uniformizeGen(gen, 1.0);
  auto bdist = us.boundaryDistances();
  auto depth = gen.ps.graph.distancesFrom(gen.ps.base);
  for (int v = 0; v < us.graph.order(); ++v)
    CHECK(bdist[v] == doctest::Approx(std::exp(-depth[v])).epsilon(1e-12));
  // truncation-biased spaces put the frontier at distance zero
  UniformizeOptions biased;
  biased.exactTails = false;
  auto us0 = uniformize(gen.ps, 1.0, biased);
  CHECK(us0.truncationBiased);
  CHECK(us0.boundaryDistances()[gen.ps.rayTips[0]] == 0.0);
}

TEST_CASE("boundary-distance sandwich holds exactly on trees") {
  auto gen = gen_kary_tree(2, 7, 1.0);
  double eps = 1.0;
  auto us = uniformizeGen(gen, eps);
  auto bdist = us.boundaryDistances();
  double C0 = 2.0 * std::exp(eps * 0.0) - 1.0;  // M = 0
  for (int v = 0; v < us.graph.order(); ++v) {
    CHECK(bdist[v] >= us.rhoEps[v] / (std::exp(1.0) * eps) - 1e-15);
    CHECK(bdist[v] <= C0 * us.rhoEps[v] / eps + 1e-15);
  }
  // closure diameter stays within 2/eps for exact tails
  CHECK(us.diamEps() <= 2.0 / eps + 1e-12);
}

TEST_CASE("whitney inclusions pass on the tree and degenerate radii shrink to a point") {
  auto gen = gen_kary_tree(2, 8, 1.0);
  auto us = uniformizeGen(gen, 1.0);
  auto consts = UniformizationConstants::fromMDelta(0.0, 0.0, 1.0);
  CHECK(consts.C1 == doctest::Approx(std::exp(-1.0)));
  CHECK(consts.C2 == doctest::Approx(2.0 * std::exp(1.0)));
  CHECK(consts.C1 < 1.0);
  CHECK(consts.C2 > 1.0);
  CHECK(consts.C0 >= 1.0);
  auto rep = whitney_inclusion_check(us, consts, 120, 4);
  CHECK(rep.passed());
  CHECK(rep.measured["inclusionFailures"].get<long long>() == 0);

  // r -> 0: both enclosing balls shrink to the center alone
  int x = us.graph.order() / 2;
  double r = 1e-9;
  auto de = us.graph.distancesFrom(x);
  auto dd = us.source.distancesFrom(x);
  auto inner = MetricGraph::ballVertices(dd, consts.C1 * r / us.rhoEps[x]);
  auto outer = MetricGraph::ballVertices(de, r);
  CHECK(inner == std::vector<int>{x});
  CHECK(outer == std::vector<int>{x});
}

TEST_CASE("the inner whitney inclusion is strict somewhere on the line") {
  auto gen = gen_line(6, 0.25);
  auto us = uniformizeGen(gen, 1.0);
  auto consts = UniformizationConstants::fromMDelta(0.0, 0.0, 1.0);
  auto bdist = us.boundaryDistances();
  bool foundStrict = false;
  for (int x = 0; x < us.graph.order() && !foundStrict; ++x) {
    double r = 0.5 * bdist[x];
    if (!(r > 0)) continue;
    auto de = us.graph.distancesFrom(x);
    auto dd = us.source.distancesFrom(x);
    for (int v = 0; v < us.graph.order(); ++v) {
      if (de[v] < r && !(dd[v] < consts.C1 * r / us.rhoEps[x])) {
        foundStrict = true;  // deformed ball strictly larger than the inner one
        break;
      }
    }
  }
  CHECK(foundStrict);
}

TEST_CASE("deformed edge lengths recompute bit-for-bit and never exceed source") {
  auto gen = gen_kary_tree(3, 4, 0.5);
  auto us = uniformizeGen(gen, 0.7);
  auto re = recompute_deformed_lengths(us);
  for (int e = 0; e < us.graph.edgeCount(); ++e) {
    CHECK(re[e] == us.graph.edge(e).len);  // bitwise
    CHECK(us.graph.edge(e).len <= us.source.edge(e).len);
  }
  // d_eps <= d on sampled pairs
  Rng rng(5);
  for (int k = 0; k < 40; ++k) {
    int i = rng.pick(us.graph.order()), j = rng.pick(us.graph.order());
    CHECK(us.graph.distance(i, j) <= us.source.distance(i, j) + 1e-12);
  }
}

TEST_CASE("mu_beta basics: small beta limit and the base point mass") {
  auto gen = gen_kary_tree(2, 5, 1.0);
  auto tiny = mu_beta(gen.ps, gen.mu, 1e-12);
  for (int v = 0; v < gen.ps.graph.order(); ++v)
    CHECK(tiny.mass[v] == doctest::Approx(gen.mu.mass[v]).epsilon(1e-9));
  auto big = mu_beta(gen.ps, gen.mu, 3.0);
  CHECK(big.mass[gen.ps.base] == gen.mu.mass[gen.ps.base]);
  CHECK_THROWS_AS(mu_beta(gen.ps, gen.mu, 0.0), InputError);
}

TEST_CASE("tree mass increments follow the geometric-series slope to 2 percent") {
  for (double factor : {0.6, 1.4}) {
    double beta = factor * std::log(2.0);
    double expectedSlope = std::log(2.0) - beta;  // log(K e^{-beta})
    std::vector<double> logIncr;
    double prevTotal = -1.0;
    for (int D = 6; D <= 12; ++D) {
      auto gen = gen_kary_tree(2, D, 1.0);
      double total = mu_beta(gen.ps, gen.mu, beta).total();
      if (prevTotal >= 0.0) logIncr.push_back(std::log(total - prevTotal));
      prevTotal = total;
    }
    double n = logIncr.size();
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    for (size_t i = 0; i < logIncr.size(); ++i) {
      sx += i;
      sy += logIncr[i];
      sxy += i * logIncr[i];
      sxx += static_cast<double>(i) * i;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(expectedSlope).epsilon(0.02));
    if (factor < 1.0) CHECK(slope > 0.0);
    else CHECK(slope < 0.0);
  }
}

TEST_CASE("global doubling: stable for beta above the mass threshold, grows below") {
  double eps = 1.0;
  auto run = [&](int D, double beta) {
    auto gen = gen_kary_tree(2, D, 1.0);
    auto us = uniformizeGen(gen, eps);
    auto mb = mu_beta(gen.ps, gen.mu, beta);
    auto rep = global_doubling_check(us, mb, 3.0, std::pow(2.0, 3.0));
    return rep.measured["globalCd"].get<double>();
  };
  double good8 = run(8, 5.0 * std::log(2.0));
  double good10 = run(10, 5.0 * std::log(2.0));
  CHECK(good10 / good8 <= 1.1);
  CHECK(good8 / good10 <= 1.1);
  CHECK(good10 < 1e4);

  double bad8 = run(8, 0.5 * std::log(2.0));
  double bad10 = run(10, 0.5 * std::log(2.0));
  CHECK(bad10 > 1.2 * bad8);  // failure detected as growth under truncation
}

TEST_CASE("doubling of the deformed measure is scale-invariant") {
  auto gen = gen_kary_tree(2, 6, 1.0);
  auto us = uniformizeGen(gen, 1.0);
  auto mb = mu_beta(gen.ps, gen.mu, 4.0);
  auto a = doubling_constant(us.graph, mb, 1.0);
  auto b = doubling_constant(us.graph, mb.scaled(8.0), 1.0);  // power of two: exact
  CHECK(a.Cd == b.Cd);
}

TEST_CASE("corkscrew certificates") {
  auto gen = gen_kary_tree(2, 8, 1.0);
  auto us = uniformizeGen(gen, 1.0);
  double a0 = 1.0 / 16.0;

  // base point with a small radius qualifies as its own certificate
  auto self = corkscrew_point(us, us.base, 0.05, a0);
  CHECK(self.certified);
  CHECK(self.boundaryClearance >= 2.0 * a0 * 0.05);

  Rng rng(13);
  for (int k = 0; k < 40; ++k) {
    int x = rng.pick(us.graph.order());
    double r = rng.uniform(0.05, 2.0 * us.diamEps());
    auto res = corkscrew_point(us, x, r, a0);
    CHECK(res.certified);
  }

  // a frontier vertex with r near the diameter takes the base branch
  auto far = corkscrew_point(us, gen.ps.rayTips.front(), 1.9 * us.diamEps(), a0);
  CHECK(far.certified);
  CHECK(far.viaBase);
}

TEST_CASE("boundary exponent fit: line matches beta/eps, scaling shifts nothing") {
  auto gen = gen_line(6, 0.25);
  auto us = uniformizeGen(gen, 1.0);
  auto mb = mu_beta(gen.ps, gen.mu, 2.0);
  std::vector<double> radii;
  for (double r = 0.02; r <= 0.2001; r *= std::pow(10.0, 0.125)) radii.push_back(r);
  BoundaryDimensionParams params;
  params.beta = 2.0;
  params.Cd = doubling_constant(gen.ps.graph, gen.mu, 1.0).Cd;
  params.R0 = 1.0;
  params.slack = 0.15;
  auto rep = boundary_dimension_check(us, mb, gen.ps.rayTips[1], radii, params);
  double fitted = rep.measured["fittedExponent"].get<double>();
  CHECK(fitted == doctest::Approx(2.0).epsilon(0.075));

  auto rep2 = boundary_dimension_check(us, mb.scaled(3.7), gen.ps.rayTips[1], radii, params);
  CHECK(rep2.measured["fittedExponent"].get<double>() ==
        doctest::Approx(fitted).epsilon(1e-12));

  CHECK_THROWS_AS(
      boundary_dimension_check(us, mb, gen.ps.rayTips[1], {0.1, 0.2}, params),
      DataError);
}

TEST_CASE("tree boundary exponent lies in the predicted window") {
  double eps = std::log(2.0);
  auto gen = gen_kary_tree(2, 10, 1.0);
  auto us = uniformizeGen(gen, eps);
  double beta = 3.0 * std::log(2.0);
  auto mb = mu_beta(gen.ps, gen.mu, beta);
  double Cd = doubling_constant(gen.ps.graph, gen.mu, 3.0).Cd;
  std::vector<double> radii;
  for (double r = 0.05; r <= 0.5001; r *= std::pow(10.0, 0.125)) radii.push_back(r);
  BoundaryDimensionParams params;
  params.beta = beta;
  params.Cd = Cd;
  params.R0 = 3.0;
  params.slack = 0.0;
  auto rep = boundary_dimension_check(us, mb, gen.ps.rayTips.front(), radii, params);
  CHECK(rep.passed());
}

TEST_CASE("comparison bands on the tree are finite and reported") {
  auto gen = gen_kary_tree(2, 7, 1.0);
  auto us = uniformizeGen(gen, 1.0);
  auto gcomp = gromov_comparison_check(us, 200, 21);
  CHECK(gcomp.passed());
  CHECK(gcomp.measured["empiricalC"].get<double>() < 10.0);

  auto dratio = distance_ratio_check(us, 200, 22);
  CHECK(dratio.passed());
  double lo = dratio.measured["ratioMin"].get<double>();
  double hi = dratio.measured["ratioMax"].get<double>();
  CHECK(lo > 0.0);
  CHECK(hi / lo < 50.0);

  auto dens = density_band_check(us, 1.0, 60, 23);
  CHECK(dens.measured["worstDensityRatio"].get<double>() <= std::exp(1.0));
}
