#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gromovlab/generators.hpp"
#include "gromovlab/hyperbolicity.hpp"
#include "gromovlab/metric_graph.hpp"
#include "gromovlab/products.hpp"
#include "gromovlab/rng.hpp"
#include "oracles.hpp"

using namespace gromovlab;

namespace {

MetricGraph unitPath(int n) {
  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, 1.0});
  return MetricGraph(std::move(ids), std::move(es));
}

MetricGraph randomConnected(int n, int extraEdges, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::vector<Edge> es;
  for (int i = 1; i < n; ++i) es.push_back({rng.pick(i), i, rng.uniform(0.2, 2.0)});
  for (int k = 0; k < extraEdges; ++k) {
    int u = rng.pick(n), v = rng.pick(n);
    if (u != v) es.push_back({u, v, rng.uniform(0.2, 2.0)});
  }
  return MetricGraph(std::move(ids), std::move(es));
}

MetricGraph grid4x4() {
  std::vector<std::int64_t> ids(16);
  for (int i = 0; i < 16; ++i) ids[i] = i;
  std::vector<Edge> es;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      int v = r * 4 + c;
      if (c + 1 < 4) es.push_back({v, v + 1, 1.0});
      if (r + 1 < 4) es.push_back({v, v + 4, 1.0});
    }
  return MetricGraph(std::move(ids), std::move(es));
}

}  // namespace

TEST_CASE("shortest distances: path concatenation and identity") {
  auto g = unitPath(3);
  CHECK(shortest_dist(g, 0, 2) == doctest::Approx(2.0));
  CHECK(shortest_dist(g, 1, 1) == 0.0);
  CHECK_THROWS_AS(shortest_dist(g, 0, 99), InputError);
}

TEST_CASE("shortest distances match the cubic all-pairs oracle") {
  auto g = randomConnected(30, 25, 42);
  auto fw = oracles::allPairs(g);
  for (int u = 0; u < g.order(); ++u) {
    auto d = g.distancesFrom(u);
    for (int v = 0; v < g.order(); ++v) CHECK(d[v] == doctest::Approx(fw[u][v]).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms hold exhaustively on a 50-vertex graph") {
  auto g = randomConnected(50, 40, 7);
  auto fw = oracles::allPairs(g);
  const int n = g.order();
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      CHECK(fw[u][v] == fw[v][u]);
      CHECK((fw[u][v] == 0.0) == (u == v));
      for (int w = 0; w < n; ++w)
        CHECK(fw[u][w] <= fw[u][v] + fw[v][w] + 1e-12);
    }
}

TEST_CASE("gromov product: base cases and meet-depth oracle on trees") {
  // two siblings at depth 2 under a common depth-1 parent
  std::vector<std::int64_t> ids{0, 1, 2, 3};
  std::vector<Edge> es{{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}};
  PointedSpace ps;
  ps.graph = MetricGraph(std::move(ids), std::move(es));
  ps.base = 0;
  CHECK(gromov_product(ps, 0, 0) == 0.0);
  CHECK(gromov_product(ps, 2, 3) == doctest::Approx(1.0));

  // random tree: (x|y) equals the depth of the meet of the root geodesics
  Rng rng(3);
  const int n = 40;
  std::vector<std::int64_t> tid(n);
  std::vector<int> parent(n, -1);
  for (int i = 0; i < n; ++i) tid[i] = i;
  std::vector<Edge> tes;
  for (int i = 1; i < n; ++i) {
    parent[i] = rng.pick(i);
    tes.push_back({parent[i], i, 1.0});
  }
  PointedSpace tree;
  tree.graph = MetricGraph(std::move(tid), std::move(tes));
  tree.base = 0;
  auto depth = tree.graph.distancesFrom(0);
  auto ancestors = [&](int v) {
    std::vector<int> out{v};
    while (parent[out.back()] >= 0) out.push_back(parent[out.back()]);
    return out;
  };
  for (int trial = 0; trial < 60; ++trial) {
    int x = rng.pick(n), y = rng.pick(n);
    auto ax = ancestors(x);
    std::vector<char> inAx(n, 0);
    for (int a : ax) inAx[a] = 1;
    int meet = y;
    while (!inAx[meet]) meet = parent[meet];
    CHECK(gromov_product(tree, x, y) == doctest::Approx(depth[meet]).epsilon(1e-12));
  }
}

TEST_CASE("gromov product stays within [0, min of the base distances]") {
  auto g = randomConnected(25, 15, 9);
  PointedSpace ps;
  ps.graph = std::move(g);
  ps.base = 0;
  auto baseDist = ps.graph.distancesFrom(0);
  for (int x = 0; x < ps.graph.order(); ++x)
    for (int y = 0; y < ps.graph.order(); ++y) {
      double gp = gromov_product(ps, x, y, baseDist);
      CHECK(gp >= -1e-12);
      CHECK(gp <= std::min(baseDist[x], baseDist[y]) + 1e-12);
    }
}

TEST_CASE("delta estimator: trees are exactly zero") {
  for (auto [K, D] : {std::pair{2, 4}, std::pair{3, 3}}) {
    auto gen = gen_kary_tree(K, D, 1.0);
    auto rep = delta_hyperbolicity(gen.ps.graph, 40000, 11);
    CHECK(rep.deltaEstimate == 0.0);
  }
  auto line = gen_line(5, 0.5);
  CHECK(delta_hyperbolicity(line.ps.graph, 40000, 1).deltaEstimate == 0.0);
}

TEST_CASE("delta estimator: single edge degenerates to zero") {
  MetricGraph g({0, 1}, {{0, 1, 1.0}});
  auto rep = delta_hyperbolicity(g, 1000, 1);
  CHECK(rep.deltaEstimate == 0.0);
  CHECK(rep.exhaustive);
}

TEST_CASE("delta estimator: 4x4 grid exhaustive equals the brute-force oracle") {
  auto g = grid4x4();
  auto rep = delta_hyperbolicity(g, 5000, 1);
  CHECK(rep.exhaustive);
  double brute = oracles::bruteDeltaCanonical(g);
  CHECK(rep.deltaEstimate == doctest::Approx(brute).epsilon(1e-12));
  CHECK(rep.deltaEstimate <= g.diameterEstimate());
  CHECK(rep.deltaEstimate > 0.0);
}

TEST_CASE("roughly starlike: line and tree have M = 0, widened strip has M = 1") {
  auto line = gen_line(4, 1.0);
  CHECK(roughly_starlike_M(line.ps) == 0.0);
  auto tree = gen_kary_tree(2, 4, 1.0);
  CHECK(roughly_starlike_M(tree.ps) == 0.0);

  // integer strip [-T,T] x {-1,0,1}, base (0,0), tips at (+-T, 0)
  const int T = 5;
  std::vector<std::int64_t> ids;
  std::vector<Edge> es;
  auto at = [&](int x, int y) { return (x + T) * 3 + (y + 1); };
  for (int x = -T; x <= T; ++x)
    for (int y = -1; y <= 1; ++y) ids.push_back(at(x, y));
  for (int x = -T; x <= T; ++x)
    for (int y = -1; y <= 1; ++y) {
      if (x + 1 <= T) es.push_back({at(x, y), at(x + 1, y), 1.0});
      if (y + 1 <= 1) es.push_back({at(x, y), at(x, y + 1), 1.0});
    }
  PointedSpace strip;
  strip.graph = MetricGraph(std::move(ids), std::move(es));
  strip.base = strip.graph.indexOf(at(0, 0));
  strip.rayTips = {strip.graph.indexOf(at(-T, 0)), strip.graph.indexOf(at(T, 0))};
  CHECK(roughly_starlike_M(strip) == doctest::Approx(1.0));

  PointedSpace noTips;
  noTips.graph = unitPath(4);
  CHECK_THROWS_AS(roughly_starlike_M(noTips), ConfigError);
}

TEST_CASE("annular quasiconvexity: square passes, slit fixture fails") {
  auto iv = gen_interval(0.25);
  double A = 1.0;
  auto prod = product_uniform(iv.dom, iv.dom, A, A);
  int corner = prod.dom.boundary.front();
  auto rep = annular_quasiconvexity_check(prod.dom, corner, 4.0 * A, {0.25, 0.5}, 24, 5);
  CHECK(rep.passed());

  // two arms meeting only at a tagged boundary vertex: the annulus around it
  // is disconnected, so the constrained search must prove failure
  const int arm = 10;
  std::vector<std::int64_t> sids;
  for (int i = 0; i < 2 * arm + 1; ++i) sids.push_back(i);
  std::vector<Edge> ses;
  for (int i = 0; i < 2 * arm; ++i) ses.push_back({i, i + 1, 0.5});  // junction at `arm`
  UniformDomain slit = UniformDomain::fromBoundary(
      MetricGraph(std::move(sids), std::move(ses)), {arm});
  auto bad = annular_quasiconvexity_check(slit, arm, 4.0, {1.0}, 24, 5);
  CHECK(!bad.passed());
}

TEST_CASE("curves: length bookkeeping and reversal") {
  auto g = randomConnected(12, 6, 5);
  auto path = g.canonicalPath(0, 7);
  Curve c = Curve::fromPath(g, path);
  double sum = 0.0;
  for (size_t i = 1; i < c.verts.size(); ++i)
    sum += g.edge(g.findEdge(c.verts[i - 1], c.verts[i])).len;
  CHECK(c.length() == doctest::Approx(sum).epsilon(1e-14));
  CHECK(c.reversed().length() == doctest::Approx(c.length()).epsilon(1e-14));
  CHECK(c.reversed().front() == c.back());
}

TEST_CASE("canonical path prefers the lexicographically smaller id sequence") {
  // diamond 0-1-3 and 0-2-3 with equal lengths
  MetricGraph g({0, 1, 2, 3}, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}});
  auto p = g.canonicalPath(0, 3);
  CHECK(p == std::vector<int>{0, 1, 3});
}

TEST_CASE("ball convention is strict") {
  auto g = unitPath(5);
  auto dist = g.distancesFrom(0);
  auto ball = MetricGraph::ballVertices(dist, 2.0);
  CHECK(ball == std::vector<int>{0, 1});
}
