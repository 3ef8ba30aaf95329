#include "gromovlab/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>

#include "gromovlab/rng.hpp"

namespace gromovlab {

namespace {

// Defect of one triangle: for each side, the worst distance from a side
// vertex to the union of the other two sides. distToSet(v) must give the
// distance from v to that union.
double triangleDefect(const MetricGraph& g, const std::array<std::vector<int>, 3>& sides,
                      const std::vector<std::vector<double>>* allPairs) {
  double worst = 0.0;
  for (int s = 0; s < 3; ++s) {
    const auto& side = sides[s];
    const auto& o1 = sides[(s + 1) % 3];
    const auto& o2 = sides[(s + 2) % 3];
    if (allPairs) {
      for (int w : side) {
        double dmin = kInf;
        for (int u : o1) dmin = std::min(dmin, (*allPairs)[w][u]);
        for (int u : o2) dmin = std::min(dmin, (*allPairs)[w][u]);
        worst = std::max(worst, dmin);
      }
    } else {
      std::vector<int> uni(o1);
      uni.insert(uni.end(), o2.begin(), o2.end());
      std::sort(uni.begin(), uni.end());
      uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
      auto dist = g.distancesFromSet(uni);
      for (int w : side) worst = std::max(worst, dist[w]);
    }
  }
  return worst;
}

}  // namespace

HyperbolicityReport delta_hyperbolicity(const MetricGraph& g, long long sampleBudget,
                                        std::uint64_t seed) {
  if (g.order() == 0) throw InputError("empty graph");
  g.requireConnected();
  HyperbolicityReport rep;
  const int n = g.order();
  const long long cube = static_cast<long long>(n) * n * n;
  rep.exhaustive = cube <= sampleBudget;

  auto consider = [&](int x, int y, int z, const std::vector<std::vector<double>>* ap,
                      const std::vector<double>* dx, const std::vector<double>* dy,
                      const std::vector<double>* dz) {
    std::array<std::vector<int>, 3> sides;
    if (ap) {
      sides[0] = g.canonicalPath(x, y, (*ap)[x], (*ap)[y]);
      sides[1] = g.canonicalPath(y, z, (*ap)[y], (*ap)[z]);
      sides[2] = g.canonicalPath(z, x, (*ap)[z], (*ap)[x]);
    } else {
      sides[0] = g.canonicalPath(x, y, *dx, *dy);
      sides[1] = g.canonicalPath(y, z, *dy, *dz);
      sides[2] = g.canonicalPath(z, x, *dz, *dx);
    }
    double d = triangleDefect(g, sides, ap);
    ++rep.triplesSampled;
    if (d > rep.deltaEstimate) {
      rep.deltaEstimate = d;
      rep.worstTriangle = {x, y, z};
    }
  };

  if (rep.exhaustive) {
    std::vector<std::vector<double>> ap(n);
    for (int v = 0; v < n; ++v) ap[v] = g.distancesFrom(v);
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        for (int z = y + 1; z < n; ++z) consider(x, y, z, &ap, nullptr, nullptr, nullptr);
  } else {
    Rng rng(seed);
    long long samples = std::max<long long>(1, sampleBudget / std::max(1, n));
    for (long long i = 0; i < samples; ++i) {
      int x = rng.pick(n), y = rng.pick(n), z = rng.pick(n);
      if (x == y || y == z || x == z) continue;
      auto dx = g.distancesFrom(x);
      auto dy = g.distancesFrom(y);
      auto dz = g.distancesFrom(z);
      consider(x, y, z, nullptr, &dx, &dy, &dz);
    }
  }
  return rep;
}

double roughly_starlike_M(const PointedSpace& ps) {
  if (ps.rayTips.empty()) throw ConfigError("roughly_starlike_M requires ray tips");
  const MetricGraph& g = ps.graph;
  auto baseDist = g.distancesFrom(ps.base);
  std::vector<int> rays;
  for (int tip : ps.rayTips) {
    auto distTip = g.distancesFrom(tip);
    auto path = g.canonicalPath(ps.base, tip, baseDist, distTip);
    rays.insert(rays.end(), path.begin(), path.end());
  }
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  auto dist = g.distancesFromSet(rays);
  return *std::max_element(dist.begin(), dist.end());
}

}  // namespace gromovlab
