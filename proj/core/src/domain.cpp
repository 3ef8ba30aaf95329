#include "gromovlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "gromovlab/rng.hpp"

namespace gromovlab {

std::vector<char> UniformDomain::boundaryMask() const {
  std::vector<char> mask(graph.order(), 0);
  for (int b : boundary) mask[b] = 1;
  return mask;
}

std::vector<int> UniformDomain::interiorVertices() const {
  auto mask = boundaryMask();
  std::vector<int> out;
  for (int v = 0; v < graph.order(); ++v)
    if (!mask[v]) out.push_back(v);
  return out;
}

bool UniformDomain::isBoundary(int v) const {
  return std::find(boundary.begin(), boundary.end(), v) != boundary.end();
}

double UniformDomain::diameterInterior() const {
  auto mask = boundaryMask();
  double best = 0.0;
  int a = -1;
  for (int v = 0; v < graph.order(); ++v)
    if (!mask[v]) {
      a = v;
      break;
    }
  if (a < 0) return 0.0;
  // double sweep restricted to interior endpoints
  auto d0 = graph.distancesFrom(a);
  int far = a;
  for (int v = 0; v < graph.order(); ++v)
    if (!mask[v] && d0[v] > d0[far]) far = v;
  auto d1 = graph.distancesFrom(far);
  for (int v = 0; v < graph.order(); ++v)
    if (!mask[v]) best = std::max(best, d1[v]);
  return best;
}

void UniformDomain::validate() const {
  if (boundary.empty()) throw DataError("uniform domain has no boundary vertices");
  if (static_cast<int>(dOmega.size()) != graph.order())
    throw DataError("dOmega size mismatch");
  auto dist = graph.distancesFromSet(boundary);
  double tol = graph.tolGeom();
  for (int v = 0; v < graph.order(); ++v) {
    if (std::abs(dist[v] - dOmega[v]) > tol)
      throw DataError("dOmega does not match distance to boundary at vertex " +
                      std::to_string(graph.idOf(v)));
  }
  auto mask = boundaryMask();
  for (int v = 0; v < graph.order(); ++v)
    if (!mask[v] && !(dOmega[v] > 0)) throw DataError("interior vertex touching boundary");
}

UniformDomain UniformDomain::fromBoundary(MetricGraph g, std::vector<int> bdry) {
  UniformDomain dom;
  dom.dOmega = g.distancesFromSet(bdry);
  dom.graph = std::move(g);
  dom.boundary = std::move(bdry);
  return dom;
}

EdgeClearance UniformDomain::clearanceOf(int e) const {
  if (!edgeClearance.empty()) return edgeClearance[e];
  const Edge& ed = graph.edge(e);
  return EdgeClearance{dOmega[ed.u], dOmega[ed.v], kInf};
}

namespace {

// Shortest path length between x and y using only vertices in `allowed`.
double constrainedDistance(const MetricGraph& g, const std::vector<char>& allowed, int x,
                           int y) {
  if (!allowed[x] || !allowed[y]) return kInf;
  std::vector<double> dist(g.order(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[x] = 0.0;
  pq.emplace(0.0, x);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    if (v == y) return d;
    for (int e : g.incidentEdges(v)) {
      int w = g.otherEnd(e, v);
      if (!allowed[w]) continue;
      double nd = d + g.edge(e).len;
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.emplace(nd, w);
      }
    }
  }
  return kInf;
}

}  // namespace

VerificationReport annular_quasiconvexity_check(const UniformDomain& dom, int a,
                                                double Lambda,
                                                const std::vector<double>& radii,
                                                int samplePairs, std::uint64_t seed) {
  if (!dom.isBoundary(a)) throw InputError("annulus center must be a boundary vertex");
  if (Lambda < 2.0) throw InputError("Lambda must be >= 2");
  for (double r : radii)
    if (!(r > 0)) throw InputError("radii must be positive");

  const MetricGraph& g = dom.graph;
  VerificationReport rep;
  rep.check = "annular-quasiconvexity";
  rep.anchor = "annular-quasiconvexity-at-boundary";
  auto distA = g.distancesFrom(a);
  Rng rng(seed);

  double worstRatio = 0.0;
  int pass = 0, fail = 0, skipped = 0;
  json rows = json::array();

  for (double r : radii) {
    std::vector<int> annulus;
    for (int v = 0; v < g.order(); ++v)
      if (distA[v] >= r && distA[v] < 2.0 * r) annulus.push_back(v);
    if (annulus.size() < 2) {
      json note;
      note["radius"] = r;
      note["note"] = annulus.empty() ? "annulus empty, skipped" : "single vertex, skipped";
      rows.push_back(note);
      ++skipped;
      continue;
    }
    std::vector<char> allowed(g.order(), 0);
    for (int v = 0; v < g.order(); ++v)
      if (distA[v] >= r / Lambda && distA[v] < Lambda * r) allowed[v] = 1;

    int pairs = std::min<long long>(samplePairs,
                                    (long long)annulus.size() * (annulus.size() - 1) / 2 + 1);
    for (int i = 0; i < pairs; ++i) {
      int x = rng.pick(annulus);
      int y = rng.pick(annulus);
      double dxy = g.distance(x, y);
      double constrained = (x == y) ? 0.0 : constrainedDistance(g, allowed, x, y);
      double ratio = dxy > 0 ? constrained / dxy : 0.0;
      bool ok = std::isfinite(constrained) && constrained <= Lambda * dxy + g.tolGeom();
      if (ok) ++pass;
      else {
        ++fail;
        json w;
        w["radius"] = r;
        w["x"] = g.idOf(x);
        w["y"] = g.idOf(y);
        w["constrainedLength"] = std::isfinite(constrained) ? json(constrained) : json("inf");
        w["ambient"] = dxy;
        rep.witnesses.push_back(w);
      }
      if (std::isfinite(ratio)) worstRatio = std::max(worstRatio, ratio);
      else worstRatio = kInf;
    }
  }
  rep.measured["pairsPassed"] = pass;
  rep.measured["pairsFailed"] = fail;
  rep.measured["radiiSkipped"] = skipped;
  rep.measured["worstLengthRatio"] =
      std::isfinite(worstRatio) ? json(worstRatio) : json("inf");
  rep.measured["perRadius"] = rows;
  rep.predicted["Lambda"] = Lambda;
  rep.setStatus(fail == 0);
  return rep;
}

}  // namespace gromovlab
