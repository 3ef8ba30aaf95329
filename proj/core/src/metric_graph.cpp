#include "gromovlab/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace gromovlab {

MetricGraph::MetricGraph(std::vector<std::int64_t> ids, std::vector<Edge> edges)
    : ids_(std::move(ids)), edges_(std::move(edges)) {
  byId_.reserve(ids_.size());
  for (int i = 0; i < order(); ++i) {
    if (!byId_.emplace(ids_[i], i).second)
      throw InputError("duplicate vertex id " + std::to_string(ids_[i]));
  }
  buildAdjacency();
  validate();
}

void MetricGraph::buildAdjacency() {
  const int n = order();
  adjStart_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw InputError("edge endpoint out of range");
    ++adjStart_[e.u + 1];
    ++adjStart_[e.v + 1];
  }
  for (int i = 0; i < n; ++i) adjStart_[i + 1] += adjStart_[i];
  adjEdges_.assign(adjStart_[n], 0);
  std::vector<int> fill(adjStart_.begin(), adjStart_.end() - 1);
  for (int e = 0; e < edgeCount(); ++e) {
    adjEdges_[fill[edges_[e].u]++] = e;
    adjEdges_[fill[edges_[e].v]++] = e;
  }
  incidentLen_.assign(n, 0.0);
  minEdgeLen_ = kInf;
  totalEdgeLen_ = 0.0;
  for (const Edge& e : edges_) {
    incidentLen_[e.u] += e.len;
    incidentLen_[e.v] += e.len;
    minEdgeLen_ = std::min(minEdgeLen_, e.len);
    totalEdgeLen_ += e.len;
  }
}

void MetricGraph::validate() const {
  if (order() == 0) throw InputError("empty graph");
  for (const Edge& e : edges_) {
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(ids_[e.u]));
    if (!(e.len > 0.0) || !std::isfinite(e.len))
      throw InputError("nonpositive edge length");
  }
}

bool MetricGraph::isConnected() const {
  if (order() == 0) return false;
  std::vector<char> seen(order(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : incidentEdges(v)) {
      int w = otherEnd(e, v);
      if (!seen[w]) {
        seen[w] = 1;
        ++cnt;
        stack.push_back(w);
      }
    }
  }
  return cnt == order();
}

void MetricGraph::requireConnected() const {
  if (!isConnected()) throw InputError("graph is not connected");
}

int MetricGraph::indexOf(std::int64_t id) const {
  auto it = byId_.find(id);
  if (it == byId_.end()) throw InputError("unknown vertex id " + std::to_string(id));
  return it->second;
}

int MetricGraph::findEdge(int u, int v) const {
  int best = -1;
  for (int e : incidentEdges(u)) {
    if (otherEnd(e, u) == v && (best < 0 || edges_[e].len < edges_[best].len)) best = e;
  }
  return best;
}

std::vector<double> MetricGraph::distancesFrom(int src) const {
  if (src < 0 || src >= order()) throw InputError("vertex index out of range");
  return distancesFromSet({src});
}

std::vector<double> MetricGraph::distancesFromSet(const std::vector<int>& srcs,
                                                  const std::vector<double>* offsets) const {
  const int n = order();
  std::vector<double> dist(n, kInf);
  if (isTree() && srcs.size() == 1 && !offsets) {
    // linear-time traversal: on a tree every first visit is optimal
    std::vector<int> stack{srcs[0]};
    dist[srcs[0]] = 0.0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : incidentEdges(v)) {
        int w = otherEnd(e, v);
        if (dist[w] == kInf) {
          dist[w] = dist[v] + edges_[e].len;
          stack.push_back(w);
        }
      }
    }
    return dist;
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (size_t i = 0; i < srcs.size(); ++i) {
    int s = srcs[i];
    if (s < 0 || s >= n) throw InputError("vertex index out of range");
    double d0 = offsets ? (*offsets)[i] : 0.0;
    if (d0 < dist[s]) {
      dist[s] = d0;
      pq.emplace(d0, s);
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int e : incidentEdges(v)) {
      int w = otherEnd(e, v);
      double nd = d + edges_[e].len;
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.emplace(nd, w);
      }
    }
  }
  return dist;
}

double MetricGraph::distance(int u, int v) const {
  if (v < 0 || v >= order()) throw InputError("vertex index out of range");
  return distancesFrom(u)[v];
}

double MetricGraph::diameterEstimate() const {
  if (diamCache_ >= 0.0) return diamCache_;
  auto finiteMaxAt = [](const std::vector<double>& d) {
    int idx = 0;
    double best = 0.0;
    for (int v = 0; v < static_cast<int>(d.size()); ++v)
      if (std::isfinite(d[v]) && d[v] >= best) {
        best = d[v];
        idx = v;
      }
    return std::pair<int, double>{idx, best};
  };
  auto d0 = distancesFrom(0);
  auto [a, unused] = finiteMaxAt(d0);
  auto da = distancesFrom(a);
  diamCache_ = finiteMaxAt(da).second;
  return diamCache_;
}

std::vector<int> MetricGraph::canonicalPath(int u, int v) const {
  return canonicalPath(u, v, distancesFrom(u), distancesFrom(v));
}

std::vector<int> MetricGraph::canonicalPath(int u, int v, const std::vector<double>& distU,
                                            const std::vector<double>& distV) const {
  const double total = distU[v];
  const double tol = tolGeom() + 1e-12 * (1.0 + total);
  std::vector<int> path{u};
  int cur = u;
  // Greedy smallest-id next step among shortest-path continuations yields the
  // lexicographically smallest id sequence.
  while (cur != v) {
    int best = -1;
    std::int64_t bestId = 0;
    for (int e : incidentEdges(cur)) {
      int w = otherEnd(e, cur);
      if (std::abs(distU[cur] + edges_[e].len - distU[w]) <= tol &&
          std::abs(distU[w] + distV[w] - total) <= tol) {
        if (best < 0 || ids_[w] < bestId) {
          best = w;
          bestId = ids_[w];
        }
      }
    }
    if (best < 0) throw DataError("canonical path reconstruction failed");
    path.push_back(best);
    cur = best;
  }
  return path;
}

std::vector<int> MetricGraph::ballVertices(const std::vector<double>& dist, double r) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(dist.size()); ++v)
    if (dist[v] < r) out.push_back(v);
  return out;
}

Curve Curve::fromPath(const MetricGraph& g, std::vector<int> path) {
  Curve c;
  if (path.empty()) return c;
  c.verts = std::move(path);
  c.cum.resize(c.verts.size());
  c.cum[0] = 0.0;
  for (size_t i = 1; i < c.verts.size(); ++i) {
    int e = g.findEdge(c.verts[i - 1], c.verts[i]);
    if (e < 0) throw InputError("curve step between non-adjacent vertices");
    c.cum[i] = c.cum[i - 1] + g.edge(e).len;
  }
  return c;
}

Curve Curve::reversed() const {
  Curve r;
  r.verts.assign(verts.rbegin(), verts.rend());
  r.cum.resize(cum.size());
  double total = length();
  for (size_t i = 0; i < cum.size(); ++i) r.cum[i] = total - cum[cum.size() - 1 - i];
  if (!r.cum.empty()) r.cum[0] = 0.0;
  return r;
}

Curve Curve::prefixByLength(double t) const {
  Curve p;
  for (size_t i = 0; i < verts.size(); ++i) {
    p.verts.push_back(verts[i]);
    p.cum.push_back(cum[i]);
    if (cum[i] >= t) break;
  }
  return p;
}

Curve Curve::concat(const Curve& tail) const {
  if (empty()) return tail;
  if (tail.empty()) return *this;
  if (back() != tail.front()) throw InputError("curve concatenation endpoint mismatch");
  Curve c = *this;
  double off = length();
  for (size_t i = 1; i < tail.verts.size(); ++i) {
    c.verts.push_back(tail.verts[i]);
    c.cum.push_back(off + tail.cum[i]);
  }
  return c;
}

double shortest_dist(const MetricGraph& g, std::int64_t uId, std::int64_t vId) {
  return g.distance(g.indexOf(uId), g.indexOf(vId));
}

InducedSubgraph induced_subgraph(const MetricGraph& g, const std::vector<int>& verts) {
  InducedSubgraph sub;
  sub.toSub.assign(g.order(), -1);
  for (int v : verts) {
    if (v < 0 || v >= g.order()) throw InputError("vertex index out of range");
    if (sub.toSub[v] < 0) {
      sub.toSub[v] = static_cast<int>(sub.fromSub.size());
      sub.fromSub.push_back(v);
    }
  }
  std::vector<std::int64_t> ids;
  ids.reserve(sub.fromSub.size());
  for (int v : sub.fromSub) ids.push_back(g.idOf(v));
  std::vector<Edge> edges;
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    if (sub.toSub[ed.u] >= 0 && sub.toSub[ed.v] >= 0) {
      edges.push_back({sub.toSub[ed.u], sub.toSub[ed.v], ed.len});
      sub.edgeOrigin.push_back(e);
    }
  }
  sub.graph = MetricGraph(std::move(ids), std::move(edges));
  return sub;
}

double gromov_product(const PointedSpace& ps, int x, int y) {
  return gromov_product(ps, x, y, ps.graph.distancesFrom(ps.base));
}

double gromov_product(const PointedSpace& ps, int x, int y,
                      const std::vector<double>& baseDist) {
  if (x < 0 || x >= ps.graph.order() || y < 0 || y >= ps.graph.order())
    throw InputError("vertex index out of range");
  double dxy = ps.graph.distance(x, y);
  return 0.5 * (baseDist[x] + baseDist[y] - dxy);
}

}  // namespace gromovlab
