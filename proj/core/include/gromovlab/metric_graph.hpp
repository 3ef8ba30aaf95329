#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gromovlab {

/// Bad caller input (unknown vertex, malformed parameters).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Missing or inconsistent configuration (e.g. no ray tips where required).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent data in an input file or fixture.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  int u = -1;
  int v = -1;
  double len = 0.0;
};

/// Finite connected weighted graph whose shortest-path distance models a
/// geodesic metric space. Vertices carry external integer ids; all operations
/// use dense internal indices 0..n-1.
class MetricGraph {
public:
  MetricGraph() = default;
  MetricGraph(std::vector<std::int64_t> ids, std::vector<Edge> edges);

  int order() const { return static_cast<int>(ids_.size()); }
  int edgeCount() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<std::int64_t>& ids() const { return ids_; }
  std::int64_t idOf(int v) const { return ids_[v]; }
  int indexOf(std::int64_t id) const;
  bool hasId(std::int64_t id) const { return byId_.count(id) > 0; }
  bool isTree() const { return edgeCount() + 1 == order(); }

  std::span<const int> incidentEdges(int v) const {
    return {adjEdges_.data() + adjStart_[v],
            static_cast<size_t>(adjStart_[v + 1] - adjStart_[v])};
  }
  int otherEnd(int e, int v) const {
    const Edge& ed = edges_[e];
    return ed.u == v ? ed.v : ed.u;
  }
  /// Smallest edge index joining u and v, or -1.
  int findEdge(int u, int v) const;

  bool isConnected() const;
  void requireConnected() const;

  double minEdgeLen() const { return minEdgeLen_; }
  double totalEdgeLen() const { return totalEdgeLen_; }
  /// S(v): total length of edges incident to v.
  double incidentLen(int v) const { return incidentLen_[v]; }

  /// Exact single-source shortest-path distances. Trees use a linear-time
  /// traversal, general graphs Dijkstra.
  std::vector<double> distancesFrom(int src) const;
  /// Multi-source variant with optional per-source initial offsets.
  std::vector<double> distancesFromSet(const std::vector<int>& srcs,
                                       const std::vector<double>* offsets = nullptr) const;
  double distance(int u, int v) const;

  /// Double-sweep diameter estimate (exact on trees, a lower bound in
  /// general). Cached; used for the global length tolerance.
  double diameterEstimate() const;
  /// Comparison fuzz for <=/< tests on lengths: 1e-9 x diameter estimate.
  double tolGeom() const { return 1e-9 * diameterEstimate(); }

  /// Lexicographically smallest shortest path by vertex-id sequence.
  /// distU/distV, when given, must be distancesFrom(u)/distancesFrom(v).
  std::vector<int> canonicalPath(int u, int v) const;
  std::vector<int> canonicalPath(int u, int v, const std::vector<double>& distU,
                                 const std::vector<double>& distV) const;

  /// Vertices with dist[v] < r (open ball, strict comparison).
  static std::vector<int> ballVertices(const std::vector<double>& dist, double r);

private:
  void buildAdjacency();
  void validate() const;

  std::vector<std::int64_t> ids_;
  std::vector<Edge> edges_;
  std::unordered_map<std::int64_t, int> byId_;
  std::vector<int> adjStart_;
  std::vector<int> adjEdges_;
  std::vector<double> incidentLen_;
  double minEdgeLen_ = kInf;
  double totalEdgeLen_ = 0.0;
  mutable double diamCache_ = -1.0;
};

/// Path through adjacent vertices with cumulative arc length per step.
struct Curve {
  std::vector<int> verts;
  std::vector<double> cum;  // cum[0] = 0, cum.back() = total length

  double length() const { return cum.empty() ? 0.0 : cum.back(); }
  bool empty() const { return verts.empty(); }
  int front() const { return verts.front(); }
  int back() const { return verts.back(); }

  static Curve fromPath(const MetricGraph& g, std::vector<int> path);
  Curve reversed() const;
  /// Prefix ending at the first vertex with arc length >= t (t clamped).
  Curve prefixByLength(double t) const;
  /// Concatenate with another curve starting at this curve's endpoint.
  Curve concat(const Curve& tail) const;
  /// Arc length from the start to verts[i].
  double arcAt(int i) const { return cum[i]; }
};

/// Graph with a distinguished base point and optional truncation frontier
/// standing in for geodesic-ray endpoints.
struct PointedSpace {
  MetricGraph graph;
  int base = 0;
  std::vector<int> rayTips;
};

double shortest_dist(const MetricGraph& g, std::int64_t uId, std::int64_t vId);

/// Subgraph induced by a vertex set, with index maps in both directions and
/// the surviving edges' original indices.
struct InducedSubgraph {
  MetricGraph graph;
  std::vector<int> toSub;    // original index -> sub index or -1
  std::vector<int> fromSub;  // sub index -> original index
  std::vector<int> edgeOrigin;
};
InducedSubgraph induced_subgraph(const MetricGraph& g, const std::vector<int>& verts);

/// (x|y)_{z0} = [d(x,z0) + d(y,z0) - d(x,y)] / 2.
double gromov_product(const PointedSpace& ps, int x, int y);
double gromov_product(const PointedSpace& ps, int x, int y,
                      const std::vector<double>& baseDist);

}  // namespace gromovlab
