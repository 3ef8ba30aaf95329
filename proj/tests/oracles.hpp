#pragma once

// Test-only oracles, kept independent of the library code paths they check:
// cubic all-pairs distances, exhaustive thin-triangle search, adaptive
// quadrature, dense grid minimization, exhaustive minimum covers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gromovlab/metric_graph.hpp"

namespace oracles {

using gromovlab::MetricGraph;

// Floyd-Warshall cubic all-pairs distances.
inline std::vector<std::vector<double>> allPairs(const MetricGraph& g) {
  const int n = g.order();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, gromovlab::kInf));
  for (int v = 0; v < n; ++v) d[v][v] = 0.0;
  for (const auto& e : g.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.len);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.len);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Canonical (lexicographically smallest id sequence) shortest path rebuilt
// from an all-pairs matrix; shares the convention, not the implementation.
inline std::vector<int> canonicalPathFW(const MetricGraph& g,
                                        const std::vector<std::vector<double>>& d, int u,
                                        int v, double tol) {
  std::vector<int> path{u};
  int cur = u;
  while (cur != v) {
    int best = -1;
    for (int e : g.incidentEdges(cur)) {
      int w = g.otherEnd(e, cur);
      double len = g.edge(e).len;
      if (std::abs(d[u][cur] + len - d[u][w]) <= tol &&
          std::abs(d[u][w] + d[w][v] - d[u][v]) <= tol) {
        if (best < 0 || g.idOf(w) < g.idOf(best)) best = w;
      }
    }
    path.push_back(best);
    cur = best;
  }
  return path;
}

// Exhaustive thin-triangle defect over all vertex triples with canonical
// sides, using only the all-pairs matrix.
inline double bruteDeltaCanonical(const MetricGraph& g) {
  auto d = allPairs(g);
  double tol = 1e-9 * (1.0 + g.totalEdgeLen());
  double delta = 0.0;
  const int n = g.order();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      for (int z = y + 1; z < n; ++z) {
        std::vector<std::vector<int>> sides{canonicalPathFW(g, d, x, y, tol),
                                            canonicalPathFW(g, d, y, z, tol),
                                            canonicalPathFW(g, d, z, x, tol)};
        for (int s = 0; s < 3; ++s) {
          for (int w : sides[s]) {
            double dm = gromovlab::kInf;
            for (int o = 1; o <= 2; ++o)
              for (int u2 : sides[(s + o) % 3]) dm = std::min(dm, d[w][u2]);
            delta = std::max(delta, dm);
          }
        }
      }
  return delta;
}

// Adaptive Simpson quadrature (independent of the library integrators).
inline double quad(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-12, int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
          int dep) -> double {
    double mid = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    double flm = f(lm), frm = f(rm);
    double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
    double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
    if (dep <= 0 || std::abs(left + right - whole) < 15 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, dep - 1) +
           rec(mid, hi, fmid, frm, fhi, right, dep - 1);
  };
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), depth);
}

// Dense nested grid minimization over a box; zooms around the incumbent.
struct GridResult {
  double value = 0.0;
  std::vector<double> point;
};
inline GridResult gridMinimize(const std::function<double(const std::vector<double>&)>& f,
                               int dims, double lo, double hi, int pointsPerDim = 7,
                               int passes = 8) {
  std::vector<double> los(dims, lo), his(dims, hi);
  GridResult best;
  best.point.assign(dims, 0.5 * (lo + hi));
  best.value = f(best.point);
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<double> point(dims);
    std::vector<int> idx(dims, 0);
    bool done = false;
    while (!done) {
      for (int k = 0; k < dims; ++k)
        point[k] = los[k] + (his[k] - los[k]) * idx[k] / (pointsPerDim - 1);
      double val = f(point);
      if (val < best.value) {
        best.value = val;
        best.point = point;
      }
      int k = 0;
      while (k < dims && ++idx[k] == pointsPerDim) idx[k++] = 0;
      done = (k == dims);
    }
    for (int k = 0; k < dims; ++k) {
      double span = (his[k] - los[k]) / (pointsPerDim - 1);
      los[k] = best.point[k] - span;
      his[k] = best.point[k] + span;
    }
  }
  return best;
}

// Exhaustive minimum ball-cover size over candidate center subsets.
inline int minCoverExhaustive(const MetricGraph& g, const std::vector<int>& ball,
                              const std::vector<int>& candidates, double r) {
  const int m = static_cast<int>(candidates.size());
  std::vector<std::vector<char>> covers(m, std::vector<char>(ball.size(), 0));
  for (int c = 0; c < m; ++c) {
    auto dist = g.distancesFrom(candidates[c]);
    for (size_t i = 0; i < ball.size(); ++i) covers[c][i] = dist[ball[i]] < r;
  }
  for (int size = 1; size <= m; ++size) {
    std::vector<int> pick(size, 0);
    std::function<bool(int, int)> rec = [&](int at, int from) -> bool {
      if (at == size) {
        for (size_t i = 0; i < ball.size(); ++i) {
          bool covered = false;
          for (int j = 0; j < size; ++j) covered = covered || covers[pick[j]][i];
          if (!covered) return false;
        }
        return true;
      }
      for (int c = from; c < m; ++c) {
        pick[at] = c;
        if (rec(at + 1, c + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return size;
  }
  return m + 1;
}

}  // namespace oracles
