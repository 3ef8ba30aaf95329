#pragma once

#include <cstdint>
#include <optional>

#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"

namespace gromovlab {

/// Per-edge clearance data for the quasihyperbolic integral: along the edge
/// the boundary distance is min(cap, a + t, b + len - t). Plain domains leave
/// cap infinite with a/b the endpoint values; product domains cap by the
/// other factor's clearance, which is constant along a single-coordinate move.
struct EdgeClearance {
  double a = 0.0;
  double b = 0.0;
  double cap = kInf;
};

/// Graph with a tagged boundary vertex set and per-vertex boundary distance.
struct UniformDomain {
  MetricGraph graph;
  std::vector<int> boundary;
  std::vector<double> dOmega;
  std::optional<double> uniformityA;
  std::vector<EdgeClearance> edgeClearance;  // optional, same size as edges

  std::vector<char> boundaryMask() const;
  std::vector<int> interiorVertices() const;
  bool isBoundary(int v) const;
  double diameterInterior() const;

  /// Recompute dOmega from the boundary set and check it matches.
  void validate() const;
  static UniformDomain fromBoundary(MetricGraph g, std::vector<int> boundary);
  EdgeClearance clearanceOf(int e) const;
};

/// For each radius, samples pairs in B(a,2r)\B(a,r) and searches for a path
/// confined to B(a,Lambda r)\B(a,r/Lambda) of length <= Lambda d(x,y).
VerificationReport annular_quasiconvexity_check(const UniformDomain& dom, int a,
                                                double Lambda,
                                                const std::vector<double>& radii,
                                                int samplePairs = 32,
                                                std::uint64_t seed = 1);

}  // namespace gromovlab
