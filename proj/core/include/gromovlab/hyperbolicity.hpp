#pragma once

#include <array>
#include <cstdint>

#include "gromovlab/metric_graph.hpp"

namespace gromovlab {

struct HyperbolicityReport {
  double deltaEstimate = 0.0;
  double M = 0.0;  // rough starlikeness, when computed
  long long triplesSampled = 0;
  std::array<int, 3> worstTriangle{-1, -1, -1};
  bool exhaustive = false;
  /// Canonical geodesics only; a lower bound for the all-geodesic supremum.
  bool lowerBoundOnly = true;
};

/// Thin-triangle delta over vertex triples, exhaustive when |V|^3 <= budget,
/// else seeded sampling of budget/|V| triples. Sides are canonical geodesics;
/// the defect of a triangle is the largest distance from a vertex on one side
/// to the union of the other two sides.
HyperbolicityReport delta_hyperbolicity(const MetricGraph& g, long long sampleBudget,
                                        std::uint64_t seed);

/// Max over vertices of the distance to the union of the canonical geodesics
/// from the base point to each ray tip.
double roughly_starlike_M(const PointedSpace& ps);

}  // namespace gromovlab
