#pragma once

#include "gromovlab/metric_graph.hpp"

namespace gromovlab {

/// Nonnegative vertex masses modeling a Borel measure.
struct MeasureField {
  std::vector<double> mass;

  double total() const;
  void validate(const MetricGraph& g) const;
  MeasureField scaled(double c) const;
  /// Sum of masses over vertices with dist[v] < r.
  double ballMass(const std::vector<double>& dist, double r) const;
};

/// Per-edge masses m_e = l_e * (nu(u)/S(u) + nu(v)/S(v)) with S(v) the total
/// incident edge length. Length-share splitting conserves total mass exactly.
struct EdgeMassField {
  std::vector<double> m;

  static EdgeMassField fromVertexMasses(const MetricGraph& g, const MeasureField& mu);
  double total() const;
};

}  // namespace gromovlab
