#include "gromovlab/measure.hpp"

#include <cmath>
#include <numeric>

namespace gromovlab {

double MeasureField::total() const {
  return std::accumulate(mass.begin(), mass.end(), 0.0);
}

void MeasureField::validate(const MetricGraph& g) const {
  if (static_cast<int>(mass.size()) != g.order())
    throw DataError("measure field size does not match graph order");
  for (double m : mass)
    if (m < 0.0 || !std::isfinite(m)) throw DataError("negative or non-finite vertex mass");
  if (!(total() > 0.0)) throw DataError("total mass must be positive");
}

MeasureField MeasureField::scaled(double c) const {
  MeasureField out = *this;
  for (double& m : out.mass) m *= c;
  return out;
}

double MeasureField::ballMass(const std::vector<double>& dist, double r) const {
  double s = 0.0;
  for (size_t v = 0; v < mass.size(); ++v)
    if (dist[v] < r) s += mass[v];
  return s;
}

EdgeMassField EdgeMassField::fromVertexMasses(const MetricGraph& g, const MeasureField& mu) {
  EdgeMassField out;
  out.m.resize(g.edgeCount());
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    out.m[e] = ed.len * (mu.mass[ed.u] / g.incidentLen(ed.u) +
                         mu.mass[ed.v] / g.incidentLen(ed.v));
  }
  return out;
}

double EdgeMassField::total() const {
  return std::accumulate(m.begin(), m.end(), 0.0);
}

}  // namespace gromovlab
