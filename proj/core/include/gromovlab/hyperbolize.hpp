#pragma once

#include <cstdint>

#include "gromovlab/domain.hpp"
#include "gromovlab/generators.hpp"
#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"
#include "gromovlab/uniformize.hpp"

namespace gromovlab {

/// integral over [t0,t1] of dt / min(cap, a + t, b + len - t), exact
/// (logarithmic and linear pieces). Infinite when the integrand blows up.
double clearance_inverse_integral(double a, double b, double len, double cap, double t0,
                                  double t1);
/// integral over [t0,t1] of min(cap, a + t, b + len - t)^(-alpha) dt, exact.
double clearance_pow_integral(double a, double b, double len, double cap, double alpha,
                              double t0, double t1);

struct QuasihyperbolizedSpace {
  MetricGraph graph;              // interior vertices, quasihyperbolic edge lengths
  std::vector<int> toInterior;    // domain index -> interior index or -1
  std::vector<int> fromInterior;  // interior index -> domain index
  int droppedEdges = 0;           // boundary-incident edges (infinite length)
};

/// Deform each interior edge to its exact quasihyperbolic length; boundary
/// vertices are removed and boundary-incident edges dropped.
QuasihyperbolizedSpace quasihyperbolic(const UniformDomain& dom);

/// mass(v) *= exact cell average of d_Omega^(-alpha) over v's half-edges;
/// boundary masses are dropped. The pointwise rule holds to O(h^2).
MeasureField mu_alpha(const UniformDomain& dom, const MeasureField& mu, double alpha);

/// Restrict a domain measure to the interior index space of a
/// quasihyperbolized graph.
MeasureField restrict_to_interior(const QuasihyperbolizedSpace& q,
                                  const MeasureField& mu);

/// Doubling of mu^alpha on quasihyperbolic balls of radii <= R0 against the
/// predicted 4^alpha * Cmu^m bound with m = ceil(log2(8 L)), L = 1.
VerificationReport hyperbolized_doubling_check(const UniformDomain& dom,
                                               const MeasureField& mu, double alpha,
                                               double R0 = 0.125);

/// View a uniformized space as a bounded domain: each frontier vertex with a
/// positive tail gets a pendant ideal-boundary vertex at distance tau; zero
/// tails make the frontier vertex itself boundary.
struct UniformizedDomain {
  UniformDomain dom;
  int sourceOrder = 0;  // vertices 0..sourceOrder-1 are the original ones
};
UniformizedDomain domain_from_uniformized(const UniformizedSpace& us);

/// k-geodesic curves (canonical shortest paths in the quasihyperbolic metric)
/// for a fixed domain; these act as the domain's uniform curves.
class UniformCurveOracle {
public:
  explicit UniformCurveOracle(const UniformDomain& dom);
  /// Curve through domain vertices from x to y (both interior).
  Curve curveBetween(int x, int y) const;
  const QuasihyperbolizedSpace& space() const { return q_; }

private:
  const UniformDomain* dom_;
  QuasihyperbolizedSpace q_;
};

struct CurveCheckResult {
  bool pass = false;
  double minimalA = 1.0;
  double worstLengthRatio = 0.0;  // l(curve) / d(x, y)
  double worstCigarRatio = 0.0;   // min(t, l - t) / d_Omega at the worst vertex
};

/// Minimal A for which the curve satisfies the length and cigar conditions.
CurveCheckResult uniform_curve_check(const UniformDomain& dom, const Curve& curve,
                                     double A);

/// Max over sampled interior pairs of the minimal uniformity constant of the
/// k-geodesic joining them (a measured lower bound for the domain's A).
double measure_uniformity_A(const UniformDomain& dom, int samplePairs,
                            std::uint64_t seed);

/// Uniformize, rebuild the boundary distance from tail closures, and compare
/// the quasihyperbolic metric of the result against the source metric.
VerificationReport roundtrip_bilipschitz(const GeneratedSpace& gen, double eps,
                                         int samplePairs, std::uint64_t seed);

}  // namespace gromovlab
