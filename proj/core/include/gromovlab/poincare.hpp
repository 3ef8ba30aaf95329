#pragma once

#include <cstdint>
#include <optional>

#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"

namespace gromovlab {

struct PoincareReport {
  double p = 2.0;
  double lambda = 1.0;
  double radius = 0.0;
  int center = -1;
  /// sup over the test family of mean-oscillation / (diam * gradient mean).
  double lowerBoundCPI = 0.0;
  /// p = 2, lambda = 1 only: 1 / (sqrt(lambda_1) * diam(B)) from the weighted
  /// Laplacian pencil on the ball. An upper-bound-certified route: the L^1
  /// left side is dominated by the L^2 route via Cauchy-Schwarz.
  std::optional<double> exactL2Constant;
  int worstTestFunction = -1;
  bool infiniteWitness = false;  // disconnected dilated ball support
  json witnesses = json::array();

  json toJson() const;
};

/// Lower bound on C_PI over a seeded test family (distance functions,
/// smoothed cuts, low-frequency random fields); exact spectral value when
/// p = 2 and lambda = 1.
PoincareReport poincare_constant(const MetricGraph& g, const MeasureField& mu, int center,
                                 double radius, double p, double lambda,
                                 int testBudget = 64, std::uint64_t seed = 7);

}  // namespace gromovlab
