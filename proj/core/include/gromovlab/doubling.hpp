#pragma once

#include <cstdint>
#include <optional>

#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"

namespace gromovlab {

struct DoublingScaleRow {
  double radius = 0.0;
  int worstCenter = -1;
  double ratio = 1.0;
};

struct DoublingReport {
  double R0 = 0.0;
  double Cd = 1.0;  // +inf when a zero-mass ball sits inside a positive one
  std::vector<DoublingScaleRow> perScaleTable;
  bool exhaustive = true;
  std::optional<DoublingScaleRow> infinityWitness;

  json toJson() const;
};

enum class SampleMode { Exhaustive, Sampled };

/// sup over centers and radii r in (0, R0] of mu(B(x,2r)) / mu(B(x,r)).
/// Per center, the ratio is piecewise constant in r with breakpoints at the
/// realized distances and their halves, so evaluating at those radii (plus
/// R0) makes the sup exact, not sampled.
DoublingReport doubling_constant(const MetricGraph& g, const MeasureField& mu, double R0,
                                 SampleMode mode = SampleMode::Exhaustive,
                                 std::uint64_t seed = 0, int sampleCenters = 64,
                                 const std::vector<double>* perScaleGrid = nullptr,
                                 const std::vector<int>* restrictCenters = nullptr);

struct CoveringReport {
  int count = 0;
  int n = 0;                    // ceil(R/r)
  double paperBound = 0.0;      // Cd^{7(n+4)/6}, NaN when Cd not supplied
  std::vector<int> centers;
};

/// Greedy farthest-point cover of B(center,R) by radius-r balls centered in it.
CoveringReport covering_number(const MetricGraph& g, int center, double R, double r,
                               double Cd = std::numeric_limits<double>::quiet_NaN());

/// Doubling constant bound at radii <= R1 implied by the covering lemma for a
/// length space that is doubling at radii <= R0 with constant Cd.
double doubling_upgrade_bound(double Cd, double R0, double R1);

/// Measures Cd at R0 and R1 and compares the growth with the covering-lemma
/// bound; quasiconvexity of graph length spaces is recorded as L = 1.
VerificationReport local_to_global_check(const MetricGraph& g, const MeasureField& mu,
                                         double R0, double R1);

}  // namespace gromovlab
