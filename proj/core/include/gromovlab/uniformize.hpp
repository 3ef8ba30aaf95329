#pragma once

#include <cstdint>
#include <optional>

#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"

namespace gromovlab {

/// Graph with conformally deformed edge lengths, frontier and tail closure
/// modeling the bounded deformation of a pointed space.
struct UniformizedSpace {
  MetricGraph graph;        // deformed edge lengths
  MetricGraph source;       // original graph (same vertex set and edges)
  std::vector<double> sourceDist;  // d(x, z0) in the source metric
  std::vector<double> rhoEps;      // e^{-eps d(x, z0)}
  double epsilon = 1.0;
  int base = 0;
  std::vector<int> frontier;
  std::vector<double> tau;  // aligned with frontier; extra distance to the ideal boundary
  bool truncationBiased = false;

  /// min over frontier v of d_eps(x, v) + tau(v), for every vertex.
  std::vector<double> boundaryDistances() const;
  double maxTau() const;
  /// Diameter bound for the closure: deformed graph diameter + two worst tails.
  double diamEps() const;
};

struct UniformizeOptions {
  double eps0 = kInf;
  bool force = false;
  bool exactTails = false;
};

/// Exact deformed length of one edge:
/// integral over [0,len] of exp(-rate * min(du + t, dv + len - t)) dt.
double tent_exp_integral(double du, double dv, double len, double rate);

UniformizedSpace uniformize(const PointedSpace& ps, double eps,
                            const UniformizeOptions& opt = {});

/// Recompute every deformed edge length from the source data (bit-for-bit
/// reproducible against graph.edge(e).len).
std::vector<double> recompute_deformed_lengths(const UniformizedSpace& us);

double boundary_distance(const UniformizedSpace& us, int x);

struct UniformizationConstants {
  double M = 0.0;
  double delta = 0.0;
  double epsilon = 1.0;
  double epsilon0 = kInf;
  double C0 = 1.0;  // 2 e^{eps M} - 1
  double C1 = 0.0;  // e^{-(1 + eps M)}
  double C2 = 0.0;  // 2 e (2 e^{eps M} - 1)

  static UniformizationConstants fromMDelta(double M, double delta, double eps,
                                            double eps0 = kInf);
};

/// Ball-inclusion check on sampled (x, r <= d_eps(x)/2):
/// B(x, C1 r / rho(x)) inside B_eps(x, r) inside B(x, C2 r / rho(x)),
/// plus the two-point distance sandwich at subWhitney separation.
VerificationReport whitney_inclusion_check(const UniformizedSpace& us,
                                           const UniformizationConstants& consts,
                                           int sampleBudget, std::uint64_t seed);

/// Vertex-pointwise density deformation mass(x) *= e^{-beta d(x, z0)}.
MeasureField mu_beta(const PointedSpace& ps, const MeasureField& mu, double beta);
MeasureField mu_beta(const std::vector<double>& sourceDist, const MeasureField& mu,
                     double beta);
/// Threshold beta_0 = 17 log(Cd) / (3 R0).
double mu_beta_threshold(double Cd, double R0);

struct CorkscrewResult {
  int z = -1;
  bool certified = false;
  double a0 = 0.0;
  double r = 0.0;
  double boundaryClearance = 0.0;  // d_eps(z)
  bool ballContained = false;
  bool viaBase = false;  // short-curve branch z = z0
};

/// Walks the canonical deformed geodesic from x toward the base point and
/// certifies B_eps(z, a0 r) inside B_eps(x, r) with d_eps(z) >= 2 a0 r.
CorkscrewResult corkscrew_point(const UniformizedSpace& us, int x, double r, double a0);

struct GlobalDoublingOptions {
  double a0 = 1.0 / 16.0;
  int corkscrewSamples = 32;
  std::uint64_t seed = 11;
};

/// Exhaustive-in-radii doubling of the deformed measure over all scales up to
/// 2 diam, plus corkscrew-ball comparability on sampled (x, r).
VerificationReport global_doubling_check(const UniformizedSpace& us,
                                         const MeasureField& muBeta, double R0used,
                                         double CdUsed,
                                         const GlobalDoublingOptions& opt = {});

struct BoundaryDimensionParams {
  double beta = 2.0;
  double Cd = 2.0;
  double R0 = 1.0;
  double slack = 0.15;
};

/// Log-log exponent fit of r -> mass(B_eps(xi, r)) at a frontier point, with
/// the predicted exponent window, frontier box-counting dimension and the
/// lower mass-bound constant.
VerificationReport boundary_dimension_check(const UniformizedSpace& us,
                                            const MeasureField& muBeta, int xi,
                                            const std::vector<double>& radiiGrid,
                                            const BoundaryDimensionParams& params);

/// Empirical band for d_eps(x,y) against (1/eps) e^{-eps (x|y)} min(1, eps d).
VerificationReport gromov_comparison_check(const UniformizedSpace& us, int samplePairs,
                                           std::uint64_t seed);
/// Empirical band for exp(eps d(x,y)) against d_eps(x,y)^2/(d_eps(x) d_eps(y))
/// over pairs with eps d(x,y) >= 1.
VerificationReport distance_ratio_check(const UniformizedSpace& us, int samplePairs,
                                        std::uint64_t seed);
/// Density comparability rho_beta(y) vs rho_beta(x) on sampled subWhitney balls.
VerificationReport density_band_check(const UniformizedSpace& us, double beta,
                                      int samples, std::uint64_t seed);

}  // namespace gromovlab
