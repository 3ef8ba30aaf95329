#pragma once

#include <cstdint>

#include "gromovlab/domain.hpp"
#include "gromovlab/hyperbolize.hpp"
#include "gromovlab/report.hpp"
#include "gromovlab/uniformize.hpp"

namespace gromovlab {

/// Cartesian product with the sum metric: vertices are coordinate pairs and
/// edges move one coordinate, so shortest paths realize d + d' exactly.
struct ProductDomain {
  UniformDomain dom;
  UniformDomain factorA, factorB;
  std::vector<std::pair<int, int>> coords;  // product index -> (iA, iB)
  double diamA = 0.0, diamB = 0.0;
  double uniformityAFactorA = 1.0, uniformityAFactorB = 1.0;
  double predictedAtilde = 0.0;

  int pairIndex(int iA, int iB) const;
};

/// Predicted product uniformity constant
/// 80[(A+1)D + (A'+1)D'] / min(D/A^3, D'/A'^3).
double predicted_product_uniformity(double A, double D, double A2, double D2);

ProductDomain product_uniform(const UniformDomain& a, const UniformDomain& b,
                              double measuredAa, double measuredAb);

/// Product measure mass(i,j) = muA(i) * muB(j) on the product index space.
MeasureField product_measure(const ProductDomain& prod, const MeasureField& muA,
                             const MeasureField& muB);

struct BananaCertificate {
  Curve curve;
  bool certified = false;
  double length = 0.0;
  double lengthLow = 0.0;   // L / 5A
  double lengthHigh = 0.0;  // (A+1) L
  double worstClearanceRatio = 0.0;
  std::string stageTrace;
};

/// Constructs the capped two-approach curve through a deepest point and
/// certifies the length window and the 1/(16 A^2) clearance inequality.
BananaCertificate long_banana_curve(const UniformDomain& dom,
                                    const UniformCurveOracle& oracle, int x, int y,
                                    double L, double A);

struct IndirectProduct {
  UniformizedSpace ux, uy;
  ProductDomain prod;
  QuasihyperbolizedSpace hyper;
  int base = -1;  // interior index of (zX, zY)
  double epsilon = 1.0;

  /// interior index of the pair (iX, iY), or -1 (ideal pendants are exterior)
  int interiorIndex(int iX, int iY) const;
};

IndirectProduct indirect_product(const GeneratedSpace& X, const GeneratedSpace& Y,
                                 double eps);

struct LipschitzReport {
  double supRatio = 0.0;
  double epsTimesSup = 0.0;
  long long pairs = 0;
  json toJson() const;
};

/// sup over sampled pairs of d_X(pi(a), pi(b)) / k(a, b).
LipschitzReport projection_lipschitz_check(const IndirectProduct& ip,
                                           const GeneratedSpace& X, int sampleBudget,
                                           std::uint64_t seed);

struct CanonicalMapParams {
  int sampleBudget = 64;
  std::uint64_t seed = 17;
  int witnessCount = 6;
  double growthFactor = 4.0;
  double comparisonC = 2.0;  // stand-in for the distance-comparison constant
};

/// Forward Lipschitz ratios of the identity maps between the eps and eps'
/// constructions plus the inverse blow-up witness sequences.
VerificationReport canonical_map_distortion(const GeneratedSpace& X,
                                            const GeneratedSpace& Y, double eps,
                                            double epsPrime,
                                            const CanonicalMapParams& params = {});

}  // namespace gromovlab
