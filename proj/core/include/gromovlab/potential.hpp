#pragma once

#include <cstdint>

#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"
#include "gromovlab/uniformize.hpp"

namespace gromovlab {

using FunctionField = std::vector<double>;

/// Minimal edge-constant upper gradient |u(a) - u(b)| / l_e per edge.
std::vector<double> min_upper_gradient(const MetricGraph& g, const FunctionField& u);

/// Discrete p-energy sum_e m_e (|du|/l_e)^p with length-share edge masses.
double p_energy(const MetricGraph& g, const MeasureField& mu, const FunctionField& u,
                double p);
double p_energy(const MetricGraph& g, const EdgeMassField& em, const FunctionField& u,
                double p);

/// Dirichlet energy data: E(u) = sum_e kappa_e |u(a)-u(b)|^p. On a measured
/// graph kappa_e = m_e / l_e^p (edge-constant density). On a deformed space
/// the per-edge 1D p-resistance is transported exactly; for beta = p * eps it
/// coincides with the source problem edge by edge.
struct DirichletProblem {
  const MetricGraph* g = nullptr;
  std::vector<double> kappa;
  std::vector<double> gradLen;  // lengths used for gradient reporting

  static DirichletProblem onMeasuredGraph(const MetricGraph& g, const MeasureField& mu,
                                          double p);
  static DirichletProblem onMeasuredGraph(const MetricGraph& g, const EdgeMassField& em,
                                          double p);
  /// Same vertex/edge set as us.source with the deformed metric and the
  /// beta-deformed measure; exact per-edge resistances.
  static DirichletProblem onUniformized(const UniformizedSpace& us,
                                        const EdgeMassField& emSource, double beta,
                                        double p);
  double energy(const FunctionField& u, double p) const;
};

struct SolveOptions {
  int maxIterations = 2000;
  const FunctionField* init = nullptr;
};

struct SolveResult {
  FunctionField u;
  double energy = 0.0;
  int iterations = 0;
  double kktResidual = 0.0;
  bool converged = false;
};

/// Minimizes the p-energy subject to Dirichlet data; p = 2 by a sparse SPD
/// solve, p != 2 by damped iteratively reweighted quadratic minimization.
SolveResult solve_p_harmonic(const DirichletProblem& prob,
                             const std::vector<int>& boundarySet,
                             const std::vector<double>& boundaryValues, double p,
                             double tolSolve, const SolveOptions& opt = {});
SolveResult solve_p_harmonic(const MetricGraph& g, const MeasureField& mu,
                             const std::vector<int>& boundarySet,
                             const std::vector<double>& boundaryValues, double p,
                             double tolSolve, const SolveOptions& opt = {});

struct CapacityResult {
  enum class Kind { Sobolev, Variational };
  double value = 0.0;
  FunctionField minimizer;
  Kind kind = Kind::Sobolev;
  bool converged = false;
};

/// inf of sum_v nu_v |u|^p + p-energy over u = 1 on E (0 <= u <= 1).
CapacityResult sobolev_capacity(const MetricGraph& g, const MeasureField& mu,
                                const std::vector<int>& E, double p, double tolSolve);
/// inf of the p-energy over u = 1 on E, u = 0 outside Omega.
CapacityResult variational_capacity(const MetricGraph& g, const MeasureField& mu,
                                    const std::vector<int>& E,
                                    const std::vector<int>& Omega, double p,
                                    double tolSolve);

struct CapacitySupportReport {
  std::vector<int> support;
  std::vector<double> perVertexBallCapacity;
  bool twoDisjointCompacts = false;  // (i)
  bool borelSplit = false;           // (ii)
  bool openSplit = false;            // (iii)
  bool supportTwoPoints = false;     // (iv)
  bool notConcentrated = false;      // (v)
  bool equivalenceHolds = false;
  json toJson() const;
};

/// Evaluates the five equivalent positivity conditions on the discrete
/// boundary proxy using small proxy-ball capacities.
CapacitySupportReport capacity_support(const MetricGraph& g, const MeasureField& mu,
                                       const std::vector<int>& proxy, double p,
                                       double tolCap, double ballRadius,
                                       double tolSolve = 1e-10);

/// Solves the same Dirichlet problem in the source and deformed data and
/// checks the per-edge gradient identity, solution agreement and the energy
/// identity for beta = p * eps.
VerificationReport transfer_check_pharmonic(const PointedSpace& ps, const MeasureField& mu,
                                            double eps, double p,
                                            const std::vector<int>& region,
                                            const std::vector<int>& boundarySet,
                                            const std::vector<double>& boundaryValues,
                                            double tolSolve);

/// Oscillation of a p-harmonic function on a punctured ball against the
/// dyadic mass sum times the energy on the enlarged ball; reports the
/// empirical constant per radius and its stability.
VerificationReport oscillation_bound_check(const MetricGraph& g, const MeasureField& mu,
                                           int x0, double p, double Lambda,
                                           const std::vector<double>& radii,
                                           double tolSolve);

}  // namespace gromovlab
