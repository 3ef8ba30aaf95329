#pragma once

#include "gromovlab/generators.hpp"
#include "gromovlab/report.hpp"

namespace gromovlab {

enum class TailVerdict { Converges, Diverges, Inconclusive };
const char* tail_verdict_name(TailVerdict v);

struct LiouvilleThresholds {
  double convergeRatio = 0.95;  // per-grid-step geometric decay threshold
  double divergeRatio = 0.98;   // at least-linear growth threshold
  double tailChange = 0.05;     // relative energy change counting as a limit
};

struct LiouvilleCriterionReport {
  TailVerdict plusEnd = TailVerdict::Inconclusive;
  TailVerdict minusEnd = TailVerdict::Inconclusive;
  std::vector<double> Tgrid;
  std::vector<double> partialPlus;
  std::vector<double> partialMinus;
  double ratioPlus = 0.0;
  double ratioMinus = 0.0;
  json toJson() const;
};

/// Integrates the end criterion (sliding-window mass to the power 1/(1-p))
/// on [0, T] for each T in the grid and classifies the tails.
LiouvilleCriterionReport liouville_criterion(const std::string& kind, const Weight& w,
                                             double p, const std::vector<double>& Tgrid,
                                             const LiouvilleThresholds& thr = {});

/// Truncated Dirichlet sweep: solves the 0/1 end-to-end problem per T, tracks
/// the energy trend, and cross-checks the criterion verdicts and the boundary
/// capacity-support conditions on the deformed space.
VerificationReport liouville_experiment(const std::string& kind, const Weight& w,
                                        double p, double eps,
                                        const std::vector<double>& Tgrid, double h,
                                        double tolSolve,
                                        const LiouvilleThresholds& thr = {});

}  // namespace gromovlab
