#include "gromovlab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gromovlab/potential.hpp"
#include "gromovlab/uniformize.hpp"

namespace gromovlab {

namespace {

double adaptiveSimpson(const std::function<double(double)>& f, double a, double b,
                       double fa, double fm, double fb, double whole, double tol,
                       int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptiveSimpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptiveSimpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptiveSimpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

TailVerdict classify(const std::vector<double>& partials, const std::vector<double>& Ts,
                     const LiouvilleThresholds& thr, double* ratioOut) {
  // per-grid-step geometric ratio of the increments
  std::vector<double> incr;
  for (size_t i = 1; i < partials.size(); ++i) incr.push_back(partials[i] - partials[i - 1]);
  if (incr.empty()) return TailVerdict::Inconclusive;
  bool allTiny = true;
  for (double x : incr)
    if (x > 1e-300) allTiny = false;
  if (allTiny) {
    *ratioOut = 0.0;
    return TailVerdict::Converges;  // tail numerically zero
  }
  // least squares on log increments vs window index
  double n = 0, sx = 0, sy = 0, sxy = 0, sxx = 0;
  for (size_t i = 0; i < incr.size(); ++i) {
    if (incr[i] <= 1e-300) continue;
    double x = static_cast<double>(i), y = std::log(incr[i]);
    ++n;
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
  }
  if (n < 2) return TailVerdict::Inconclusive;
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double ratio = std::exp(slope);
  *ratioOut = ratio;
  if (ratio < thr.convergeRatio) return TailVerdict::Converges;
  if (ratio >= thr.divergeRatio && incr.back() >= 0.25 * incr.front())
    return TailVerdict::Diverges;
  return TailVerdict::Inconclusive;
}

}  // namespace

const char* tail_verdict_name(TailVerdict v) {
  switch (v) {
    case TailVerdict::Converges: return "converges";
    case TailVerdict::Diverges: return "diverges";
    default: return "inconclusive";
  }
}

json LiouvilleCriterionReport::toJson() const {
  json j;
  j["plusEnd"] = tail_verdict_name(plusEnd);
  j["minusEnd"] = tail_verdict_name(minusEnd);
  j["Tgrid"] = Tgrid;
  j["partialPlus"] = partialPlus;
  j["partialMinus"] = partialMinus;
  j["ratioPlus"] = ratioPlus;
  j["ratioMinus"] = ratioMinus;
  return j;
}

LiouvilleCriterionReport liouville_criterion(const std::string& kind, const Weight& w,
                                             double p, const std::vector<double>& Tgrid,
                                             const LiouvilleThresholds& thr) {
  if (!(p > 1.0)) throw InputError("criterion requires p > 1");
  if (kind != "line" && kind != "strip") throw InputError("kind must be line or strip");
  if (Tgrid.size() < 2) throw InputError("T grid needs at least two values");
  double crossSection = (kind == "strip") ? 2.0 : 1.0;
  double q = 1.0 / (1.0 - p);

  auto windowMass = [&](double t, int sign) {
    double lo = sign > 0 ? t - 1.0 : -t - 1.0;
    double hi = sign > 0 ? t + 1.0 : -t + 1.0;
    return crossSection * w.integral(lo, hi);
  };
  auto integrand = [&](int sign) {
    return [&, sign](double t) { return std::pow(windowMass(t, sign), q); };
  };

  LiouvilleCriterionReport rep;
  rep.Tgrid = Tgrid;
  auto partialsFor = [&](int sign) {
    std::vector<double> out;
    double acc = 0.0, prevT = 0.0;
    auto f = integrand(sign);
    for (double T : Tgrid) {
      // split at t = 1 where the window stops covering the weight kink
      if (prevT < 1.0 && T > 1.0) {
        acc += integrate(f, prevT, 1.0, 1e-13);
        acc += integrate(f, 1.0, T, 1e-13);
      } else {
        acc += integrate(f, prevT, T, 1e-13);
      }
      out.push_back(acc);
      prevT = T;
    }
    return out;
  };
  rep.partialPlus = partialsFor(+1);
  rep.partialMinus = partialsFor(-1);
  rep.plusEnd = classify(rep.partialPlus, Tgrid, thr, &rep.ratioPlus);
  rep.minusEnd = classify(rep.partialMinus, Tgrid, thr, &rep.ratioMinus);
  return rep;
}

VerificationReport liouville_experiment(const std::string& kind, const Weight& w,
                                        double p, double eps,
                                        const std::vector<double>& Tgrid, double h,
                                        double tolSolve, const LiouvilleThresholds& thr) {
  if (!(p > 1.0)) throw InputError("experiment requires p > 1");
  VerificationReport rep;
  rep.check = "liouville-experiment";
  rep.anchor = "finite-energy-constancy-criterion";

  json rows = json::array();
  std::vector<double> energies;
  GeneratedSpace last;
  for (double T : Tgrid) {
    GeneratedSpace gen = (kind == "line") ? gen_line(T, h, w) : gen_strip(T, h, w);
    const MetricGraph& g = gen.ps.graph;
    std::vector<int> bset;
    std::vector<double> bval;
    if (kind == "line") {
      bset = {gen.ps.rayTips[0], gen.ps.rayTips[1]};
      bval = {0.0, 1.0};
    } else {
      // entire end columns
      auto baseDist = g.distancesFrom(gen.ps.base);
      long long nyc = std::llround(2.0 / h) + 1;
      int nx = g.order() / static_cast<int>(nyc);
      for (int j = 0; j < nyc; ++j) {
        bset.push_back(0 * nyc + j);
        bval.push_back(0.0);
        bset.push_back((nx - 1) * static_cast<int>(nyc) + j);
        bval.push_back(1.0);
      }
    }
    auto sol = solve_p_harmonic(g, gen.mu, bset, bval, p, tolSolve);
    energies.push_back(sol.energy);
    json row;
    row["T"] = T;
    row["energy"] = sol.energy;
    row["converged"] = sol.converged;
    rows.push_back(row);
    last = std::move(gen);
  }

  double tailChange = kInf;
  if (energies.size() >= 2 && energies.back() > 0)
    tailChange = std::abs(energies.back() - energies[energies.size() - 2]) /
                 energies.back();
  bool nonconstantExists = energies.back() > 0 && tailChange < thr.tailChange;

  auto criterion = liouville_criterion(kind, w, p, Tgrid, thr);
  bool bothEndsConverge = criterion.plusEnd == TailVerdict::Converges &&
                          criterion.minusEnd == TailVerdict::Converges;

  // capacity support of the frontier proxy on the deformed largest truncation
  UniformizeOptions opt;
  opt.exactTails = last.exactTails;
  opt.eps0 = std::isnan(last.eps0Certified) ? kInf : last.eps0Certified;
  opt.force = true;
  UniformizedSpace us = uniformize(last.ps, eps, opt);
  MeasureField mb = mu_beta(us.sourceDist, last.mu, p * eps);
  // proxy separation sets the small-ball radius
  double sep = kInf;
  for (size_t i = 0; i < us.frontier.size(); ++i) {
    auto dv = us.graph.distancesFrom(us.frontier[i]);
    for (size_t j = 0; j < us.frontier.size(); ++j)
      if (i != j) sep = std::min(sep, dv[us.frontier[j]]);
  }
  double ballRadius = std::isfinite(sep) ? sep / 4.0 : us.diamEps() / 8.0;
  auto support = capacity_support(us.graph, mb, us.frontier, p, 1e-12, ballRadius,
                                  tolSolve);

  rep.measured["energies"] = rows;
  rep.measured["tailRelChange"] = std::isfinite(tailChange) ? json(tailChange) : json("n/a");
  rep.measured["nonconstantExists"] = nonconstantExists;
  rep.measured["criterion"] = criterion.toJson();
  rep.measured["capacitySupport"] = support.toJson();
  rep.predicted["crossCheck"] = "nonconstant exists iff both end criteria converge";
  bool agree = nonconstantExists == bothEndsConverge;
  bool capAgrees = support.twoDisjointCompacts == nonconstantExists;
  rep.measured["criterionAgrees"] = agree;
  rep.measured["capacitySupportAgrees"] = capAgrees;
  rep.setStatus(agree && capAgrees);
  return rep;
}

}  // namespace gromovlab
