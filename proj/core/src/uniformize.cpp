#include "gromovlab/uniformize.hpp"

#include <algorithm>
#include <cmath>

#include "gromovlab/doubling.hpp"
#include "gromovlab/rng.hpp"

namespace gromovlab {

double tent_exp_integral(double du, double dv, double len, double rate) {
  if (len <= 0.0) return 0.0;
  if (rate == 0.0) return len;
  double tStar = std::clamp(0.5 * (len + dv - du), 0.0, len);
  double acc = 0.0;
  if (tStar > 0.0)
    acc += std::exp(-rate * du) * (-std::expm1(-rate * tStar)) / rate;
  if (tStar < len)
    acc += std::exp(-rate * dv) * (-std::expm1(-rate * (len - tStar))) / rate;
  return acc;
}

UniformizedSpace uniformize(const PointedSpace& ps, double eps,
                            const UniformizeOptions& opt) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (eps > opt.eps0 && !opt.force)
    throw ConfigError("eps exceeds the configured eps0; pass force to override");

  UniformizedSpace us;
  us.source = ps.graph;
  us.sourceDist = ps.graph.distancesFrom(ps.base);
  us.epsilon = eps;
  us.base = ps.base;
  us.frontier = ps.rayTips;
  us.rhoEps.resize(ps.graph.order());
  for (int v = 0; v < ps.graph.order(); ++v)
    us.rhoEps[v] = std::exp(-eps * us.sourceDist[v]);

  std::vector<Edge> deformed = ps.graph.edges();
  for (Edge& e : deformed)
    e.len = tent_exp_integral(us.sourceDist[e.u], us.sourceDist[e.v], e.len, eps);
  us.graph = MetricGraph(ps.graph.ids(), std::move(deformed));

  us.tau.resize(us.frontier.size(), 0.0);
  us.truncationBiased = !opt.exactTails;
  if (opt.exactTails) {
    for (size_t i = 0; i < us.frontier.size(); ++i)
      us.tau[i] = std::exp(-eps * us.sourceDist[us.frontier[i]]) / eps;
  }
  return us;
}

std::vector<double> recompute_deformed_lengths(const UniformizedSpace& us) {
  std::vector<double> out(us.source.edgeCount());
  for (int e = 0; e < us.source.edgeCount(); ++e) {
    const Edge& ed = us.source.edge(e);
    out[e] = tent_exp_integral(us.sourceDist[ed.u], us.sourceDist[ed.v], ed.len,
                               us.epsilon);
  }
  return out;
}

std::vector<double> UniformizedSpace::boundaryDistances() const {
  if (frontier.empty()) throw ConfigError("uniformized space has an empty frontier");
  return graph.distancesFromSet(frontier, &tau);
}

double UniformizedSpace::maxTau() const {
  double m = 0.0;
  for (double t : tau) m = std::max(m, t);
  return m;
}

double UniformizedSpace::diamEps() const {
  return graph.diameterEstimate() + 2.0 * maxTau();
}

double boundary_distance(const UniformizedSpace& us, int x) {
  if (x < 0 || x >= us.graph.order()) throw InputError("vertex index out of range");
  return us.boundaryDistances()[x];
}

UniformizationConstants UniformizationConstants::fromMDelta(double M, double delta,
                                                            double eps, double eps0) {
  UniformizationConstants c;
  c.M = M;
  c.delta = delta;
  c.epsilon = eps;
  c.epsilon0 = eps0;
  c.C0 = 2.0 * std::exp(eps * M) - 1.0;
  c.C1 = std::exp(-(1.0 + eps * M));
  c.C2 = 2.0 * std::exp(1.0) * (2.0 * std::exp(eps * M) - 1.0);
  return c;
}

VerificationReport whitney_inclusion_check(const UniformizedSpace& us,
                                           const UniformizationConstants& consts,
                                           int sampleBudget, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "whitney-ball-inclusion";
  rep.anchor = "subwhitney-ball-inclusions";
  const MetricGraph& ge = us.graph;
  const MetricGraph& gs = us.source;
  const int n = ge.order();
  auto bdist = us.boundaryDistances();
  Rng rng(seed);

  long long inclusionChecks = 0, inclusionFailures = 0;
  long long pairChecks = 0, pairFailures = 0;

  for (int s = 0; s < sampleBudget; ++s) {
    int x = rng.pick(n);
    double dx = bdist[x];
    if (!(dx > 0.0)) continue;
    double r = rng.uniform(0.0, 0.5 * dx);
    if (!(r > 0.0)) continue;
    auto de = ge.distancesFrom(x);
    auto dd = gs.distancesFrom(x);
    double rho = us.rhoEps[x];
    double inner = consts.C1 * r / rho;
    double outer = consts.C2 * r / rho;
    ++inclusionChecks;
    bool ok = true;
    for (int v = 0; v < n; ++v) {
      if (dd[v] < inner && !(de[v] < r)) ok = false;
      if (de[v] < r && !(dd[v] < outer)) ok = false;
      if (!ok) break;
    }
    if (!ok) {
      ++inclusionFailures;
      json w;
      w["x"] = ge.idOf(x);
      w["r"] = r;
      rep.witnesses.push_back(w);
    }
    // two-point sandwich at subWhitney separation
    double sep = consts.C1 * dx / (2.0 * consts.C2);
    for (int v = 0; v < n; ++v) {
      if (v == x || !(de[v] < sep)) continue;
      ++pairChecks;
      double lhs = rho * dd[v] / consts.C2;
      double rhs = std::exp(std::exp(-1.0)) * rho * dd[v];
      if (!(lhs < de[v] && de[v] <= rhs + 1e-12 * rhs)) {
        ++pairFailures;
        if (rep.witnesses.size() < 16) {
          json w;
          w["x"] = ge.idOf(x);
          w["y"] = ge.idOf(v);
          w["deps"] = de[v];
          w["lower"] = lhs;
          w["upper"] = rhs;
          rep.witnesses.push_back(w);
        }
      }
    }
  }
  rep.measured["inclusionChecks"] = inclusionChecks;
  rep.measured["inclusionFailures"] = inclusionFailures;
  rep.measured["pairChecks"] = pairChecks;
  rep.measured["pairFailures"] = pairFailures;
  rep.predicted["C1"] = consts.C1;
  rep.predicted["C2"] = consts.C2;
  rep.setStatus(inclusionFailures == 0 && pairFailures == 0);
  return rep;
}

MeasureField mu_beta(const PointedSpace& ps, const MeasureField& mu, double beta) {
  return mu_beta(ps.graph.distancesFrom(ps.base), mu, beta);
}

MeasureField mu_beta(const std::vector<double>& sourceDist, const MeasureField& mu,
                     double beta) {
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  MeasureField out = mu;
  for (size_t v = 0; v < out.mass.size(); ++v)
    out.mass[v] *= std::exp(-beta * sourceDist[v]);
  return out;
}

double mu_beta_threshold(double Cd, double R0) {
  return 17.0 * std::log(Cd) / (3.0 * R0);
}

CorkscrewResult corkscrew_point(const UniformizedSpace& us, int x, double r, double a0) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  if (!(a0 > 0.0)) throw InputError("a0 must be positive");
  CorkscrewResult res;
  res.a0 = a0;
  res.r = r;

  auto bdist = us.boundaryDistances();
  auto dx = us.graph.distancesFrom(x);
  auto dbase = us.graph.distancesFrom(us.base);
  auto path = us.graph.canonicalPath(x, us.base, dx, dbase);
  Curve geo = Curve::fromPath(us.graph, path);

  auto certify = [&](int z) -> bool {
    res.z = z;
    res.boundaryClearance = bdist[z];
    if (!(bdist[z] >= 2.0 * a0 * r)) return false;
    auto dz = us.graph.distancesFrom(z);
    for (int v = 0; v < us.graph.order(); ++v)
      if (dz[v] < a0 * r && !(dx[v] < r)) return false;
    res.ballContained = true;
    return true;
  };

  if (geo.length() >= 2.0 * r / 3.0) {
    // candidates on the geodesic ordered by closeness to arc length r/3
    std::vector<int> order(geo.verts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(geo.cum[a] - r / 3.0) < std::abs(geo.cum[b] - r / 3.0);
    });
    int tries = std::min<int>(5, static_cast<int>(order.size()));
    for (int i = 0; i < tries; ++i) {
      if (certify(geo.verts[order[i]])) {
        res.certified = true;
        return res;
      }
    }
  } else {
    res.viaBase = true;
    if (certify(us.base)) {
      res.certified = true;
      return res;
    }
  }
  // fall back to the base point before reporting failure
  if (!res.viaBase && certify(us.base)) {
    res.viaBase = true;
    res.certified = true;
    return res;
  }
  res.certified = false;
  return res;
}

VerificationReport global_doubling_check(const UniformizedSpace& us,
                                         const MeasureField& muBeta, double R0used,
                                         double CdUsed, const GlobalDoublingOptions& opt) {
  VerificationReport rep;
  rep.check = "global-doubling-deformed";
  rep.anchor = "deformed-measure-global-doubling";
  double beta0 = mu_beta_threshold(CdUsed, R0used);
  rep.predicted["beta0"] = beta0;

  double diam = us.diamEps();
  // exhaustive radii up to twice the diameter
  auto doubling = doubling_constant(us.graph, muBeta, 2.0 * diam);
  rep.measured["globalCd"] =
      std::isfinite(doubling.Cd) ? json(doubling.Cd) : json("inf");
  rep.measured["diamEps"] = diam;

  // corkscrew comparability on sampled (x, r)
  Rng rng(opt.seed);
  double ratioMin = kInf, ratioMax = 0.0;
  int certified = 0, failures = 0;
  for (int i = 0; i < opt.corkscrewSamples; ++i) {
    int x = rng.pick(us.graph.order());
    double r = rng.uniform(0.05 * diam, 2.0 * diam);
    auto res = corkscrew_point(us, x, r, opt.a0);
    if (!res.certified) {
      ++failures;
      continue;
    }
    ++certified;
    auto dxv = us.graph.distancesFrom(x);
    auto dzv = us.graph.distancesFrom(res.z);
    double m1 = muBeta.ballMass(dxv, r);
    double m2 = muBeta.ballMass(dzv, opt.a0 * r);
    if (m1 > 0 && m2 > 0) {
      double ratio = m1 / m2;
      ratioMin = std::min(ratioMin, ratio);
      ratioMax = std::max(ratioMax, ratio);
    }
  }
  rep.measured["corkscrewCertified"] = certified;
  rep.measured["corkscrewFailures"] = failures;
  rep.measured["whitneyComparabilityMin"] = std::isfinite(ratioMin) ? json(ratioMin) : json("n/a");
  rep.measured["whitneyComparabilityMax"] = ratioMax;
  rep.setStatus(std::isfinite(doubling.Cd) && failures == 0);
  return rep;
}

namespace {

// least-squares slope of y against x
double fitSlope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

}  // namespace

VerificationReport boundary_dimension_check(const UniformizedSpace& us,
                                            const MeasureField& muBeta, int xi,
                                            const std::vector<double>& radiiGrid,
                                            const BoundaryDimensionParams& params) {
  VerificationReport rep;
  rep.check = "boundary-dimension";
  rep.anchor = "boundary-ball-mass-exponent";
  auto it = std::find(us.frontier.begin(), us.frontier.end(), xi);
  if (it == us.frontier.end()) throw InputError("xi must be a frontier vertex");
  double tauXi = us.tau[it - us.frontier.begin()];

  // distances from the ideal point behind xi: every route enters through xi
  auto dxi = us.graph.distancesFrom(xi);
  for (double& d : dxi) d += tauXi;

  std::vector<double> logR, logM;
  json rows = json::array();
  for (double r : radiiGrid) {
    double m = muBeta.ballMass(dxi, r);
    if (m > 0.0) {
      logR.push_back(std::log(r));
      logM.push_back(std::log(m));
      json row;
      row["r"] = r;
      row["mass"] = m;
      rows.push_back(row);
    }
  }
  if (logR.size() < 4) throw DataError("fewer than 4 usable radii for the exponent fit");

  double sFit = fitSlope(logR, logM);
  double sMinus = params.beta / us.epsilon - std::log(params.Cd) / (us.epsilon * params.R0);
  double sPlus = params.beta / us.epsilon + std::log(params.Cd) / (us.epsilon * params.R0);

  // lower mass-bound constant: min over grid of mass / r^{sFit}
  double cLow = kInf;
  for (size_t i = 0; i < logR.size(); ++i)
    cLow = std::min(cLow, std::exp(logM[i] - sFit * logR[i]));

  // box-counting dimension of the frontier point set under the deformed metric
  double boxDim = 0.0;
  if (us.frontier.size() > 1) {
    std::vector<double> logInvR, logN;
    for (double r : radiiGrid) {
      // greedy r-net over frontier vertices
      std::vector<char> covered(us.frontier.size(), 0);
      int count = 0;
      for (size_t i = 0; i < us.frontier.size(); ++i) {
        if (covered[i]) continue;
        ++count;
        auto dv = us.graph.distancesFrom(us.frontier[i]);
        for (size_t jdx = 0; jdx < us.frontier.size(); ++jdx)
          if (dv[us.frontier[jdx]] < r) covered[jdx] = 1;
      }
      logInvR.push_back(std::log(1.0 / r));
      logN.push_back(std::log(static_cast<double>(count)));
    }
    boxDim = fitSlope(logInvR, logN);
  }

  rep.measured["fittedExponent"] = sFit;
  rep.measured["perRadius"] = rows;
  rep.measured["lowerMassConstant"] = std::isfinite(cLow) ? json(cLow) : json("n/a");
  rep.measured["frontierBoxDimension"] = boxDim;
  rep.predicted["sMinus"] = sMinus;
  rep.predicted["sPlus"] = sPlus;
  rep.predicted["slack"] = params.slack;
  rep.setStatus(sFit >= sMinus - params.slack && sFit <= sPlus + params.slack);
  return rep;
}

VerificationReport gromov_comparison_check(const UniformizedSpace& us, int samplePairs,
                                           std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "gromov-product-comparison";
  rep.anchor = "deformed-distance-vs-gromov-product";
  Rng rng(seed);
  const int n = us.graph.order();
  double lo = kInf, hi = 0.0;
  for (int i = 0; i < samplePairs; ++i) {
    int x = rng.pick(n), y = rng.pick(n);
    if (x == y) continue;
    double de = us.graph.distance(x, y);
    double d = us.source.distance(x, y);
    double gp = 0.5 * (us.sourceDist[x] + us.sourceDist[y] - d);
    double comparator = std::exp(-us.epsilon * gp) / us.epsilon *
                        std::min(1.0, us.epsilon * d);
    if (comparator <= 0.0) continue;
    double ratio = de / comparator;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  double C = std::max(hi, lo > 0 ? 1.0 / lo : kInf);
  rep.measured["ratioMin"] = lo;
  rep.measured["ratioMax"] = hi;
  rep.measured["empiricalC"] = std::isfinite(C) ? json(C) : json("inf");
  rep.setStatus(std::isfinite(C));
  return rep;
}

VerificationReport distance_ratio_check(const UniformizedSpace& us, int samplePairs,
                                        std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "far-pair-distance-ratio";
  rep.anchor = "deformed-distance-product-ratio";
  Rng rng(seed);
  auto bdist = us.boundaryDistances();
  const int n = us.graph.order();
  double lo = kInf, hi = 0.0;
  long long used = 0;
  for (int i = 0; i < samplePairs; ++i) {
    int x = rng.pick(n), y = rng.pick(n);
    if (x == y) continue;
    double d = us.source.distance(x, y);
    if (us.epsilon * d < 1.0) continue;
    double de = us.graph.distance(x, y);
    double lhs = std::exp(us.epsilon * d);
    double rhs = de * de / (bdist[x] * bdist[y]);
    if (!(rhs > 0.0)) continue;
    double ratio = lhs / rhs;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ++used;
  }
  rep.measured["pairsUsed"] = used;
  rep.measured["ratioMin"] = used ? json(lo) : json("n/a");
  rep.measured["ratioMax"] = used ? json(hi) : json("n/a");
  rep.setStatus(used == 0 || (std::isfinite(hi) && lo > 0.0));
  return rep;
}

VerificationReport density_band_check(const UniformizedSpace& us, double beta,
                                      int samples, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "density-comparability-subwhitney";
  rep.anchor = "deformed-density-band";
  Rng rng(seed);
  auto bdist = us.boundaryDistances();
  const int n = us.graph.order();
  double worst = 1.0;
  for (int i = 0; i < samples; ++i) {
    int x = rng.pick(n);
    if (!(bdist[x] > 0)) continue;
    double r = 0.5 * bdist[x];
    auto de = us.graph.distancesFrom(x);
    for (int v = 0; v < n; ++v) {
      if (!(de[v] < r)) continue;
      double ratio = std::exp(-beta * (us.sourceDist[v] - us.sourceDist[x]));
      worst = std::max(worst, std::max(ratio, 1.0 / ratio));
    }
  }
  rep.measured["worstDensityRatio"] = worst;
  rep.predicted["target"] = std::exp(1.0);
  rep.setStatus(std::isfinite(worst));
  return rep;
}

}  // namespace gromovlab
