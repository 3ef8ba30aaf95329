#include "gromovlab/potential.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

namespace gromovlab {

namespace {

constexpr double kGradFloor = 1e-12;

double signedPow(double x, double q) {
  return x >= 0 ? std::pow(x, q) : -std::pow(-x, q);
}

}  // namespace

std::vector<double> min_upper_gradient(const MetricGraph& g, const FunctionField& u) {
  if (static_cast<int>(u.size()) != g.order())
    throw InputError("function field size mismatch");
  std::vector<double> out(g.edgeCount());
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    out[e] = std::abs(u[ed.u] - u[ed.v]) / ed.len;
  }
  return out;
}

double p_energy(const MetricGraph& g, const MeasureField& mu, const FunctionField& u,
                double p) {
  return p_energy(g, EdgeMassField::fromVertexMasses(g, mu), u, p);
}

double p_energy(const MetricGraph& g, const EdgeMassField& em, const FunctionField& u,
                double p) {
  if (p < 1.0) throw InputError("p must be >= 1");
  double acc = 0.0;
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    double ge = std::abs(u[ed.u] - u[ed.v]) / ed.len;
    acc += em.m[e] * std::pow(ge, p);
  }
  return acc;
}

DirichletProblem DirichletProblem::onMeasuredGraph(const MetricGraph& g,
                                                   const MeasureField& mu, double p) {
  return onMeasuredGraph(g, EdgeMassField::fromVertexMasses(g, mu), p);
}

DirichletProblem DirichletProblem::onMeasuredGraph(const MetricGraph& g,
                                                   const EdgeMassField& em, double p) {
  DirichletProblem prob;
  prob.g = &g;
  prob.kappa.resize(g.edgeCount());
  prob.gradLen.resize(g.edgeCount());
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    prob.kappa[e] = em.m[e] / std::pow(ed.len, p);
    prob.gradLen[e] = ed.len;
  }
  return prob;
}

DirichletProblem DirichletProblem::onUniformized(const UniformizedSpace& us,
                                                 const EdgeMassField& emSource,
                                                 double beta, double p) {
  if (p <= 1.0) throw InputError("resistance transport needs p > 1");
  DirichletProblem prob;
  prob.g = &us.graph;
  const MetricGraph& src = us.source;
  prob.kappa.resize(src.edgeCount());
  prob.gradLen.resize(src.edgeCount());
  // kappa_e = w_e * T_e^{1-p} with w_e = m_e / l_e the source edge density and
  // T_e the exact integral of exp((beta - p eps) d(., z0) / (p - 1)) along e;
  // for beta = p eps the rate vanishes and kappa matches the source problem.
  double rate = -(beta - p * us.epsilon) / (p - 1.0);
  for (int e = 0; e < src.edgeCount(); ++e) {
    const Edge& ed = src.edge(e);
    double w = emSource.m[e] / ed.len;
    double T = tent_exp_integral(us.sourceDist[ed.u], us.sourceDist[ed.v], ed.len, rate);
    prob.kappa[e] = w * std::pow(T, 1.0 - p);
    prob.gradLen[e] = us.graph.edge(e).len;
  }
  return prob;
}

double DirichletProblem::energy(const FunctionField& u, double p) const {
  double acc = 0.0;
  for (int e = 0; e < g->edgeCount(); ++e) {
    const Edge& ed = g->edge(e);
    acc += kappa[e] * std::pow(std::abs(u[ed.u] - u[ed.v]), p);
  }
  return acc;
}

namespace {

// residual of the first-order conditions on free vertices, normalized by the
// boundary-value spread and the largest vertex conductance sum
double kktResidual(const DirichletProblem& prob, const FunctionField& u,
                   const std::vector<char>& fixed, double p, double spread) {
  const MetricGraph& g = *prob.g;
  std::vector<double> grad(g.order(), 0.0);
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    double d = u[ed.u] - u[ed.v];
    double term = p * prob.kappa[e] * signedPow(d, 1.0) *
                  std::pow(std::max(std::abs(d), kGradFloor), p - 2.0);
    grad[ed.u] += term;
    grad[ed.v] -= term;
  }
  double worst = 0.0;
  for (int v = 0; v < g.order(); ++v)
    if (!fixed[v]) worst = std::max(worst, std::abs(grad[v]));
  std::vector<double> condSum(g.order(), 0.0);
  for (int e = 0; e < g.edgeCount(); ++e) {
    condSum[g.edge(e).u] += prob.kappa[e];
    condSum[g.edge(e).v] += prob.kappa[e];
  }
  double scale = p * std::pow(std::max(spread, kGradFloor), p - 1.0) *
                 (*std::max_element(condSum.begin(), condSum.end()));
  return scale > 0 ? worst / scale : worst;
}

// one weighted-quadratic minimization with weights w_e; returns the free-part
// solution of the reduced Laplacian system
FunctionField weightedSolve(const DirichletProblem& prob, const std::vector<double>& w,
                            const std::vector<char>& fixed, const FunctionField& u,
                            const std::vector<int>& freeIndex, int nFree,
                            const std::vector<double>& diagExtra,
                            const std::vector<double>& rhsExtra) {
  const MetricGraph& g = *prob.g;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nFree);
  std::vector<double> diag(nFree, 0.0);
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    double we = w[e];
    int fu = freeIndex[ed.u], fv = freeIndex[ed.v];
    if (fu >= 0 && fv >= 0) {
      diag[fu] += we;
      diag[fv] += we;
      trip.emplace_back(fu, fv, -we);
      trip.emplace_back(fv, fu, -we);
    } else if (fu >= 0) {
      diag[fu] += we;
      rhs(fu) += we * u[ed.v];
    } else if (fv >= 0) {
      diag[fv] += we;
      rhs(fv) += we * u[ed.u];
    }
  }
  for (int i = 0; i < nFree; ++i) trip.emplace_back(i, i, diag[i] + diagExtra[i]);
  for (int i = 0; i < nFree; ++i) rhs(i) += rhsExtra[i];
  Eigen::SparseMatrix<double> A(nFree, nFree);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw DataError("Dirichlet system factorization failed");
  Eigen::VectorXd x = solver.solve(rhs);
  FunctionField out = u;
  for (int v = 0; v < g.order(); ++v)
    if (freeIndex[v] >= 0) out[v] = x(freeIndex[v]);
  return out;
}

struct ObjectiveTerms {
  // optional vertex term sum_v nu_v |u_v|^p (Sobolev capacity); empty = none
  const MeasureField* vertexMass = nullptr;
};

double objectiveValue(const DirichletProblem& prob, const FunctionField& u, double p,
                      const ObjectiveTerms& extra) {
  double val = prob.energy(u, p);
  if (extra.vertexMass)
    for (size_t v = 0; v < u.size(); ++v)
      val += extra.vertexMass->mass[v] * std::pow(std::abs(u[v]), p);
  return val;
}

SolveResult minimizeEnergy(const DirichletProblem& prob, const std::vector<int>& boundarySet,
                           const std::vector<double>& boundaryValues, double p,
                           double tolSolve, const SolveOptions& opt,
                           const ObjectiveTerms& extra, bool clampUnit) {
  const MetricGraph& g = *prob.g;
  if (boundarySet.size() != boundaryValues.size())
    throw InputError("boundary set and values differ in size");
  if (boundarySet.empty() && !extra.vertexMass)
    throw InputError("boundary set must be nonempty");
  if (p <= 1.0) throw InputError("solver requires p > 1");

  std::vector<char> fixed(g.order(), 0);
  FunctionField u(g.order(), 0.0);
  double lo = kInf, hi = -kInf;
  for (size_t i = 0; i < boundarySet.size(); ++i) {
    int v = boundarySet[i];
    if (v < 0 || v >= g.order()) throw InputError("boundary vertex out of range");
    fixed[v] = 1;
    u[v] = boundaryValues[i];
    lo = std::min(lo, boundaryValues[i]);
    hi = std::max(hi, boundaryValues[i]);
  }
  if (boundarySet.empty()) {
    lo = 0.0;
    hi = 1.0;
  }
  double spread = std::max(hi - lo, std::max(std::abs(hi), std::abs(lo)));

  // every vertex must reach the boundary unless the vertex term pins it
  if (!extra.vertexMass) {
    std::vector<char> reach = fixed;
    std::vector<int> stack(boundarySet.begin(), boundarySet.end());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : g.incidentEdges(v)) {
        int w = g.otherEnd(e, v);
        if (!reach[w]) {
          reach[w] = 1;
          stack.push_back(w);
        }
      }
    }
    for (int v = 0; v < g.order(); ++v)
      if (!reach[v])
        throw InputError("component without boundary data at vertex " +
                         std::to_string(g.idOf(v)));
  }

  std::vector<int> freeIndex(g.order(), -1);
  int nFree = 0;
  for (int v = 0; v < g.order(); ++v)
    if (!fixed[v]) freeIndex[v] = nFree++;

  double mid = (std::isfinite(lo) && std::isfinite(hi)) ? 0.5 * (lo + hi) : 0.0;
  for (int v = 0; v < g.order(); ++v)
    if (!fixed[v]) u[v] = opt.init ? (*opt.init)[v] : mid;
  if (clampUnit)
    for (int v = 0; v < g.order(); ++v) u[v] = std::clamp(u[v], 0.0, 1.0);

  SolveResult res;
  if (nFree == 0) {
    res.u = u;
    res.energy = objectiveValue(prob, u, p, extra);
    res.kktResidual = 0.0;
    res.converged = true;
    return res;
  }

  std::vector<double> w(g.edgeCount());
  std::vector<double> diagExtra(nFree, 0.0), rhsExtra(nFree, 0.0);
  double E = objectiveValue(prob, u, p, extra);

  for (int iter = 1; iter <= opt.maxIterations; ++iter) {
    // quadratic majorization weights
    for (int e = 0; e < g.edgeCount(); ++e) {
      const Edge& ed = g.edge(e);
      double d = std::max(std::abs(u[ed.u] - u[ed.v]), kGradFloor);
      w[e] = prob.kappa[e] * std::pow(d, p - 2.0);
    }
    if (extra.vertexMass) {
      for (int v = 0; v < g.order(); ++v) {
        if (freeIndex[v] < 0) continue;
        double d = std::max(std::abs(u[v]), kGradFloor);
        diagExtra[freeIndex[v]] = extra.vertexMass->mass[v] * std::pow(d, p - 2.0);
        rhsExtra[freeIndex[v]] = 0.0;
      }
    }
    FunctionField cand = weightedSolve(prob, w, fixed, u, freeIndex, nFree, diagExtra,
                                       rhsExtra);
    if (clampUnit)
      for (double& x : cand) x = std::clamp(x, 0.0, 1.0);

    if (p == 2.0) {
      u = std::move(cand);
      E = objectiveValue(prob, u, p, extra);
      res.iterations = iter;
      break;
    }

    // damped step with energy backtracking
    double s = 1.0;
    FunctionField trial = u;
    double Enew = E;
    while (s > 1e-8) {
      for (int v = 0; v < g.order(); ++v)
        if (freeIndex[v] >= 0) trial[v] = u[v] + s * (cand[v] - u[v]);
      if (clampUnit)
        for (double& x : trial) x = std::clamp(x, 0.0, 1.0);
      Enew = objectiveValue(prob, trial, p, extra);
      if (Enew <= E) break;
      s *= 0.5;
    }
    double drop = E - Enew;
    u = trial;
    res.iterations = iter;
    double kkt = kktResidual(prob, u, fixed, p, spread);
    E = Enew;
    if (kkt <= tolSolve && drop <= tolSolve * std::max(1.0, std::abs(E))) break;
  }

  res.u = u;
  res.energy = objectiveValue(prob, u, p, extra);
  res.kktResidual = extra.vertexMass ? 0.0 : kktResidual(prob, u, fixed, p, spread);
  if (extra.vertexMass) {
    // include the vertex term in the stationarity check
    const MetricGraph& gg = *prob.g;
    std::vector<double> grad(gg.order(), 0.0);
    for (int e = 0; e < gg.edgeCount(); ++e) {
      const Edge& ed = gg.edge(e);
      double d = u[ed.u] - u[ed.v];
      double term = p * prob.kappa[e] *
                    std::pow(std::max(std::abs(d), kGradFloor), p - 2.0) * d;
      grad[ed.u] += term;
      grad[ed.v] -= term;
    }
    for (int v = 0; v < gg.order(); ++v) {
      if (fixed[v]) continue;
      double d = u[v];
      grad[v] += p * extra.vertexMass->mass[v] *
                 std::pow(std::max(std::abs(d), kGradFloor), p - 2.0) * d;
    }
    double worst = 0.0;
    for (int v = 0; v < gg.order(); ++v)
      if (!fixed[v]) {
        // at an active clamp the one-sided condition suffices
        if (clampUnit && u[v] <= 0.0 && grad[v] > 0) continue;
        if (clampUnit && u[v] >= 1.0 && grad[v] < 0) continue;
        worst = std::max(worst, std::abs(grad[v]));
      }
    double scale = 1.0;
    for (int e = 0; e < gg.edgeCount(); ++e) scale = std::max(scale, prob.kappa[e]);
    res.kktResidual = worst / (p * scale * std::max(1.0, std::pow(spread, p - 1.0)));
  }
  res.converged = res.kktResidual <= tolSolve;
  return res;
}

}  // namespace

SolveResult solve_p_harmonic(const DirichletProblem& prob,
                             const std::vector<int>& boundarySet,
                             const std::vector<double>& boundaryValues, double p,
                             double tolSolve, const SolveOptions& opt) {
  if (p == 1.0)
    throw InputError("p = 1 is unsupported (non-strictly-convex energy)");
  return minimizeEnergy(prob, boundarySet, boundaryValues, p, tolSolve, opt, {}, false);
}

SolveResult solve_p_harmonic(const MetricGraph& g, const MeasureField& mu,
                             const std::vector<int>& boundarySet,
                             const std::vector<double>& boundaryValues, double p,
                             double tolSolve, const SolveOptions& opt) {
  auto prob = DirichletProblem::onMeasuredGraph(g, mu, p);
  return solve_p_harmonic(prob, boundarySet, boundaryValues, p, tolSolve, opt);
}

CapacityResult sobolev_capacity(const MetricGraph& g, const MeasureField& mu,
                                const std::vector<int>& E, double p, double tolSolve) {
  if (E.empty()) throw InputError("capacity set must be nonempty");
  auto prob = DirichletProblem::onMeasuredGraph(g, mu, p);
  std::vector<double> ones(E.size(), 1.0);
  ObjectiveTerms extra;
  extra.vertexMass = &mu;
  SolveOptions opt;
  auto res = minimizeEnergy(prob, E, ones, p, tolSolve, opt, extra, true);
  CapacityResult cap;
  cap.value = res.energy;
  cap.minimizer = std::move(res.u);
  cap.kind = CapacityResult::Kind::Sobolev;
  cap.converged = res.converged;
  return cap;
}

CapacityResult variational_capacity(const MetricGraph& g, const MeasureField& mu,
                                    const std::vector<int>& E,
                                    const std::vector<int>& Omega, double p,
                                    double tolSolve) {
  std::vector<char> inOmega(g.order(), 0);
  for (int v : Omega) inOmega[v] = 1;
  for (int v : E)
    if (!inOmega[v]) throw InputError("E must be contained in Omega");

  std::vector<int> bset;
  std::vector<double> bval;
  std::vector<char> inE(g.order(), 0);
  for (int v : E) inE[v] = 1;
  for (int v : E) {
    bset.push_back(v);
    bval.push_back(1.0);
  }
  bool hasExterior = false;
  for (int v = 0; v < g.order(); ++v)
    if (!inOmega[v]) {
      bset.push_back(v);
      bval.push_back(0.0);
      hasExterior = true;
    }

  CapacityResult cap;
  cap.kind = CapacityResult::Kind::Variational;
  if (!hasExterior) {
    // no exterior constraint: u = 1 everywhere has zero energy
    cap.value = 0.0;
    cap.minimizer.assign(g.order(), 1.0);
    cap.converged = true;
    return cap;
  }
  auto prob = DirichletProblem::onMeasuredGraph(g, mu, p);
  auto res = solve_p_harmonic(prob, bset, bval, p, tolSolve);
  cap.value = res.energy;
  cap.minimizer = std::move(res.u);
  cap.converged = res.converged;
  return cap;
}

json CapacitySupportReport::toJson() const {
  json j;
  json sup = json::array();
  for (int v : support) sup.push_back(v);
  j["support"] = sup;
  j["perVertexBallCapacity"] = perVertexBallCapacity;
  j["twoDisjointCompacts"] = twoDisjointCompacts;
  j["borelSplit"] = borelSplit;
  j["openSplit"] = openSplit;
  j["supportTwoPoints"] = supportTwoPoints;
  j["notConcentrated"] = notConcentrated;
  j["equivalenceHolds"] = equivalenceHolds;
  return j;
}

CapacitySupportReport capacity_support(const MetricGraph& g, const MeasureField& mu,
                                       const std::vector<int>& proxy, double p,
                                       double tolCap, double ballRadius,
                                       double tolSolve) {
  if (proxy.empty()) throw InputError("boundary proxy must be nonempty");
  CapacitySupportReport rep;
  rep.perVertexBallCapacity.resize(proxy.size());

  auto proxyBall = [&](int a, double r) {
    auto dist = g.distancesFrom(a);
    std::vector<int> out;
    for (int v : proxy)
      if (dist[v] < r) out.push_back(v);
    return out;
  };

  for (size_t i = 0; i < proxy.size(); ++i) {
    auto ball = proxyBall(proxy[i], ballRadius);
    double cap = sobolev_capacity(g, mu, ball, p, tolSolve).value;
    rep.perVertexBallCapacity[i] = cap;
    if (cap > tolCap) rep.support.push_back(proxy[i]);
  }
  rep.supportTwoPoints = rep.support.size() >= 2;

  // (i): two support points with disjoint proxy balls
  for (size_t i = 0; i < rep.support.size() && !rep.twoDisjointCompacts; ++i) {
    auto di = g.distancesFrom(rep.support[i]);
    for (size_t j = i + 1; j < rep.support.size(); ++j)
      if (di[rep.support[j]] >= 2.0 * ballRadius) {
        rep.twoDisjointCompacts = true;
        break;
      }
  }

  // (ii)/(iii): split around the first support point
  if (!rep.support.empty()) {
    auto ball = proxyBall(rep.support.front(), ballRadius);
    std::vector<char> inBall(g.order(), 0);
    for (int v : ball) inBall[v] = 1;
    std::vector<int> rest;
    for (int v : proxy)
      if (!inBall[v]) rest.push_back(v);
    if (!ball.empty() && !rest.empty()) {
      double c1 = sobolev_capacity(g, mu, ball, p, tolSolve).value;
      double c2 = sobolev_capacity(g, mu, rest, p, tolSolve).value;
      rep.borelSplit = c1 > tolCap && c2 > tolCap;
      rep.openSplit = rep.borelSplit;
    }
  }

  // (v): capacity away from each single point
  rep.notConcentrated = true;
  for (int a : proxy) {
    std::vector<int> rest;
    for (int v : proxy)
      if (v != a) rest.push_back(v);
    if (rest.empty()) {
      rep.notConcentrated = false;
      break;
    }
    double cap = sobolev_capacity(g, mu, rest, p, tolSolve).value;
    if (!(cap > tolCap)) {
      rep.notConcentrated = false;
      break;
    }
  }

  rep.equivalenceHolds = (rep.twoDisjointCompacts == rep.borelSplit) &&
                         (rep.borelSplit == rep.openSplit) &&
                         (rep.openSplit == rep.supportTwoPoints) &&
                         (rep.supportTwoPoints == rep.notConcentrated);
  return rep;
}

VerificationReport transfer_check_pharmonic(const PointedSpace& ps, const MeasureField& mu,
                                            double eps, double p,
                                            const std::vector<int>& region,
                                            const std::vector<int>& boundarySet,
                                            const std::vector<double>& boundaryValues,
                                            double tolSolve) {
  if (!(p > 1.0)) throw InputError("transfer check requires p > 1");
  VerificationReport rep;
  rep.check = "pharmonic-transfer";
  rep.anchor = "energy-identity-under-deformation";
  double beta = p * eps;
  rep.predicted["beta"] = beta;

  // restrict the ambient edge-mass field to the region
  auto sub = induced_subgraph(ps.graph, region);
  EdgeMassField emGlobal = EdgeMassField::fromVertexMasses(ps.graph, mu);
  EdgeMassField emRegion;
  emRegion.m.resize(sub.graph.edgeCount());
  for (int e = 0; e < sub.graph.edgeCount(); ++e)
    emRegion.m[e] = emGlobal.m[sub.edgeOrigin[e]];

  std::vector<int> bset;
  std::vector<double> bval;
  for (size_t i = 0; i < boundarySet.size(); ++i) {
    int s = sub.toSub[boundarySet[i]];
    if (s < 0) throw InputError("boundary vertex outside the region");
    bset.push_back(s);
    bval.push_back(boundaryValues[i]);
  }

  // source problem on (d, mu)
  auto probSrc = DirichletProblem::onMeasuredGraph(sub.graph, emRegion, p);
  auto solSrc = solve_p_harmonic(probSrc, bset, bval, p, tolSolve);

  // deformed problem on the same region
  PointedSpace subPs;
  subPs.graph = sub.graph;  // distances to z0 are inherited from the ambient graph
  UniformizedSpace usSub;
  usSub.source = sub.graph;
  usSub.epsilon = eps;
  auto ambientDist = ps.graph.distancesFrom(ps.base);
  usSub.sourceDist.resize(sub.graph.order());
  for (int v = 0; v < sub.graph.order(); ++v)
    usSub.sourceDist[v] = ambientDist[sub.fromSub[v]];
  usSub.rhoEps.resize(sub.graph.order());
  for (int v = 0; v < sub.graph.order(); ++v)
    usSub.rhoEps[v] = std::exp(-eps * usSub.sourceDist[v]);
  std::vector<Edge> defEdges = sub.graph.edges();
  for (Edge& e : defEdges)
    e.len = tent_exp_integral(usSub.sourceDist[e.u], usSub.sourceDist[e.v], e.len, eps);
  usSub.graph = MetricGraph(sub.graph.ids(), std::move(defEdges));

  auto probEps = DirichletProblem::onUniformized(usSub, emRegion, beta, p);
  auto solEps = solve_p_harmonic(probEps, bset, bval, p, tolSolve);

  // (a) per-edge gradient identity and band
  long long identityFailures = 0, bandViolations = 0;
  double worstBandExcess = 0.0;
  for (int e = 0; e < sub.graph.edgeCount(); ++e) {
    const Edge& es = sub.graph.edge(e);
    const Edge& ee = usSub.graph.edge(e);
    double gSrc = std::abs(solSrc.u[es.u] - solSrc.u[es.v]);       // g_u * l_e
    double gEps = std::abs(solEps.u[ee.u] - solEps.u[ee.v]);       // g_{u,eps} * l_eps
    if (std::abs(gSrc - gEps) > 10.0 * tolSolve * (1.0 + std::abs(gSrc)))
      ++identityFailures;
    double ratio = es.len / ee.len;
    double bLo = std::exp(eps * std::min(usSub.sourceDist[es.u], usSub.sourceDist[es.v]));
    double bHi = std::exp(eps * std::max(usSub.sourceDist[es.u], usSub.sourceDist[es.v]));
    double fuzz = 1e-12 * bHi;
    if (ratio < bLo - fuzz || ratio > bHi + fuzz) {
      ++bandViolations;
      worstBandExcess = std::max(worstBandExcess,
                                 std::max(bLo - ratio, ratio - bHi));
    }
  }

  // (b) solution agreement, (c) energy identity
  double supDiff = 0.0;
  for (size_t v = 0; v < solSrc.u.size(); ++v)
    supDiff = std::max(supDiff, std::abs(solSrc.u[v] - solEps.u[v]));
  double eSrc = solSrc.energy, eEps = solEps.energy;
  double relEnergy = std::abs(eSrc - eEps) / std::max(std::abs(eSrc), 1e-300);

  rep.measured["energySource"] = eSrc;
  rep.measured["energyDeformed"] = eEps;
  rep.measured["energyRelDiff"] = relEnergy;
  rep.measured["solutionSupDiff"] = supDiff;
  rep.measured["gradientIdentityFailures"] = identityFailures;
  rep.measured["lengthRatioBandViolations"] = bandViolations;
  rep.measured["sourceConverged"] = solSrc.converged;
  rep.measured["deformedConverged"] = solEps.converged;
  rep.predicted["energyRelTol"] = 1e-6;
  rep.predicted["supDiffTol"] = 10.0 * tolSolve;
  rep.setStatus(relEnergy <= 1e-6 && supDiff <= 10.0 * tolSolve &&
                identityFailures == 0 && bandViolations == 0);
  return rep;
}

VerificationReport oscillation_bound_check(const MetricGraph& g, const MeasureField& mu,
                                           int x0, double p, double Lambda,
                                           const std::vector<double>& radii,
                                           double tolSolve) {
  VerificationReport rep;
  rep.check = "oscillation-energy-bound";
  rep.anchor = "punctured-ball-oscillation-bound";
  EdgeMassField em = EdgeMassField::fromVertexMasses(g, mu);
  auto dist0 = g.distancesFrom(x0);

  json rows = json::array();
  double cMin = kInf, cMax = 0.0;
  bool vacuous = false;
  for (double r : radii) {
    double Rbig = 2.0 * Lambda * r;
    std::vector<int> regionVerts;
    for (int v = 0; v < g.order(); ++v)
      if (dist0[v] < Rbig) regionVerts.push_back(v);
    auto sub = induced_subgraph(g, regionVerts);
    // Dirichlet data: 1 at the puncture, 0 on the region rim
    std::vector<int> bset{sub.toSub[x0]};
    std::vector<double> bval{1.0};
    for (int v = 0; v < sub.graph.order(); ++v) {
      int orig = sub.fromSub[v];
      if (orig == x0) continue;
      bool rim = false;
      for (int e : g.incidentEdges(orig))
        if (!(dist0[g.otherEnd(e, orig)] < Rbig)) rim = true;
      if (rim) {
        bset.push_back(v);
        bval.push_back(0.0);
      }
    }
    if (bset.size() < 2) continue;
    EdgeMassField emSub;
    emSub.m.resize(sub.graph.edgeCount());
    for (int e = 0; e < sub.graph.edgeCount(); ++e)
      emSub.m[e] = em.m[sub.edgeOrigin[e]];
    auto prob = DirichletProblem::onMeasuredGraph(sub.graph, emSub, p);
    auto sol = solve_p_harmonic(prob, bset, bval, p, tolSolve);

    // oscillation over B(x0, 2r) minus the puncture
    double uMin = kInf, uMax = -kInf;
    for (int v = 0; v < sub.graph.order(); ++v) {
      int orig = sub.fromSub[v];
      if (orig == x0 || !(dist0[orig] < 2.0 * r)) continue;
      uMin = std::min(uMin, sol.u[v]);
      uMax = std::max(uMax, sol.u[v]);
    }
    if (!(uMax >= uMin)) continue;
    double osc = uMax - uMin;

    // dyadic mass sum with an analytic geometric tail once the ball is {x0}
    double q = p / (p - 1.0);
    double dyadic = 0.0;
    double rk = r;
    bool tailDone = false;
    for (int k = 0; k < 400; ++k) {
      double m = mu.ballMass(dist0, rk);
      if (m <= 0.0) {
        vacuous = true;
        break;
      }
      bool onlyCenter = true;
      for (int v = 0; v < g.order(); ++v)
        if (v != x0 && dist0[v] < rk) {
          onlyCenter = false;
          break;
        }
      double term = std::pow(std::pow(rk, p) / m, 1.0 / (p - 1.0));
      if (onlyCenter) {
        // remaining radii shrink geometrically with the same center mass
        dyadic += term / (1.0 - std::pow(2.0, -q));
        tailDone = true;
        break;
      }
      dyadic += term;
      rk *= 0.5;
    }
    if (vacuous) {
      json row;
      row["r"] = r;
      row["note"] = "zero-mass small ball, bound vacuous";
      rows.push_back(row);
      continue;
    }
    if (!tailDone) {
      json row;
      row["r"] = r;
      row["note"] = "dyadic sum truncated without tail closure";
      rows.push_back(row);
    }
    double dyadicFactor = std::pow(dyadic, 1.0 - 1.0 / p);
    double energyBig = 0.0;
    for (int e = 0; e < sub.graph.edgeCount(); ++e) {
      const Edge& ed = sub.graph.edge(e);
      int ou = sub.fromSub[ed.u], ov = sub.fromSub[ed.v];
      if (dist0[ou] < Rbig && dist0[ov] < Rbig) {
        double ge = std::abs(sol.u[ed.u] - sol.u[ed.v]) / ed.len;
        energyBig += emSub.m[e] * std::pow(ge, p);
      }
    }
    double rhs = dyadicFactor * std::pow(energyBig, 1.0 / p);
    double c = rhs > 0 ? osc / rhs : 0.0;
    cMin = std::min(cMin, c);
    cMax = std::max(cMax, c);
    json row;
    row["r"] = r;
    row["osc"] = osc;
    row["dyadicFactor"] = dyadicFactor;
    row["energyBall"] = energyBig;
    row["empiricalC"] = c;
    rows.push_back(row);
  }
  rep.measured["perRadius"] = rows;
  rep.measured["empiricalCMin"] = std::isfinite(cMin) ? json(cMin) : json("n/a");
  rep.measured["empiricalCMax"] = cMax;
  rep.measured["vacuous"] = vacuous;
  bool stable = std::isfinite(cMin) && cMin > 0 && cMax / cMin <= 2.0;
  rep.setStatus(vacuous || stable);
  return rep;
}

}  // namespace gromovlab
