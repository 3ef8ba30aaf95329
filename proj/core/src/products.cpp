#include "gromovlab/products.hpp"

#include <algorithm>
#include <cmath>

#include "gromovlab/rng.hpp"

namespace gromovlab {

int ProductDomain::pairIndex(int iA, int iB) const {
  return iA * factorB.graph.order() + iB;
}

double predicted_product_uniformity(double A, double D, double A2, double D2) {
  double num = 80.0 * ((A + 1.0) * D + (A2 + 1.0) * D2);
  double den = std::min(D / (A * A * A), D2 / (A2 * A2 * A2));
  return num / den;
}

ProductDomain product_uniform(const UniformDomain& a, const UniformDomain& b,
                              double measuredAa, double measuredAb) {
  ProductDomain prod;
  prod.factorA = a;
  prod.factorB = b;
  const int nA = a.graph.order();
  const int nB = b.graph.order();
  auto at = [&](int i, int j) { return i * nB + j; };

  std::vector<std::int64_t> ids(static_cast<size_t>(nA) * nB);
  prod.coords.resize(ids.size());
  for (int i = 0; i < nA; ++i)
    for (int j = 0; j < nB; ++j) {
      ids[at(i, j)] = at(i, j);
      prod.coords[at(i, j)] = {i, j};
    }

  std::vector<Edge> edges;
  std::vector<EdgeClearance> clearance;
  for (const Edge& e : a.graph.edges())
    for (int j = 0; j < nB; ++j) {
      edges.push_back({at(e.u, j), at(e.v, j), e.len});
      clearance.push_back({a.dOmega[e.u], a.dOmega[e.v], b.dOmega[j]});
    }
  for (const Edge& e : b.graph.edges())
    for (int i = 0; i < nA; ++i) {
      edges.push_back({at(i, e.u), at(i, e.v), e.len});
      clearance.push_back({b.dOmega[e.u], b.dOmega[e.v], a.dOmega[i]});
    }

  auto maskA = a.boundaryMask();
  auto maskB = b.boundaryMask();
  std::vector<int> boundary;
  for (int i = 0; i < nA; ++i)
    for (int j = 0; j < nB; ++j)
      if (maskA[i] || maskB[j]) boundary.push_back(at(i, j));

  prod.dom.graph = MetricGraph(std::move(ids), std::move(edges));
  prod.dom.boundary = std::move(boundary);
  prod.dom.edgeClearance = std::move(clearance);
  prod.dom.dOmega.resize(static_cast<size_t>(nA) * nB);
  for (int i = 0; i < nA; ++i)
    for (int j = 0; j < nB; ++j)
      prod.dom.dOmega[at(i, j)] = std::min(a.dOmega[i], b.dOmega[j]);

  prod.diamA = a.diameterInterior();
  prod.diamB = b.diameterInterior();
  prod.uniformityAFactorA = a.uniformityA.value_or(measuredAa);
  prod.uniformityAFactorB = b.uniformityA.value_or(measuredAb);
  prod.predictedAtilde = predicted_product_uniformity(
      prod.uniformityAFactorA, prod.diamA, prod.uniformityAFactorB, prod.diamB);
  prod.dom.uniformityA = prod.predictedAtilde;
  return prod;
}

MeasureField product_measure(const ProductDomain& prod, const MeasureField& muA,
                             const MeasureField& muB) {
  MeasureField out;
  out.mass.resize(prod.coords.size());
  for (size_t v = 0; v < prod.coords.size(); ++v)
    out.mass[v] = muA.mass[prod.coords[v].first] * muB.mass[prod.coords[v].second];
  return out;
}

namespace {

Curve singleVertexCurve(int v) {
  Curve c;
  c.verts = {v};
  c.cum = {0.0};
  return c;
}

// Back-and-forth excursion at v of length >= target along the incident edge
// whose far endpoint has the best clearance.
Curve loopAt(const UniformDomain& dom, int v, double target) {
  int bestEdge = -1;
  double bestClear = -1.0;
  for (int e : dom.graph.incidentEdges(v)) {
    int w = dom.graph.otherEnd(e, v);
    if (dom.isBoundary(w)) continue;
    if (dom.dOmega[w] > bestClear) {
      bestClear = dom.dOmega[w];
      bestEdge = e;
    }
  }
  if (bestEdge < 0) return singleVertexCurve(v);
  double len = dom.graph.edge(bestEdge).len;
  int w = dom.graph.otherEnd(bestEdge, v);
  int bounces = std::max(1, static_cast<int>(std::ceil(target / (2.0 * len))));
  std::vector<int> path{v};
  for (int i = 0; i < bounces; ++i) {
    path.push_back(w);
    path.push_back(v);
  }
  return Curve::fromPath(dom.graph, std::move(path));
}

}  // namespace

BananaCertificate long_banana_curve(const UniformDomain& dom,
                                    const UniformCurveOracle& oracle, int x, int y,
                                    double L, double A) {
  BananaCertificate cert;
  double dxy = dom.graph.distance(x, y);
  double tol = dom.graph.tolGeom();
  if (L < dxy - tol) throw InputError("L must be at least d(x, y)");

  // deepest interior point; exhaustive so the 4/5-condition is exact
  int x0 = -1;
  double best = -1.0;
  for (int v : dom.interiorVertices())
    if (dom.dOmega[v] > best) {
      best = dom.dOmega[v];
      x0 = v;
    }
  if (x0 < 0) throw InputError("domain has no interior vertices");

  auto approach = [&](int from, std::string& trace) -> Curve {
    Curve toDeep = (from == x0) ? singleVertexCurve(from) : oracle.curveBetween(from, x0);
    double lG = toDeep.length();
    if (L <= 5.0 * A * lG) {
      trace += "cut;";
      return toDeep.prefixByLength(L / (10.0 * A));
    }
    trace += "short+loop;";
    Curve head = toDeep.prefixByLength(0.5 * lG);
    Curve loop = loopAt(dom, head.back(), L / (10.0 * A));
    return head.concat(loop);
  };

  std::string trace;
  Curve cx = approach(x, trace);
  Curve cy = approach(y, trace);
  Curve mid = (cx.back() == cy.back()) ? singleVertexCurve(cx.back())
                                       : oracle.curveBetween(cx.back(), cy.back());
  cert.curve = cx.concat(mid).concat(cy.reversed());
  cert.stageTrace = trace;

  cert.length = cert.curve.length();
  cert.lengthLow = L / (5.0 * A);
  cert.lengthHigh = (A + 1.0) * L;
  bool lengthOk =
      cert.length >= cert.lengthLow - tol && cert.length <= cert.lengthHigh + tol;

  double bound = 1.0 / (16.0 * A * A);
  double worst = 0.0;
  bool clearOk = true;
  double l = cert.length;
  for (size_t i = 0; i < cert.curve.verts.size(); ++i) {
    double margin = std::min(cert.curve.cum[i], l - cert.curve.cum[i]);
    double clr = dom.dOmega[cert.curve.verts[i]];
    if (margin <= 0.0) continue;
    worst = std::max(worst, margin > 0 ? (clr > 0 ? margin / clr : kInf) : 0.0);
    if (clr + tol < bound * margin) clearOk = false;
  }
  cert.worstClearanceRatio = worst;
  cert.certified = lengthOk && clearOk;
  return cert;
}

IndirectProduct indirect_product(const GeneratedSpace& X, const GeneratedSpace& Y,
                                 double eps) {
  IndirectProduct ip;
  ip.epsilon = eps;
  UniformizeOptions ox;
  ox.exactTails = X.exactTails;
  ox.eps0 = std::isnan(X.eps0Certified) ? kInf : X.eps0Certified;
  ox.force = true;
  UniformizeOptions oy = ox;
  oy.exactTails = Y.exactTails;
  oy.eps0 = std::isnan(Y.eps0Certified) ? kInf : Y.eps0Certified;
  ip.ux = uniformize(X.ps, eps, ox);
  ip.uy = uniformize(Y.ps, eps, oy);

  auto domX = domain_from_uniformized(ip.ux);
  auto domY = domain_from_uniformized(ip.uy);
  double aX = X.declaredA, aY = Y.declaredA;
  if (std::isnan(aX)) aX = measure_uniformity_A(domX.dom, 32, 5);
  if (std::isnan(aY)) aY = measure_uniformity_A(domY.dom, 32, 5);
  ip.prod = product_uniform(domX.dom, domY.dom, aX, aY);
  ip.hyper = quasihyperbolic(ip.prod.dom);
  ip.base = ip.hyper.toInterior[ip.prod.pairIndex(X.ps.base, Y.ps.base)];
  return ip;
}

int IndirectProduct::interiorIndex(int iX, int iY) const {
  int p = prod.pairIndex(iX, iY);
  return hyper.toInterior[p];
}

json LipschitzReport::toJson() const {
  json j;
  j["supRatio"] = supRatio;
  j["epsTimesSup"] = epsTimesSup;
  j["pairs"] = pairs;
  return j;
}

LipschitzReport projection_lipschitz_check(const IndirectProduct& ip,
                                           const GeneratedSpace& X, int sampleBudget,
                                           std::uint64_t seed) {
  LipschitzReport rep;
  Rng rng(seed);
  const int nInt = ip.hyper.graph.order();
  const int perSource = 8;
  int sources = std::max(1, sampleBudget / perSource);
  for (int s = 0; s < sources; ++s) {
    int a = rng.pick(nInt);
    auto [ax, ay] = ip.prod.coords[ip.hyper.fromInterior[a]];
    if (ax >= X.ps.graph.order()) continue;  // pendant coordinate
    auto kd = ip.hyper.graph.distancesFrom(a);
    auto dsrc = X.ps.graph.distancesFrom(ax);
    for (int t = 0; t < perSource; ++t) {
      int b = rng.pick(nInt);
      if (b == a) continue;
      auto [bx, by] = ip.prod.coords[ip.hyper.fromInterior[b]];
      if (bx >= X.ps.graph.order()) continue;
      if (!(kd[b] > 0.0)) continue;
      rep.supRatio = std::max(rep.supRatio, dsrc[bx] / kd[b]);
      ++rep.pairs;
    }
  }
  rep.epsTimesSup = ip.epsilon * rep.supRatio;
  return rep;
}

VerificationReport canonical_map_distortion(const GeneratedSpace& X,
                                            const GeneratedSpace& Y, double eps,
                                            double epsPrime,
                                            const CanonicalMapParams& params) {
  if (!(epsPrime > 0.0) || !(epsPrime < eps))
    throw InputError("need 0 < epsPrime < eps");
  VerificationReport rep;
  rep.check = "canonical-map-distortion";
  rep.anchor = "identity-map-between-deformation-scales";

  IndirectProduct ipE = indirect_product(X, Y, eps);
  IndirectProduct ipE2 = indirect_product(X, Y, epsPrime);

  if (eps == epsPrime) {
    rep.measured["identical"] = true;
    rep.setStatus(true);
    return rep;
  }

  Rng rng(params.seed);
  const int nInt = std::min(ipE.hyper.graph.order(), ipE2.hyper.graph.order());

  // forward ratios of the identity on the hyperbolized products
  double fwdC = 0.0;
  {
    int sources = std::max(1, params.sampleBudget / 8);
    for (int s = 0; s < sources; ++s) {
      int a = rng.pick(nInt);
      auto da = ipE.hyper.graph.distancesFrom(a);
      auto da2 = ipE2.hyper.graph.distancesFrom(a);
      for (int t = 0; t < 8; ++t) {
        int b = rng.pick(nInt);
        if (b == a || !(da[b] > 0.0)) continue;
        fwdC = std::max(fwdC, (da2[b] / da[b]) * (eps / epsPrime));
      }
    }
  }
  rep.measured["forwardConstant"] = fwdC;

  // forward ratios of the identity on the sum-metric products
  double psiC = 0.0;
  {
    const int nX = X.ps.graph.order(), nY = Y.ps.graph.order();
    for (int s = 0; s < params.sampleBudget; ++s) {
      int ax = rng.pick(nX), ay = rng.pick(nY);
      int bx = rng.pick(nX), by = rng.pick(nY);
      double dE = ipE.ux.graph.distance(ax, bx) + ipE.uy.graph.distance(ay, by);
      double dE2 = ipE2.ux.graph.distance(ax, bx) + ipE2.uy.graph.distance(ay, by);
      if (dE2 > 0.0) psiC = std::max(psiC, dE / dE2);
    }
  }
  rep.measured["psiForwardConstant"] = psiC;

  // inverse blow-up along the distinguished-first-coordinate witnesses:
  // adjacent pairs (x_j, x_j') with y = y' = base of Y
  auto srcDist = X.ps.graph.distancesFrom(X.ps.base);
  std::vector<int> order(X.ps.graph.order());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return srcDist[a] < srcDist[b]; });

  std::vector<int> witnesses;
  for (int q = 1; q <= params.witnessCount; ++q) {
    int idx = static_cast<int>((order.size() - 1) * q / params.witnessCount);
    int v = order[idx];
    if (v != X.ps.base && srcDist[v] > 0.0) witnesses.push_back(v);
  }

  json psiRows = json::array();
  double firstRatio = -1.0, lastRatio = -1.0;
  double firstDist = 0.0, lastDist = 0.0;
  bool monotone = true;
  double prev = 0.0;
  for (int v : witnesses) {
    auto dv = X.ps.graph.distancesFrom(v);
    auto dvb = X.ps.graph.distancesFrom(X.ps.base);
    auto path = X.ps.graph.canonicalPath(v, X.ps.base, dv, dvb);
    if (path.size() < 2) continue;
    int vp = path[1];  // neighbor toward the base
    double num = ipE2.ux.graph.distance(v, vp);
    double den = ipE.ux.graph.distance(v, vp);
    if (!(den > 0.0)) continue;
    double ratio = num / den;
    if (firstRatio < 0) {
      firstRatio = ratio;
      firstDist = srcDist[v];
    }
    lastRatio = ratio;
    lastDist = srcDist[v];
    if (ratio < prev) monotone = false;
    prev = ratio;
    json row;
    row["x"] = X.ps.graph.idOf(v);
    row["distToBase"] = srcDist[v];
    row["ratio"] = ratio;
    psiRows.push_back(row);
  }
  rep.measured["psiInverseWitnesses"] = psiRows;
  bool psiGrowth = firstRatio > 0 && lastRatio >= params.growthFactor * firstRatio;
  double expectedGrowth = std::exp((eps - epsPrime) * (lastDist - firstDist));
  double measuredGrowth = firstRatio > 0 ? lastRatio / firstRatio : 0.0;
  rep.measured["psiGrowth"] = measuredGrowth;
  rep.predicted["psiGrowthExpected"] = expectedGrowth;
  double growthErr = expectedGrowth > 0 ? std::abs(measuredGrowth / expectedGrowth - 1.0) : kInf;
  rep.measured["psiGrowthRelError"] = growthErr;

  // inverse blow-up of the hyperbolized identity: pairs (x_j, zY) vs (x_j, y_j)
  // with the second coordinate displaced proportionally to the boundary
  // clearance of x_j
  auto consts = UniformizationConstants::fromMDelta(0.0, 0.0, eps);
  auto bx = ipE.ux.boundaryDistances();
  auto srcDistY = Y.ps.graph.distancesFrom(Y.ps.base);
  json phiRows = json::array();
  double phiFirst = -1.0, phiLast = -1.0;
  bool phiMonotone = true;
  bool phiConclusive = true;
  prev = 0.0;
  for (int v : witnesses) {
    double target = consts.C1 * bx[v] / (4.0 * consts.C2 * params.comparisonC);
    // nearest realizable second coordinate
    int yj = -1;
    double bestErr = kInf;
    for (int w = 0; w < Y.ps.graph.order(); ++w) {
      double err = std::abs(srcDistY[w] - target);
      if (srcDistY[w] > 0.0 && err < bestErr) {
        bestErr = err;
        yj = w;
      }
    }
    if (yj < 0 || bestErr > 0.5 * target) {
      phiConclusive = false;
      continue;
    }
    int a1 = ipE.interiorIndex(v, Y.ps.base);
    int b1 = ipE.interiorIndex(v, yj);
    int a2 = ipE2.interiorIndex(v, Y.ps.base);
    int b2 = ipE2.interiorIndex(v, yj);
    if (a1 < 0 || b1 < 0 || a2 < 0 || b2 < 0) continue;
    double kE = ipE.hyper.graph.distance(a1, b1);
    double kE2 = ipE2.hyper.graph.distance(a2, b2);
    if (!(kE2 > 0.0)) continue;
    double ratio = kE / kE2;
    if (phiFirst < 0) phiFirst = ratio;
    phiLast = ratio;
    if (ratio < prev) phiMonotone = false;
    prev = ratio;
    json row;
    row["x"] = X.ps.graph.idOf(v);
    row["y"] = Y.ps.graph.idOf(yj);
    row["ratio"] = ratio;
    phiRows.push_back(row);
  }
  rep.measured["phiInverseWitnesses"] = phiRows;
  bool phiGrowth = phiFirst > 0 && phiLast >= params.growthFactor * phiFirst;
  rep.measured["phiGrowth"] = phiFirst > 0 ? phiLast / phiFirst : 0.0;
  rep.measured["psiMonotone"] = monotone;
  rep.measured["phiMonotone"] = phiMonotone;

  if (!phiConclusive && !phiGrowth) {
    rep.status = VerificationReport::Status::Inconclusive;
    json w;
    w["note"] = "insufficient depth to exhibit inverse growth";
    rep.witnesses.push_back(w);
  } else {
    rep.setStatus(psiGrowth && phiGrowth && growthErr <= 0.05);
  }
  return rep;
}

}  // namespace gromovlab
