#include "gromovlab/hyperbolize.hpp"

#include <algorithm>
#include <cmath>

#include "gromovlab/doubling.hpp"
#include "gromovlab/rng.hpp"

namespace gromovlab {

namespace {

// Breakpoints of t -> min(cap, a + t, b + len - t) on [t0, t1].
std::vector<double> clearanceBreaks(double a, double b, double len, double cap, double t0,
                                    double t1) {
  std::vector<double> pts{t0, t1};
  auto add = [&](double t) {
    if (t > t0 && t < t1) pts.push_back(t);
  };
  if (std::isfinite(cap)) {
    add(cap - a);
    add(b + len - cap);
  }
  add(0.5 * (b + len - a));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

enum class Branch { Cap, Rising, Falling };

Branch branchAt(double a, double b, double len, double cap, double t) {
  double rise = a + t;
  double fall = b + len - t;
  double m = std::min(std::min(rise, fall), cap);
  if (m == cap && std::isfinite(cap)) return Branch::Cap;
  return rise <= fall ? Branch::Rising : Branch::Falling;
}

}  // namespace

double clearance_inverse_integral(double a, double b, double len, double cap, double t0,
                                  double t1) {
  if (t1 <= t0) return 0.0;
  auto pts = clearanceBreaks(a, b, len, cap, t0, t1);
  double acc = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double s = pts[i], e = pts[i + 1];
    switch (branchAt(a, b, len, cap, 0.5 * (s + e))) {
      case Branch::Cap:
        acc += (e - s) / cap;
        break;
      case Branch::Rising: {
        if (a + s <= 0.0) return kInf;
        acc += std::log((a + e) / (a + s));
        break;
      }
      case Branch::Falling: {
        if (b + len - e <= 0.0) return kInf;
        acc += std::log((b + len - s) / (b + len - e));
        break;
      }
    }
  }
  return acc;
}

double clearance_pow_integral(double a, double b, double len, double cap, double alpha,
                              double t0, double t1) {
  if (t1 <= t0) return 0.0;
  if (alpha == 0.0) return t1 - t0;
  auto pts = clearanceBreaks(a, b, len, cap, t0, t1);
  auto powPrim = [&](double x) {
    // antiderivative of x^{-alpha}
    if (alpha == 1.0) return std::log(x);
    return std::pow(x, 1.0 - alpha) / (1.0 - alpha);
  };
  double acc = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double s = pts[i], e = pts[i + 1];
    switch (branchAt(a, b, len, cap, 0.5 * (s + e))) {
      case Branch::Cap:
        acc += (e - s) * std::pow(cap, -alpha);
        break;
      case Branch::Rising: {
        if (a + s <= 0.0) return kInf;
        acc += powPrim(a + e) - powPrim(a + s);
        break;
      }
      case Branch::Falling: {
        if (b + len - e <= 0.0) return kInf;
        acc += powPrim(b + len - s) - powPrim(b + len - e);
        break;
      }
    }
  }
  return acc;
}

QuasihyperbolizedSpace quasihyperbolic(const UniformDomain& dom) {
  QuasihyperbolizedSpace q;
  auto mask = dom.boundaryMask();
  const MetricGraph& g = dom.graph;
  q.toInterior.assign(g.order(), -1);
  for (int v = 0; v < g.order(); ++v) {
    if (!mask[v]) {
      q.toInterior[v] = static_cast<int>(q.fromInterior.size());
      q.fromInterior.push_back(v);
    }
  }
  std::vector<std::int64_t> ids;
  ids.reserve(q.fromInterior.size());
  for (int v : q.fromInterior) ids.push_back(g.idOf(v));

  std::vector<Edge> edges;
  for (int e = 0; e < g.edgeCount(); ++e) {
    const Edge& ed = g.edge(e);
    if (mask[ed.u] || mask[ed.v]) {
      ++q.droppedEdges;
      continue;
    }
    EdgeClearance cl = dom.clearanceOf(e);
    double klen = clearance_inverse_integral(cl.a, cl.b, ed.len, cl.cap, 0.0, ed.len);
    if (!std::isfinite(klen)) {
      ++q.droppedEdges;
      continue;
    }
    edges.push_back({q.toInterior[ed.u], q.toInterior[ed.v], klen});
  }
  q.graph = MetricGraph(std::move(ids), std::move(edges));
  return q;
}

MeasureField mu_alpha(const UniformDomain& dom, const MeasureField& mu, double alpha) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  mu.validate(dom.graph);
  auto mask = dom.boundaryMask();
  const MetricGraph& g = dom.graph;
  MeasureField out;
  out.mass.assign(g.order(), 0.0);
  for (int v = 0; v < g.order(); ++v) {
    if (mask[v]) continue;  // boundary masses dropped
    if (!(dom.dOmega[v] > 0.0))
      throw DataError("interior vertex with zero boundary distance");
    if (mu.mass[v] == 0.0) continue;
    double integral = 0.0;
    double halfLen = 0.0;
    for (int e : g.incidentEdges(v)) {
      const Edge& ed = g.edge(e);
      EdgeClearance cl = dom.clearanceOf(e);
      double half = 0.5 * ed.len;
      // integrate over the half of the edge owned by v
      double part = (ed.u == v)
                        ? clearance_pow_integral(cl.a, cl.b, ed.len, cl.cap, alpha, 0.0, half)
                        : clearance_pow_integral(cl.a, cl.b, ed.len, cl.cap, alpha, half,
                                                 ed.len);
      integral += part;
      halfLen += half;
    }
    out.mass[v] = mu.mass[v] * (integral / halfLen);
  }
  return out;
}

MeasureField restrict_to_interior(const QuasihyperbolizedSpace& q, const MeasureField& mu) {
  MeasureField out;
  out.mass.resize(q.fromInterior.size());
  for (size_t i = 0; i < q.fromInterior.size(); ++i) out.mass[i] = mu.mass[q.fromInterior[i]];
  return out;
}

VerificationReport hyperbolized_doubling_check(const UniformDomain& dom,
                                               const MeasureField& mu, double alpha,
                                               double R0) {
  VerificationReport rep;
  rep.check = "hyperbolized-doubling";
  rep.anchor = "alpha-deformed-doubling-bound";

  // source measure doubling over all scales (graph length space: L = 1);
  // balls are centered in the domain, not at representation-only boundary
  // vertices
  double diam = dom.graph.diameterEstimate();
  auto interior = dom.interiorVertices();
  auto srcDoubling = doubling_constant(dom.graph, mu, 2.0 * diam, SampleMode::Exhaustive,
                                       0, 64, nullptr, &interior);
  double Cmu = srcDoubling.Cd;
  const double L = 1.0;
  int m = static_cast<int>(std::ceil(std::log2(8.0 * L)));
  double bound = std::pow(4.0, alpha) * std::pow(Cmu, m);

  auto q = quasihyperbolic(dom);
  MeasureField muA = restrict_to_interior(q, mu_alpha(dom, mu, alpha));
  auto kDoubling = doubling_constant(q.graph, muA, R0);

  rep.measured["sourceCmu"] = std::isfinite(Cmu) ? json(Cmu) : json("inf");
  rep.measured["kBallCd"] =
      std::isfinite(kDoubling.Cd) ? json(kDoubling.Cd) : json("inf");
  rep.measured["R0"] = R0;
  rep.predicted["bound"] = std::isfinite(bound) ? json(bound) : json("inf");
  rep.predicted["m"] = m;
  rep.setStatus(std::isfinite(kDoubling.Cd) && std::isfinite(bound) &&
                kDoubling.Cd <= bound);
  return rep;
}

UniformizedDomain domain_from_uniformized(const UniformizedSpace& us) {
  UniformizedDomain out;
  const MetricGraph& g = us.graph;
  out.sourceOrder = g.order();

  std::vector<std::int64_t> ids = g.ids();
  std::vector<Edge> edges = g.edges();
  std::vector<int> boundary;
  std::int64_t nextId = *std::max_element(ids.begin(), ids.end()) + 1;
  int nextIndex = g.order();
  for (size_t i = 0; i < us.frontier.size(); ++i) {
    if (us.tau[i] > 0.0) {
      ids.push_back(nextId++);
      edges.push_back({us.frontier[i], nextIndex, us.tau[i]});
      boundary.push_back(nextIndex);
      ++nextIndex;
    } else {
      boundary.push_back(us.frontier[i]);
    }
  }
  out.dom = UniformDomain::fromBoundary(MetricGraph(std::move(ids), std::move(edges)),
                                        std::move(boundary));
  return out;
}

UniformCurveOracle::UniformCurveOracle(const UniformDomain& dom)
    : dom_(&dom), q_(quasihyperbolic(dom)) {}

Curve UniformCurveOracle::curveBetween(int x, int y) const {
  int a = q_.toInterior[x], b = q_.toInterior[y];
  if (a < 0 || b < 0) throw InputError("curve endpoints must be interior vertices");
  auto path = q_.graph.canonicalPath(a, b);
  std::vector<int> mapped;
  mapped.reserve(path.size());
  for (int v : path) mapped.push_back(q_.fromInterior[v]);
  return Curve::fromPath(dom_->graph, std::move(mapped));
}

CurveCheckResult uniform_curve_check(const UniformDomain& dom, const Curve& curve,
                                     double A) {
  CurveCheckResult res;
  if (curve.empty()) throw InputError("empty curve");
  double l = curve.length();
  double d = dom.graph.distance(curve.front(), curve.back());
  res.worstLengthRatio = d > 0.0 ? l / d : (l > 0.0 ? kInf : 1.0);
  double worstCigar = 0.0;
  for (size_t i = 0; i < curve.verts.size(); ++i) {
    double t = curve.cum[i];
    double margin = std::min(t, l - t);
    if (margin <= 0.0) continue;
    double clr = dom.dOmega[curve.verts[i]];
    if (clr <= 0.0) {
      worstCigar = kInf;
      break;
    }
    worstCigar = std::max(worstCigar, margin / clr);
  }
  res.worstCigarRatio = worstCigar;
  res.minimalA = std::max({1.0, res.worstLengthRatio, worstCigar});
  double tol = 1e-9 * std::max(1.0, A);
  res.pass = res.minimalA <= A + tol;
  return res;
}

double measure_uniformity_A(const UniformDomain& dom, int samplePairs,
                            std::uint64_t seed) {
  UniformCurveOracle oracle(dom);
  auto interior = dom.interiorVertices();
  if (interior.size() < 2) throw InputError("domain has fewer than two interior vertices");
  Rng rng(seed);
  double A = 1.0;
  for (int i = 0; i < samplePairs; ++i) {
    int x = rng.pick(interior);
    int y = rng.pick(interior);
    if (x == y) continue;
    Curve c = oracle.curveBetween(x, y);
    A = std::max(A, uniform_curve_check(dom, c, kInf).minimalA);
  }
  return A;
}

VerificationReport roundtrip_bilipschitz(const GeneratedSpace& gen, double eps,
                                         int samplePairs, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "roundtrip-bilipschitz";
  rep.anchor = "uniformize-then-hyperbolize-roundtrip";

  UniformizeOptions opt;
  opt.exactTails = gen.exactTails;
  opt.eps0 = std::isnan(gen.eps0Certified) ? kInf : gen.eps0Certified;
  opt.force = true;
  UniformizedSpace us = uniformize(gen.ps, eps, opt);
  auto ud = domain_from_uniformized(us);
  auto q = quasihyperbolic(ud.dom);

  Rng rng(seed);
  const int n = gen.ps.graph.order();
  double lo = kInf, hi = 0.0;
  json rows = json::array();
  for (int i = 0; i < samplePairs; ++i) {
    int x = rng.pick(n), y = rng.pick(n);
    if (x == y) continue;
    int a = q.toInterior[x], b = q.toInterior[y];
    if (a < 0 || b < 0) continue;
    double k = q.graph.distance(a, b);
    double d = gen.ps.graph.distance(x, y);
    double ratio = k / (eps * d);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  rep.measured["kOverEpsDMin"] = lo;
  rep.measured["kOverEpsDMax"] = hi;
  rep.measured["band"] = (lo > 0 && std::isfinite(hi)) ? json(hi / lo) : json("inf");
  rep.setStatus(lo > 0 && std::isfinite(hi));
  return rep;
}

}  // namespace gromovlab
