#include "gromovlab/poincare.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gromovlab/rng.hpp"

namespace gromovlab {

namespace {

struct BallContext {
  std::vector<int> ball;      // vertices of B(center, r)
  std::vector<int> dilated;   // vertices of B(center, lambda r)
  std::vector<int> edgesIn;   // edges with both endpoints in the dilated ball
  std::vector<char> inBall;
  std::vector<char> inDilated;
  double muBall = 0.0;
  double muDilated = 0.0;
  double diam = 0.0;
};

BallContext buildContext(const MetricGraph& g, const MeasureField& mu, int center,
                         double radius, double lambda) {
  BallContext ctx;
  auto dist = g.distancesFrom(center);
  ctx.ball = MetricGraph::ballVertices(dist, radius);
  ctx.dilated = MetricGraph::ballVertices(dist, lambda * radius);
  ctx.inBall.assign(g.order(), 0);
  ctx.inDilated.assign(g.order(), 0);
  for (int v : ctx.ball) {
    ctx.inBall[v] = 1;
    ctx.muBall += mu.mass[v];
  }
  for (int v : ctx.dilated) {
    ctx.inDilated[v] = 1;
    ctx.muDilated += mu.mass[v];
  }
  for (int e = 0; e < g.edgeCount(); ++e)
    if (ctx.inDilated[g.edge(e).u] && ctx.inDilated[g.edge(e).v]) ctx.edgesIn.push_back(e);
  // exact ambient diameter of the ball
  for (int v : ctx.ball) {
    auto dv = g.distancesFrom(v);
    for (int w : ctx.ball) ctx.diam = std::max(ctx.diam, dv[w]);
  }
  return ctx;
}

// components of the measure support inside the dilated ball: positive-mass
// vertices joined by paths of positive-edge-mass edges (zero-mass bridges
// carry no gradient mass and genuinely disconnect the inequality)
int supportComponentCount(const MetricGraph& g, const MeasureField& mu,
                          const EdgeMassField& em, const BallContext& ctx) {
  std::vector<int> comp(g.order(), -1);
  int nComp = 0;
  for (int s : ctx.dilated) {
    if (comp[s] >= 0 || !(mu.mass[s] > 0.0)) continue;
    std::vector<int> stack{s};
    comp[s] = nComp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : g.incidentEdges(v)) {
        int w = g.otherEnd(e, v);
        if (ctx.inDilated[w] && comp[w] < 0 && em.m[e] > 0.0) {
          comp[w] = nComp;
          stack.push_back(w);
        }
      }
    }
    ++nComp;
  }
  return nComp;
}

}  // namespace

json PoincareReport::toJson() const {
  json j;
  j["p"] = p;
  j["lambda"] = lambda;
  j["center"] = center;
  j["radius"] = radius;
  j["lowerBoundCPI"] =
      std::isfinite(lowerBoundCPI) ? json(lowerBoundCPI) : json("inf");
  j["boundKind"] = "testFamilyLowerBound";
  if (exactL2Constant) j["exactL2Constant"] = *exactL2Constant;
  j["worstTestFunction"] = worstTestFunction;
  j["infiniteWitness"] = infiniteWitness;
  j["witnesses"] = witnesses;
  return j;
}

PoincareReport poincare_constant(const MetricGraph& g, const MeasureField& mu, int center,
                                 double radius, double p, double lambda, int testBudget,
                                 std::uint64_t seed) {
  if (p < 1.0) throw InputError("p must be >= 1");
  if (lambda < 1.0) throw InputError("lambda must be >= 1");
  mu.validate(g);

  PoincareReport rep;
  rep.p = p;
  rep.lambda = lambda;
  rep.center = center;
  rep.radius = radius;

  BallContext ctx = buildContext(g, mu, center, radius, lambda);
  if (ctx.ball.empty() || ctx.muBall <= 0.0)
    throw InputError("ball is empty or has zero mass");
  EdgeMassField em = EdgeMassField::fromVertexMasses(g, mu);

  if (supportComponentCount(g, mu, em, ctx) > 1) {
    rep.lowerBoundCPI = kInf;
    rep.infiniteWitness = true;
    json w;
    w["note"] = "dilated ball support is disconnected";
    rep.witnesses.push_back(w);
    return rep;
  }

  auto ratioOf = [&](const std::vector<double>& u) -> double {
    double mean = 0.0;
    for (int v : ctx.ball) mean += mu.mass[v] * u[v];
    mean /= ctx.muBall;
    double osc = 0.0;
    for (int v : ctx.ball) osc += mu.mass[v] * std::abs(u[v] - mean);
    osc /= ctx.muBall;
    double grad = 0.0;
    for (int e : ctx.edgesIn) {
      const Edge& ed = g.edge(e);
      double ge = std::abs(u[ed.u] - u[ed.v]) / ed.len;
      grad += em.m[e] * std::pow(ge, p);
    }
    grad = std::pow(grad / ctx.muDilated, 1.0 / p);
    if (osc <= 0.0) return 0.0;  // constant-on-ball functions contribute nothing
    if (grad <= 0.0) return kInf;
    return osc / (ctx.diam * grad);
  };

  Rng rng(seed);
  int id = 0;
  auto submit = [&](const std::vector<double>& u) {
    double r = ratioOf(u);
    if (r > rep.lowerBoundCPI) {
      rep.lowerBoundCPI = r;
      rep.worstTestFunction = id;
    }
    ++id;
  };

  const int perFamily = std::max(1, testBudget / 3);
  std::vector<double> u(g.order(), 0.0);

  // distance functions to sampled vertices
  for (int i = 0; i < perFamily; ++i) {
    int s = ctx.dilated[rng.pick(static_cast<int>(ctx.dilated.size()))];
    auto dist = g.distancesFrom(s);
    submit(dist);
  }
  // smoothed indicator cuts
  for (int i = 0; i < perFamily; ++i) {
    int s = ctx.dilated[rng.pick(static_cast<int>(ctx.dilated.size()))];
    double rho = rng.uniform(0.0, radius);
    double width = 0.5 * rho + g.minEdgeLen();
    auto dist = g.distancesFrom(s);
    for (int v = 0; v < g.order(); ++v)
      u[v] = std::clamp((dist[v] - rho) / width, 0.0, 1.0);
    submit(u);
  }
  // low-frequency random fields: random signs smoothed a few Jacobi passes
  for (int i = 0; i < testBudget - 2 * perFamily; ++i) {
    for (int v = 0; v < g.order(); ++v) u[v] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (int pass = 0; pass < 3; ++pass) {
      std::vector<double> nu = u;
      for (int v : ctx.dilated) {
        double acc = u[v], wsum = 1.0;
        for (int e : g.incidentEdges(v)) {
          int w = g.otherEnd(e, v);
          if (ctx.inDilated[w]) {
            acc += u[w];
            wsum += 1.0;
          }
        }
        nu[v] = acc / wsum;
      }
      u = std::move(nu);
    }
    submit(u);
  }

  // exact spectral route for the (2,2) inequality on the undilated ball
  if (p == 2.0 && lambda == 1.0) {
    std::vector<int> pos;  // ball vertices with positive mass
    for (int v : ctx.ball)
      if (mu.mass[v] > 0.0) pos.push_back(v);
    std::vector<int> zer;
    for (int v : ctx.ball)
      if (mu.mass[v] <= 0.0) zer.push_back(v);
    const int np = static_cast<int>(pos.size());
    const int nz = static_cast<int>(zer.size());
    std::vector<int> local(g.order(), -1);
    for (int i = 0; i < np; ++i) local[pos[i]] = i;
    for (int i = 0; i < nz; ++i) local[zer[i]] = np + i;

    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(np + nz, np + nz);
    for (int e = 0; e < g.edgeCount(); ++e) {
      const Edge& ed = g.edge(e);
      if (!ctx.inBall[ed.u] || !ctx.inBall[ed.v]) continue;
      double c = em.m[e] / (ed.len * ed.len);
      int a = local[ed.u], b = local[ed.v];
      L(a, a) += c;
      L(b, b) += c;
      L(a, b) -= c;
      L(b, a) -= c;
    }
    // eliminate zero-mass vertices (harmonic extension minimizes the energy)
    Eigen::MatrixXd Lred;
    if (nz > 0) {
      Eigen::MatrixXd Lpp = L.topLeftCorner(np, np);
      Eigen::MatrixXd Lpz = L.topRightCorner(np, nz);
      Eigen::MatrixXd Lzz = L.bottomRightCorner(nz, nz);
      Eigen::MatrixXd sol = Lzz.ldlt().solve(Lpz.transpose());
      Lred = Lpp - Lpz * sol;
    } else {
      Lred = L;
    }
    Eigen::VectorXd M(np);
    for (int i = 0; i < np; ++i) M(i) = mu.mass[pos[i]];
    // pencil Lred x = lam M x; transform with D = M^{-1/2}
    Eigen::VectorXd dInv = M.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd A = dInv.asDiagonal() * Lred * dInv.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    // smallest nonzero eigenvalue (the constant vector spans the kernel)
    double lam1 = kInf;
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      double ev = es.eigenvalues()(i);
      if (ev > 1e-12 * scale) {
        lam1 = ev;
        break;
      }
    }
    if (std::isfinite(lam1) && lam1 > 0.0 && ctx.diam > 0.0)
      rep.exactL2Constant = 1.0 / (std::sqrt(lam1) * ctx.diam);
  }
  return rep;
}

}  // namespace gromovlab
