#include "gromovlab/doubling.hpp"

#include <algorithm>
#include <cmath>

#include "gromovlab/rng.hpp"

namespace gromovlab {

json DoublingReport::toJson() const {
  json j;
  j["R0"] = R0;
  j["Cd"] = std::isfinite(Cd) ? json(Cd) : json("inf");
  j["exhaustive"] = exhaustive;
  json rows = json::array();
  for (const auto& row : perScaleTable) {
    json r;
    r["radius"] = row.radius;
    r["worstCenter"] = row.worstCenter;
    r["ratio"] = std::isfinite(row.ratio) ? json(row.ratio) : json("inf");
    rows.push_back(r);
  }
  j["perScaleTable"] = rows;
  if (infinityWitness) {
    json w;
    w["center"] = infinityWitness->worstCenter;
    w["radius"] = infinityWitness->radius;
    j["infinityWitness"] = w;
  }
  return j;
}

DoublingReport doubling_constant(const MetricGraph& g, const MeasureField& mu, double R0,
                                 SampleMode mode, std::uint64_t seed, int sampleCenters,
                                 const std::vector<double>* perScaleGrid,
                                 const std::vector<int>* restrictCenters) {
  if (!(R0 > 0)) throw InputError("R0 must be positive");
  mu.validate(g);
  const int n = g.order();

  std::vector<int> pool;
  if (restrictCenters) pool = *restrictCenters;
  else {
    pool.resize(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
  }
  std::vector<int> centers;
  if (mode == SampleMode::Exhaustive || sampleCenters >= static_cast<int>(pool.size())) {
    centers = pool;
  } else {
    Rng rng(seed);
    std::vector<char> used(pool.size(), 0);
    while (static_cast<int>(centers.size()) < sampleCenters) {
      int c = rng.pick(static_cast<int>(pool.size()));
      if (!used[c]) {
        used[c] = 1;
        centers.push_back(pool[c]);
      }
    }
    std::sort(centers.begin(), centers.end());
  }

  DoublingReport rep;
  rep.R0 = R0;
  rep.exhaustive = (mode == SampleMode::Exhaustive);

  std::vector<double> gridRadii;
  if (perScaleGrid) gridRadii = *perScaleGrid;
  std::vector<DoublingScaleRow> gridRows(gridRadii.size());
  for (size_t i = 0; i < gridRadii.size(); ++i) gridRows[i].radius = gridRadii[i];

  double finiteSup = 1.0;
  DoublingScaleRow worst{0.0, -1, 1.0};
  bool sawInfinity = false;

  std::vector<std::pair<double, double>> dm;  // (distance, mass) sorted by distance
  std::vector<double> criticals;

  for (int c : centers) {
    auto dist = g.distancesFrom(c);
    dm.clear();
    dm.reserve(n);
    for (int v = 0; v < n; ++v) dm.emplace_back(dist[v], mu.mass[v]);
    std::sort(dm.begin(), dm.end());
    std::vector<double> prefix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + dm[i].second;

    auto massBelow = [&](double r) {
      int lo = 0, hi = n;
      while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (dm[mid].first < r) lo = mid + 1;
        else hi = mid;
      }
      return prefix[lo];  // strict: distance < r
    };

    auto ratioAt = [&](double r) -> double {
      double inner = massBelow(r);
      double outer = massBelow(2.0 * r);
      if (inner <= 0.0) return outer > 0.0 ? kInf : 1.0;
      return outer / inner;
    };

    // ratio(r) is piecewise constant on (c_{i-1}, c_i]; evaluating at the
    // right endpoints plus R0 covers every piece
    criticals.clear();
    for (int i = 0; i < n; ++i) {
      double d = dm[i].first;
      if (d > 0.0 && d <= R0) criticals.push_back(d);
      double half = 0.5 * d;
      if (half > 0.0 && half <= R0) criticals.push_back(half);
    }
    criticals.push_back(R0);
    std::sort(criticals.begin(), criticals.end());
    criticals.erase(std::unique(criticals.begin(), criticals.end()), criticals.end());

    for (double r : criticals) {
      double ratio = ratioAt(r);
      if (!std::isfinite(ratio)) {
        if (!sawInfinity) {
          sawInfinity = true;
          rep.infinityWitness = DoublingScaleRow{r, c, kInf};
        }
      } else if (ratio > finiteSup) {
        finiteSup = ratio;
        worst = DoublingScaleRow{r, c, ratio};
      }
    }

    for (size_t i = 0; i < gridRadii.size(); ++i) {
      double ratio = ratioAt(gridRadii[i]);
      if (ratio > gridRows[i].ratio) {
        gridRows[i].ratio = ratio;
        gridRows[i].worstCenter = c;
      }
    }
  }

  rep.Cd = sawInfinity ? kInf : finiteSup;
  if (!sawInfinity && worst.worstCenter >= 0 && gridRadii.empty())
    rep.perScaleTable.push_back(worst);
  else
    rep.perScaleTable = std::move(gridRows);
  return rep;
}

CoveringReport covering_number(const MetricGraph& g, int center, double R, double r,
                               double Cd) {
  if (!(r > 0) || r > R) throw InputError("need 0 < r <= R");
  auto distC = g.distancesFrom(center);
  std::vector<int> ball = MetricGraph::ballVertices(distC, R);
  CoveringReport rep;
  rep.n = static_cast<int>(std::ceil(R / r));
  rep.paperBound = std::isnan(Cd) ? Cd : std::pow(Cd, 7.0 * (rep.n + 4) / 6.0);
  if (ball.empty()) return rep;

  std::vector<double> minDist(g.order(), kInf);
  int next = center;
  while (next >= 0) {
    rep.centers.push_back(next);
    ++rep.count;
    auto d = g.distancesFrom(next);
    for (int v = 0; v < g.order(); ++v) minDist[v] = std::min(minDist[v], d[v]);
    next = -1;
    double far = 0.0;
    for (int v : ball) {
      if (minDist[v] >= r && minDist[v] > far) {  // uncovered, farthest first
        far = minDist[v];
        next = v;
      }
    }
  }
  return rep;
}

double doubling_upgrade_bound(double Cd, double R0, double R1) {
  if (R1 <= R0) return Cd;
  double n = std::ceil(8.0 * R1 / R0);
  return std::pow(Cd, 7.0 * (n + 4) / 6.0 + n);
}

VerificationReport local_to_global_check(const MetricGraph& g, const MeasureField& mu,
                                         double R0, double R1) {
  if (!(R0 > 0) || R0 > R1) throw InputError("need 0 < R0 <= R1");
  VerificationReport rep;
  rep.check = "local-to-global-doubling";
  rep.anchor = "doubling-radius-upgrade";

  auto at0 = doubling_constant(g, mu, R0);
  auto at1 = doubling_constant(g, mu, R1);
  double bound = std::isfinite(at0.Cd) ? doubling_upgrade_bound(at0.Cd, R0, R1) : kInf;

  rep.measured["CdR0"] = std::isfinite(at0.Cd) ? json(at0.Cd) : json("inf");
  rep.measured["CdR1"] = std::isfinite(at1.Cd) ? json(at1.Cd) : json("inf");
  rep.measured["quasiconvexityL"] = 1.0;  // graph length space
  rep.predicted["upgradeBound"] = std::isfinite(bound) ? json(bound) : json("inf");
  if (R1 == R0) {
    rep.setStatus(true);
    rep.measured["degenerate"] = true;
    return rep;
  }
  bool ok = std::isfinite(at1.Cd) && (!std::isfinite(bound) || at1.Cd <= bound);
  rep.setStatus(ok);
  if (!ok && at1.infinityWitness) {
    json w;
    w["center"] = at1.infinityWitness->worstCenter;
    w["radius"] = at1.infinityWitness->radius;
    rep.witnesses.push_back(w);
  }
  return rep;
}

}  // namespace gromovlab
