#include "gromovlab/generators.hpp"

#include <algorithm>
#include <cmath>

namespace gromovlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

long long exactMultiple(double value, double h, const char* what) {
  double q = value / h;
  long long k = std::llround(q);
  if (k <= 0 || std::abs(q - k) > 1e-9)
    throw InputError(std::string(what) + " must be a positive multiple of h");
  return k;
}

double signedExpIntegral(double a, double lo, double hi) {
  // integral of e^{a x} over [lo, hi], x >= 0 assumed handled by caller
  if (a == 0.0) return hi - lo;
  return (std::exp(a * hi) - std::exp(a * lo)) / a;
}

}  // namespace

double Weight::operator()(double x) const {
  switch (kind) {
    case Kind::Const: return c;
    case Kind::ExpAbs: return std::exp(c * std::abs(x));
    case Kind::ExpNegAbs: return std::exp(-c * std::abs(x));
    case Kind::Table: {
      if (table.empty()) throw ConfigError("empty weight table");
      if (x <= table.front().first) return table.front().second;
      if (x >= table.back().first) return table.back().second;
      auto it = std::upper_bound(table.begin(), table.end(), std::make_pair(x, kInf));
      auto lo = std::prev(it);
      double t = (x - lo->first) / (it->first - lo->first);
      return lo->second + t * (it->second - lo->second);
    }
  }
  return c;
}

double Weight::integral(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  switch (kind) {
    case Kind::Const: return c * (hi - lo);
    case Kind::ExpAbs:
    case Kind::ExpNegAbs: {
      double a = (kind == Kind::ExpAbs) ? c : -c;
      if (lo >= 0.0) return signedExpIntegral(a, lo, hi);
      if (hi <= 0.0) return signedExpIntegral(a, -hi, -lo);
      return signedExpIntegral(a, 0.0, -lo) + signedExpIntegral(a, 0.0, hi);
    }
    case Kind::Table: {
      // exact integral of the linear interpolant via the trapezoid rule on
      // all breakpoints inside [lo, hi]
      double acc = 0.0;
      double prevX = lo, prevW = (*this)(lo);
      for (const auto& [x, wv] : table) {
        if (x <= lo || x >= hi) continue;
        acc += 0.5 * (prevW + wv) * (x - prevX);
        prevX = x;
        prevW = wv;
      }
      acc += 0.5 * (prevW + (*this)(hi)) * (hi - prevX);
      return acc;
    }
  }
  return 0.0;
}

Weight Weight::constant(double v) {
  if (!(v > 0)) throw InputError("weight must be positive");
  Weight w;
  w.kind = Kind::Const;
  w.c = v;
  return w;
}

Weight Weight::expAbs(double a) {
  Weight w;
  w.kind = Kind::ExpAbs;
  w.c = a;
  return w;
}

Weight Weight::expNegAbs(double a) {
  Weight w;
  w.kind = Kind::ExpNegAbs;
  w.c = a;
  return w;
}

Weight Weight::fromTable(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2) throw InputError("weight table needs at least two samples");
  std::sort(pts.begin(), pts.end());
  for (const auto& [x, v] : pts)
    if (!(v > 0)) throw InputError("weight table values must be positive");
  Weight w;
  w.kind = Kind::Table;
  w.table = std::move(pts);
  return w;
}

Weight Weight::parse(const std::string& s) {
  auto colon = s.find(':');
  std::string name = colon == std::string::npos ? s : s.substr(0, colon);
  double val = colon == std::string::npos ? 1.0 : std::stod(s.substr(colon + 1));
  if (name == "const") return constant(val);
  if (name == "exp") return expAbs(val);
  if (name == "expneg") return expNegAbs(val);
  throw InputError("unknown weight descriptor: " + s);
}

json Weight::toJson() const {
  json j;
  switch (kind) {
    case Kind::Const: j["kind"] = "const"; j["value"] = c; break;
    case Kind::ExpAbs: j["kind"] = "exp"; j["rate"] = c; break;
    case Kind::ExpNegAbs: j["kind"] = "expneg"; j["rate"] = c; break;
    case Kind::Table: {
      j["kind"] = "table";
      json pts = json::array();
      for (const auto& [x, v] : table) pts.push_back(json::array({x, v}));
      j["samples"] = pts;
      break;
    }
  }
  return j;
}

json GeneratorSpec::toJson() const {
  json j;
  j["kind"] = kind;
  j["h"] = h;
  j["T"] = T;
  j["D"] = D;
  j["K"] = K;
  if (kind == "prong") j["variant"] = prongVariant;
  j["weight"] = w.toJson();
  return j;
}

GeneratorSpec GeneratorSpec::fromJson(const json& j) {
  GeneratorSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (j.contains("h")) s.h = j["h"].get<double>();
  if (j.contains("T")) s.T = j["T"].get<double>();
  if (j.contains("D")) s.D = j["D"].get<int>();
  if (j.contains("K")) s.K = j["K"].get<int>();
  if (j.contains("variant")) s.prongVariant = j["variant"].get<std::string>();
  if (j.contains("weight")) {
    const json& wj = j["weight"];
    std::string kind = wj.at("kind").get<std::string>();
    if (kind == "const") s.w = Weight::constant(wj.at("value").get<double>());
    else if (kind == "exp") s.w = Weight::expAbs(wj.at("rate").get<double>());
    else if (kind == "expneg") s.w = Weight::expNegAbs(wj.at("rate").get<double>());
    else if (kind == "table") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : wj.at("samples")) pts.emplace_back(p[0], p[1]);
      s.w = Weight::fromTable(std::move(pts));
    } else throw DataError("unknown weight kind " + kind);
  }
  return s;
}

GeneratedSpace gen_line(double T, double h, const Weight& w) {
  if (!(h > 0)) throw InputError("h must be positive");
  long long half = exactMultiple(T, h, "T");
  const int n = static_cast<int>(2 * half + 1);
  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, h});

  GeneratedSpace out;
  out.ps.graph = MetricGraph(std::move(ids), std::move(edges));
  out.ps.base = static_cast<int>(half);
  out.ps.rayTips = {0, n - 1};
  out.mu.mass.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -T + i * h;
    out.mu.mass[i] = w.integral(std::max(-T, x - h / 2), std::min(T, x + h / 2));
  }
  out.exactTails = true;
  out.declaredA = 1.0;
  out.delta = 0.0;
  out.eps0Certified = kInf;
  GeneratorSpec spec;
  spec.kind = "line";
  spec.T = T;
  spec.h = h;
  spec.w = w;
  out.provenance = spec.toJson();
  return out;
}

GeneratedSpace gen_kary_tree(int K, int D, double h) {
  if (K < 2) throw InputError("K must be >= 2");
  if (D < 1) throw InputError("D must be >= 1");
  long long seg = exactMultiple(1.0, h, "1");
  const int s = static_cast<int>(seg);

  std::vector<Edge> edges;
  std::vector<int> treeLeaves;
  int nextIndex = 1;  // 0 is the root
  // frontier of original tree nodes at the current depth
  std::vector<int> level{0};
  for (int depth = 1; depth <= D; ++depth) {
    std::vector<int> nextLevel;
    for (int parent : level) {
      for (int k = 0; k < K; ++k) {
        int prev = parent;
        for (int j = 0; j < s; ++j) {
          int v = nextIndex++;
          edges.push_back({prev, v, h});
          prev = v;
        }
        nextLevel.push_back(prev);
      }
    }
    level = std::move(nextLevel);
  }
  treeLeaves = level;

  const int n = nextIndex;
  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;

  GeneratedSpace out;
  out.ps.graph = MetricGraph(std::move(ids), std::move(edges));
  out.ps.base = 0;
  out.ps.rayTips = treeLeaves;
  out.mu.mass.resize(n);
  for (int v = 0; v < n; ++v) out.mu.mass[v] = 0.5 * out.ps.graph.incidentLen(v);
  out.exactTails = true;
  out.declaredA = 1.0;
  out.delta = 0.0;
  out.eps0Certified = kInf;
  GeneratorSpec spec;
  spec.kind = "karyTree";
  spec.K = K;
  spec.D = D;
  spec.h = h;
  out.provenance = spec.toJson();
  return out;
}

GeneratedSpace gen_strip(double T, double h, const Weight& w) {
  long long halfX = exactMultiple(T, h, "T");
  long long halfY = exactMultiple(1.0, h, "1");
  const int nx = static_cast<int>(2 * halfX + 1);
  const int ny = static_cast<int>(2 * halfY + 1);
  const int n = nx * ny;
  auto at = [&](int i, int j) { return i * ny + j; };

  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::vector<Edge> edges;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (i + 1 < nx) edges.push_back({at(i, j), at(i + 1, j), h});
      if (j + 1 < ny) edges.push_back({at(i, j), at(i, j + 1), h});
    }

  GeneratedSpace out;
  out.ps.graph = MetricGraph(std::move(ids), std::move(edges));
  out.ps.base = at(static_cast<int>(halfX), static_cast<int>(halfY));
  out.ps.rayTips = {at(0, static_cast<int>(halfY)), at(nx - 1, static_cast<int>(halfY))};
  out.mu.mass.resize(n);
  for (int i = 0; i < nx; ++i) {
    double x = -T + i * h;
    double cellX = w.integral(std::max(-T, x - h / 2), std::min(T, x + h / 2));
    for (int j = 0; j < ny; ++j) {
      double y = -1.0 + j * h;
      double cellY = std::min(1.0, y + h / 2) - std::max(-1.0, y - h / 2);
      out.mu.mass[at(i, j)] = cellX * cellY;
    }
  }
  out.exactTails = true;  // the mid-axis tips continue as rays
  // the paper works with eps = 1 on this space
  out.eps0Certified = 1.0;
  GeneratorSpec spec;
  spec.kind = "strip";
  spec.T = T;
  spec.h = h;
  spec.w = w;
  out.provenance = spec.toJson();
  return out;
}

ProngLayout prong_layout(double T, double h) {
  int rayLen = static_cast<int>(exactMultiple(T, h, "T"));
  int rungLen = static_cast<int>(exactMultiple(1.0, h, "1"));
  ProngLayout lay;
  lay.lowerTip = 0;
  lay.lowerJunction = rayLen;
  lay.upperJunction = rayLen + rungLen;
  lay.upperTip = rayLen + rungLen + rayLen;
  return lay;
}

GeneratedSpace gen_prong(const std::string& variant, double T, double h) {
  if (variant != "doubling" && variant != "pi")
    throw InputError("prong variant must be doubling or pi");
  ProngLayout lay = prong_layout(T, h);
  const int n = lay.upperTip + 1;

  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, h});

  GeneratedSpace out;
  out.ps.graph = MetricGraph(std::move(ids), std::move(edges));
  out.ps.base = lay.lowerJunction;  // (0,0)
  out.ps.rayTips = {lay.lowerTip, lay.upperTip};
  out.mu.mass.resize(n);
  for (int v = 0; v < n; ++v) {
    double wv = 1.0;
    if (variant == "doubling" && v > lay.upperJunction) {
      double x = (v - lay.upperJunction) * h;  // position on the upper ray
      wv = std::exp(x);
    } else if (variant == "doubling" && v == lay.upperJunction) {
      wv = 1.0;  // (0,1): e^0
    }
    out.mu.mass[v] = wv * 0.5 * out.ps.graph.incidentLen(v);
  }
  out.exactTails = true;
  out.declaredA = 1.0;  // the prong path uniformizes to an interval
  out.delta = 0.0;
  out.eps0Certified = kInf;
  GeneratorSpec spec;
  spec.kind = "prong";
  spec.T = T;
  spec.h = h;
  spec.prongVariant = variant;
  out.provenance = spec.toJson();
  return out;
}

GeneratedDomain gen_interval(double h, const Weight& w) {
  long long half = exactMultiple(1.0, h, "1");
  const int m = static_cast<int>(2 * half);  // number of edges
  const int n = m + 1;                       // -1, interior..., +1
  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, h});

  MetricGraph g(std::move(ids), std::move(edges));
  GeneratedDomain out;
  out.dom = UniformDomain::fromBoundary(std::move(g), {0, n - 1});
  out.mu.mass.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    double x = -1.0 + i * h;
    out.mu.mass[i] = w.integral(x - h / 2, x + h / 2);
  }
  out.dom.uniformityA = 1.0;
  out.declaredA = 1.0;
  GeneratorSpec spec;
  spec.kind = "interval";
  spec.h = h;
  spec.w = w;
  out.provenance = spec.toJson();
  return out;
}

GeneratedDomain gen_disk_polar(double h) {
  long long rings = exactMultiple(1.0, h, "1");
  const int m = static_cast<int>(rings);  // ring m sits on the boundary circle
  const double twoPi = 2.0 * std::acos(-1.0);
  int nTheta = 4 * std::max<long long>(2, std::llround(twoPi / (4.0 * h)));

  // id 0 = center; ring i vertex k has index 1 + (i-1)*nTheta + k
  auto at = [&](int i, int k) { return 1 + (i - 1) * nTheta + ((k % nTheta) + nTheta) % nTheta; };
  const int n = 1 + m * nTheta;
  std::vector<std::int64_t> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::vector<Edge> edges;
  double dTheta = twoPi / nTheta;
  for (int k = 0; k < nTheta; ++k) edges.push_back({0, at(1, k), h});
  for (int i = 1; i <= m; ++i) {
    double r = i * h;
    for (int k = 0; k < nTheta; ++k) {
      edges.push_back({at(i, k), at(i, k + 1), r * dTheta});
      if (i + 1 <= m) edges.push_back({at(i, k), at(i + 1, k), h});
    }
  }

  MetricGraph g(std::move(ids), std::move(edges));
  std::vector<int> bdry;
  for (int k = 0; k < nTheta; ++k) bdry.push_back(at(m, k));
  GeneratedDomain out;
  out.dom = UniformDomain::fromBoundary(std::move(g), std::move(bdry));
  out.mu.mass.assign(n, 0.0);
  out.mu.mass[0] = twoPi / 2.0 * (h / 2) * (h / 2);  // disk of radius h/2
  for (int i = 1; i < m; ++i) {
    double r = i * h;
    for (int k = 0; k < nTheta; ++k) out.mu.mass[at(i, k)] = r * h * dTheta;
  }
  GeneratorSpec spec;
  spec.kind = "diskPolar";
  spec.h = h;
  out.provenance = spec.toJson();
  return out;
}

bool kind_is_domain(const std::string& kind) {
  return kind == "interval" || kind == "diskPolar";
}

GeneratedSpace generate_space(const GeneratorSpec& spec) {
  if (spec.kind == "line") return gen_line(spec.T, spec.h, spec.w);
  if (spec.kind == "karyTree") return gen_kary_tree(spec.K, spec.D, spec.h);
  if (spec.kind == "strip") return gen_strip(spec.T, spec.h, spec.w);
  if (spec.kind == "prong") return gen_prong(spec.prongVariant, spec.T, spec.h);
  throw InputError("unknown pointed-space generator kind: " + spec.kind);
}

GeneratedDomain generate_domain(const GeneratorSpec& spec) {
  if (spec.kind == "interval") return gen_interval(spec.h, spec.w);
  if (spec.kind == "diskPolar") return gen_disk_polar(spec.h);
  throw InputError("unknown domain generator kind: " + spec.kind);
}

}  // namespace gromovlab
