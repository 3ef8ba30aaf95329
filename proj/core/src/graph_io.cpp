#include "gromovlab/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gromovlab {

json GraphDocument::toJson() const {
  json j;
  json vs = json::array();
  for (const Vertex& v : vertices) {
    json jv;
    jv["id"] = v.id;
    if (v.mass) jv["mass"] = *v.mass;
    if (!v.tags.empty()) jv["tags"] = v.tags;
    if (v.tail) jv["tail"] = *v.tail;
    vs.push_back(jv);
  }
  json es = json::array();
  for (const EdgeRec& e : edges) {
    json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["len"] = e.len;
    es.push_back(je);
  }
  j["vertices"] = vs;
  j["edges"] = es;
  j["meta"] = meta;
  return j;
}

GraphDocument GraphDocument::fromJson(const json& j) {
  GraphDocument doc;
  if (!j.contains("vertices") || !j.contains("edges"))
    throw DataError("graph document needs 'vertices' and 'edges'");
  for (const auto& jv : j.at("vertices")) {
    Vertex v;
    if (!jv.contains("id")) throw DataError("vertex without 'id'");
    v.id = jv.at("id").get<std::int64_t>();
    if (jv.contains("mass")) v.mass = jv.at("mass").get<double>();
    if (jv.contains("tags")) v.tags = jv.at("tags").get<std::vector<std::string>>();
    if (jv.contains("tail")) v.tail = jv.at("tail").get<double>();
    doc.vertices.push_back(std::move(v));
  }
  for (const auto& je : j.at("edges")) {
    EdgeRec e;
    if (!je.contains("u") || !je.contains("v") || !je.contains("len"))
      throw DataError("edge needs 'u', 'v' and 'len'");
    e.u = je.at("u").get<std::int64_t>();
    e.v = je.at("v").get<std::int64_t>();
    e.len = je.at("len").get<double>();
    doc.edges.push_back(e);
  }
  if (j.contains("meta")) doc.meta = j.at("meta");
  return doc;
}

std::string GraphDocument::dumps() const { return toJson().dump(2) + "\n"; }

GraphDocument GraphDocument::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  return fromJson(j);
}

void GraphDocument::writeFile(const std::string& path) const {
  write_text_atomic(dumps(), path);
}

GraphDocument GraphDocument::readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

MetricGraph GraphDocument::toGraph() const {
  std::vector<std::int64_t> ids;
  ids.reserve(vertices.size());
  std::unordered_map<std::int64_t, int> index;
  for (const Vertex& v : vertices) {
    index.emplace(v.id, static_cast<int>(ids.size()));
    ids.push_back(v.id);
  }
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const EdgeRec& e : edges) {
    auto iu = index.find(e.u);
    auto iv = index.find(e.v);
    if (iu == index.end() || iv == index.end())
      throw DataError("edge references unknown vertex id");
    es.push_back({iu->second, iv->second, e.len});
  }
  MetricGraph g(std::move(ids), std::move(es));
  g.requireConnected();
  return g;
}

MeasureField GraphDocument::toMeasure(const MetricGraph& g) const {
  MeasureField mu;
  mu.mass.assign(g.order(), 0.0);
  for (const Vertex& v : vertices)
    if (v.mass) mu.mass[g.indexOf(v.id)] = *v.mass;
  return mu;
}

namespace {

bool hasTag(const GraphDocument::Vertex& v, const char* tag) {
  return std::find(v.tags.begin(), v.tags.end(), tag) != v.tags.end();
}

}  // namespace

PointedSpace GraphDocument::toPointed() const {
  PointedSpace ps;
  ps.graph = toGraph();
  if (!meta.contains("basePoint")) throw DataError("meta.basePoint missing");
  ps.base = ps.graph.indexOf(meta.at("basePoint").get<std::int64_t>());
  for (const Vertex& v : vertices)
    if (hasTag(v, "rayTip")) ps.rayTips.push_back(ps.graph.indexOf(v.id));
  return ps;
}

bool GraphDocument::hasBoundaryTags() const {
  for (const Vertex& v : vertices)
    if (hasTag(v, "boundary")) return true;
  return false;
}

UniformDomain GraphDocument::toDomain() const {
  if (hasBoundaryTags()) {
    MetricGraph g = toGraph();
    std::vector<int> boundary;
    for (const Vertex& v : vertices)
      if (hasTag(v, "boundary")) boundary.push_back(g.indexOf(v.id));
    return UniformDomain::fromBoundary(std::move(g), std::move(boundary));
  }
  // frontier document: attach pendant ideal vertices at the tails
  std::vector<std::int64_t> ids;
  std::unordered_map<std::int64_t, int> index;
  for (const Vertex& v : vertices) {
    index.emplace(v.id, static_cast<int>(ids.size()));
    ids.push_back(v.id);
  }
  std::vector<Edge> es;
  for (const EdgeRec& e : edges) es.push_back({index.at(e.u), index.at(e.v), e.len});
  std::int64_t nextId = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<int> boundary;
  for (const Vertex& v : vertices) {
    if (!hasTag(v, "rayTip")) continue;
    double tail = v.tail.value_or(0.0);
    if (tail > 0.0) {
      int pend = static_cast<int>(ids.size());
      es.push_back({index.at(v.id), pend, tail});
      ids.push_back(nextId++);
      boundary.push_back(pend);
    } else {
      boundary.push_back(index.at(v.id));
    }
  }
  if (boundary.empty())
    throw DataError("document has neither boundary tags nor ray tips");
  return UniformDomain::fromBoundary(MetricGraph(std::move(ids), std::move(es)),
                                     std::move(boundary));
}

GraphDocument GraphDocument::fromSpace(const PointedSpace& ps, const MeasureField* mu,
                                       json meta) {
  GraphDocument doc;
  std::vector<char> isTip(ps.graph.order(), 0);
  for (int t : ps.rayTips) isTip[t] = 1;
  for (int v = 0; v < ps.graph.order(); ++v) {
    Vertex jv;
    jv.id = ps.graph.idOf(v);
    if (mu) jv.mass = mu->mass[v];
    if (isTip[v]) jv.tags.push_back("rayTip");
    doc.vertices.push_back(std::move(jv));
  }
  for (const Edge& e : ps.graph.edges())
    doc.edges.push_back({ps.graph.idOf(e.u), ps.graph.idOf(e.v), e.len});
  doc.meta = std::move(meta);
  doc.meta["basePoint"] = ps.graph.idOf(ps.base);
  return doc;
}

GraphDocument GraphDocument::fromDomain(const UniformDomain& dom, const MeasureField* mu,
                                        json meta) {
  GraphDocument doc;
  auto mask = dom.boundaryMask();
  for (int v = 0; v < dom.graph.order(); ++v) {
    Vertex jv;
    jv.id = dom.graph.idOf(v);
    if (mu) jv.mass = mu->mass[v];
    if (mask[v]) jv.tags.push_back("boundary");
    doc.vertices.push_back(std::move(jv));
  }
  for (const Edge& e : dom.graph.edges())
    doc.edges.push_back({dom.graph.idOf(e.u), dom.graph.idOf(e.v), e.len});
  doc.meta = std::move(meta);
  return doc;
}

GraphDocument GraphDocument::fromUniformized(const UniformizedSpace& us,
                                             const MeasureField* mu, json meta) {
  GraphDocument doc;
  std::vector<double> tails(us.graph.order(), -1.0);
  for (size_t i = 0; i < us.frontier.size(); ++i) tails[us.frontier[i]] = us.tau[i];
  for (int v = 0; v < us.graph.order(); ++v) {
    Vertex jv;
    jv.id = us.graph.idOf(v);
    if (mu) jv.mass = mu->mass[v];
    if (tails[v] >= 0.0) {
      jv.tags.push_back("rayTip");
      jv.tail = tails[v];
    }
    doc.vertices.push_back(std::move(jv));
  }
  for (const Edge& e : us.graph.edges())
    doc.edges.push_back({us.graph.idOf(e.u), us.graph.idOf(e.v), e.len});
  doc.meta = std::move(meta);
  doc.meta["basePoint"] = us.graph.idOf(us.base);
  doc.meta["epsilon"] = us.epsilon;
  doc.meta["truncationBiased"] = us.truncationBiased;
  return doc;
}

}  // namespace gromovlab
