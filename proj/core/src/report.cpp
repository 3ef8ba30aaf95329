#include "gromovlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gromovlab/metric_graph.hpp"

namespace gromovlab {

void Config::validate() const {
  if (!(tolGeomFactor > 0) || !(tolSolve > 0) || !(tolCap > 0))
    throw InputError("tolerances must be positive");
  if (!(beta > 0)) throw InputError("beta must be positive");
  if (eps > eps0 && !force) throw InputError("eps exceeds eps0; pass force to override");
}

json Config::toJson() const {
  json j;
  j["eps"] = eps;
  j["beta"] = beta;
  j["alpha"] = alpha;
  j["p"] = p;
  j["R0"] = R0;
  j["R1"] = R1;
  j["eps0"] = std::isfinite(eps0) ? json(eps0) : json("inf");
  j["tolGeomFactor"] = tolGeomFactor;
  j["tolSolve"] = tolSolve;
  j["tolCap"] = tolCap;
  j["sampleBudget"] = sampleBudget;
  j["seed"] = seed;
  j["truncationGrid"] = truncationGrid;
  j["force"] = force;
  return j;
}

Config Config::fromJson(const json& j) {
  Config c;
  auto get = [&](const char* k, auto& field) {
    if (j.contains(k)) field = j.at(k).get<std::decay_t<decltype(field)>>();
  };
  get("eps", c.eps);
  get("beta", c.beta);
  get("alpha", c.alpha);
  get("p", c.p);
  get("R0", c.R0);
  get("R1", c.R1);
  if (j.contains("eps0")) {
    if (j["eps0"].is_string())
      c.eps0 = std::numeric_limits<double>::infinity();
    else
      c.eps0 = j["eps0"].get<double>();
  }
  get("tolGeomFactor", c.tolGeomFactor);
  get("tolSolve", c.tolSolve);
  get("tolCap", c.tolCap);
  get("sampleBudget", c.sampleBudget);
  get("seed", c.seed);
  get("truncationGrid", c.truncationGrid);
  get("force", c.force);
  return c;
}

std::uint64_t Config::hash() const { return stable_hash(toJson().dump()); }

const char* VerificationReport::statusName(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    default: return "inconclusive";
  }
}

json VerificationReport::toJson() const {
  json j;
  j["schema"] = report_schema();
  j["check"] = check;
  j["anchor"] = anchor;
  j["status"] = statusName(status);
  j["measured"] = measured;
  j["predicted"] = predicted;
  j["witnesses"] = witnesses;
  j["provenance"] = provenance;
  return j;
}

json CompositeReport::toJson() const {
  json j;
  j["schema"] = report_schema();
  j["pipeline"] = name;
  j["status"] = allPassed() ? "pass" : "fail";
  json secs = json::array();
  for (const auto& s : sections) secs.push_back(s.toJson());
  j["sections"] = secs;
  return j;
}

bool CompositeReport::allPassed() const {
  for (const auto& s : sections)
    if (s.status == VerificationReport::Status::Fail) return false;
  return true;
}

std::uint64_t stable_hash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string report_schema() { return "gromov-lab/1"; }

void write_text_atomic(const std::string& text, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

void emit_report(const json& doc, const std::string& path) {
  write_text_atomic(doc.dump(2) + "\n", path);
}

std::string table_to_csv(const json& rows) {
  std::string out;
  if (!rows.is_array() || rows.empty()) return out;
  bool first = true;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
    if (!first) out += ',';
    out += it.key();
    first = false;
  }
  out += '\n';
  for (const auto& row : rows) {
    first = true;
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (!first) out += ',';
      out += it.value().dump();
      first = false;
    }
    out += '\n';
  }
  return out;
}

}  // namespace gromovlab
