#pragma once

#include <optional>
#include <string>

#include "gromovlab/domain.hpp"
#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"
#include "gromovlab/uniformize.hpp"

namespace gromovlab {

/// Shared on-disk graph format:
/// { "vertices": [{id, mass?, tags?, tail?}], "edges": [{u, v, len}],
///   "meta": {basePoint?, epsilon?, generatorProvenance?, ...} }.
/// Floats survive write-then-read bit-exactly (shortest round-trip decimals).
struct GraphDocument {
  struct Vertex {
    std::int64_t id = 0;
    std::optional<double> mass;
    std::vector<std::string> tags;
    std::optional<double> tail;
  };
  struct EdgeRec {
    std::int64_t u = 0;
    std::int64_t v = 0;
    double len = 0.0;
  };

  std::vector<Vertex> vertices;
  std::vector<EdgeRec> edges;
  json meta = json::object();

  json toJson() const;
  static GraphDocument fromJson(const json& j);
  std::string dumps() const;
  static GraphDocument parse(const std::string& text);
  void writeFile(const std::string& path) const;
  static GraphDocument readFile(const std::string& path);

  MetricGraph toGraph() const;
  MeasureField toMeasure(const MetricGraph& g) const;
  PointedSpace toPointed() const;
  /// Boundary-tagged documents directly; rayTip+tail documents through
  /// pendant ideal vertices.
  UniformDomain toDomain() const;
  bool hasBoundaryTags() const;

  static GraphDocument fromSpace(const PointedSpace& ps, const MeasureField* mu,
                                 json meta);
  static GraphDocument fromDomain(const UniformDomain& dom, const MeasureField* mu,
                                  json meta);
  static GraphDocument fromUniformized(const UniformizedSpace& us, const MeasureField* mu,
                                       json meta);
};

}  // namespace gromovlab
