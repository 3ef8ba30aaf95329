#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace gromovlab {

using json = nlohmann::ordered_json;

/// User-facing parameters shared across the pipeline.
struct Config {
  double eps = 1.0;
  double beta = 2.0;
  double alpha = 1.0;
  double p = 2.0;
  double R0 = 1.0;
  double R1 = 4.0;
  double eps0 = std::numeric_limits<double>::infinity();
  double tolGeomFactor = 1e-9;
  double tolSolve = 1e-10;
  double tolCap = 1e-12;
  long long sampleBudget = 64;
  std::uint64_t seed = 12345;
  std::vector<double> truncationGrid{6, 8, 10, 12};
  bool force = false;

  void validate() const;
  json toJson() const;
  static Config fromJson(const json& j);
  std::uint64_t hash() const;
};

/// Structured record of measured constants/ratios vs predicted bounds.
struct VerificationReport {
  enum class Status { Pass, Fail, Inconclusive };

  std::string check;
  std::string anchor;  // stable claim identifier for traceability
  json measured = json::object();
  json predicted = json::object();
  Status status = Status::Inconclusive;
  json witnesses = json::array();
  json provenance = json::object();

  void setStatus(bool pass) { status = pass ? Status::Pass : Status::Fail; }
  bool passed() const { return status == Status::Pass; }
  static const char* statusName(Status s);
  json toJson() const;
};

/// Composite of named sub-reports; fails if any sub-report fails.
struct CompositeReport {
  std::string name;
  std::vector<VerificationReport> sections;
  json toJson() const;
  bool allPassed() const;
};

/// FNV-1a over a canonical serialization.
std::uint64_t stable_hash(const std::string& bytes);

/// Serialize a report document and write it atomically (write-then-rename).
void emit_report(const json& doc, const std::string& path);
std::string report_schema();

/// Rows of a per-scale table as CSV (header + one line per row).
std::string table_to_csv(const json& rows);
void write_text_atomic(const std::string& text, const std::string& path);

}  // namespace gromovlab
