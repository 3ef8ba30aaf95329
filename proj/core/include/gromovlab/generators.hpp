#pragma once

#include <cmath>
#include <string>

#include "gromovlab/domain.hpp"
#include "gromovlab/measure.hpp"
#include "gromovlab/report.hpp"

namespace gromovlab {

/// Declarative weight density: builtins plus tabulated samples with linear
/// interpolation. Integrals are exact for builtins and for the interpolant.
struct Weight {
  enum class Kind { Const, ExpAbs, ExpNegAbs, Table };
  Kind kind = Kind::Const;
  double c = 1.0;  // constant value, or exponent rate for the exp kinds
  std::vector<std::pair<double, double>> table;

  double operator()(double x) const;
  double integral(double lo, double hi) const;

  static Weight constant(double v);
  static Weight expAbs(double a);     // e^{a|x|}
  static Weight expNegAbs(double a);  // e^{-a|x|}
  static Weight fromTable(std::vector<std::pair<double, double>> pts);
  /// "const:2", "exp:1.0", "expneg:0.5"
  static Weight parse(const std::string& s);
  json toJson() const;
};

struct GeneratorSpec {
  std::string kind;  // line | interval | karyTree | strip | prong | diskPolar
  double h = 1.0;
  double T = 4.0;
  int D = 4;
  int K = 2;
  std::string prongVariant = "doubling";  // doubling | pi
  Weight w = Weight::constant(1.0);

  json toJson() const;
  static GeneratorSpec fromJson(const json& j);
};

struct GeneratedSpace {
  PointedSpace ps;
  MeasureField mu;
  /// Frontier vertices continue isometrically as geodesic rays.
  bool exactTails = false;
  double declaredA = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  /// Largest epsilon certified usable for this space (inf when delta = 0).
  double eps0Certified = std::numeric_limits<double>::quiet_NaN();
  json provenance = json::object();
};

struct GeneratedDomain {
  UniformDomain dom;
  MeasureField mu;
  double declaredA = std::numeric_limits<double>::quiet_NaN();
  json provenance = json::object();
};

GeneratedSpace gen_line(double T, double h, const Weight& w = Weight::constant(1.0));
GeneratedSpace gen_kary_tree(int K, int D, double h);
GeneratedSpace gen_strip(double T, double h, const Weight& w = Weight::constant(1.0));
GeneratedSpace gen_prong(const std::string& variant, double T, double h);
GeneratedDomain gen_interval(double h, const Weight& w = Weight::constant(1.0));
GeneratedDomain gen_disk_polar(double h);

GeneratedSpace generate_space(const GeneratorSpec& spec);
GeneratedDomain generate_domain(const GeneratorSpec& spec);
bool kind_is_domain(const std::string& kind);

/// Index layout of the prong path; see gen_prong.
struct ProngLayout {
  int lowerTip, lowerJunction, upperJunction, upperTip;
};
ProngLayout prong_layout(double T, double h);

}  // namespace gromovlab
