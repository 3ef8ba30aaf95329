#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gromovlab/doubling.hpp"
#include "gromovlab/generators.hpp"
#include "gromovlab/graph_io.hpp"
#include "gromovlab/hyperbolicity.hpp"
#include "gromovlab/hyperbolize.hpp"
#include "gromovlab/liouville.hpp"
#include "gromovlab/poincare.hpp"
#include "gromovlab/potential.hpp"
#include "gromovlab/products.hpp"
#include "gromovlab/report.hpp"
#include "gromovlab/uniformize.hpp"

namespace gromovlab::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

Config loadDefaultConfig() {
  Config cfg;
  if (const char* path = std::getenv("GROMOVLAB_CONFIG")) {
    std::ifstream in(path);
    if (in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = Config::fromJson(json::parse(ss.str()));
    }
  }
  return cfg;
}

std::uint64_t fileHash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return 0;
  std::ostringstream ss;
  ss << in.rdbuf();
  return stable_hash(ss.str());
}

json provenanceFor(const Config& cfg, const std::vector<std::string>& inputs) {
  json p;
  p["configHash"] = cfg.hash();
  json files = json::array();
  for (const auto& f : inputs) {
    json jf;
    jf["path"] = f;
    jf["hash"] = fileHash(f);
    files.push_back(jf);
  }
  p["inputs"] = files;
  p["seed"] = cfg.seed;
  return p;
}

std::vector<double> parseGrid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<std::int64_t> parseIds(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

// reconstructs a generated space from meta.generatorProvenance (regeneration
// keeps tails and certified constants available)
GeneratedSpace spaceFromDocument(const GraphDocument& doc) {
  if (doc.meta.contains("generatorProvenance")) {
    auto spec = GeneratorSpec::fromJson(doc.meta.at("generatorProvenance"));
    if (!kind_is_domain(spec.kind)) return generate_space(spec);
  }
  GeneratedSpace gen;
  gen.ps = doc.toPointed();
  gen.mu = doc.toMeasure(gen.ps.graph);
  gen.exactTails = doc.meta.value("exactTails", false);
  if (doc.meta.contains("declaredA")) gen.declaredA = doc.meta["declaredA"].get<double>();
  if (doc.meta.contains("delta")) gen.delta = doc.meta["delta"].get<double>();
  return gen;
}

double eps0Policy(const GeneratedSpace& gen) {
  if (!std::isnan(gen.eps0Certified)) return gen.eps0Certified;
  if (gen.delta == 0.0) return kInf;
  if (!std::isnan(gen.delta)) return 1.0 / (10.0 * (1.0 + gen.delta));
  return kInf;
}

int emitAndStatus(const VerificationReport& rep, const std::string& outPath) {
  json doc = rep.toJson();
  if (!outPath.empty()) emit_report(doc, outPath);
  std::cout << doc.dump(2) << "\n";
  return rep.status == VerificationReport::Status::Fail ? kExitCheckFailed : kExitOk;
}

int emitComposite(const CompositeReport& rep, const std::string& outPath) {
  json doc = rep.toJson();
  if (!outPath.empty()) emit_report(doc, outPath);
  std::cout << doc.dump(2) << "\n";
  return rep.allPassed() ? kExitOk : kExitCheckFailed;
}

struct Args {
  Config cfg;
  std::string kind, weight = "const:1", variant = "doubling";
  std::string inPath, inPath2, outPath, reportPath;
  std::string boundarySpec, setSpec, omegaSpec, capKind = "sobolev";
  std::string Tgrid = "8,12,16";
  double T = 4.0, h = 0.5;
  int K = 2, D = 4;
  double radius = 1.0;
  std::int64_t centerId = 0;
  double epsPrime = 0.5;
  double lambda = 1.0;
};

int cmdGenerate(const Args& a) {
  GeneratorSpec spec;
  spec.kind = a.kind;
  spec.T = a.T;
  spec.h = a.h;
  spec.K = a.K;
  spec.D = a.D;
  spec.prongVariant = a.variant;
  spec.w = Weight::parse(a.weight);
  json meta;
  meta["generatorProvenance"] = spec.toJson();
  GraphDocument doc;
  if (kind_is_domain(spec.kind)) {
    auto gen = generate_domain(spec);
    gen.dom.validate();
    doc = GraphDocument::fromDomain(gen.dom, &gen.mu, meta);
  } else {
    auto gen = generate_space(spec);
    gen.ps.graph.requireConnected();
    meta["exactTails"] = gen.exactTails;
    if (!std::isnan(gen.declaredA)) meta["declaredA"] = gen.declaredA;
    if (!std::isnan(gen.delta)) meta["delta"] = gen.delta;
    doc = GraphDocument::fromSpace(gen.ps, &gen.mu, meta);
  }
  doc.writeFile(a.outPath);
  return kExitOk;
}

int cmdUniformize(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  auto gen = spaceFromDocument(doc);
  UniformizeOptions opt;
  opt.exactTails = gen.exactTails;
  opt.eps0 = std::min(a.cfg.eps0, eps0Policy(gen));
  opt.force = a.cfg.force;
  auto us = uniformize(gen.ps, a.cfg.eps, opt);
  MeasureField mass = gen.mu;
  json meta = doc.meta;
  if (a.cfg.beta > 0) {
    mass = mu_beta(us.sourceDist, gen.mu, a.cfg.beta);
    meta["beta"] = a.cfg.beta;
    // warn when beta is at or below the measured threshold
    auto local = doubling_constant(gen.ps.graph, gen.mu, a.cfg.R0);
    if (std::isfinite(local.Cd)) {
      double beta0 = mu_beta_threshold(local.Cd, a.cfg.R0);
      meta["beta0Measured"] = beta0;
      if (a.cfg.beta <= beta0)
        std::cerr << "warning: beta " << a.cfg.beta << " is at or below beta0 " << beta0
                  << " measured at R0 " << a.cfg.R0 << "\n";
    }
  }
  meta["eps0Heuristic"] = !std::isfinite(opt.eps0);
  auto out = GraphDocument::fromUniformized(us, &mass, meta);
  out.writeFile(a.outPath);
  return kExitOk;
}

int cmdHyperbolize(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  UniformDomain dom = doc.toDomain();
  MeasureField mu = doc.toMeasure(dom.graph);
  if (static_cast<int>(mu.mass.size()) < dom.graph.order())
    mu.mass.resize(dom.graph.order(), 0.0);
  auto q = quasihyperbolic(dom);
  MeasureField muA = restrict_to_interior(q, mu_alpha(dom, mu, a.cfg.alpha));
  GraphDocument out;
  for (int v = 0; v < q.graph.order(); ++v) {
    GraphDocument::Vertex jv;
    jv.id = q.graph.idOf(v);
    jv.mass = muA.mass[v];
    out.vertices.push_back(jv);
  }
  for (const Edge& e : q.graph.edges())
    out.edges.push_back({q.graph.idOf(e.u), q.graph.idOf(e.v), e.len});
  out.meta = doc.meta;
  out.meta["alpha"] = a.cfg.alpha;
  out.meta["droppedEdges"] = q.droppedEdges;
  out.writeFile(a.outPath);
  return kExitOk;
}

int cmdProduct(const Args& a) {
  auto docA = GraphDocument::readFile(a.inPath);
  auto docB = GraphDocument::readFile(a.inPath2);
  UniformDomain da = docA.toDomain();
  UniformDomain db = docB.toDomain();
  double Aa = measure_uniformity_A(da, static_cast<int>(a.cfg.sampleBudget), a.cfg.seed);
  double Ab = measure_uniformity_A(db, static_cast<int>(a.cfg.sampleBudget), a.cfg.seed + 1);
  auto prod = product_uniform(da, db, Aa, Ab);
  MeasureField muA = docA.toMeasure(da.graph);
  MeasureField muB = docB.toMeasure(db.graph);
  MeasureField mu = product_measure(prod, muA, muB);
  json meta;
  meta["predictedUniformity"] = prod.predictedAtilde;
  meta["factors"] = json::array({a.inPath, a.inPath2});
  auto out = GraphDocument::fromDomain(prod.dom, &mu, meta);
  out.writeFile(a.outPath);
  return kExitOk;
}

int cmdIndirectProduct(const Args& a) {
  auto docX = GraphDocument::readFile(a.inPath);
  auto docY = GraphDocument::readFile(a.inPath2);
  auto X = spaceFromDocument(docX);
  auto Y = spaceFromDocument(docY);
  auto ip = indirect_product(X, Y, a.cfg.eps);
  GraphDocument out;
  for (int v = 0; v < ip.hyper.graph.order(); ++v) {
    GraphDocument::Vertex jv;
    jv.id = ip.hyper.graph.idOf(v);
    out.vertices.push_back(jv);
  }
  for (const Edge& e : ip.hyper.graph.edges())
    out.edges.push_back({ip.hyper.graph.idOf(e.u), ip.hyper.graph.idOf(e.v), e.len});
  out.meta["epsilon"] = a.cfg.eps;
  out.meta["basePoint"] = ip.hyper.graph.idOf(ip.base);
  out.meta["predictedUniformity"] = ip.prod.predictedAtilde;
  out.writeFile(a.outPath);
  return kExitOk;
}

int cmdSolve(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  MetricGraph g = doc.toGraph();
  MeasureField mu = doc.toMeasure(g);
  std::vector<int> bset;
  std::vector<double> bval;
  std::stringstream ss(a.boundarySpec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("boundary entries look like id=value");
    bset.push_back(g.indexOf(std::stoll(item.substr(0, eq))));
    bval.push_back(std::stod(item.substr(eq + 1)));
  }
  auto sol = solve_p_harmonic(g, mu, bset, bval, a.cfg.p, a.cfg.tolSolve);
  std::string csv = "id,value\n";
  for (int v = 0; v < g.order(); ++v)
    csv += std::to_string(g.idOf(v)) + "," + json(sol.u[v]).dump() + "\n";
  if (!a.outPath.empty()) write_text_atomic(csv, a.outPath);
  VerificationReport rep;
  rep.check = "pharmonic-solve";
  rep.anchor = "dirichlet-energy-minimizer";
  rep.measured["energy"] = sol.energy;
  rep.measured["iterations"] = sol.iterations;
  rep.measured["kktResidual"] = sol.kktResidual;
  rep.measured["converged"] = sol.converged;
  rep.provenance = provenanceFor(a.cfg, {a.inPath});
  rep.setStatus(sol.converged);
  return emitAndStatus(rep, a.reportPath);
}

int cmdCapacity(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  MetricGraph g = doc.toGraph();
  MeasureField mu = doc.toMeasure(g);
  std::vector<int> E;
  for (auto id : parseIds(a.setSpec)) E.push_back(g.indexOf(id));
  CapacityResult cap;
  if (a.capKind == "sobolev") {
    cap = sobolev_capacity(g, mu, E, a.cfg.p, a.cfg.tolSolve);
  } else if (a.capKind == "variational") {
    std::vector<int> Om;
    for (auto id : parseIds(a.omegaSpec)) Om.push_back(g.indexOf(id));
    cap = variational_capacity(g, mu, E, Om, a.cfg.p, a.cfg.tolSolve);
  } else {
    throw InputError("capacity kind must be sobolev or variational");
  }
  VerificationReport rep;
  rep.check = a.capKind + "-capacity";
  rep.anchor = "capacity-minimization";
  rep.measured["value"] = cap.value;
  rep.measured["converged"] = cap.converged;
  rep.provenance = provenanceFor(a.cfg, {a.inPath});
  rep.setStatus(cap.converged);
  return emitAndStatus(rep, a.reportPath.empty() ? a.outPath : a.reportPath);
}

int cmdLiouville(const Args& a) {
  auto rep = liouville_experiment(a.kind.empty() ? "strip" : a.kind,
                                  Weight::parse(a.weight), a.cfg.p, a.cfg.eps,
                                  parseGrid(a.Tgrid), a.h, a.cfg.tolSolve);
  rep.provenance = provenanceFor(a.cfg, {});
  return emitAndStatus(rep, a.outPath);
}

int cmdVerifyDoubling(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  MetricGraph g = doc.toGraph();
  MeasureField mu = doc.toMeasure(g);
  auto dbl = doubling_constant(g, mu, a.cfg.R0);
  VerificationReport rep;
  rep.check = "doubling-constant";
  rep.anchor = "ball-mass-doubling";
  rep.measured = dbl.toJson();
  rep.provenance = provenanceFor(a.cfg, {a.inPath});
  rep.setStatus(std::isfinite(dbl.Cd));
  return emitAndStatus(rep, a.outPath);
}

int cmdVerifyPoincare(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  MetricGraph g = doc.toGraph();
  MeasureField mu = doc.toMeasure(g);
  auto rep0 = poincare_constant(g, mu, g.indexOf(a.centerId), a.radius, a.cfg.p, a.lambda,
                                static_cast<int>(a.cfg.sampleBudget), a.cfg.seed);
  VerificationReport rep;
  rep.check = "poincare-constant";
  rep.anchor = "ball-mean-oscillation-bound";
  rep.measured = rep0.toJson();
  rep.provenance = provenanceFor(a.cfg, {a.inPath});
  rep.setStatus(!rep0.infiniteWitness);
  return emitAndStatus(rep, a.outPath);
}

int cmdVerifyUpgrade(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  MetricGraph g = doc.toGraph();
  MeasureField mu = doc.toMeasure(g);
  auto rep = local_to_global_check(g, mu, a.cfg.R0, a.cfg.R1);
  rep.provenance = provenanceFor(a.cfg, {a.inPath});
  return emitAndStatus(rep, a.outPath);
}

int cmdVerifyUniformization(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  auto gen = spaceFromDocument(doc);
  UniformizeOptions opt;
  opt.exactTails = gen.exactTails;
  opt.eps0 = std::min(a.cfg.eps0, eps0Policy(gen));
  opt.force = a.cfg.force;
  auto us = uniformize(gen.ps, a.cfg.eps, opt);
  MeasureField mb = mu_beta(us.sourceDist, gen.mu, a.cfg.beta);
  auto local = doubling_constant(gen.ps.graph, gen.mu, a.cfg.R0);

  CompositeReport comp;
  comp.name = "uniformization";
  double M = roughly_starlike_M(gen.ps);
  auto consts = UniformizationConstants::fromMDelta(
      M, std::isnan(gen.delta) ? 0.0 : gen.delta, a.cfg.eps, opt.eps0);

  VerificationReport sandwich;
  sandwich.check = "boundary-distance-sandwich";
  sandwich.anchor = "boundary-distance-two-sided-bound";
  auto bdist = us.boundaryDistances();
  long long violations = 0;
  for (int v = 0; v < us.graph.order(); ++v) {
    double lower = us.rhoEps[v] / (std::exp(1.0) * a.cfg.eps);
    double upper = consts.C0 * us.rhoEps[v] / a.cfg.eps;
    double fuzz = 1e-12 * upper;
    if (bdist[v] < lower - fuzz || bdist[v] > upper + fuzz) ++violations;
  }
  sandwich.measured["violations"] = violations;
  sandwich.measured["M"] = M;
  sandwich.predicted["C0"] = consts.C0;
  sandwich.setStatus(violations == 0);
  comp.sections.push_back(sandwich);

  comp.sections.push_back(whitney_inclusion_check(
      us, consts, static_cast<int>(a.cfg.sampleBudget), a.cfg.seed));
  comp.sections.push_back(global_doubling_check(
      us, mb, a.cfg.R0, std::isfinite(local.Cd) ? local.Cd : 2.0));
  comp.sections.push_back(gromov_comparison_check(
      us, static_cast<int>(a.cfg.sampleBudget), a.cfg.seed));
  comp.sections.push_back(distance_ratio_check(
      us, static_cast<int>(a.cfg.sampleBudget), a.cfg.seed));
  comp.sections.push_back(density_band_check(
      us, a.cfg.beta, static_cast<int>(a.cfg.sampleBudget), a.cfg.seed));
  return emitComposite(comp, a.outPath);
}

int cmdVerifyRoundtrip(const Args& a) {
  auto doc = GraphDocument::readFile(a.inPath);
  auto gen = spaceFromDocument(doc);
  auto rep = roundtrip_bilipschitz(gen, a.cfg.eps, static_cast<int>(a.cfg.sampleBudget),
                                   a.cfg.seed);
  rep.provenance = provenanceFor(a.cfg, {a.inPath});
  return emitAndStatus(rep, a.outPath);
}

int cmdVerifyCanonical(const Args& a) {
  auto docX = GraphDocument::readFile(a.inPath);
  auto docY = GraphDocument::readFile(a.inPath2);
  auto X = spaceFromDocument(docX);
  auto Y = spaceFromDocument(docY);
  CanonicalMapParams params;
  params.sampleBudget = static_cast<int>(a.cfg.sampleBudget);
  params.seed = a.cfg.seed;
  auto rep = canonical_map_distortion(X, Y, a.cfg.eps, a.epsPrime, params);
  rep.provenance = provenanceFor(a.cfg, {a.inPath, a.inPath2});
  return emitAndStatus(rep, a.outPath);
}

int cmdPipelineTree(const Args& a) {
  GeneratedSpace gen = gen_kary_tree(a.K, a.D, a.h);
  UniformizeOptions opt;
  opt.exactTails = true;
  auto us = uniformize(gen.ps, a.cfg.eps, opt);
  MeasureField mb = mu_beta(us.sourceDist, gen.mu, a.cfg.beta);
  auto local = doubling_constant(gen.ps.graph, gen.mu, a.cfg.R0);

  CompositeReport comp;
  comp.name = "tree-uniformize-verify";
  auto consts = UniformizationConstants::fromMDelta(0.0, 0.0, a.cfg.eps, kInf);
  comp.sections.push_back(global_doubling_check(
      us, mb, a.cfg.R0, std::isfinite(local.Cd) ? local.Cd : 2.0));
  comp.sections.push_back(whitney_inclusion_check(
      us, consts, static_cast<int>(a.cfg.sampleBudget), a.cfg.seed));
  for (auto& s : comp.sections) s.provenance = provenanceFor(a.cfg, {});
  return emitComposite(comp, a.outPath);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"metric deformation laboratory for weighted graphs"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  Args a;
  a.cfg = loadDefaultConfig();

  // mesh widths use --h, so keep help on --help only
  std::function<void(CLI::App*)> fixHelp = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");
    for (auto* sub : cmd->get_subcommands({})) fixHelp(sub);
  };

  auto addConfig = [&](CLI::App* cmd) {
    cmd->add_option("--eps", a.cfg.eps, "deformation scale");
    cmd->add_option("--beta", a.cfg.beta, "measure deformation rate");
    cmd->add_option("--alpha", a.cfg.alpha, "clearance weight exponent");
    cmd->add_option("--p", a.cfg.p, "energy exponent");
    cmd->add_option("--R0", a.cfg.R0, "local scale");
    cmd->add_option("--R1", a.cfg.R1, "upgraded scale");
    cmd->add_option("--eps0", a.cfg.eps0, "largest allowed eps");
    cmd->add_option("--tol-solve", a.cfg.tolSolve, "solver tolerance");
    cmd->add_option("--tol-cap", a.cfg.tolCap, "capacity positivity tolerance");
    cmd->add_option("--budget", a.cfg.sampleBudget, "sample budget");
    cmd->add_option("--seed", a.cfg.seed, "random seed");
    cmd->add_flag("--force", a.cfg.force, "override the eps0 gate");
  };

  auto* gen = app.add_subcommand("generate", "construct an example space");
  gen->add_option("--kind", a.kind, "line|interval|karyTree|strip|prong|diskPolar")
      ->required();
  gen->add_option("--T", a.T, "truncation");
  gen->add_option("--h", a.h, "mesh width");
  gen->add_option("--K", a.K, "branching");
  gen->add_option("--D", a.D, "depth");
  gen->add_option("--variant", a.variant, "prong variant");
  gen->add_option("--weight", a.weight, "weight descriptor");
  gen->add_option("-o,--out", a.outPath, "output graph file")->required();

  auto* uni = app.add_subcommand("uniformize", "deform metric and measure");
  addConfig(uni);
  uni->add_option("in", a.inPath)->required();
  uni->add_option("out", a.outPath)->required();

  auto* hyp = app.add_subcommand("hyperbolize", "quasihyperbolic deformation");
  addConfig(hyp);
  hyp->add_option("in", a.inPath)->required();
  hyp->add_option("out", a.outPath)->required();

  auto* prod = app.add_subcommand("product", "sum-metric product of two domains");
  addConfig(prod);
  prod->add_option("a", a.inPath)->required();
  prod->add_option("b", a.inPath2)->required();
  prod->add_option("-o,--out", a.outPath)->required();

  auto* iprod = app.add_subcommand("indirect-product", "deform, multiply, hyperbolize");
  addConfig(iprod);
  iprod->add_option("x", a.inPath)->required();
  iprod->add_option("y", a.inPath2)->required();
  iprod->add_option("-o,--out", a.outPath)->required();

  auto* solve = app.add_subcommand("solve", "variational solvers");
  auto* pharm = solve->add_subcommand("pharmonic", "p-harmonic Dirichlet problem");
  addConfig(pharm);
  pharm->add_option("--boundary", a.boundarySpec, "id=value,id=value,...")->required();
  pharm->add_option("in", a.inPath)->required();
  pharm->add_option("-o,--out", a.outPath, "solution CSV");
  pharm->add_option("--report", a.reportPath, "report JSON");

  auto* cap = app.add_subcommand("capacity", "capacity minimization");
  addConfig(cap);
  cap->add_option("--kind", a.capKind, "sobolev|variational");
  cap->add_option("--set", a.setSpec, "capacitor vertex ids")->required();
  cap->add_option("--omega", a.omegaSpec, "condenser domain ids");
  cap->add_option("in", a.inPath)->required();
  cap->add_option("-o,--out", a.outPath, "report JSON");

  auto* lio = app.add_subcommand("liouville", "finite-energy constancy experiment");
  addConfig(lio);
  lio->add_option("--kind", a.kind, "line|strip")->required();
  lio->add_option("--weight", a.weight, "weight descriptor");
  lio->add_option("--Tgrid", a.Tgrid, "comma-separated truncations");
  lio->add_option("--h", a.h, "mesh width");
  lio->add_option("-o,--out", a.outPath, "report JSON");

  auto* verify = app.add_subcommand("verify", "measured-vs-predicted checks");
  auto* vd = verify->add_subcommand("doubling");
  addConfig(vd);
  vd->add_option("in", a.inPath)->required();
  vd->add_option("-o,--out", a.outPath);
  auto* vp = verify->add_subcommand("poincare");
  addConfig(vp);
  vp->add_option("--center", a.centerId)->required();
  vp->add_option("--radius", a.radius)->required();
  vp->add_option("--lambda", a.lambda);
  vp->add_option("in", a.inPath)->required();
  vp->add_option("-o,--out", a.outPath);
  auto* vu = verify->add_subcommand("upgrade");
  addConfig(vu);
  vu->add_option("in", a.inPath)->required();
  vu->add_option("-o,--out", a.outPath);
  auto* vx = verify->add_subcommand("uniformization");
  addConfig(vx);
  vx->add_option("in", a.inPath)->required();
  vx->add_option("-o,--out", a.outPath);
  auto* vr = verify->add_subcommand("roundtrip");
  addConfig(vr);
  vr->add_option("in", a.inPath)->required();
  vr->add_option("-o,--out", a.outPath);
  auto* vc = verify->add_subcommand("canonical");
  addConfig(vc);
  vc->add_option("--eps2", a.epsPrime, "second deformation scale");
  vc->add_option("x", a.inPath)->required();
  vc->add_option("y", a.inPath2)->required();
  vc->add_option("-o,--out", a.outPath);

  auto* pipe = app.add_subcommand("pipeline", "canned multi-stage runs");
  auto* ptree = pipe->add_subcommand("tree-uniformize-verify");
  addConfig(ptree);
  ptree->add_option("--K", a.K);
  ptree->add_option("--D", a.D);
  ptree->add_option("--h", a.h);
  ptree->add_option("-o,--out", a.outPath);

  fixHelp(&app);

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  std::string prog = "gromovlab";
  argv.push_back(prog.data());
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmdGenerate(a);
    if (uni->parsed()) return cmdUniformize(a);
    if (hyp->parsed()) return cmdHyperbolize(a);
    if (prod->parsed()) return cmdProduct(a);
    if (iprod->parsed()) return cmdIndirectProduct(a);
    if (solve->parsed() && pharm->parsed()) return cmdSolve(a);
    if (cap->parsed()) return cmdCapacity(a);
    if (lio->parsed()) return cmdLiouville(a);
    if (verify->parsed()) {
      if (vd->parsed()) return cmdVerifyDoubling(a);
      if (vp->parsed()) return cmdVerifyPoincare(a);
      if (vu->parsed()) return cmdVerifyUpgrade(a);
      if (vx->parsed()) return cmdVerifyUniformization(a);
      if (vr->parsed()) return cmdVerifyRoundtrip(a);
      if (vc->parsed()) return cmdVerifyCanonical(a);
      std::cerr << "verify needs a check name\n";
      return kExitUsage;
    }
    if (pipe->parsed() && ptree->parsed()) return cmdPipelineTree(a);
    std::cerr << "unknown subcommand\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace gromovlab::cli
