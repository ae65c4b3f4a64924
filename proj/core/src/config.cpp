#include "emfd/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <memory>
#include <sstream>

#include "emfd/errors.hpp"
#include "emfd/expr.hpp"
#include "emfd/mesh_io.hpp"
#include "emfd/presets.hpp"

namespace emfd {

using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

std::string require_string(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + " needs \"" + key + "\"");
  if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return obj.at(key).get<std::string>();
}

Expr compile(const std::string& text, const std::string& field) {
  try {
    return Expr::parse(text);
  } catch (const SyntaxError& e) {
    throw ConfigError(field + ": " + e.what() + " (at position " + std::to_string(e.position) + ")");
  }
}

std::array<std::string, 2> read_pair(const ordered_json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string())
    throw ConfigError(field + " must be a pair of expression strings");
  return {v[0].get<std::string>(), v[1].get<std::string>()};
}

}  // namespace

ProblemConfig read_config(std::istream& in) {
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("problem file must be a JSON object");
  reject_unknown_keys(j, {"mesh", "problem", "solver", "output"}, "the problem file");

  ProblemConfig cfg;

  if (j.contains("mesh")) {
    const ordered_json& m = j.at("mesh");
    if (!m.is_object()) throw ConfigError("mesh must be an object");
    reject_unknown_keys(m, {"family", "levels", "path"}, "mesh");
    if (m.contains("family")) cfg.mesh.family = require_string(m, "family", "mesh");
    if (cfg.mesh.family != "hexagon" && cfg.mesh.family != "square" && cfg.mesh.family != "file")
      throw ConfigError("mesh.family must be hexagon, square or file");
    if (m.contains("levels")) {
      if (!m.at("levels").is_number_integer()) throw ConfigError("mesh.levels must be an integer");
      cfg.mesh.levels = m.at("levels").get<int>();
      if (cfg.mesh.levels < 0 || cfg.mesh.levels > 12)
        throw ConfigError("mesh.levels must be between 0 and 12");
    }
    if (m.contains("path")) cfg.mesh.path = require_string(m, "path", "mesh");
    if (cfg.mesh.family == "file" && cfg.mesh.path.empty())
      throw ConfigError("mesh.family \"file\" needs mesh.path");
  }

  if (!j.contains("problem")) throw ConfigError("the problem file needs a \"problem\" section");
  const ordered_json& p = j.at("problem");
  if (!p.is_object()) throw ConfigError("problem must be an object");
  if (p.contains("preset")) {
    reject_unknown_keys(p, {"preset", "alpha"}, "problem");
    cfg.preset = require_string(p, "preset", "problem");
    find_preset(cfg.preset);  // validates the name
    if (p.contains("alpha")) {
      if (!p.at("alpha").is_number()) throw ConfigError("problem.alpha must be a number here");
      cfg.alpha = p.at("alpha").get<double>();
      if (!(*cfg.alpha > 0.0)) throw ConfigError("problem.alpha must be positive");
    }
  } else {
    reject_unknown_keys(p, {"kind", "alpha", "beta", "gamma", "f", "phi", "rot", "dirichlet"}, "problem");
    ExplicitProblem ex;
    if (p.contains("kind")) ex.kind = require_string(p, "kind", "problem");
    if (ex.kind != "scalar" && ex.kind != "vector")
      throw ConfigError("problem.kind must be scalar or vector");
    if (p.contains("alpha")) ex.alpha = require_string(p, "alpha", "problem");
    if (p.contains("beta")) ex.beta = read_pair(p.at("beta"), "problem.beta");
    if (p.contains("gamma")) ex.gamma = require_string(p, "gamma", "problem");
    if (p.contains("phi")) ex.phi = require_string(p, "phi", "problem");
    if (p.contains("rot")) ex.rot = read_pair(p.at("rot"), "problem.rot");
    auto read_field = [&](const char* key, std::array<std::string, 2>& into) {
      if (!p.contains(key)) return;
      const ordered_json& v = p.at(key);
      if (v.is_string())
        into = {v.get<std::string>(), "0"};
      else
        into = read_pair(v, std::string("problem.") + key);
      if (ex.kind == "vector" && v.is_string())
        throw ConfigError(std::string("problem.") + key + " must be a pair for vector problems");
    };
    read_field("f", ex.f);
    read_field("dirichlet", ex.dirichlet);
    // Surface expression problems now, with the field named.
    compile(ex.alpha, "problem.alpha");
    compile(ex.beta[0], "problem.beta[0]");
    compile(ex.beta[1], "problem.beta[1]");
    compile(ex.gamma, "problem.gamma");
    compile(ex.f[0], "problem.f[0]");
    compile(ex.f[1], "problem.f[1]");
    compile(ex.phi, "problem.phi");
    compile(ex.rot[0], "problem.rot[0]");
    compile(ex.rot[1], "problem.rot[1]");
    compile(ex.dirichlet[0], "problem.dirichlet[0]");
    compile(ex.dirichlet[1], "problem.dirichlet[1]");
    cfg.problem = std::move(ex);
  }

  if (j.contains("solver")) {
    const ordered_json& s = j.at("solver");
    if (!s.is_object()) throw ConfigError("solver must be an object");
    reject_unknown_keys(s, {"method", "tolerance", "max_iterations"}, "solver");
    if (s.contains("method")) cfg.solver.method = require_string(s, "method", "solver");
    if (cfg.solver.method != "direct" && cfg.solver.method != "cg" && cfg.solver.method != "bicgstab")
      throw ConfigError("solver.method must be direct, cg or bicgstab");
    if (s.contains("tolerance")) {
      if (!s.at("tolerance").is_number()) throw ConfigError("solver.tolerance must be a number");
      cfg.solver.tolerance = s.at("tolerance").get<double>();
      if (!(cfg.solver.tolerance > 0.0)) throw ConfigError("solver.tolerance must be positive");
    }
    if (s.contains("max_iterations")) {
      if (!s.at("max_iterations").is_number_integer())
        throw ConfigError("solver.max_iterations must be an integer");
      cfg.solver.max_iterations = s.at("max_iterations").get<int>();
      if (cfg.solver.max_iterations < 1) throw ConfigError("solver.max_iterations must be >= 1");
    }
  }

  if (j.contains("output")) {
    const ordered_json& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output must be an object");
    reject_unknown_keys(o, {"csv", "vtk", "solution", "matrix"}, "output");
    if (o.contains("csv")) cfg.output.csv = require_string(o, "csv", "output");
    if (o.contains("vtk")) cfg.output.vtk = require_string(o, "vtk", "output");
    if (o.contains("solution")) cfg.output.solution = require_string(o, "solution", "output");
    if (o.contains("matrix")) cfg.output.matrix = require_string(o, "matrix", "output");
  }
  return cfg;
}

ProblemConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file: " + path);
  return read_config(in);
}

void write_config(const ProblemConfig& cfg, std::ostream& out) {
  ordered_json j;
  ordered_json mesh;
  mesh["family"] = cfg.mesh.family;
  mesh["levels"] = cfg.mesh.levels;
  if (cfg.mesh.family == "file") mesh["path"] = cfg.mesh.path;
  j["mesh"] = std::move(mesh);

  ordered_json p;
  if (!cfg.preset.empty()) {
    p["preset"] = cfg.preset;
    if (cfg.alpha) p["alpha"] = *cfg.alpha;
  } else if (cfg.problem) {
    const ExplicitProblem& ex = *cfg.problem;
    p["kind"] = ex.kind;
    p["alpha"] = ex.alpha;
    p["beta"] = {ex.beta[0], ex.beta[1]};
    p["gamma"] = ex.gamma;
    if (ex.kind == "vector")
      p["f"] = {ex.f[0], ex.f[1]};
    else
      p["f"] = ex.f[0];
    p["phi"] = ex.phi;
    p["rot"] = {ex.rot[0], ex.rot[1]};
    if (ex.kind == "vector")
      p["dirichlet"] = {ex.dirichlet[0], ex.dirichlet[1]};
    else
      p["dirichlet"] = ex.dirichlet[0];
  }
  j["problem"] = std::move(p);

  ordered_json s;
  s["method"] = cfg.solver.method;
  s["tolerance"] = cfg.solver.tolerance;
  s["max_iterations"] = cfg.solver.max_iterations;
  j["solver"] = std::move(s);

  ordered_json o;
  if (!cfg.output.csv.empty()) o["csv"] = cfg.output.csv;
  if (!cfg.output.vtk.empty()) o["vtk"] = cfg.output.vtk;
  if (!cfg.output.solution.empty()) o["solution"] = cfg.output.solution;
  if (!cfg.output.matrix.empty()) o["matrix"] = cfg.output.matrix;
  if (!o.empty()) j["output"] = std::move(o);

  out << j.dump(1) << "\n";
}

std::string config_to_string(const ProblemConfig& cfg) {
  std::ostringstream out;
  write_config(cfg, out);
  return out.str();
}

DualMesh make_config_mesh(const ProblemConfig& cfg) {
  if (cfg.mesh.family == "hexagon") {
    return build_hexagon_mesh(cfg.mesh.levels);
  }
  if (cfg.mesh.family == "square") {
    return build_square_mesh(cfg.mesh.levels);
  }
  DualMesh mesh = read_mesh_json_file(cfg.mesh.path);
  for (int l = 0; l < cfg.mesh.levels; ++l) mesh = refine(mesh);
  return mesh;
}

double config_alpha(const ProblemConfig& cfg) {
  if (!cfg.preset.empty()) return cfg.alpha ? *cfg.alpha : find_preset(cfg.preset).default_alpha;
  return 0.0;  // explicit problems carry alpha as an expression
}

ProblemSpec make_problem_spec(const ProblemConfig& cfg) {
  if (!cfg.preset.empty()) {
    const Preset& preset = find_preset(cfg.preset);
    return preset.make_spec(config_alpha(cfg));
  }
  if (!cfg.problem) throw ConfigError("problem section is empty");
  const ExplicitProblem& ex = *cfg.problem;

  const auto alpha = std::make_shared<Expr>(Expr::parse(ex.alpha));
  const auto beta1 = std::make_shared<Expr>(Expr::parse(ex.beta[0]));
  const auto beta2 = std::make_shared<Expr>(Expr::parse(ex.beta[1]));
  const auto gamma = std::make_shared<Expr>(Expr::parse(ex.gamma));
  const auto f1 = std::make_shared<Expr>(Expr::parse(ex.f[0]));
  const auto f2 = std::make_shared<Expr>(Expr::parse(ex.f[1]));
  const auto phi = std::make_shared<Expr>(Expr::parse(ex.phi));
  const auto rot1 = std::make_shared<Expr>(Expr::parse(ex.rot[0]));
  const auto rot2 = std::make_shared<Expr>(Expr::parse(ex.rot[1]));
  const auto g1 = std::make_shared<Expr>(Expr::parse(ex.dirichlet[0]));
  const auto g2 = std::make_shared<Expr>(Expr::parse(ex.dirichlet[1]));

  ProblemSpec spec;
  spec.kind = ex.kind == "vector" ? ProblemKind::vector : ProblemKind::scalar;
  spec.alpha = [alpha](Vec2 p, Vec2) { return alpha->eval(p.x, p.y); };
  spec.beta = [beta1, beta2](Vec2 p) { return Vec2{beta1->eval(p.x, p.y), beta2->eval(p.x, p.y)}; };
  spec.gamma = [gamma](Vec2 p) { return gamma->eval(p.x, p.y); };
  spec.potential.phi = [phi](Vec2 p, Vec2) { return phi->eval(p.x, p.y); };
  spec.potential.theta_full = [alpha, beta1, beta2](Vec2 p, Vec2) {
    const double a = alpha->eval(p.x, p.y);
    return Vec2{beta1->eval(p.x, p.y) / a, beta2->eval(p.x, p.y) / a};
  };
  if (ex.rot[0] != "0" || ex.rot[1] != "0")
    spec.potential.theta_rot = [alpha, rot1, rot2](Vec2 p, Vec2) {
      const double a = alpha->eval(p.x, p.y);
      return Vec2{rot1->eval(p.x, p.y) / a, rot2->eval(p.x, p.y) / a};
    };
  if (spec.kind == ProblemKind::scalar) {
    spec.f_scalar = [f1](Vec2 p) { return f1->eval(p.x, p.y); };
    spec.dirichlet_scalar = [g1](Vec2 p) { return g1->eval(p.x, p.y); };
  } else {
    spec.f_vector = [f1, f2](Vec2 p) { return Vec2{f1->eval(p.x, p.y), f2->eval(p.x, p.y)}; };
    spec.dirichlet_vector = [g1, g2](Vec2 p) { return Vec2{g1->eval(p.x, p.y), g2->eval(p.x, p.y)}; };
  }
  return spec;
}

SolveOptions make_solve_options(const ProblemConfig& cfg) {
  SolveOptions opts;
  opts.method = cfg.solver.method == "cg"         ? SolverMethod::cg
                : cfg.solver.method == "bicgstab" ? SolverMethod::bicgstab
                                                  : SolverMethod::direct;
  opts.tolerance = cfg.solver.tolerance;
  opts.max_iterations = cfg.solver.max_iterations;
  return opts;
}

}  // namespace emfd
