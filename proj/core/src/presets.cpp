#include "emfd/presets.hpp"

#include <cmath>

#include "emfd/errors.hpp"

namespace emfd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Shared manufactured solution on the hexagon, u = sin(pi x) sin(pi y).
double hex_u(Vec2 p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); }
Vec2 hex_grad_u(Vec2 p) {
  return {kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y),
          kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y)};
}

// Gradient part of the hexagon convection field: beta = grad Phi with
// Phi = sin(x) + 4x + cos(y) + 4y.
Vec2 hex_beta(Vec2 p) { return {std::cos(p.x) + 4.0, 4.0 - std::sin(p.y)}; }
double hex_div_beta(Vec2 p) { return -std::sin(p.x) - std::cos(p.y); }
double hex_phi_raw(Vec2 p) { return std::sin(p.x) + 4.0 * p.x + std::cos(p.y) + 4.0 * p.y; }

// Divergence-free perturbation used by the "helmholtz-*" presets:
// curl of psi = 0.1 sin(xy), i.e. (d psi / dy, -d psi / dx).
Vec2 curl_psi(Vec2 p) {
  return {0.1 * p.x * std::cos(p.x * p.y), -0.1 * p.y * std::cos(p.x * p.y)};
}

// Quadratic potential on the square: W = 2x + x^2/2 + y + y^2/2, so
// grad W = (2 + x, 1 + y). W is quadratic, hence the edge-midpoint value of
// grad W . T recovers the endpoint difference of W exactly.
double square_W(Vec2 p) { return 2.0 * p.x + 0.5 * p.x * p.x + p.y + 0.5 * p.y * p.y; }
Vec2 square_grad_W(Vec2 p) { return {2.0 + p.x, 1.0 + p.y}; }

ProblemSpec hex_scalar_spec(double alpha, bool helmholtz) {
  ProblemSpec spec;
  spec.kind = ProblemKind::scalar;
  spec.alpha = [alpha](Vec2, Vec2) { return alpha; };
  spec.beta = [helmholtz](Vec2 p) {
    const Vec2 b = hex_beta(p);
    return helmholtz ? b + curl_psi(p) : b;
  };
  spec.gamma = [](Vec2) { return 0.0; };
  spec.f_scalar = [alpha, helmholtz](Vec2 p) {
    const double u = hex_u(p);
    const Vec2 gu = hex_grad_u(p);
    const Vec2 b = hex_beta(p);
    // -div(alpha grad u + beta u) = 2 alpha pi^2 u - (div beta) u - beta . grad u;
    // the divergence-free part only adds -curl(psi) . grad u.
    double f = 2.0 * alpha * kPi * kPi * u - hex_div_beta(p) * u - dot(b, gu);
    if (helmholtz) f -= dot(curl_psi(p), gu);
    return f;
  };
  spec.potential.phi = [alpha](Vec2 p, Vec2) { return hex_phi_raw(p) / alpha; };
  spec.potential.theta_full = [alpha, helmholtz](Vec2 p, Vec2) {
    const Vec2 b = hex_beta(p);
    return (helmholtz ? b + curl_psi(p) : b) * (1.0 / alpha);
  };
  if (helmholtz)
    spec.potential.theta_rot = [alpha](Vec2 p, Vec2) { return curl_psi(p) * (1.0 / alpha); };
  spec.dirichlet_scalar = hex_u;
  return spec;
}

ProblemSpec hex_vector_spec(double alpha) {
  ProblemSpec spec;
  spec.kind = ProblemKind::vector;
  spec.alpha = [alpha](Vec2, Vec2) { return alpha; };
  spec.beta = hex_beta;
  spec.gamma = [](Vec2) { return 1.0; };
  // u = (sin(pi x) sin(pi y), cos(pi x) cos(pi y)), curl u = -2 pi sin(pi x) cos(pi y),
  // f = curl(alpha curl u + beta x u) + u with beta x u = b1 u2 - b2 u1.
  spec.f_vector = [alpha](Vec2 p) {
    const double sx = std::sin(kPi * p.x), cx = std::cos(kPi * p.x);
    const double sy = std::sin(kPi * p.y), cy = std::cos(kPi * p.y);
    const double b1 = std::cos(p.x) + 4.0, b2 = 4.0 - std::sin(p.y);
    const double db1 = -std::sin(p.x);  // d b1 / dx
    const double db2 = -std::cos(p.y);  // d b2 / dy
    // w = alpha curl u + b1 u2 - b2 u1
    const double dw_dy = 2.0 * kPi * kPi * alpha * sx * sy - kPi * b1 * cx * sy -
                         (db2 * sx * sy + kPi * b2 * sx * cy);
    const double dw_dx = -2.0 * kPi * kPi * alpha * cx * cy + (db1 * cx - kPi * b1 * sx) * cy -
                         kPi * b2 * cx * sy;
    return Vec2{dw_dy + sx * sy, -dw_dx + cx * cy};
  };
  spec.potential.phi = [alpha](Vec2 p, Vec2) { return hex_phi_raw(p) / alpha; };
  spec.potential.theta_full = [alpha](Vec2 p, Vec2) { return hex_beta(p) * (1.0 / alpha); };
  spec.dirichlet_vector = [](Vec2 p) {
    return Vec2{std::sin(kPi * p.x) * std::sin(kPi * p.y), std::cos(kPi * p.x) * std::cos(kPi * p.y)};
  };
  return spec;
}

ProblemSpec boundary_layer_spec(double alpha, bool helmholtz) {
  ProblemSpec spec;
  spec.kind = ProblemKind::scalar;
  spec.alpha = [alpha](Vec2, Vec2) { return alpha; };
  spec.beta = [helmholtz](Vec2 p) {
    const Vec2 b = square_grad_W(p);
    return helmholtz ? b + curl_psi(p) : b;
  };
  spec.gamma = [](Vec2) { return 0.0; };
  spec.f_scalar = [](Vec2) { return 1.0; };
  spec.potential.phi = [alpha](Vec2 p, Vec2) { return square_W(p) / alpha; };
  spec.potential.theta_full = [alpha, helmholtz](Vec2 p, Vec2) {
    const Vec2 b = square_grad_W(p);
    return (helmholtz ? b + curl_psi(p) : b) * (1.0 / alpha);
  };
  if (helmholtz)
    spec.potential.theta_rot = [alpha](Vec2 p, Vec2) { return curl_psi(p) * (1.0 / alpha); };
  spec.dirichlet_scalar = [](Vec2) { return 0.0; };
  return spec;
}

ProblemSpec internal_layer_spec(double alpha_right, bool helmholtz) {
  // Diffusion jumps at x = 0.5 (1 on the left, alpha_right on the right), so
  // the potential and theta are branch-valued: every evaluation resolves the
  // branch from its anchor. The branches are glued continuously at the
  // center of the interface.
  const double matching = square_W({0.5, 0.5});
  auto side_alpha = [alpha_right](Vec2 anchor) { return anchor.x >= 0.5 ? alpha_right : 1.0; };
  ProblemSpec spec;
  spec.kind = ProblemKind::scalar;
  spec.alpha = [side_alpha](Vec2, Vec2 anchor) { return side_alpha(anchor); };
  spec.beta = [helmholtz](Vec2 p) {
    const Vec2 b = square_grad_W(p);
    return helmholtz ? b + curl_psi(p) : b;
  };
  spec.gamma = [](Vec2) { return 0.0; };
  spec.f_scalar = [](Vec2) { return 1.0; };
  spec.potential.phi = [side_alpha, matching](Vec2 p, Vec2 anchor) {
    const double a = side_alpha(anchor);
    return (square_W(p) - matching) / a + matching;
  };
  spec.potential.theta_full = [side_alpha, helmholtz](Vec2 p, Vec2 anchor) {
    const Vec2 b = square_grad_W(p);
    return (helmholtz ? b + curl_psi(p) : b) * (1.0 / side_alpha(anchor));
  };
  if (helmholtz)
    spec.potential.theta_rot = [side_alpha](Vec2 p, Vec2 anchor) {
      return curl_psi(p) * (1.0 / side_alpha(anchor));
    };
  spec.dirichlet_scalar = [](Vec2) { return 0.0; };
  return spec;
}

ProblemSpec curl_layer_spec(double alpha) {
  ProblemSpec spec;
  spec.kind = ProblemKind::vector;
  spec.alpha = [alpha](Vec2, Vec2) { return alpha; };
  spec.beta = square_grad_W;
  spec.gamma = [](Vec2) { return 1.0; };
  spec.f_vector = [](Vec2) { return Vec2{1.0, 1.0}; };
  spec.potential.phi = [alpha](Vec2 p, Vec2) { return square_W(p) / alpha; };
  spec.potential.theta_full = [alpha](Vec2 p, Vec2) { return square_grad_W(p) * (1.0 / alpha); };
  spec.dirichlet_vector = [](Vec2) { return Vec2{0.0, 0.0}; };
  return spec;
}

std::vector<Preset> make_catalog() {
  std::vector<Preset> cat;
  const double inf = std::numeric_limits<double>::infinity();

  {
    Preset p;
    p.name = "hex-scalar";
    p.description = "manufactured convection-diffusion on the hexagon, u = sin(pi x) sin(pi y)";
    p.kind = ProblemKind::scalar;
    p.mesh_family = "hexagon";
    p.default_alpha = 1.0;
    p.make_spec = [](double a) { return hex_scalar_spec(a, false); };
    p.exact_scalar = hex_u;
    p.exact_scalar_grad = hex_grad_u;
    cat.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "helmholtz-scalar";
    p.description = "hex-scalar with a divergence-free convection component added";
    p.kind = ProblemKind::scalar;
    p.mesh_family = "hexagon";
    p.default_alpha = 1.0;
    p.make_spec = [](double a) { return hex_scalar_spec(a, true); };
    p.exact_scalar = hex_u;
    p.exact_scalar_grad = hex_grad_u;
    cat.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "hex-vector";
    p.description = "manufactured curl-curl convection-diffusion on the hexagon";
    p.kind = ProblemKind::vector;
    p.mesh_family = "hexagon";
    p.default_alpha = 1.0;
    p.make_spec = hex_vector_spec;
    p.exact_vector = [](Vec2 p2) {
      return Vec2{std::sin(kPi * p2.x) * std::sin(kPi * p2.y),
                  std::cos(kPi * p2.x) * std::cos(kPi * p2.y)};
    };
    p.exact_vector_curl = [](Vec2 p2) {
      return -2.0 * kPi * std::sin(kPi * p2.x) * std::cos(kPi * p2.y);
    };
    cat.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "square-boundary-layer";
    p.description = "convection-dominated layer problem on the unit square, f = 1, u|bnd = 0";
    p.kind = ProblemKind::scalar;
    p.mesh_family = "square";
    p.default_alpha = 1e-6;
    p.lower_bound = 0.0;
    p.upper_bound = inf;
    p.make_spec = [](double a) { return boundary_layer_spec(a, false); };
    cat.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "helmholtz-boundary-layer";
    p.description = "boundary layer with a divergence-free convection component added";
    p.kind = ProblemKind::scalar;
    p.mesh_family = "square";
    p.default_alpha = 1e-6;
    p.lower_bound = 0.0;
    p.upper_bound = inf;
    p.make_spec = [](double a) { return boundary_layer_spec(a, true); };
    cat.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "square-internal-layer";
    p.description = "diffusion jump 1 -> alpha across x = 0.5, internal layer, f = 1";
    p.kind = ProblemKind::scalar;
    p.mesh_family = "square";
    p.default_alpha = 1e-6;
    p.lower_bound = 0.0;
    p.upper_bound = inf;
    p.make_spec = [](double a) { return internal_layer_spec(a, false); };
    cat.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "helmholtz-internal-layer";
    p.description = "internal layer with a divergence-free convection component added";
    p.kind = ProblemKind::scalar;
    p.mesh_family = "square";
    p.default_alpha = 1e-6;
    p.lower_bound = 0.0;
    p.upper_bound = inf;
    p.make_spec = [](double a) { return internal_layer_spec(a, true); };
    cat.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "square-curl-layer";
    p.description = "convection-dominated curl-curl problem on the unit square, f = (1,1)";
    p.kind = ProblemKind::vector;
    p.mesh_family = "square";
    p.default_alpha = 1e-6;
    p.make_spec = curl_layer_spec;
    cat.push_back(std::move(p));
  }
  return cat;
}

}  // namespace

const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> catalog = make_catalog();
  return catalog;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : preset_catalog())
    if (p.name == name) return p;
  std::string names;
  for (const Preset& p : preset_catalog()) names += (names.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset \"" + name + "\" (available: " + names + ")");
}

DualMesh build_preset_mesh(const Preset& preset, int level) {
  if (preset.mesh_family == "hexagon") return build_hexagon_mesh(level);
  if (preset.mesh_family == "square") return build_square_mesh(level);
  throw ConfigError("preset \"" + preset.name + "\" has unknown mesh family " + preset.mesh_family);
}

double preset_nominal_spacing(int level) { return std::ldexp(1.0, -level); }

StudyProblem to_study(const Preset& preset) {
  StudyProblem s;
  s.name = preset.name;
  s.kind = preset.kind;
  s.make_mesh = [&preset](int level) { return build_preset_mesh(preset, level); };
  s.spacing = [](int level) { return preset_nominal_spacing(level); };
  s.make_spec = preset.make_spec;
  s.exact_scalar = preset.exact_scalar;
  s.exact_scalar_grad = preset.exact_scalar_grad;
  s.exact_vector = preset.exact_vector;
  s.exact_vector_curl = preset.exact_vector_curl;
  return s;
}

}  // namespace emfd
