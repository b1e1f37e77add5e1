#pragma once

/**
 * @file config.hpp
 * @brief JSON run configuration, validation, and section file IO.
 *
 * One RunConfig feeds every CLI subcommand; each command reads the fields it
 * needs. Validation failures throw ConfigError before any computation
 * starts (the CLI maps that to exit code 2).
 *
 * Irrep labels in JSON: circle weights are plain integers, torus weights are
 * integer arrays, SU(2) spins are the number j (0.5, 1, 1.5, ...). Section
 * files hold {"rho": <label>, "matrix": [[re, im], ...]} with the matrix
 * flattened row-major.
 */

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahlercst/complexifier.hpp"
#include "kahlercst/group.hpp"
#include "kahlercst/quadrature.hpp"
#include "kahlercst/sections.hpp"

namespace kcst {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  GroupModel model = GroupModel::circle();
  Complexifier comp = Complexifier::quadratic();
  QuadratureSpec quad;

  std::vector<IrrepLabel> irreps;

  std::vector<Tau> tau_grid;                       // geometry-check
  std::vector<double> tau2_grid;                   // norms / limit-scan
  std::vector<std::pair<double, double>> tau2_pairs;  // semigroup-scan
  Tau transform_tau;                               // transform
  std::string section_path;                        // transform input

  int samples = 200;
  double sample_radius = 1.5;
  std::uint64_t seed = 20240801;
  int workers = 1;
  std::string output;
  std::string cache;
};

namespace detail {

inline GroupModel parse_model(const std::string& name) {
  if (name == "s1") return GroupModel::circle();
  if (name == "su2") return GroupModel::su2();
  if (name.size() >= 2 && name[0] == 't') {
    const int rank = std::atoi(name.c_str() + 1);
    if (rank >= 1 && rank <= 6) return GroupModel::torus(rank);
  }
  throw ConfigError("unknown model '" + name + "' (expected s1, t<rank>, su2)");
}

inline Polynomial parse_poly(const json& j) {
  Polynomial p;
  for (const auto& v : j) p.c.push_back(v.get<double>());
  if (p.c.empty()) throw ConfigError("empty polynomial coefficient list");
  return p;
}

inline Complexifier parse_complexifier(const GroupModel& model, const json& j) {
  const std::string kind = j.value("kind", "quadratic");
  if (kind == "quadratic") return Complexifier::quadratic();
  if (kind == "abelian-profile") {
    if (model.kind() != ModelKind::Torus) {
      throw ConfigError("abelian-profile requires a torus model");
    }
    if (!j.contains("profiles")) {
      throw ConfigError("abelian-profile needs 'profiles'");
    }
    std::vector<Polynomial> profiles;
    for (const auto& pj : j.at("profiles")) profiles.push_back(parse_poly(pj));
    if (profiles.size() == 1) {
      profiles.resize(model.dim(), profiles[0]);
    }
    if (static_cast<int>(profiles.size()) != model.dim()) {
      throw ConfigError("abelian-profile needs one profile per coordinate");
    }
    for (const auto& p : profiles) {
      if (p.c.size() > 0 && p.c[0] != 0.0) {
        throw ConfigError("profile must vanish at 0 (constant term 0)");
      }
      if (p.c.size() > 1 && p.c[1] != 0.0) {
        throw ConfigError("profile must have critical point at 0 (linear term 0)");
      }
    }
    return Complexifier::abelian_profile(std::move(profiles));
  }
  if (kind == "radial-profile") {
    if (model.kind() != ModelKind::SU2) {
      throw ConfigError("radial-profile requires the su2 model");
    }
    if (!j.contains("coeffs")) throw ConfigError("radial-profile needs 'coeffs'");
    Polynomial phi = parse_poly(j.at("coeffs"));
    if (phi.c[0] != 0.0) throw ConfigError("radial profile must vanish at 0");
    if (phi.c.size() < 2 || phi.c[1] <= 0.0) {
      throw ConfigError("radial profile needs phi'(0) > 0");
    }
    return Complexifier::radial_profile(std::move(phi));
  }
  throw ConfigError("unknown complexifier kind '" + kind + "'");
}

inline IrrepLabel parse_json_label(const GroupModel& model, const json& j) {
  if (model.kind() == ModelKind::SU2) {
    const double sj = j.get<double>();
    const int two_j = static_cast<int>(std::lround(2.0 * sj));
    if (two_j < 0 || std::abs(2.0 * sj - two_j) > 1e-9) {
      throw ConfigError("su2 label must be a non-negative half-integer j");
    }
    return {{two_j}};
  }
  IrrepLabel rho;
  if (j.is_number_integer() && model.dim() == 1) {
    rho.data.push_back(j.get<int>());
    return rho;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != model.dim()) {
    throw ConfigError("torus label must be an integer array of length rank");
  }
  for (const auto& v : j) rho.data.push_back(v.get<int>());
  return rho;
}

inline json label_to_json(const GroupModel& model, const IrrepLabel& rho) {
  if (model.kind() == ModelKind::SU2) return 0.5 * rho.data[0];
  if (model.dim() == 1) return rho.data[0];
  return json(rho.data);
}

}  // namespace detail

inline int default_cutoff(const GroupModel& model) {
  if (model.kind() == ModelKind::SU2) return 10;  // 2j <= 10
  return model.dim() == 1 ? 12 : 3;
}

inline RunConfig parse_config(const json& j) {
  RunConfig cfg;
  cfg.model = detail::parse_model(j.value("model", "s1"));
  cfg.comp = j.contains("complexifier")
                 ? detail::parse_complexifier(cfg.model, j.at("complexifier"))
                 : Complexifier::quadratic();

  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    cfg.quad.scheme = parse_scheme(q.value("scheme", "gauss-legendre"));
    cfg.quad.nodes = q.value("nodes", 96);
    cfg.quad.radius = q.value("radius", 0.0);
    cfg.quad.tail_tol = q.value("tail_tol", 1e-16);
    if (cfg.quad.nodes < 8 || cfg.quad.nodes > 2048) {
      throw ConfigError("quadrature nodes must be in [8, 2048]");
    }
    if (cfg.quad.tail_tol <= 0.0 || cfg.quad.tail_tol > 1e-8) {
      throw ConfigError("tail_tol must be in (0, 1e-8]");
    }
    if (cfg.quad.radius < 0.0) throw ConfigError("radius must be >= 0");
  }

  if (j.contains("irreps")) {
    for (const auto& lj : j.at("irreps")) {
      cfg.irreps.push_back(detail::parse_json_label(cfg.model, lj));
    }
  } else {
    const int cutoff = j.value("irrep_cutoff", default_cutoff(cfg.model));
    if (cutoff < 0 || cutoff > 64) {
      throw ConfigError("irrep_cutoff must be in [0, 64]");
    }
    cfg.irreps = cfg.model.irreps_up_to(cutoff);
  }
  if (cfg.irreps.empty()) throw ConfigError("empty irrep list");

  if (j.contains("tau_grid")) {
    for (const auto& tj : j.at("tau_grid")) {
      if (!tj.is_array() || tj.size() != 2) {
        throw ConfigError("tau_grid entries must be [tau1, tau2] pairs");
      }
      const Tau t{tj[0].get<double>(), tj[1].get<double>()};
      if (!t.is_kahler()) throw ConfigError("tau_grid requires tau2 > 0");
      cfg.tau_grid.push_back(t);
    }
  }
  if (j.contains("tau2_grid")) {
    for (const auto& v : j.at("tau2_grid")) {
      const double t2 = v.get<double>();
      if (t2 < 0.0) throw ConfigError("tau2_grid requires tau2 >= 0");
      cfg.tau2_grid.push_back(t2);
    }
  }
  if (j.contains("tau2_pairs")) {
    for (const auto& pj : j.at("tau2_pairs")) {
      if (!pj.is_array() || pj.size() != 2) {
        throw ConfigError("tau2_pairs entries must be [t, t'] pairs");
      }
      const double a = pj[0].get<double>(), b = pj[1].get<double>();
      if (a <= 0.0 || b <= 0.0) throw ConfigError("tau2_pairs must be positive");
      cfg.tau2_pairs.emplace_back(a, b);
    }
  }
  if (j.contains("tau")) {
    const auto& tj = j.at("tau");
    if (!tj.is_array() || tj.size() != 2) {
      throw ConfigError("tau must be [tau1, tau2]");
    }
    cfg.transform_tau = Tau{tj[0].get<double>(), tj[1].get<double>()};
  }

  cfg.section_path = j.value("section", "");
  cfg.samples = j.value("samples", 200);
  cfg.sample_radius = j.value("sample_radius", 1.5);
  cfg.seed = j.value("seed", static_cast<std::uint64_t>(20240801));
  cfg.workers = j.value("workers", 1);
  cfg.output = j.value("output", "");
  cfg.cache = j.value("cache", "");

  if (cfg.samples < 1 || cfg.samples > 100000) {
    throw ConfigError("samples must be in [1, 100000]");
  }
  if (cfg.sample_radius <= 0.0) throw ConfigError("sample_radius must be > 0");
  if (cfg.workers < 1 || cfg.workers > 256) {
    throw ConfigError("workers must be in [1, 256]");
  }

  // Positivity certificate for non-quadratic complexifiers: the Hessian must
  // stay positive definite well beyond the sampled fiber region.
  if (cfg.comp.kind() != ComplexifierKind::Quadratic) {
    const double radius = std::max(cfg.sample_radius, 8.0);
    const double mineig = min_hessian_eigenvalue(cfg.model, cfg.comp, radius);
    if (!(mineig > 0.0)) {
      throw ConfigError("complexifier Hessian is not positive definite "
                        "within radius " + fmt17(radius));
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

// -- Section files -----------------------------------------------------------

inline PeterWeylSection read_section(const GroupModel& model,
                                     const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open section file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("section JSON parse error: ") + e.what());
  }
  const json entries = j.is_array() ? j : j.value("entries", json::array());
  PeterWeylSection s;
  s.basis_tau = Tau{0.0, 0.0};
  try {
    for (const auto& ej : entries) {
      const IrrepLabel rho = detail::parse_json_label(model, ej.at("rho"));
      const int d = model.irrep_dim(rho);
      const auto& mj = ej.at("matrix");
      if (static_cast<int>(mj.size()) != d * d) {
        throw ConfigError("section matrix for rho=" + model.label_string(rho) +
                          " must have " + std::to_string(d * d) +
                          " [re, im] entries");
      }
      MatC A(d, d);
      for (int idx = 0; idx < d * d; ++idx) {
        const auto& pj = mj[idx];
        if (!pj.is_array() || pj.size() != 2) {
          throw ConfigError("matrix entries must be [re, im] pairs");
        }
        A(idx / d, idx % d) = cd(pj[0].get<double>(), pj[1].get<double>());
      }
      s.terms.emplace_back(rho, A);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("section field error: ") + e.what());
  }
  if (s.terms.empty()) throw ConfigError("section file has no entries");
  return s;
}

inline ordered_json section_to_json(const GroupModel& model,
                                    const PeterWeylSection& s) {
  ordered_json entries = ordered_json::array();
  for (const auto& [rho, A] : s.terms) {
    ordered_json ej;
    ej["rho"] = detail::label_to_json(model, rho);
    ordered_json m = ordered_json::array();
    const int d = model.irrep_dim(rho);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        m.push_back({A(a, b).real(), A(a, b).imag()});
      }
    }
    ej["matrix"] = std::move(m);
    entries.push_back(std::move(ej));
  }
  return entries;
}

}  // namespace kcst
