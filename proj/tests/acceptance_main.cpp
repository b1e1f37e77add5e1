/**
 * Acceptance gate: each criterion prints one PASS/FAIL line per check and
 * the binary exits nonzero if any check in the requested criterion fails.
 *
 * Usage: acceptance --criterion N [--cli PATH] [--workdir DIR]
 *
 * --cli and --workdir are required only by criterion 9 (CLI determinism).
 */

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kahlercst/config.hpp"
#include "kahlercst/frames.hpp"
#include "kahlercst/measure.hpp"
#include "kahlercst/runner.hpp"
#include "kahlercst/transform.hpp"

using namespace kcst;
namespace fs = std::filesystem;

namespace {

struct Checker {
  int fails = 0;
  int total = 0;

  void check(bool ok, const std::string& name, const std::string& detail) {
    ++total;
    if (!ok) ++fails;
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
};

std::string eng(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

const Polynomial kQuarticProfile{{0.0, 0.0, 0.5, 0.0, 0.25}};
const Polynomial kQuarticRadial{{0.0, 0.5, 0.25}};

// ---------------------------------------------------------------------------
// Criterion 1: geometry residuals on random samples for every model and
// fiber-function pair.
// ---------------------------------------------------------------------------

std::vector<double> predicted_positivity(const GroupModel& model,
                                         const Complexifier& c, const VecD& Y,
                                         double t2) {
  // One eigenvalue g(mu)/h per joint eigenvector of (ad_u, H), with
  // g(mu) = mu / (e^{2 t2 mu} - 1), g(0) = 1/(2 t2). For abelian models
  // ad = 0, so the H eigenbasis itself is the joint basis.
  const MatD H = c.hessian(Y);
  std::vector<double> out;
  if (model.kind() == ModelKind::Torus) {
    Eigen::SelfAdjointEigenSolver<MatD> es(H);
    for (int k = 0; k < H.rows(); ++k) {
      out.push_back(1.0 / (2.0 * t2 * es.eigenvalues()(k)));
    }
  } else {
    const AdSpectral sp = ad_spectral(model.ad_matrix(c.grad_u(Y)));
    const MatC Hs = sp.U.adjoint() * H.cast<cd>() * sp.U;
    for (int k = 0; k < sp.mu.size(); ++k) {
      const double mu = sp.mu(k);
      const double hk = Hs(k, k).real();
      const double g = std::abs(mu) < 1e-12
                           ? 1.0 / (2.0 * t2)
                           : mu / std::expm1(2.0 * t2 * mu);
      out.push_back(g / hk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int criterion_geometry() {
  struct Pair {
    std::string name;
    GroupModel model;
    Complexifier comp;
    double radius;
    std::vector<Tau> taus;
  };
  const std::vector<Tau> default_taus = {Tau{0.0, 1.0}, Tau{0.5, 1.0},
                                         Tau{0.0, 0.25}, Tau{-2.0, 1.0},
                                         Tau{0.7, 2.0}};
  // The su2/quartic pair keeps tau2 |u| below ~7 so the dense-determinant
  // half-form route stays within its conditioning budget (residual floors
  // scale with e^{tau2 |u|}).
  const std::vector<Tau> moderate_taus = {Tau{0.0, 1.0}, Tau{0.5, 1.0},
                                          Tau{0.0, 0.25}, Tau{-2.0, 1.0}};
  std::vector<Pair> pairs;
  pairs.push_back({"s1/quadratic", GroupModel::circle(),
                   Complexifier::quadratic(), 1.5, default_taus});
  pairs.push_back({"s1/quartic", GroupModel::circle(),
                   Complexifier::abelian_profile({kQuarticProfile}), 1.5,
                   default_taus});
  pairs.push_back({"t2/quadratic", GroupModel::torus(2),
                   Complexifier::quadratic(), 1.5, default_taus});
  pairs.push_back({"t2/quartic", GroupModel::torus(2),
                   Complexifier::abelian_profile(
                       {kQuarticProfile, kQuarticProfile}),
                   1.5, default_taus});
  pairs.push_back({"su2/quadratic", GroupModel::su2(),
                   Complexifier::quadratic(), 1.5, default_taus});
  pairs.push_back({"su2/quartic", GroupModel::su2(),
                   Complexifier::radial_profile(kQuarticRadial), 1.0,
                   moderate_taus});

  Checker ck;
  const int samples = 200;
  for (const auto& pr : pairs) {
    double max_type11 = 0.0, max_duality = 0.0, max_theta = 0.0;
    double min_eig = 1e300, max_eig_dev = 0.0, max_hf = 0.0;
    Rng rng(20240801);
    const int n = pr.model.dim();
    for (int i = 0; i < samples; ++i) {
      (void)pr.model.random_element(rng);  // keep the sampling stream aligned
      VecD Y(n);
      for (int k = 0; k < n; ++k) Y(k) = rng.uniform(-pr.radius, pr.radius);
      const Tau tau = pr.taus[i % pr.taus.size()];

      const FrameData fr = build_frame(pr.model, pr.comp, Y, tau);
      max_type11 = std::max(max_type11, check_type11(pr.model, fr, Y));
      max_duality = std::max(max_duality, duality_residual(fr));
      const ThetaResiduals th = theta_pairing_check(pr.comp, fr, Y);
      max_theta = std::max({max_theta, th.theta, th.fiber_derivative});

      Eigen::SelfAdjointEigenSolver<MatC> es(
          positivity_matrix(pr.model, fr, Y));
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      const auto want = predicted_positivity(pr.model, pr.comp, Y, tau.t2);
      for (int k = 0; k < n; ++k) {
        max_eig_dev = std::max(
            max_eig_dev, std::abs(es.eigenvalues()(k) - want[k]) /
                             std::max(1.0, std::abs(want[k])));
      }

      const HalfformNorm hf = halfform_norm(pr.model, pr.comp, Y, tau);
      max_hf = std::max(max_hf, std::abs(hf.closed - hf.via_determinant) /
                                    std::max(1.0, std::abs(hf.closed)));
    }
    ck.check(max_type11 <= 1e-10, "geometry " + pr.name + " isotropy",
             "max residual " + eng(max_type11) + " (<= 1e-10)");
    ck.check(max_duality <= 1e-10, "geometry " + pr.name + " frame duality",
             "max residual " + eng(max_duality) + " (<= 1e-10)");
    ck.check(min_eig > 0.0 && max_eig_dev <= 1e-9,
             "geometry " + pr.name + " positivity",
             "min eigenvalue " + eng(min_eig) + ", closed-form deviation " +
                 eng(max_eig_dev) + " (<= 1e-9)");
    ck.check(max_theta <= 1e-10, "geometry " + pr.name + " theta pairings",
             "max residual " + eng(max_theta) + " (<= 1e-10)");
    ck.check(max_hf <= 1e-9, "geometry " + pr.name + " half-form routes",
             "max relative gap " + eng(max_hf) + " (<= 1e-9)");
  }
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 2: circle heat multipliers.
// ---------------------------------------------------------------------------

int criterion_circle_multipliers() {
  Checker ck;
  const auto s1 = GroupModel::circle();
  const auto quad = Complexifier::quadratic();
  QuadratureSpec spec;
  NormTable table(s1, quad, spec);
  std::vector<IrrepLabel> labels;
  for (int n = -10; n <= 10; ++n) labels.push_back(IrrepLabel{{n}});
  for (const double t2 : {0.25, 0.5, 1.0, 2.0}) {
    const Unitarizer u = build_unitarizer(table, labels, Tau{0.0, t2});
    double max_rel = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const int n = labels[k].data[0];
      const double expect = std::exp(-0.5 * t2 * n * n);
      max_rel = std::max(max_rel,
                         std::abs(u.lambda[k] - expect) / expect);
    }
    ck.check(max_rel <= 1e-8,
             "circle multipliers at tau2 = " + fmt17(t2),
             "max relative error " + eng(max_rel) + " (<= 1e-8), |n| <= 10");
  }
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 3: su2 heat multipliers are affine in tau2 with Casimir slopes.
// ---------------------------------------------------------------------------

int criterion_su2_slopes() {
  Checker ck;
  const auto su2 = GroupModel::su2();
  const auto quad = Complexifier::quadratic();
  QuadratureSpec spec;
  NormTable table(su2, quad, spec);
  const std::vector<double> grid = {0.2, 0.4, 0.6, 0.8, 1.0};

  std::vector<double> slopes;
  for (const int two_j : {0, 1, 2}) {
    std::vector<double> ys;
    double pt_err = 0.0;
    for (const double t2 : grid) {
      const NormValue v = table.ensure(IrrepLabel{{two_j}}, t2);
      ys.push_back(-std::log(std::sqrt(two_j + 1.0) * v.a));
      pt_err = std::max(pt_err, v.err / v.a);
    }
    // Least-squares affine fit.
    const double m = grid.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sx += grid[i];
      sy += ys[i];
      sxx += grid[i] * grid[i];
      sxy += grid[i] * ys[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icept = (sy - slope * sx) / m;
    double max_res = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      max_res = std::max(max_res, std::abs(ys[i] - icept - slope * grid[i]));
    }
    const double bound = 10.0 * (pt_err + 1e-13);
    ck.check(max_res <= bound,
             "su2 log-multiplier affine in tau2, 2j = " + std::to_string(two_j),
             "max fit residual " + eng(max_res) + " (<= " + eng(bound) + ")");
    slopes.push_back(slope);
  }
  const double ratio = (slopes[2] - slopes[0]) / (slopes[1] - slopes[0]);
  const double target = 8.0 / 3.0;
  ck.check(std::abs(ratio - target) <= 0.01 * target,
           "su2 slope separation ratio",
           "ratio " + fmt17(ratio) + " vs 8/3, relative deviation " +
               eng(std::abs(ratio - target) / target) + " (<= 1e-2)");
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 4: tau1-independence of the joint-quadrature norms.
// ---------------------------------------------------------------------------

int criterion_tau1_independence() {
  Checker ck;
  QuadratureSpec spec;
  const std::vector<double> tau1s = {0.0, 0.7, -2.0};

  struct Setup {
    std::string name;
    GroupModel model;
    Complexifier comp;
    std::vector<IrrepLabel> labels;
    double cross_tol;
  };
  std::vector<Setup> setups;
  setups.push_back({"s1/quartic", GroupModel::circle(),
                    Complexifier::abelian_profile({kQuarticProfile}),
                    {IrrepLabel{{0}}, IrrepLabel{{1}}},
                    1e-8});
  setups.push_back({"su2/quadratic", GroupModel::su2(),
                    Complexifier::quadratic(),
                    {IrrepLabel{{0}}, IrrepLabel{{1}}},
                    1e-6});

  for (const auto& st : setups) {
    std::vector<MatC> grams;
    for (const double t1 : tau1s) {
      grams.push_back(
          joint_gram(st.model, st.comp, st.labels, Tau{t1, 1.0}, spec));
    }
    const int N = static_cast<int>(grams[0].rows());
    double spread = 0.0;
    for (int k = 0; k < N; ++k) {
      double lo = 1e300, hi = -1e300;
      for (const auto& G : grams) {
        lo = std::min(lo, G(k, k).real());
        hi = std::max(hi, G(k, k).real());
      }
      spread = std::max(spread, (hi - lo) / std::max(lo, 1e-300));
    }
    ck.check(spread <= 1e-7,
             "joint norms tau1-independent, " + st.name,
             "relative spread over tau1 in {0, 0.7, -2} is " + eng(spread) +
                 " (<= 1e-7)");

    // Cross-route: joint diagonal against the Weyl-reduced norms.
    double cross = 0.0;
    int pos = 0;
    for (const auto& rho : st.labels) {
      const double a = norm_a(st.model, st.comp, rho, 1.0, spec).a;
      const int d = st.model.irrep_dim(rho);
      for (int e = 0; e < d * d; ++e, ++pos) {
        cross = std::max(cross,
                         std::abs(grams[0](pos, pos).real() - a * a) / (a * a));
      }
    }
    ck.check(cross <= st.cross_tol,
             "joint norms match reduced route, " + st.name,
             "max relative gap " + eng(cross) + " (<= " + eng(st.cross_tol) +
                 ")");
  }
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 5: small-time boundary limit sqrt(d) a -> 1.
// ---------------------------------------------------------------------------

int criterion_boundary_limit() {
  Checker ck;
  QuadratureSpec spec;
  struct Setup {
    std::string name;
    GroupModel model;
    Complexifier comp;
    std::vector<IrrepLabel> labels;
  };
  // Trivial and fundamental representations per model: the first-order
  // Laplace bound concerns the tau2 -> 0 behaviour at fixed rho, and these
  // are the labels the boundary scans ship with.
  std::vector<Setup> setups;
  setups.push_back({"s1/quadratic", GroupModel::circle(),
                    Complexifier::quadratic(),
                    {IrrepLabel{{0}}, IrrepLabel{{1}}}});
  setups.push_back({"s1/quartic", GroupModel::circle(),
                    Complexifier::abelian_profile({kQuarticProfile}),
                    {IrrepLabel{{0}}, IrrepLabel{{1}}}});
  setups.push_back({"t2/quadratic", GroupModel::torus(2),
                    Complexifier::quadratic(),
                    {IrrepLabel{{0, 0}}, IrrepLabel{{1, 0}}}});
  setups.push_back({"t2/quartic", GroupModel::torus(2),
                    Complexifier::abelian_profile(
                        {kQuarticProfile, kQuarticProfile}),
                    {IrrepLabel{{0, 0}}, IrrepLabel{{1, 0}}}});
  setups.push_back({"su2/quadratic", GroupModel::su2(),
                    Complexifier::quadratic(),
                    {IrrepLabel{{0}}, IrrepLabel{{1}}}});
  setups.push_back({"su2/quartic", GroupModel::su2(),
                    Complexifier::radial_profile(kQuarticRadial),
                    {IrrepLabel{{0}}, IrrepLabel{{1}}}});

  for (const auto& st : setups) {
    for (const double t2 : {0.1, 0.03, 0.01}) {
      double max_dev = 0.0;
      for (const auto& rho : st.labels) {
        const double sq = std::sqrt(
            static_cast<double>(st.model.irrep_dim(rho)));
        const NormValue v = norm_a(st.model, st.comp, rho, t2, spec);
        max_dev = std::max(max_dev, std::abs(sq * v.a - 1.0));
      }
      const double bound = 5.0 * t2;
      ck.check(max_dev <= bound,
               "boundary limit " + st.name + " at tau2 = " + fmt17(t2),
               "max |sqrt(d) a - 1| = " + eng(max_dev) + " (<= " + eng(bound) +
                   ")");
    }
  }
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 6: semigroup composition of the unitarizers.
// ---------------------------------------------------------------------------

int criterion_semigroup() {
  Checker ck;
  QuadratureSpec spec;
  const std::vector<std::pair<double, double>> pairs = {
      {0.25, 0.25}, {0.25, 0.5}, {0.5, 0.5}, {0.5, 1.0}};

  struct Setup {
    std::string name;
    GroupModel model;
    IrrepLabel rho;
  };
  const std::vector<Setup> setups = {
      {"s1", GroupModel::circle(), IrrepLabel{{2}}},
      {"t2", GroupModel::torus(2), IrrepLabel{{1, 1}}},
      {"su2", GroupModel::su2(), IrrepLabel{{2}}},
  };
  for (const auto& st : setups) {
    NormTable table(st.model, Complexifier::quadratic(), spec);
    double max_defect = 0.0;
    for (const auto& [a, b] : pairs) {
      max_defect =
          std::max(max_defect, semigroup_defect(table, st.rho, a, b).defect);
    }
    ck.check(max_defect <= 1e-7,
             "heat semigroup composition, " + st.name,
             "max defect over the pair grid " + eng(max_defect) + " (<= 1e-7)");
  }

  // Non-quadratic control: the defect must be significant and match the
  // 40-digit reference 0.0019250014026413831176.
  const auto s1 = GroupModel::circle();
  NormTable table(s1, Complexifier::abelian_profile({kQuarticProfile}), spec);
  const SemigroupDefect d = semigroup_defect(table, IrrepLabel{{1}}, 0.5, 0.5);
  ck.check(d.defect > 100.0 * d.err_bound,
           "quartic semigroup defect is resolved",
           "defect " + eng(d.defect) + " > 100 x error bound " +
               eng(d.err_bound));
  const double ref = 0.0019250014026413831176;
  ck.check(std::abs(d.defect - ref) <= 1e-6 * ref,
           "quartic semigroup defect matches reference",
           "defect " + fmt17(d.defect) + " vs " + fmt17(ref));
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 7: transform isometry and translation intertwining on random
// 20-term sections.
// ---------------------------------------------------------------------------

int criterion_transform_sections() {
  Checker ck;
  QuadratureSpec spec;
  const std::vector<Tau> taus = {Tau{0.0, 1.0}, Tau{0.5, 1.0}, Tau{0.0, 2.0}};

  struct Setup {
    std::string name;
    GroupModel model;
    Complexifier comp;
    std::vector<IrrepLabel> labels;
  };
  std::vector<Setup> setups;
  {
    std::vector<IrrepLabel> circle_labels;
    for (int n = -10; n < 10; ++n) circle_labels.push_back(IrrepLabel{{n}});
    setups.push_back({"s1/quadratic", GroupModel::circle(),
                      Complexifier::quadratic(), circle_labels});
    setups.push_back({"s1/quartic", GroupModel::circle(),
                      Complexifier::abelian_profile({kQuarticProfile}),
                      circle_labels});
  }
  {
    const auto t2m = GroupModel::torus(2);
    auto all = t2m.irreps_up_to(2);
    all.resize(20);
    setups.push_back({"t2/quadratic", t2m, Complexifier::quadratic(), all});
  }
  {
    std::vector<IrrepLabel> su2_labels;
    for (int two_j = 0; two_j < 20; ++two_j)
      su2_labels.push_back(IrrepLabel{{two_j}});
    setups.push_back({"su2/quadratic", GroupModel::su2(),
                      Complexifier::quadratic(), su2_labels});
  }

  for (const auto& st : setups) {
    NormTable table(st.model, st.comp, spec);
    Rng rng(20240801);
    const PeterWeylSection s = random_section(st.model, st.labels, rng);
    const double n0 = section_norm(table, s);

    double max_iso = 0.0;
    for (const Tau tau : taus) {
      const double n1 = section_norm(table, cst(table, s, tau));
      max_iso = std::max(max_iso, std::abs(n1 - n0) / n0);
    }
    ck.check(max_iso <= 1e-7, "transform isometry, " + st.name,
             "max relative norm change " + eng(max_iso) +
                 " (<= 1e-7) over tau in {i, 0.5+i, 2i}");

    double max_int = 0.0;
    const Tau tau{0.5, 1.0};
    for (const ActionSide side : {ActionSide::Left, ActionSide::Right}) {
      for (int j = 0; j < st.model.dim(); ++j) {
        const auto a = cst(table, apply_k_generator(st.model, s, side, j), tau);
        const auto b = apply_k_generator(st.model, cst(table, s, tau), side, j);
        for (std::size_t k = 0; k < a.terms.size(); ++k) {
          const double scale =
              std::max(1e-300, a.terms[k].second.cwiseAbs().maxCoeff());
          max_int = std::max(
              max_int,
              (a.terms[k].second - b.terms[k].second).cwiseAbs().maxCoeff() /
                  scale);
        }
      }
    }
    ck.check(max_int <= 1e-13,
             "transform intertwines translations, " + st.name,
             "max relative coefficient gap " + eng(max_int) + " (<= 1e-13)");
  }
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 8: su2 joint Gram orthogonality for j <= 1.
// ---------------------------------------------------------------------------

int criterion_joint_gram() {
  Checker ck;
  QuadratureSpec spec;
  const auto su2 = GroupModel::su2();
  const auto quad = Complexifier::quadratic();
  const std::vector<IrrepLabel> labels = {IrrepLabel{{0}}, IrrepLabel{{1}},
                                          IrrepLabel{{2}}};
  const Tau tau{0.0, 1.0};
  const MatC G = joint_gram(su2, quad, labels, tau, spec);
  const int N = static_cast<int>(G.rows());  // 14

  double diag_sum = 0.0, off_sum = 0.0, min_diag = 1e300;
  for (int j = 0; j < N; ++j) {
    diag_sum += G(j, j).real();
    min_diag = std::min(min_diag, G(j, j).real());
    for (int k = 0; k < N; ++k) {
      if (j != k) off_sum += std::abs(G(j, k));
    }
  }
  ck.check(off_sum <= 1e-6 * diag_sum,
           "joint Gram off-diagonal mass, su2 j <= 1",
           "off-diagonal mass " + eng(off_sum) + " vs diagonal " +
               eng(diag_sum) + " (ratio " + eng(off_sum / diag_sum) +
               " <= 1e-6)");
  ck.check(min_diag > 0.0, "joint Gram diagonal positivity, su2 j <= 1",
           "min diagonal " + eng(min_diag));

  // Diagonal blocks agree with the reduced-route norms.
  double cross = 0.0;
  int pos = 0;
  for (const auto& rho : labels) {
    const double a = norm_a(su2, quad, rho, tau.t2, spec).a;
    const int d = su2.irrep_dim(rho);
    for (int e = 0; e < d * d; ++e, ++pos) {
      cross =
          std::max(cross, std::abs(G(pos, pos).real() - a * a) / (a * a));
    }
  }
  ck.check(cross <= 1e-6, "joint Gram diagonal matches reduced route",
           "max relative gap " + eng(cross) + " (<= 1e-6)");
  return ck.fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 9: CLI determinism (byte-identical reruns, worker independence,
// warm-cache stability).
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

int run_cli(const std::string& cli, const std::string& sub,
            const fs::path& config, const fs::path& log) {
  const std::string cmd = cli + " " + sub + " --config " + config.string() +
                          " >> " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int criterion_cli_determinism(const std::string& cli,
                              const std::string& workdir) {
  Checker ck;
  if (cli.empty() || workdir.empty()) {
    ck.check(false, "cli determinism setup",
             "--cli and --workdir are required for criterion 9");
    return 1;
  }
  const fs::path dir(workdir);
  fs::create_directories(dir);
  const fs::path log = dir / "cli.log";

  auto write_file = [&](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
  };

  // One tiny config per subcommand; two output paths + a worker variant.
  struct Job {
    std::string sub;
    std::string config_tmpl;  // @OUT@ and @WORKERS@ are substituted
  };
  std::vector<Job> jobs;
  jobs.push_back(
      {"geometry-check",
       R"({"model": "su2", "samples": 8, "sample_radius": 1.0,
           "workers": @WORKERS@, "output": "@OUT@"})"});
  jobs.push_back(
      {"norms",
       R"({"model": "s1", "irreps": [0, 1, 2], "tau2_grid": [0.5, 1.0],
           "workers": @WORKERS@, "output": "@OUT@"})"});
  jobs.push_back(
      {"limit-scan",
       R"({"model": "su2", "irreps": [0, 0.5], "tau2_grid": [0.1],
           "workers": @WORKERS@, "output": "@OUT@"})"});
  jobs.push_back(
      {"semigroup-scan",
       R"({"model": "s1", "irreps": [1, 2], "tau2_pairs": [[0.25, 0.25], [0.25, 0.5]],
           "workers": @WORKERS@, "output": "@OUT@"})"});
  const fs::path section = dir / "section.json";
  write_file(section,
             R"([{"rho": 0, "matrix": [[0.25, -1.0]]},
                 {"rho": 1, "matrix": [[2.0, 0.5]]},
                 {"rho": -2, "matrix": [[0.0, 1.0]]}])");
  jobs.push_back(
      {"transform",
       R"({"model": "s1", "tau": [0.5, 1.0], "section": ")" +
           section.string() + R"(",
           "workers": @WORKERS@, "output": "@OUT@"})"});

  auto substitute = [](std::string text, const std::string& key,
                       const std::string& value) {
    for (std::size_t at = text.find(key); at != std::string::npos;
         at = text.find(key)) {
      text.replace(at, key.size(), value);
    }
    return text;
  };

  for (const auto& job : jobs) {
    std::vector<std::string> outputs;
    const std::vector<std::pair<std::string, std::string>> variants = {
        {"run1", "1"}, {"run2", "1"}, {"run3", "4"}};
    bool all_zero = true;
    for (const auto& [tag, workers] : variants) {
      const fs::path out = dir / (job.sub + "_" + tag + ".out");
      const fs::path cfg = dir / (job.sub + "_" + tag + ".json");
      std::string text = substitute(job.config_tmpl, "@OUT@", out.string());
      text = substitute(text, "@WORKERS@", workers);
      write_file(cfg, text);
      const int rc = run_cli(cli, job.sub, cfg, log);
      all_zero = all_zero && rc == 0;
      outputs.push_back(slurp(out));
    }
    const bool identical =
        outputs[0] == outputs[1] && outputs[0] == outputs[2] &&
        !outputs[0].empty();
    ck.check(all_zero, "cli " + job.sub + " exits cleanly", "");
    ck.check(identical, "cli " + job.sub + " byte-deterministic",
             "two reruns and a 4-worker run produce identical bytes");
  }

  // Warm-cache rerun of norms: same bytes with a populated cache.
  {
    const fs::path out1 = dir / "norms_cache_1.out";
    const fs::path out2 = dir / "norms_cache_2.out";
    const fs::path cache = dir / "norms_cache.csv";
    auto cfg_text = [&](const fs::path& out) {
      return std::string(
                 R"({"model": "s1", "irreps": [0, 1], "tau2_grid": [0.5],)") +
             R"( "cache": ")" + cache.string() + R"(", "output": ")" +
             out.string() + R"("})";
    };
    const fs::path cfg1 = dir / "norms_cache_1.json";
    const fs::path cfg2 = dir / "norms_cache_2.json";
    write_file(cfg1, cfg_text(out1));
    write_file(cfg2, cfg_text(out2));
    const int rc1 = run_cli(cli, "norms", cfg1, log);
    const bool cache_exists = fs::exists(cache);
    const int rc2 = run_cli(cli, "norms", cfg2, log);
    ck.check(rc1 == 0 && rc2 == 0 && cache_exists,
             "cli norms cache round-trip",
             "cold and warm runs exit 0 and the cache file exists");
    ck.check(!slurp(out1).empty() && slurp(out1) == slurp(out2),
             "cli norms warm-cache byte-deterministic", "");
  }
  return ck.fails == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  std::string cli, workdir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "missing value for %s\n", arg.c_str());
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--criterion") {
      criterion = std::atoi(next().c_str());
    } else if (arg == "--cli") {
      cli = next();
    } else if (arg == "--workdir") {
      workdir = next();
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
      return 2;
    }
  }

  int rc = 2;
  switch (criterion) {
    case 1: rc = criterion_geometry(); break;
    case 2: rc = criterion_circle_multipliers(); break;
    case 3: rc = criterion_su2_slopes(); break;
    case 4: rc = criterion_tau1_independence(); break;
    case 5: rc = criterion_boundary_limit(); break;
    case 6: rc = criterion_semigroup(); break;
    case 7: rc = criterion_transform_sections(); break;
    case 8: rc = criterion_joint_gram(); break;
    case 9: rc = criterion_cli_determinism(cli, workdir); break;
    default:
      std::fprintf(stderr, "usage: acceptance --criterion <1..9> [--cli PATH] "
                           "[--workdir DIR]\n");
      return 2;
  }
  std::printf("CRITERION %d: %s\n", criterion, rc == 0 ? "PASS" : "FAIL");
  return rc;
}
