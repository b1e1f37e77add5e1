#pragma once

/**
 * @file measure.hpp
 * @brief The Kaehler-adapted measure on T*K, Peter-Weyl coefficient norms,
 *        and the independent joint-quadrature route to the same inner
 *        products.
 *
 * In left trivialization the inner product of two sections reduces to a
 * group integral (probability Haar) times a fiber integral against
 *
 *   density(Y; tau2) = e^{-kappa(Y)} tau2^{n/2} eta(tau2 u(Y))
 *                      sqrt(det H(Y)) / pi^{n/2},
 *
 * which is exactly |beta_tau|^2 |sqrt(Omega_tau)|^2 / pi^{n/2} for the frame
 * half-form and the fiber amplitude used in sections.hpp.
 *
 * Two independent evaluation routes are provided:
 *
 *  1. norm_a: Weyl orthogonality reduces <rho_ab, rho_cd> to the single
 *     scalar a_rho(tau2)^2 = (1/d^2) Int chi_rho(e^{2 i tau2 u}) density dY.
 *     Tori integrate over a truncated box, SU(2) over the radial coordinate
 *     (the class function only depends on |Y|).
 *
 *  2. joint_gram: no Weyl reduction. The Haar factor is integrated
 *     numerically over group nodes and contracted against fiber moments of
 *     the complexified representation matrices. Diagonal entries reproduce
 *     a_rho^2; off-diagonal entries vanish. This is the cross-check route
 *     and is also how tau1-independence of the norms is demonstrated.
 *
 * The boundary value is a definition, not a quadrature: a_rho(0) =
 * 1/sqrt(d_rho).
 */

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <tuple>

#include "kahlercst/complexifier.hpp"
#include "kahlercst/csv.hpp"
#include "kahlercst/group.hpp"
#include "kahlercst/quadrature.hpp"
#include "kahlercst/types.hpp"

namespace kcst {

namespace detail {

/// log(sinh(x)/x), stable for the whole double range.
inline double log_sinhc(double x) {
  x = std::abs(x);
  if (x < 1e-8) return std::log1p(x * x / 6.0);
  if (x > 20.0) return x + std::log((1.0 - std::exp(-2.0 * x)) / (2.0 * x));
  return std::log(std::sinh(x) / x);
}

}  // namespace detail

/// log of the fiber measure density (see file comment).
inline double log_measure_density(const GroupModel& model,
                                  const Complexifier& c, const VecD& Y,
                                  double tau2) {
  const int n = model.dim();
  const VecD u = c.grad_u(Y);
  double log_eta = 0.0;
  if (model.kind() == ModelKind::SU2) {
    log_eta = detail::log_sinhc(tau2 * u.norm());
  }
  const double det_h = c.hessian(Y).determinant();
  return -c.kappa(Y, tau2) + 0.5 * n * (std::log(tau2) - std::log(kPi)) +
         log_eta + 0.5 * std::log(det_h);
}

inline double measure_density(const GroupModel& model, const Complexifier& c,
                              const VecD& Y, double tau2) {
  return std::exp(log_measure_density(model, c, Y, tau2));
}

/// Coefficient norm with a node-doubling error estimate (absolute, on a).
struct NormValue {
  double a = 0.0;
  double err = 0.0;
};

namespace detail {

/// log chi_rho(e^{2 i tau2 u}) for the radial SU(2) character,
/// chi = sum_{m=-j..j} e^{2 tau2 m |u|}, evaluated overflow-free.
inline double log_su2_character(int two_j, double s) {
  // s = 2 tau2 |u| >= 0; chi = e^{s j} sum_{k=0}^{2j} e^{-s k}.
  const double j = 0.5 * two_j;
  double tail = 0.0;
  for (int k = 0; k <= two_j; ++k) tail += std::exp(-s * k);
  return s * j + std::log(tail);
}

/// log of the norm integrand for tori (integration variable Y).
inline double torus_norm_log_integrand(const GroupModel& model,
                                       const Complexifier& c,
                                       const IrrepLabel& rho, double tau2,
                                       const VecD& Y) {
  const VecD u = c.grad_u(Y);
  double nu = 0.0;
  for (int i = 0; i < Y.size(); ++i) nu += rho.data[i] * u(i);
  return -2.0 * tau2 * nu + log_measure_density(model, c, Y, tau2);
}

/// log of the radial norm integrand for SU(2) (variable r = |Y|, r > 0);
/// includes the 4 pi r^2 shell factor.
inline double su2_norm_log_integrand(const GroupModel& model,
                                     const Complexifier& c,
                                     const IrrepLabel& rho, double tau2,
                                     double r) {
  VecD Y = VecD::Zero(3);
  Y(2) = r;
  const double us = c.grad_u(Y).norm();
  return std::log(4.0 * kPi) + 2.0 * std::log(std::max(r, 1e-300)) +
         log_su2_character(rho.data[0], 2.0 * tau2 * us) +
         log_measure_density(model, c, Y, tau2);
}

}  // namespace detail

/// Truncation radius for the norm integrand of one irrep. For tori this is a
/// per-axis radius (the scan runs along each axis in turn and takes the
/// max); for SU(2) it bounds |Y|.
inline double norm_radius(const GroupModel& model, const Complexifier& c,
                          const IrrepLabel& rho, double tau2,
                          const QuadratureSpec& spec) {
  // Grow from a small seed; a large seed cannot shrink and would spread the
  // nodes of sharply truncated integrands (e.g. quartic profiles at small
  // tau2) over dead range.
  if (spec.radius > 0.0) return spec.radius;
  const double r0 = 1.0;
  if (model.kind() == ModelKind::SU2) {
    return auto_radius(
        [&](double r) {
          return detail::su2_norm_log_integrand(model, c, rho, tau2, r);
        },
        r0, spec.tail_tol, false);
  }
  double R = 0.0;
  const int n = model.dim();
  for (int axis = 0; axis < n; ++axis) {
    R = std::max(R, auto_radius(
                        [&](double y) {
                          VecD Y = VecD::Zero(n);
                          Y(axis) = y;
                          return detail::torus_norm_log_integrand(model, c, rho,
                                                                  tau2, Y);
                        },
                        r0, spec.tail_tol, true));
  }
  return R;
}

/**
 * @brief a_rho(tau2) by the Weyl-reduced quadrature route.
 *
 * tau2 = 0 returns the boundary definition 1/sqrt(d) with zero error.
 * The reported value uses 2N nodes; err = |a(2N) - a(N)|.
 */
inline NormValue norm_a(const GroupModel& model, const Complexifier& c,
                        const IrrepLabel& rho, double tau2,
                        const QuadratureSpec& spec) {
  const int d = model.irrep_dim(rho);
  if (tau2 == 0.0) return {1.0 / std::sqrt(static_cast<double>(d)), 0.0};
  if (tau2 < 0.0) throw VerticalBoundaryError("norm_a: tau2 < 0");

  const double R = norm_radius(model, c, rho, tau2, spec);
  auto integral = [&](int nodes) {
    if (model.kind() == ModelKind::SU2) {
      return integrate_interval(
          [&](double r) {
            return std::exp(
                detail::su2_norm_log_integrand(model, c, rho, tau2, r));
          },
          0.0, R, spec.scheme, nodes);
    }
    const int n = model.dim();
    double acc = 0.0;
    for (const auto& nd : box_nodes(VecD::Constant(n, R), spec.scheme, nodes)) {
      acc += nd.w * std::exp(detail::torus_norm_log_integrand(model, c, rho,
                                                              tau2, nd.y));
    }
    return acc;
  };

  const double i1 = integral(spec.nodes);
  const double i2 = integral(2 * spec.nodes);
  const double a2 = i2 / (d * d);
  NormValue out;
  out.a = std::sqrt(a2);
  out.err = std::abs(i2 - i1) / (d * d) / std::max(2.0 * out.a, 1e-300);
  return out;
}

/**
 * @brief Memoizing norm table with an optional CSV cache.
 *
 * Cache rows are keyed by (model, complexifier fingerprint, rho, tau2);
 * rows belonging to other models/complexifiers are preserved verbatim on
 * rewrite. Saving goes through a temp file + rename.
 */
class NormTable {
 public:
  NormTable(const GroupModel& model, const Complexifier& c,
            const QuadratureSpec& spec)
      : model_(model), comp_(c), spec_(spec), fp_(c.fingerprint()) {}

  const GroupModel& model() const { return model_; }
  const Complexifier& complexifier() const { return comp_; }
  const QuadratureSpec& spec() const { return spec_; }

  NormValue ensure(const IrrepLabel& rho, double tau2) {
    const Key key{rho, tau2};
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    const NormValue v = norm_a(model_, comp_, rho, tau2, spec_);
    values_.emplace(key, v);
    return v;
  }

  /// Look up without computing; returns nullptr when absent.
  const NormValue* find(const IrrepLabel& rho, double tau2) const {
    auto it = values_.find(Key{rho, tau2});
    return it == values_.end() ? nullptr : &it->second;
  }

  void insert(const IrrepLabel& rho, double tau2, NormValue v) {
    values_[Key{rho, tau2}] = v;
  }

  std::size_t size() const { return values_.size(); }

  static const CsvRow& cache_header() {
    static const CsvRow h = {"model", "h_fingerprint", "rho",
                             "tau2",  "a",             "err"};
    return h;
  }

  /// Merge matching rows from a cache file (missing file is fine).
  void load_cache(const std::string& path) {
    namespace fs = std::filesystem;
    foreign_rows_.clear();
    if (!fs::exists(path)) return;
    const auto rows = read_csv(path);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.size() != 6 || (i == 0 && row[0] == "model")) continue;
      if (row[0] == model_.name() && row[1] == fp_) {
        const IrrepLabel rho = model_.parse_label(row[2]);
        values_[Key{rho, std::strtod(row[3].c_str(), nullptr)}] =
            NormValue{std::strtod(row[4].c_str(), nullptr),
                      std::strtod(row[5].c_str(), nullptr)};
      } else {
        foreign_rows_.push_back(row);
      }
    }
  }

  /// Rewrite the cache with current contents (plus preserved foreign rows),
  /// sorted canonically so identical tables produce identical bytes.
  void save_cache(const std::string& path) const {
    std::vector<CsvRow> rows = foreign_rows_;
    for (const auto& [key, v] : values_) {
      rows.push_back({model_.name(), fp_, model_.label_string(key.rho),
                      fmt17(key.tau2), fmt17(v.a), fmt17(v.err)});
    }
    std::sort(rows.begin(), rows.end());
    write_csv_atomic(path, cache_header(), rows);
  }

 private:
  struct Key {
    IrrepLabel rho;
    double tau2;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.rho.data != b.rho.data) return a.rho.data < b.rho.data;
      return a.tau2 < b.tau2;
    }
  };

  GroupModel model_;
  Complexifier comp_;
  QuadratureSpec spec_;
  std::string fp_;
  std::map<Key, NormValue> values_;
  std::vector<CsvRow> foreign_rows_;
};

// ---------------------------------------------------------------------------
// Joint route: group x fiber quadrature without Weyl reduction.
// ---------------------------------------------------------------------------

/// Flattened index basis for the matrix-element sections of a label set.
struct SectionBasis {
  std::vector<IrrepLabel> labels;
  std::vector<int> offsets;  ///< block start per label
  int total = 0;

  static SectionBasis build(const GroupModel& model,
                            const std::vector<IrrepLabel>& labels) {
    SectionBasis b;
    b.labels = labels;
    for (const auto& rho : labels) {
      b.offsets.push_back(b.total);
      const int d = model.irrep_dim(rho);
      b.total += d * d;
    }
    return b;
  }
};

/**
 * @brief Gram matrix of all matrix-element sections rho_ab at complex time
 *        tau, by the factorized group x fiber quadrature.
 *
 * Index (rho, a, b) is flattened row-major per block in label order. The
 * group factor T uses `haar_order` nodes (exact for the shipped label sets);
 * the fiber factor integrates the complexified matrices against the measure
 * density. No Weyl orthogonality or character reduction is used anywhere on
 * this route.
 */
inline MatC joint_gram(const GroupModel& model, const Complexifier& c,
                       const std::vector<IrrepLabel>& labels, Tau tau,
                       const QuadratureSpec& spec, int haar_order = 16) {
  if (!tau.is_kahler()) {
    throw VerticalBoundaryError("joint_gram: requires tau2 > 0");
  }
  const SectionBasis basis = SectionBasis::build(model, labels);
  const int N = basis.total;
  const double tau2 = tau.t2;

  // Group factor: T = E[ conj(E(x)) E(x)^T ] over Haar nodes, where E(x)
  // stacks all entries of all rho(x).
  MatC T = MatC::Zero(N, N);
  {
    const auto nodes = model.haar_nodes(haar_order);
    VecC E(N);
    for (const auto& nd : nodes) {
      int pos = 0;
      for (const auto& rho : basis.labels) {
        const MatC R = model.irrep_matrix(rho, nd.x);
        const int d = model.irrep_dim(rho);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) E(pos++) = R(a, b);
      }
      T += nd.w * (E.conjugate() * E.transpose());
    }
  }

  // Fiber factor: M = Int conj(F(Y)) F(Y)^T density(Y) dY with F stacking
  // all entries of rho(e^{tau u(Y)}) = exp(tau drho(u)).
  MatC M = MatC::Zero(N, N);
  {
    double R = 0.0;
    for (const auto& rho : labels) {
      R = std::max(R, norm_radius(model, c, rho, tau2, spec));
    }
    auto accumulate = [&](const VecD& Y, double w) {
      const VecD u = c.grad_u(Y);
      const double dens = measure_density(model, c, Y, tau2);
      VecC F(N);
      int pos = 0;
      for (const auto& rho : basis.labels) {
        const MatC Rm = model.drho_exp(rho, tau.value(), u);
        const int d = model.irrep_dim(rho);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) F(pos++) = Rm(a, b);
      }
      M += (w * dens) * (F.conjugate() * F.transpose());
    };

    if (model.kind() == ModelKind::SU2) {
      // Spherical product rule: Gauss in r and cos(theta), uniform in phi.
      const auto [xr, wr] = interval_nodes(0.0, R, spec.scheme, spec.nodes);
      const auto [xc, wc] =
          interval_nodes(-1.0, 1.0, QuadScheme::GaussLegendre, 24);
      const int nphi = 48;
      for (int ir = 0; ir < xr.size(); ++ir) {
        for (int ic = 0; ic < xc.size(); ++ic) {
          const double st = std::sqrt(std::max(0.0, 1.0 - xc(ic) * xc(ic)));
          for (int ip = 0; ip < nphi; ++ip) {
            const double phi = 2.0 * kPi * ip / nphi;
            VecD Y(3);
            Y << xr(ir) * st * std::cos(phi), xr(ir) * st * std::sin(phi),
                xr(ir) * xc(ic);
            accumulate(Y, wr(ir) * xr(ir) * xr(ir) * wc(ic) * 2.0 * kPi / nphi);
          }
        }
      }
    } else {
      for (const auto& nd :
           box_nodes(VecD::Constant(model.dim(), R), spec.scheme, spec.nodes)) {
        accumulate(nd.y, nd.w);
      }
    }
  }

  // Contract inner representation indices: Gram[(rho,a,b),(rho',c,d)] =
  // sum_{e,f} T[(rho,a,e),(rho',c,f)] M[(rho,e,b),(rho',f,d)].
  MatC G = MatC::Zero(N, N);
  for (std::size_t p = 0; p < basis.labels.size(); ++p) {
    const int dp = model.irrep_dim(basis.labels[p]);
    const int op = basis.offsets[p];
    for (std::size_t q = 0; q < basis.labels.size(); ++q) {
      const int dq = model.irrep_dim(basis.labels[q]);
      const int oq = basis.offsets[q];
      for (int a = 0; a < dp; ++a)
        for (int b = 0; b < dp; ++b)
          for (int cc = 0; cc < dq; ++cc)
            for (int dd = 0; dd < dq; ++dd) {
              cd acc(0.0, 0.0);
              for (int e = 0; e < dp; ++e)
                for (int f = 0; f < dq; ++f) {
                  acc += T(op + a * dp + e, oq + cc * dq + f) *
                         M(op + e * dp + b, oq + f * dq + dd);
                }
              G(op + a * dp + b, oq + cc * dq + dd) = acc;
            }
    }
  }
  return G;
}

}  // namespace kcst
