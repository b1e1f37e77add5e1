#pragma once

/**
 * @file transform.hpp
 * @brief Unitarized coherent-state transforms on truncated Peter-Weyl data.
 *
 * Against the tau-adapted basis the analytic-continuation evolution acts on
 * coefficients as the identity (sections.hpp::evolve), so the whole
 * transform U_tau is carried by the unitarizer: the per-irrep scalar
 *
 *   lambda_rho(tau2) = a_rho(0) / a_rho(tau2),   a_rho(0) = 1/sqrt(d_rho),
 *
 * applied to coefficients in the tau = 0 basis before the basis change.
 * U_tau is then an exact isometry from the truncated L^2(K) span onto the
 * tau-span by construction, and it commutes with both K-translation actions
 * because it is scalar on each isotypic block.
 *
 * The semigroup defect |log lambda(t+t') - log lambda(t) - log lambda(t')|
 * measures whether the unitarized family composes like a one-parameter
 * semigroup: it vanishes identically for the quadratic complexifier (heat
 * kernel case) and is strictly positive for non-quadratic ones.
 */

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kahlercst/measure.hpp"
#include "kahlercst/sections.hpp"

namespace kcst {

/// Per-irrep unitarizing scalars at one complex time (phases are trivial for
/// the shipped models: the norm ratios are real positive).
struct Unitarizer {
  Tau tau;
  std::vector<IrrepLabel> labels;
  std::vector<double> lambda;
  std::vector<double> rel_err;  ///< relative error bound inherited from a_rho

  double lambda_of(const IrrepLabel& rho) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == rho) return lambda[i];
    }
    throw std::out_of_range("unitarizer: label not covered");
  }
};

inline Unitarizer build_unitarizer(NormTable& table,
                                   const std::vector<IrrepLabel>& labels,
                                   Tau tau) {
  Unitarizer u;
  u.tau = tau;
  for (const auto& rho : labels) {
    const int d = table.model().irrep_dim(rho);
    const NormValue nv = table.ensure(rho, tau.t2);
    u.labels.push_back(rho);
    u.lambda.push_back(1.0 / (std::sqrt(static_cast<double>(d)) * nv.a));
    u.rel_err.push_back(nv.err / nv.a);
  }
  return u;
}

/// E(tau, h): scale each coefficient block by lambda_rho. Acts on tau = 0
/// data (the unitarizer is defined on the untransformed side).
inline PeterWeylSection apply_unitarizer(const Unitarizer& u,
                                         const PeterWeylSection& s) {
  if (!s.basis_tau.is_zero()) {
    throw std::invalid_argument(
        "apply_unitarizer: section must be in the tau = 0 basis");
  }
  PeterWeylSection out = s;
  for (auto& [rho, A] : out.terms) A *= u.lambda_of(rho);
  return out;
}

/// The full transform U_tau = (basis change to tau) o E(tau, h).
inline PeterWeylSection cst(NormTable& table, const PeterWeylSection& s,
                            Tau tau) {
  const std::vector<IrrepLabel> labels = [&] {
    std::vector<IrrepLabel> ls;
    for (const auto& [rho, A] : s.terms) ls.push_back(rho);
    return ls;
  }();
  const Unitarizer u = build_unitarizer(table, labels, tau);
  return evolve(apply_unitarizer(u, s), tau);
}

/// Norm of a section in its own basis: sqrt(sum_rho a_rho(tau2)^2 |A|_F^2).
/// tau1 does not enter (the adapted norms depend on tau2 only).
inline double section_norm(NormTable& table, const PeterWeylSection& s) {
  double acc = 0.0;
  for (const auto& [rho, A] : s.terms) {
    const NormValue nv = table.ensure(rho, s.basis_tau.t2);
    acc += nv.a * nv.a * A.squaredNorm();
  }
  return std::sqrt(acc);
}

/// |log lambda(t+t') - log lambda(t) - log lambda(t')| with a first-order
/// error bound propagated from the three quadratures involved.
struct SemigroupDefect {
  double defect = 0.0;
  double err_bound = 0.0;
};

inline SemigroupDefect semigroup_defect(NormTable& table, const IrrepLabel& rho,
                                        double t2a, double t2b) {
  const int d = table.model().irrep_dim(rho);
  const double sq = std::sqrt(static_cast<double>(d));
  const NormValue va = table.ensure(rho, t2a);
  const NormValue vb = table.ensure(rho, t2b);
  const NormValue vab = table.ensure(rho, t2a + t2b);
  // log lambda(t) = -log(sqrt(d) a(t))
  const double defect = std::abs(std::log(sq) + std::log(va.a) +
                                 std::log(vb.a) - std::log(vab.a));
  const double err =
      va.err / va.a + vb.err / vb.a + vab.err / vab.a + 1e-15;
  return {defect, err};
}

}  // namespace kcst
