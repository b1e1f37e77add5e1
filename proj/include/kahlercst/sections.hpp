#pragma once

/**
 * @file sections.hpp
 * @brief Truncated Peter-Weyl sections and their complexified evaluation.
 *
 * A section is a finite sum f = sum_rho Tr(A_rho rho(.)) tagged with the
 * complex time tau of the adapted basis it is expressed in:
 *
 *  - basis tau = 0: the bare L^2(K) function x -> sum Tr(A rho(x)).
 *  - basis tau != 0: the same coefficients against the tau-adapted basis;
 *    pointwise value sum Tr(A rho(x) exp(tau drho(u(Y)))) beta_tau(Y) with
 *    fiber amplitude beta_tau(Y) = pi^{-n/4} e^{i tau (B(u,Y) - h(Y))}.
 *
 * The complexified factor exp(tau drho(u)) is the analytic continuation of
 * x -> rho(x) along the complexifier flow; series_continuation_check
 * verifies it against truncated Taylor sums of the derived representation.
 */

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kahlercst/complexifier.hpp"
#include "kahlercst/group.hpp"
#include "kahlercst/types.hpp"

namespace kcst {

struct PeterWeylSection {
  Tau basis_tau;
  std::vector<std::pair<IrrepLabel, MatC>> terms;
};

/// beta_tau(Y): scalar fiber amplitude of the tau-adapted basis sections.
inline cd fiber_amplitude(const GroupModel& model, const Complexifier& c,
                          const VecD& Y, Tau tau) {
  const double n = model.dim();
  const double phase_arg = Y.dot(c.grad_u(Y)) - c.h(Y);
  return std::pow(kPi, -0.25 * n) *
         std::exp(cd(0.0, 1.0) * tau.value() * phase_arg);
}

/// Pointwise value of the section at (x, Y). See the file comment for the
/// two regimes; tau = 0 is the bare Peter-Weyl sum with no fiber amplitude.
inline cd evaluate_section(const GroupModel& model, const Complexifier& c,
                           const PeterWeylSection& s, const PhasePoint& p) {
  cd acc(0.0, 0.0);
  if (s.basis_tau.is_zero()) {
    for (const auto& [rho, A] : s.terms) {
      acc += (A * model.irrep_matrix(rho, p.x)).trace();
    }
    return acc;
  }
  const VecD u = c.grad_u(p.Y);
  const cd t = s.basis_tau.value();
  for (const auto& [rho, A] : s.terms) {
    const MatC R = model.irrep_matrix(rho, p.x) * model.drho_exp(rho, t, u);
    acc += (A * R).trace();
  }
  return acc * fiber_amplitude(model, c, p.Y, s.basis_tau);
}

/// Change of basis tag from tau = 0 to tau; coefficients are untouched —
/// this is precisely the analytic-continuation-plus-amplitude evolution.
inline PeterWeylSection evolve(const PeterWeylSection& s, Tau tau) {
  if (!s.basis_tau.is_zero()) {
    throw std::invalid_argument("evolve: section must be in the tau = 0 basis");
  }
  PeterWeylSection out = s;
  out.basis_tau = tau;
  return out;
}

/// Truncated Taylor continuation vs the spectral evaluation of
/// rho(x e^{tau u}); both sides omit the scalar amplitude.
struct SeriesCheck {
  cd direct;
  cd series;
  double residual = 0.0;
};

inline SeriesCheck series_continuation_check(const GroupModel& model,
                                             const Complexifier& c,
                                             const PeterWeylSection& s,
                                             const PhasePoint& p, Tau tau,
                                             int order) {
  const VecD u = c.grad_u(p.Y);
  const cd t = tau.value();
  SeriesCheck out;
  out.direct = cd(0.0, 0.0);
  out.series = cd(0.0, 0.0);
  for (const auto& [rho, A] : s.terms) {
    const MatC Rx = model.irrep_matrix(rho, p.x);
    out.direct += (A * Rx * model.drho_exp(rho, t, u)).trace();
    const MatC G = model.drho(rho, u);
    MatC term = Rx;
    cd coef(1.0, 0.0);
    out.series += (A * term).trace();
    for (int k = 1; k <= order; ++k) {
      term = term * G;
      coef *= t / static_cast<double>(k);
      out.series += coef * (A * term).trace();
    }
  }
  out.residual = std::abs(out.direct - out.series);
  return out;
}

/// Generators of the two commuting K-translation actions on coefficients:
/// right translation f(. g) acts by A -> drho(T_j) A; left translation
/// f(g^{-1} .) by A -> -A drho(T_j). Both commute with any per-irrep scalar
/// operator, in particular with the unitarized transforms.
enum class ActionSide { Left, Right };

inline PeterWeylSection apply_k_generator(const GroupModel& model,
                                          const PeterWeylSection& s,
                                          ActionSide side, int j) {
  PeterWeylSection out = s;
  VecD T = VecD::Zero(model.dim());
  T(j) = 1.0;
  for (auto& [rho, A] : out.terms) {
    const MatC G = model.drho(rho, T);
    A = side == ActionSide::Right ? MatC(G * A) : MatC(-A * G);
  }
  return out;
}

/// Random section over the given labels: independent standard complex
/// Gaussian coefficient entries.
inline PeterWeylSection random_section(const GroupModel& model,
                                       const std::vector<IrrepLabel>& labels,
                                       Rng& rng) {
  PeterWeylSection s;
  s.basis_tau = Tau{0.0, 0.0};
  for (const auto& rho : labels) {
    const int d = model.irrep_dim(rho);
    MatC A(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) A(a, b) = cd(rng.normal(), rng.normal());
    s.terms.emplace_back(rho, A);
  }
  return s;
}

}  // namespace kcst
