#pragma once

/**
 * @file complexifier.hpp
 * @brief Complexifier functions h on the Lie algebra and their calculus.
 *
 * A complexifier is an Ad-invariant h with positive-definite Hessian H and
 * h(0) = 0. Everything downstream consumes it through three quantities:
 *
 *   u(Y) = B^{-1}(dh_Y)   (gradient field; B-orthonormal coordinates, so the
 *                          plain gradient),
 *   H(Y) = Hess h         (symmetric positive definite),
 *   kappa(Y; tau2) = 2 tau2 (B(Y, u(Y)) - h(Y))   (Kaehler potential along
 *                          the fiber).
 *
 * Ad-invariance forces [Y, u(Y)] = 0, ad_Y = H^{-1} ad_u = ad_u H^{-1}, and
 * u(Ad_x Y) = Ad_x u(Y); `verify_identities` measures those residuals on
 * random samples, which is also the negative control distinguishing genuine
 * complexifiers from anisotropic impostors.
 *
 * Shipped families:
 *  - quadratic:        h = |Y|^2 / 2          (any model),
 *  - abelian-profile:  h = sum_i phi_i(y_i)   (torus models; phi_i convex
 *                      even-degree polynomials),
 *  - radial-profile:   h = phi(|Y|^2)         (SU(2); u = 2 phi' Y,
 *                      H = 2 phi' I + 4 phi'' Y Y^T).
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "kahlercst/group.hpp"
#include "kahlercst/types.hpp"

namespace kcst {

/// Dense polynomial with ascending coefficients, c[k] * x^k.
struct Polynomial {
  std::vector<double> c;

  double eval(double x) const {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
  }
  double d1(double x) const {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + k * c[k];
    return acc;
  }
  double d2(double x) const {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 2;) acc = acc * x + k * (k - 1.0) * c[k];
    return acc;
  }
  std::string fingerprint() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) os << ':';
      os << fmt17(c[k]);
    }
    return os.str();
  }
};

enum class ComplexifierKind { Quadratic, AbelianProfile, RadialProfile };

class Complexifier {
 public:
  static Complexifier quadratic() {
    Complexifier c;
    c.kind_ = ComplexifierKind::Quadratic;
    return c;
  }

  /// h(Y) = sum_i phi_i(y_i); one profile per fiber coordinate.
  static Complexifier abelian_profile(std::vector<Polynomial> profiles) {
    Complexifier c;
    c.kind_ = ComplexifierKind::AbelianProfile;
    c.profiles_ = std::move(profiles);
    return c;
  }

  /// h(Y) = phi(|Y|^2).
  static Complexifier radial_profile(Polynomial phi) {
    Complexifier c;
    c.kind_ = ComplexifierKind::RadialProfile;
    c.radial_ = std::move(phi);
    return c;
  }

  ComplexifierKind kind() const { return kind_; }
  const std::vector<Polynomial>& profiles() const { return profiles_; }
  const Polynomial& radial() const { return radial_; }

  double h(const VecD& Y) const {
    switch (kind_) {
      case ComplexifierKind::Quadratic:
        return 0.5 * Y.squaredNorm();
      case ComplexifierKind::AbelianProfile: {
        double acc = 0.0;
        for (int i = 0; i < Y.size(); ++i) acc += profiles_[i].eval(Y(i));
        return acc;
      }
      case ComplexifierKind::RadialProfile:
        return radial_.eval(Y.squaredNorm());
    }
    return 0.0;
  }

  /// u(Y) = gradient of h in the orthonormal fiber coordinates.
  VecD grad_u(const VecD& Y) const {
    switch (kind_) {
      case ComplexifierKind::Quadratic:
        return Y;
      case ComplexifierKind::AbelianProfile: {
        VecD u(Y.size());
        for (int i = 0; i < Y.size(); ++i) u(i) = profiles_[i].d1(Y(i));
        return u;
      }
      case ComplexifierKind::RadialProfile:
        return 2.0 * radial_.d1(Y.squaredNorm()) * Y;
    }
    return Y;
  }

  MatD hessian(const VecD& Y) const {
    const int n = static_cast<int>(Y.size());
    switch (kind_) {
      case ComplexifierKind::Quadratic:
        return MatD::Identity(n, n);
      case ComplexifierKind::AbelianProfile: {
        MatD H = MatD::Zero(n, n);
        for (int i = 0; i < n; ++i) H(i, i) = profiles_[i].d2(Y(i));
        return H;
      }
      case ComplexifierKind::RadialProfile: {
        const double q = Y.squaredNorm();
        MatD H = 2.0 * radial_.d1(q) * MatD::Identity(n, n);
        H += 4.0 * radial_.d2(q) * (Y * Y.transpose());
        return H;
      }
    }
    return MatD::Identity(n, n);
  }

  /// Fiber Kaehler potential kappa(Y) = 2 tau2 (B(Y, u) - h).
  double kappa(const VecD& Y, double tau2) const {
    return 2.0 * tau2 * (Y.dot(grad_u(Y)) - h(Y));
  }

  /// Stable key for cache files and CSV columns (no commas).
  std::string fingerprint() const {
    switch (kind_) {
      case ComplexifierKind::Quadratic:
        return "quadratic";
      case ComplexifierKind::AbelianProfile: {
        std::ostringstream os;
        os << "abelian[";
        for (std::size_t i = 0; i < profiles_.size(); ++i) {
          if (i) os << ';';
          os << profiles_[i].fingerprint();
        }
        os << ']';
        return os.str();
      }
      case ComplexifierKind::RadialProfile:
        return "radial[" + radial_.fingerprint() + "]";
    }
    return "?";
  }

 private:
  ComplexifierKind kind_ = ComplexifierKind::Quadratic;
  std::vector<Polynomial> profiles_;
  Polynomial radial_;
};

/// Point of T*K in left trivialization.
struct PhasePoint {
  GroupElement x;
  VecD Y;
};

/// Time-t Hamiltonian flow of h: (x, Y) -> (x exp(t u(Y)), Y).
inline PhasePoint hamiltonian_flow(const GroupModel& model,
                                   const Complexifier& c, double t,
                                   const PhasePoint& p) {
  PhasePoint out;
  out.Y = p.Y;
  out.x = model.multiply(p.x, model.exp_lie(t * c.grad_u(p.Y)));
  return out;
}

struct InvertResult {
  VecD Y;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/**
 * @brief Solve u(Y) = target by damped Newton iteration.
 *
 * Convexity of h makes u monotone, so Newton from H(0)^{-1} target with
 * step halving converges for every target in the range of u.
 */
inline InvertResult invert_u(const Complexifier& c, const VecD& target,
                             double tol = 1e-12, int max_iter = 100) {
  InvertResult res;
  const int n = static_cast<int>(target.size());
  VecD Y = c.hessian(VecD::Zero(n)).ldlt().solve(target);
  VecD r = c.grad_u(Y) - target;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    if (r.norm() <= tol) {
      res.converged = true;
      break;
    }
    const VecD step = c.hessian(Y).ldlt().solve(r);
    double lambda = 1.0;
    VecD Ynew = Y - step;
    VecD rnew = c.grad_u(Ynew) - target;
    int halvings = 0;
    while (rnew.norm() >= r.norm() && halvings < 60) {
      lambda *= 0.5;
      Ynew = Y - lambda * step;
      rnew = c.grad_u(Ynew) - target;
      ++halvings;
    }
    Y = Ynew;
    r = rnew;
  }
  res.converged = res.converged || r.norm() <= tol;
  res.Y = Y;
  res.residual = r.norm();
  return res;
}

/// Max residuals of the structural identities over random fiber samples.
struct IdentityResiduals {
  double commutation = 0.0;   // |[Y, u(Y)]|
  double intertwine = 0.0;    // |ad_Y - H^{-1} ad_u| and |ad_Y - ad_u H^{-1}|
  double equivariance = 0.0;  // |u(Ad_x Y) - Ad_x u(Y)|
};

inline IdentityResiduals verify_identities(const GroupModel& model,
                                           const Complexifier& c, int samples,
                                           double radius, Rng& rng) {
  IdentityResiduals out;
  const int n = model.dim();
  for (int s = 0; s < samples; ++s) {
    VecD Y(n);
    for (int i = 0; i < n; ++i) Y(i) = rng.uniform(-radius, radius);
    const VecD u = c.grad_u(Y);
    const MatD H = c.hessian(Y);
    const MatD adY = model.ad_matrix(Y);
    const MatD adU = model.ad_matrix(u);

    out.commutation = std::max(out.commutation, (adY * u).norm());

    const auto Hsolve = H.ldlt();
    out.intertwine = std::max(out.intertwine, (adY - Hsolve.solve(adU)).norm());
    out.intertwine = std::max(
        out.intertwine, (adY - adU * Hsolve.solve(MatD::Identity(n, n))).norm());

    const GroupElement x = model.random_element(rng);
    const MatD Ad = model.adjoint_matrix(x);
    out.equivariance =
        std::max(out.equivariance, (c.grad_u(Ad * Y) - Ad * u).norm());
  }
  return out;
}

/// Minimum Hessian eigenvalue over a deterministic sample of the ball of the
/// given radius — the positivity certificate for a claimed complexifier.
inline double min_hessian_eigenvalue(const GroupModel& model,
                                     const Complexifier& c, double radius,
                                     int samples = 256) {
  Rng rng(0x5eedULL);
  const int n = model.dim();
  double mineig = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    VecD Y(n);
    for (int i = 0; i < n; ++i) Y(i) = rng.uniform(-radius, radius);
    Eigen::SelfAdjointEigenSolver<MatD> es(c.hessian(Y));
    mineig = std::min(mineig, es.eigenvalues().minCoeff());
  }
  // Include the origin and the coordinate axes' endpoints.
  for (int i = -1; i < n; ++i) {
    VecD Y = VecD::Zero(n);
    if (i >= 0) Y(i) = radius;
    Eigen::SelfAdjointEigenSolver<MatD> es(c.hessian(Y));
    mineig = std::min(mineig, es.eigenvalues().minCoeff());
  }
  return mineig;
}

}  // namespace kcst
