#pragma once

/**
 * @file group.hpp
 * @brief Compact group models: the circle, tori, and SU(2).
 *
 * Conventions used throughout:
 *  - The Lie algebra carries an Ad-invariant inner product B in which the
 *    stored basis {T_1..T_n} is orthonormal. Points of the cotangent bundle
 *    are written (x, Y) with Y expanded in that basis (left trivialization).
 *  - Torus rank k: T_j = d/d(theta_j); group elements are angle vectors,
 *    irreps are weight vectors n with representation e^{i n.theta} and
 *    derived representation d rho_n(T_j) = i n_j.
 *  - SU(2): T_j = -(i/2) sigma_j, so [T_j, T_k] = eps_{jkl} T_l and
 *    ad_Y v = Y x v (the cross product). Spin-j irreps use the standard
 *    angular momentum matrices J_k with d rho(T_k) = -i J_k; d = 2j+1.
 *  - Characters and representation matrices extend holomorphically:
 *    rho(x e^{zX}) = rho(x) exp(z d rho(X)) for complex z.
 */

#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kahlercst/gauss.hpp"
#include "kahlercst/types.hpp"

namespace kcst {

enum class ModelKind { Torus, SU2 };

/**
 * @brief Irreducible representation label.
 *
 * Torus rank k: `data` is the weight vector (size k).
 * SU(2): `data` holds a single entry 2j (non-negative integer).
 */
struct IrrepLabel {
  std::vector<int> data;

  friend bool operator==(const IrrepLabel& a, const IrrepLabel& b) {
    return a.data == b.data;
  }
  friend bool operator<(const IrrepLabel& a, const IrrepLabel& b) {
    return a.data < b.data;
  }
};

/**
 * @brief Group element; which member is active depends on the model kind.
 *
 * Torus: `angles` (size = rank). SU(2): the 2x2 unitary `m`.
 */
struct GroupElement {
  VecD angles;
  Eigen::Matrix2cd m;
};

/// One node of a Haar quadrature rule; weights sum to 1 (probability Haar).
struct HaarNode {
  GroupElement x;
  double w = 0.0;
};

namespace detail {

inline Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  const cd I(0.0, 1.0);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

/// Spin-j angular momentum matrices (J1, J2, J3) for d = two_j + 1,
/// basis ordered m = j, j-1, ..., -j.
inline std::vector<MatC> spin_matrices(int two_j) {
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  MatC jp = MatC::Zero(d, d);
  MatC j3 = MatC::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const double m = j - a;
    j3(a, a) = m;
    if (a > 0) {
      // J+ |j,m> = sqrt((j-m)(j+m+1)) |j,m+1>; row a-1 holds m+1.
      jp(a - 1, a) = std::sqrt((j - m) * (j + m + 1.0));
    }
  }
  const MatC jm = jp.adjoint();
  std::vector<MatC> out(3);
  out[0] = 0.5 * (jp + jm);
  out[1] = cd(0.0, -0.5) * (jp - jm);
  out[2] = j3;
  return out;
}

}  // namespace detail

/**
 * @brief A compact group model: the circle (torus rank 1), a torus, or SU(2).
 */
class GroupModel {
 public:
  static GroupModel circle() { return GroupModel(ModelKind::Torus, 1); }
  static GroupModel torus(int rank) { return GroupModel(ModelKind::Torus, rank); }
  static GroupModel su2() { return GroupModel(ModelKind::SU2, 3); }

  ModelKind kind() const { return kind_; }

  /// Dimension n of the Lie algebra (= fiber dimension of T*K).
  int dim() const { return dim_; }

  std::string name() const {
    if (kind_ == ModelKind::SU2) return "su2";
    if (dim_ == 1) return "s1";
    return "t" + std::to_string(dim_);
  }

  // -- Group operations -----------------------------------------------------

  GroupElement identity() const {
    GroupElement x;
    if (kind_ == ModelKind::Torus) {
      x.angles = VecD::Zero(dim_);
    } else {
      x.m = Eigen::Matrix2cd::Identity();
    }
    return x;
  }

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const {
    GroupElement x;
    if (kind_ == ModelKind::Torus) {
      x.angles = a.angles + b.angles;
    } else {
      x.m = a.m * b.m;
    }
    return x;
  }

  /// exp: Lie algebra -> group, in the orthonormal basis coordinates.
  GroupElement exp_lie(const VecD& Y) const {
    GroupElement x;
    if (kind_ == ModelKind::Torus) {
      x.angles = Y;
      return x;
    }
    const double r = Y.norm();
    if (r < 1e-300) {
      x.m = Eigen::Matrix2cd::Identity();
      return x;
    }
    Eigen::Matrix2cd ns = Eigen::Matrix2cd::Zero();
    for (int k = 0; k < 3; ++k) ns += (Y(k) / r) * detail::pauli(k + 1);
    x.m = std::cos(0.5 * r) * Eigen::Matrix2cd::Identity() -
          cd(0.0, 1.0) * std::sin(0.5 * r) * ns;
    return x;
  }

  /// Haar-distributed random element (exact for both kinds).
  GroupElement random_element(Rng& rng) const {
    GroupElement x;
    if (kind_ == ModelKind::Torus) {
      x.angles = VecD::Zero(dim_);
      for (int i = 0; i < dim_; ++i) x.angles(i) = rng.uniform(0.0, 2.0 * kPi);
      return x;
    }
    // Normalized Gaussian quaternion = Haar on SU(2).
    double q0 = rng.normal(), q1 = rng.normal(), q2 = rng.normal(), q3 = rng.normal();
    const double nrm = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    q0 /= nrm; q1 /= nrm; q2 /= nrm; q3 /= nrm;
    // x = q0 I - i (q . sigma), unit quaternion -> SU(2).
    x.m = q0 * Eigen::Matrix2cd::Identity();
    x.m -= cd(0.0, 1.0) * (q1 * detail::pauli(1) + q2 * detail::pauli(2) +
                           q3 * detail::pauli(3));
    return x;
  }

  // -- Adjoint structure ----------------------------------------------------

  /// Matrix of ad_Y = [Y, .] in the orthonormal basis.
  MatD ad_matrix(const VecD& Y) const {
    MatD A = MatD::Zero(dim_, dim_);
    if (kind_ == ModelKind::SU2) {
      A(0, 1) = -Y(2); A(0, 2) = Y(1);
      A(1, 0) = Y(2);  A(1, 2) = -Y(0);
      A(2, 0) = -Y(1); A(2, 1) = Y(0);
    }
    return A;
  }

  /// Matrix of Ad_x acting on algebra coordinates.
  MatD adjoint_matrix(const GroupElement& x) const {
    if (kind_ == ModelKind::Torus) return MatD::Identity(dim_, dim_);
    MatD R(3, 3);
    for (int k = 0; k < 3; ++k) {
      const Eigen::Matrix2cd Tk = cd(0.0, -0.5) * detail::pauli(k + 1);
      const Eigen::Matrix2cd M = x.m * Tk * x.m.adjoint();
      // Coordinates of an algebra element X = -(i/2)(y.sigma): y_j = tr(sigma_j (iM)).
      for (int jj = 0; jj < 3; ++jj) {
        R(jj, k) = (detail::pauli(jj + 1) * (cd(0.0, 1.0) * M)).trace().real();
      }
    }
    return R;
  }

  // -- Irreducible representations -------------------------------------------

  int irrep_dim(const IrrepLabel& rho) const {
    return kind_ == ModelKind::Torus ? 1 : rho.data[0] + 1;
  }

  /// All labels up to the catalog cutoff: sup-norm box |n_i| <= cutoff for
  /// tori, 2j <= cutoff for SU(2). Returned in canonical sorted order.
  std::vector<IrrepLabel> irreps_up_to(int cutoff) const {
    std::vector<IrrepLabel> out;
    if (kind_ == ModelKind::SU2) {
      for (int two_j = 0; two_j <= cutoff; ++two_j) out.push_back({{two_j}});
      return out;
    }
    std::vector<int> n(dim_, -cutoff);
    while (true) {
      out.push_back({n});
      int i = dim_ - 1;
      while (i >= 0 && n[i] == cutoff) { n[i] = -cutoff; --i; }
      if (i < 0) break;
      ++n[i];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// CSV rendering: circle "3"; torus "1 -2" (space separated); SU(2) j as
  /// a decimal ("0.5", "1", "1.5").
  std::string label_string(const IrrepLabel& rho) const {
    std::ostringstream os;
    if (kind_ == ModelKind::SU2) {
      const int two_j = rho.data[0];
      if (two_j % 2 == 0) os << two_j / 2;
      else os << 0.5 * two_j;
      return os.str();
    }
    for (std::size_t i = 0; i < rho.data.size(); ++i) {
      if (i) os << ' ';
      os << rho.data[i];
    }
    return os.str();
  }

  IrrepLabel parse_label(const std::string& s) const {
    if (kind_ == ModelKind::SU2) {
      const double j = std::strtod(s.c_str(), nullptr);
      return {{static_cast<int>(std::lround(2.0 * j))}};
    }
    IrrepLabel rho;
    std::istringstream is(s);
    int v = 0;
    while (is >> v) rho.data.push_back(v);
    return rho;
  }

  /// d rho(T-basis expansion of X): anti-Hermitian d x d matrix.
  MatC drho(const IrrepLabel& rho, const VecD& X) const {
    if (kind_ == ModelKind::Torus) {
      MatC m(1, 1);
      double nx = 0.0;
      for (int i = 0; i < dim_; ++i) nx += rho.data[i] * X(i);
      m(0, 0) = cd(0.0, nx);
      return m;
    }
    const auto J = detail::spin_matrices(rho.data[0]);
    MatC m = MatC::Zero(irrep_dim(rho), irrep_dim(rho));
    for (int k = 0; k < 3; ++k) m += X(k) * (cd(0.0, -1.0) * J[k]);
    return m;
  }

  /// exp(z * d rho(X)) for complex z, via the spectral decomposition of the
  /// Hermitian generator (exact for tori).
  MatC drho_exp(const IrrepLabel& rho, cd z, const VecD& X) const {
    if (kind_ == ModelKind::Torus) {
      MatC m(1, 1);
      double nx = 0.0;
      for (int i = 0; i < dim_; ++i) nx += rho.data[i] * X(i);
      m(0, 0) = std::exp(z * cd(0.0, nx));
      return m;
    }
    const int d = irrep_dim(rho);
    const auto J = detail::spin_matrices(rho.data[0]);
    MatC G = MatC::Zero(d, d);  // Hermitian X.J; d rho(X) = -i G
    for (int k = 0; k < 3; ++k) G += X(k) * J[k];
    Eigen::SelfAdjointEigenSolver<MatC> es(G);
    MatC out = MatC::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      const cd phase = std::exp(-cd(0.0, 1.0) * z * cd(es.eigenvalues()(a), 0.0));
      out += phase * es.eigenvectors().col(a) * es.eigenvectors().col(a).adjoint();
    }
    return out;
  }

  /**
   * @brief rho(x) as a unitary d x d matrix.
   *
   * SU(2) path: recover (r, axis) from the 2x2 element with
   * r = 2 atan2(|traceless part|/sqrt(2), Re tr/2) — well conditioned for all
   * rotation angles — then exponentiate the spin generator. Elements within
   * 1e-12 of the center map to +-identity (times (-1)^{2j}).
   */
  MatC irrep_matrix(const IrrepLabel& rho, const GroupElement& x) const {
    if (kind_ == ModelKind::Torus) {
      MatC m(1, 1);
      double nth = 0.0;
      for (int i = 0; i < dim_; ++i) nth += rho.data[i] * x.angles(i);
      m(0, 0) = std::exp(cd(0.0, nth));
      return m;
    }
    const int d = irrep_dim(rho);
    const double c = 0.5 * x.m.trace().real();
    const Eigen::Matrix2cd xt =
        x.m - cd(0.5, 0.0) * x.m.trace() * Eigen::Matrix2cd::Identity();
    const double s = xt.norm() / std::sqrt(2.0);  // |sin(r/2)|
    if (s < 1e-12) {
      const double sign = (c >= 0.0 || rho.data[0] % 2 == 0) ? 1.0 : -1.0;
      return sign * MatC::Identity(d, d);
    }
    VecD axis(3);
    for (int k = 0; k < 3; ++k) {
      axis(k) = (detail::pauli(k + 1) * (cd(0.0, 1.0) * xt)).trace().real() / (2.0 * s);
    }
    const double r = 2.0 * std::atan2(s, c);
    return drho_exp(rho, cd(1.0, 0.0), r * axis);
  }

  /// rho(x e^{zX}) = rho(x) exp(z d rho(X)): holomorphic extension in z.
  MatC irrep_complexified(const IrrepLabel& rho, const GroupElement& x, cd z,
                          const VecD& X) const {
    return irrep_matrix(rho, x) * drho_exp(rho, z, X);
  }

  /// Character chi_rho(x).
  cd character(const IrrepLabel& rho, const GroupElement& x) const {
    return irrep_matrix(rho, x).trace();
  }

  /// Character of the complexified argument, chi_rho(e^{zX}).
  cd character(const IrrepLabel& rho, cd z, const VecD& X) const {
    if (kind_ == ModelKind::Torus) {
      double nx = 0.0;
      for (int i = 0; i < dim_; ++i) nx += rho.data[i] * X(i);
      return std::exp(z * cd(0.0, nx));
    }
    const double r = X.norm();
    const double j = 0.5 * rho.data[0];
    cd sum(0.0, 0.0);
    for (int k = 0; k <= rho.data[0]; ++k) {
      const double m = j - k;
      sum += std::exp(-cd(0.0, 1.0) * z * m * r);
    }
    return sum;
  }

  // -- Weyl denominator factor ----------------------------------------------

  /// eta(Y) = prod_{alpha>0} sinh(alpha(Y))/alpha(Y); 1 for tori,
  /// sinh(|Y|)/|Y| for SU(2).
  double eta(const VecD& Y) const {
    if (kind_ == ModelKind::Torus) return 1.0;
    const double r = Y.norm();
    if (r < 1e-8) return 1.0 + r * r / 6.0 + r * r * r * r / 120.0;
    return std::sinh(r) / r;
  }

  // -- Haar quadrature --------------------------------------------------------

  /**
   * @brief Deterministic Haar nodes with weights summing to 1.
   *
   * Torus: uniform tensor grid, exact for weights with all |n_i| < order.
   * SU(2): Euler angles x = e^{alpha T3} e^{beta T2} e^{gamma T3} with a
   * uniform alpha grid (order nodes on [0,2pi)), Gauss-Legendre in cos(beta)
   * (order nodes), and a uniform gamma grid (2*order nodes on [0,4pi) to
   * resolve half-integer spins): exact for matrix-element products of spins
   * with 2j + 2j' <= 2*order - 2.
   */
  std::vector<HaarNode> haar_nodes(int order) const;

  cd haar_expectation(const std::function<cd(const GroupElement&)>& f,
                      int order) const {
    const auto nodes = haar_nodes(order);
    cd acc(0.0, 0.0);
    for (const auto& nd : nodes) acc += nd.w * f(nd.x);
    return acc;
  }

  /// Value at 2*order together with |change| from order as an error estimate.
  struct CheckedExpectation {
    cd value;
    double err;
  };
  CheckedExpectation haar_expectation_checked(
      const std::function<cd(const GroupElement&)>& f, int order) const {
    const cd v1 = haar_expectation(f, order);
    const cd v2 = haar_expectation(f, 2 * order);
    return {v2, std::abs(v2 - v1)};
  }

 private:
  GroupModel(ModelKind kind, int dim) : kind_(kind), dim_(dim) {}

  ModelKind kind_;
  int dim_;
};

inline std::vector<HaarNode> GroupModel::haar_nodes(int order) const {
  std::vector<HaarNode> nodes;
  if (kind_ == ModelKind::Torus) {
    const int total = static_cast<int>(std::pow(order, dim_));
    nodes.reserve(total);
    std::vector<int> idx(dim_, 0);
    const double w = 1.0 / total;
    while (true) {
      GroupElement x;
      x.angles = VecD::Zero(dim_);
      for (int i = 0; i < dim_; ++i) x.angles(i) = 2.0 * kPi * idx[i] / order;
      nodes.push_back({x, w});
      int i = dim_ - 1;
      while (i >= 0 && idx[i] == order - 1) { idx[i] = 0; --i; }
      if (i < 0) break;
      ++idx[i];
    }
    return nodes;
  }
  const auto [xb, wb] = detail::gauss_legendre_nodes(order);
  const int na = order, ng = 2 * order;
  nodes.reserve(static_cast<std::size_t>(na) * order * ng);
  for (int ia = 0; ia < na; ++ia) {
    const double alpha = 2.0 * kPi * ia / na;
    GroupElement ea;
    ea.m = Eigen::Matrix2cd::Zero();
    ea.m(0, 0) = std::exp(cd(0.0, -0.5 * alpha));
    ea.m(1, 1) = std::exp(cd(0.0, 0.5 * alpha));
    for (int ib = 0; ib < order; ++ib) {
      const double beta = std::acos(xb(ib));  // cos(beta) Gauss node in [-1,1]
      Eigen::Matrix2cd eb;
      eb << std::cos(0.5 * beta), -std::sin(0.5 * beta),
            std::sin(0.5 * beta),  std::cos(0.5 * beta);
      const Eigen::Matrix2cd eab = ea.m * eb;
      for (int ig = 0; ig < ng; ++ig) {
        const double gamma = 4.0 * kPi * ig / ng;
        GroupElement x;
        x.m = eab;
        x.m(0, 0) *= std::exp(cd(0.0, -0.5 * gamma));
        x.m(1, 0) *= std::exp(cd(0.0, -0.5 * gamma));
        x.m(0, 1) *= std::exp(cd(0.0, 0.5 * gamma));
        x.m(1, 1) *= std::exp(cd(0.0, 0.5 * gamma));
        // dHaar = sin(beta) dalpha dbeta dgamma / (16 pi^2); the Gauss rule
        // runs in cos(beta) and absorbs the sin(beta) factor.
        nodes.push_back({x, wb(ib) / (2.0 * na * ng)});
      }
    }
  }
  return nodes;
}

}  // namespace kcst
