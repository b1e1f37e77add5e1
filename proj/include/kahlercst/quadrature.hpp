#pragma once

/**
 * @file quadrature.hpp
 * @brief Truncated-domain quadrature with deterministic node orders.
 *
 * All accumulations are plain left-to-right folds over a fixed node
 * ordering, so results are bit-reproducible for a given spec. Error
 * estimates everywhere come from node doubling: the reported value uses 2N
 * nodes and the estimate is |value(2N) - value(N)|.
 */

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "kahlercst/gauss.hpp"
#include "kahlercst/types.hpp"

namespace kcst {

enum class QuadScheme { GaussLegendre, TanhSinh };

struct QuadratureSpec {
  QuadScheme scheme = QuadScheme::GaussLegendre;
  int nodes = 96;          ///< base node count; doubled for the error estimate
  double radius = 0.0;     ///< fixed truncation radius; 0 = automatic
  double tail_tol = 1e-16; ///< relative tail size for automatic truncation
};

inline QuadScheme parse_scheme(const std::string& s) {
  if (s == "gauss-legendre") return QuadScheme::GaussLegendre;
  if (s == "tanh-sinh") return QuadScheme::TanhSinh;
  throw std::invalid_argument("unknown quadrature scheme: " + s);
}

/// Nodes/weights for [a, b] (affine image of the reference rule).
inline std::pair<VecD, VecD> interval_nodes(double a, double b,
                                            QuadScheme scheme, int n) {
  auto [x, w] = scheme == QuadScheme::GaussLegendre
                    ? detail::gauss_legendre_nodes(n)
                    : detail::tanh_sinh_nodes(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  VecD xs(x.size()), ws(w.size());
  for (int i = 0; i < x.size(); ++i) {
    xs(i) = mid + half * x(i);
    ws(i) = half * w(i);
  }
  return {xs, ws};
}

inline double integrate_interval(const std::function<double(double)>& f,
                                 double a, double b, QuadScheme scheme,
                                 int n) {
  if (scheme == QuadScheme::GaussLegendre) {
    const auto [x, w] = interval_nodes(a, b, scheme, n);
    double acc = 0.0;
    for (int i = 0; i < x.size(); ++i) acc += w(i) * f(x(i));
    return acc;
  }
  // tanh-sinh with nodes expressed as offsets from the nearest endpoint.
  // The offset 2/(1 + e^{2|s|}) resolves distances far below one ulp of the
  // endpoint itself, so integrable endpoint singularities converge. The map
  // argument stops at 40: beyond that the summand is below one ulp even for
  // x^{-1/2}-type endpoints, while a wider window only inflates the step h
  // and with it the discretization error.
  const int m = std::max(1, n / 2);
  const double h = std::asinh(2.0 * 40.0 / kPi) / m;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int k = -m; k <= m; ++k) {
    const double t = k * h;
    const double s = 0.5 * kPi * std::sinh(t);
    const double c = std::cosh(s);
    const double w = half * 0.5 * kPi * h * std::cosh(t) / (c * c);
    const double d = 2.0 / (1.0 + std::exp(2.0 * std::abs(s)));
    const double y = k < 0 ? a + half * d : (k > 0 ? b - half * d : mid);
    acc += w * f(y);
  }
  return acc;
}

/**
 * @brief Grow a truncation radius until the integrand's tails are negligible.
 *
 * `log_f` is the log of the (non-negative) integrand. Starting at r0 the
 * radius is inflated by 5/4 until the endpoint values sit below
 * max + log(tail_tol), where max is taken over a 129-point scan of
 * [symmetric ? -R : 0, R]. Deterministic; throws if 1e6 is exceeded.
 */
inline double auto_radius(const std::function<double(double)>& log_f,
                          double r0, double tail_tol, bool symmetric) {
  double R = r0;
  const double log_tol = std::log(tail_tol);
  for (int iter = 0; iter < 400; ++iter) {
    const double lo = symmetric ? -R : 0.0;
    double fmax = -std::numeric_limits<double>::infinity();
    const int scan = 129;
    for (int i = 0; i < scan; ++i) {
      const double y = lo + (R - lo) * i / (scan - 1);
      fmax = std::max(fmax, log_f(y));
    }
    // One-sided domains truncate only at R; lo is a hard integration limit.
    const double edge = symmetric ? std::max(log_f(lo), log_f(R)) : log_f(R);
    if (edge <= fmax + log_tol) return R;
    R *= 1.25;
    if (R > 1e6) break;
  }
  throw std::runtime_error("auto_radius: integrand tail does not decay");
}

/// One node of a tensor-product rule over a box.
struct GridNode {
  VecD y;
  double w = 0.0;
};

/// Tensor rule over the box prod_i [-R_i, R_i], lexicographic node order.
inline std::vector<GridNode> box_nodes(const VecD& R, QuadScheme scheme,
                                       int n) {
  const int dim = static_cast<int>(R.size());
  std::vector<VecD> xs(dim), ws(dim);
  int total = 1;
  for (int i = 0; i < dim; ++i) {
    auto [x, w] = interval_nodes(-R(i), R(i), scheme, n);
    xs[i] = x;
    ws[i] = w;
    total *= static_cast<int>(x.size());
  }
  std::vector<GridNode> out;
  out.reserve(total);
  std::vector<int> idx(dim, 0);
  while (true) {
    GridNode nd;
    nd.y = VecD(dim);
    nd.w = 1.0;
    for (int i = 0; i < dim; ++i) {
      nd.y(i) = xs[i](idx[i]);
      nd.w *= ws[i](idx[i]);
    }
    out.push_back(nd);
    int i = dim - 1;
    while (i >= 0 && idx[i] + 1 == xs[i].size()) { idx[i] = 0; --i; }
    if (i < 0) break;
    ++idx[i];
  }
  return out;
}

}  // namespace kcst
