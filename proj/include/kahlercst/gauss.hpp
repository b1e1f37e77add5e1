#pragma once

/**
 * @file gauss.hpp
 * @brief Node/weight generators: Gauss-Legendre and tanh-sinh on [-1, 1].
 *
 * Both generators are deterministic (fixed iteration counts and orderings),
 * so repeated calls produce bit-identical rules.
 */

#include <cmath>
#include <utility>

#include "kahlercst/types.hpp"

namespace kcst::detail {

/// Gauss-Legendre rule on [-1, 1]: Newton iteration on P_n from the
/// three-term recurrence. Exact for polynomials of degree <= 2n - 1.
inline std::pair<VecD, VecD> gauss_legendre_nodes(int n) {
  VecD x(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x(i) = -z;
    x(n - 1 - i) = z;
    w(i) = 2.0 / ((1.0 - z * z) * pp * pp);
    w(n - 1 - i) = w(i);
  }
  return {x, w};
}

/// tanh-sinh (double-exponential) rule on (-1, 1) with 2m+1 nodes.
/// The step caps the outermost map argument at 17.4 so tanh never rounds
/// onto +-1: the extreme nodes sit ~1.5e-15 inside the interval and every
/// node is strictly interior. Integrands with endpoint singularities should
/// go through integrate_interval, which evaluates by endpoint offsets and
/// reaches much deeper into the boundary layer.
inline std::pair<VecD, VecD> tanh_sinh_nodes(int n) {
  const int m = n / 2;
  const double h = std::asinh(2.0 * 17.4 / kPi) / m;
  VecD x(2 * m + 1), w(2 * m + 1);
  for (int k = -m; k <= m; ++k) {
    const double t = k * h;
    const double s = 0.5 * kPi * std::sinh(t);
    x(k + m) = std::tanh(s);
    const double c = std::cosh(s);
    w(k + m) = 0.5 * kPi * h * std::cosh(t) / (c * c);
  }
  return {x, w};
}

}  // namespace kcst::detail
