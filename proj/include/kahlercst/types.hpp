#pragma once

/**
 * @file types.hpp
 * @brief Shared scalar/matrix aliases, the complex time parameter, and a
 *        platform-stable random source.
 */

#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <random>

#include <Eigen/Dense>

namespace kcst {

using cd = std::complex<double>;
using VecD = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using MatD = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/**
 * @brief Complex time tau = tau1 + i*tau2 of the adapted structure.
 *
 * tau2 > 0 is the Kaehler regime; tau2 = 0 is the vertical boundary where
 * the adapted frame degenerates and only boundary conventions apply.
 */
struct Tau {
  double t1 = 0.0;
  double t2 = 0.0;

  cd value() const { return cd(t1, t2); }
  cd conj() const { return cd(t1, -t2); }
  bool is_zero() const { return t1 == 0.0 && t2 == 0.0; }
  bool is_kahler() const { return t2 > 0.0; }
};

/// Error for operations that require tau2 > 0 but were handed the boundary.
class VerticalBoundaryError : public std::domain_error {
 public:
  explicit VerticalBoundaryError(const std::string& what)
      : std::domain_error(what) {}
};

/**
 * @brief Deterministic random source.
 *
 * mt19937_64 output is fully specified by the standard; the uniform and
 * normal draws below avoid std::uniform_real_distribution /
 * std::normal_distribution, whose outputs may differ between standard
 * library implementations. Identical seeds give identical streams on every
 * platform.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller (pair cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Shortest-unambiguous decimal rendering used by every CSV emitter:
/// 17 significant digits round-trip any double exactly.
inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace kcst
