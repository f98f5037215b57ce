#pragma once

#include <cmath>

#include "dopt/errors.hpp"

namespace dopt {

/// Primitives of the parametrized market: match surplus v = A s^a x z,
/// signaling cost c = beta s^2 / z and matching map n(z) = k z^q.
/// Defaults are the baseline design.
struct ModelParams {
  double A = 1.0;
  double beta_cost = 0.5;
  double a = 0.5;
  double k = 1.0;
  double q = 1.0;

  /// Throws ConfigError unless A, beta, k > 0, 0 <= a < 1 and q >= 0.
  void validate() const;

  /// 2 + a + a q, the constant that keeps recurring in the separating solution.
  double signal_weight() const { return 2.0 + a + a * q; }
};

// std::pow(0, 0) == 1, so the pure-signaling case a = 0 needs no special casing.

inline double surplus_v(const ModelParams& p, double x, double s, double z) {
  return p.A * std::pow(s, p.a) * x * z;
}

inline double surplus_v_s(const ModelParams& p, double x, double s, double z) {
  if (p.a == 0.0) return 0.0;
  return p.a * p.A * std::pow(s, p.a - 1.0) * x * z;
}

inline double surplus_v_z(const ModelParams& p, double x, double s, double /*z*/) {
  return p.A * std::pow(s, p.a) * x;
}

inline double surplus_v_x(const ModelParams& p, double /*x*/, double s, double z) {
  return p.A * std::pow(s, p.a) * z;
}

/// beta s^2 / z, with c(0, z) = 0 for every z including z = 0.
double cost_c(const ModelParams& p, double s, double z);

inline double cost_c_s(const ModelParams& p, double s, double z) {
  return 2.0 * p.beta_cost * s / z;
}

inline double cost_c_z(const ModelParams& p, double s, double z) {
  return -p.beta_cost * s * s / (z * z);
}

inline double match_n(const ModelParams& p, double z) { return p.k * std::pow(z, p.q); }

}  // namespace dopt
