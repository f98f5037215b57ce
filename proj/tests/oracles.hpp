#pragma once

// Independent reference implementations used only by the tests. None of these
// call into the library's quadrature, root finders or closed forms.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "dopt/model.hpp"

namespace oracle {

/// splitmix64; a small deterministic generator for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }

 private:
  std::uint64_t state_;
};

/// Random admissible parameters in the ranges the designs use.
inline dopt::ModelParams draw_params(Rng& rng) {
  dopt::ModelParams p;
  p.A = rng.uniform(0.5, 2.0);
  p.beta_cost = rng.uniform(0.2, 1.5);
  p.a = rng.uniform(0.0, 0.9);
  p.k = rng.uniform(0.5, 3.0);
  p.q = rng.uniform(0.0, 2.0);
  return p;
}

/// Adaptive Simpson with the classic 15 * eps acceptance test.
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double eps = 1e-12, int depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, eps, depth);
}

/// Plain bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double f_lo = f(lo);
  if (f_lo * f(hi) > 0.0) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Density of zbar * Beta(alpha, beta) through lgamma.
inline double beta_pdf(double alpha, double beta, double zbar, double z) {
  const double y = z / zbar;
  if (y <= 0.0 || y >= 1.0) return 0.0;
  const double log_b = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  return std::exp((alpha - 1.0) * std::log(y) + (beta - 1.0) * std::log1p(-y) - log_b) / zbar;
}

/// Right-hand side of the separating ODE solved for the belief slope:
/// mu' = (c_s - v_s) / v_z at (n(mu), s, mu).
inline double belief_slope(const dopt::ModelParams& p, double s, double mu) {
  const double x = p.k * std::pow(mu, p.q);
  const double c_s = 2.0 * p.beta_cost * s / mu;
  const double v_s = p.a == 0.0 ? 0.0 : p.a * p.A * std::pow(s, p.a - 1.0) * x * mu;
  const double v_z = p.A * std::pow(s, p.a) * x;
  return (c_s - v_s) / v_z;
}

/// Classical RK4 integration of the belief ODE from (s0, mu0) to s1.
inline double integrate_belief(const dopt::ModelParams& p, double s0, double mu0, double s1,
                               int steps) {
  const double h = (s1 - s0) / steps;
  double s = s0, mu = mu0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = belief_slope(p, s, mu);
    const double k2 = belief_slope(p, s + 0.5 * h, mu + 0.5 * h * k1);
    const double k3 = belief_slope(p, s + 0.5 * h, mu + 0.5 * h * k2);
    const double k4 = belief_slope(p, s + h, mu + h * k3);
    mu += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += h;
  }
  return mu;
}

/// Closed forms for Beta(1,1) on [0, 3] with the baseline parameters
/// (A = k = q = 1, beta = 0.5, a = 0.5) and no exclusion at the bottom.
namespace uniform3 {

/// Net surplus of separating types on [0, z_h]: sigma(z) = z^2, net density z^3 / 6.
inline double separating(double z_h) { return z_h * z_h * z_h * z_h / 24.0; }

/// Pooling part with pooled action s_h: gross sqrt(s_h) E[z | z >= z_h] int z g, cost via the log.
inline double pooling(double z_h, double s_h) {
  return std::sqrt(s_h) * ((z_h + 3.0) / 2.0) * (9.0 - z_h * z_h) / 6.0 -
         0.5 * s_h * s_h * (std::log(3.0) - std::log(z_h)) / 3.0;
}

}  // namespace uniform3

}  // namespace oracle
