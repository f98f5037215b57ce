#pragma once

#include "dopt/numerics.hpp"

namespace dopt {

/// Regularized incomplete beta function I_x(a, b), by modified Lentz
/// evaluation of the continued fraction with the usual symmetry switch at
/// x = (a + 1) / (a + b + 2). Absolute error is around 1e-14 for the shapes
/// used here.
double regularized_incomplete_beta(double a, double b, double x);

/// Sender types z = zbar * Y with Y ~ Beta(alpha, beta_shape), supported on [0, zbar].
///
/// All queries are const and allocation-free, so one instance can be shared
/// by any number of threads.
class SenderDist {
 public:
  SenderDist(double alpha, double beta_shape, double zbar);

  double alpha() const { return alpha_; }
  double beta_shape() const { return beta_shape_; }
  double zbar() const { return zbar_; }

  /// Density g(z). Throws DomainError for z outside [0, zbar] (beyond 1e-12).
  double pdf(double z) const;
  /// G(z), clamped to 0 below the support and 1 above it.
  double cdf(double z) const;
  /// 1 - G(z), evaluated through the mirrored incomplete beta so that
  /// small upper tails keep full relative precision.
  double survival(double z) const;
  /// Smallest z with G(z) >= p, by bisection to 1e-12.
  double quantile(double p) const;
  /// Unconditional mean zbar * alpha / (alpha + beta_shape).
  double mean() const;

  /// Integral of z^p g(z) over [c, zbar] by adaptive quadrature.
  /// For p = -1 the lower limit is raised to kEffectiveZero.
  double partial_moment(double c, double p, const QuadOptions& opts = kMomentQuad) const;

  /// E[z | z >= c]; returns zbar for c within 1e-9 of zbar. Throws
  /// DomainError when c is below that but the tail mass underflows.
  double trunc_mean(double c) const;

  static constexpr double kDegenerateTail = 1e-280;

  static constexpr QuadOptions kMomentQuad{1e-11, 1e-14, 60, 5000};

 private:
  double alpha_;
  double beta_shape_;
  double zbar_;
  double log_norm_;  // -log B(alpha, beta)
};

}  // namespace dopt
