#include "dopt/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dopt {
namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a, b), valid (fast) for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 1000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("regularized_incomplete_beta: shapes must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

SenderDist::SenderDist(double alpha, double beta_shape, double zbar)
    : alpha_(alpha), beta_shape_(beta_shape), zbar_(zbar) {
  if (!(alpha > 0.0) || !(beta_shape > 0.0) || !(zbar > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta_shape) || !std::isfinite(zbar)) {
    std::ostringstream msg;
    msg << "SenderDist: need alpha, beta, zbar > 0 (got " << alpha << ", " << beta_shape
        << ", " << zbar << ")";
    throw ConfigError(msg.str());
  }
  log_norm_ = -log_beta(alpha, beta_shape);
}

double SenderDist::pdf(double z) const {
  constexpr double slack = 1e-12;
  if (z < -slack || z > zbar_ + slack) {
    std::ostringstream msg;
    msg << "SenderDist::pdf: z = " << z << " outside [0, " << zbar_ << "]";
    throw DomainError(msg.str());
  }
  const double y = std::clamp(z / zbar_, 0.0, 1.0);
  if (y == 0.0) {
    if (alpha_ > 1.0) return 0.0;
    if (alpha_ == 1.0) return std::exp(log_norm_) / zbar_;
    return std::numeric_limits<double>::infinity();
  }
  if (y == 1.0) {
    if (beta_shape_ > 1.0) return 0.0;
    if (beta_shape_ == 1.0) return std::exp(log_norm_) / zbar_;
    return std::numeric_limits<double>::infinity();
  }
  const double log_density =
      log_norm_ + (alpha_ - 1.0) * std::log(y) + (beta_shape_ - 1.0) * std::log1p(-y);
  return std::exp(log_density) / zbar_;
}

double SenderDist::cdf(double z) const {
  if (z <= 0.0) return 0.0;
  if (z >= zbar_) return 1.0;
  return regularized_incomplete_beta(alpha_, beta_shape_, z / zbar_);
}

double SenderDist::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("SenderDist::quantile: p outside [0, 1]");
  double lo = 0.0, hi = zbar_;
  while (hi - lo > 1e-12 * std::max(1.0, zbar_)) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double SenderDist::mean() const { return zbar_ * alpha_ / (alpha_ + beta_shape_); }

double SenderDist::partial_moment(double c, double p, const QuadOptions& opts) const {
  if (c < -1e-12 || c > zbar_ + 1e-12) {
    std::ostringstream msg;
    msg << "SenderDist::partial_moment: lower limit " << c << " outside [0, " << zbar_ << "]";
    throw DomainError(msg.str());
  }
  if (p < -1.0) throw DomainError("SenderDist::partial_moment: power below -1");
  double lo = std::clamp(c, 0.0, zbar_);
  if (p < 0.0) lo = std::max(lo, kEffectiveZero);
  if (lo >= zbar_) return 0.0;
  // Integrate in the unit variable y = z / zbar so the Beta kernel is evaluated directly.
  const double scale = std::pow(zbar_, p);
  const double norm = std::exp(log_norm_);
  auto integrand = [&](double y) {
    return norm * std::pow(y, alpha_ - 1.0 + p) * std::pow(1.0 - y, beta_shape_ - 1.0);
  };
  return scale * integrate(integrand, lo / zbar_, 1.0, opts).value;
}

double SenderDist::survival(double z) const {
  if (z <= 0.0) return 1.0;
  if (z >= zbar_) return 0.0;
  return regularized_incomplete_beta(beta_shape_, alpha_, 1.0 - z / zbar_);
}

double SenderDist::trunc_mean(double c) const {
  if (c < -1e-12 || c > zbar_ + 1e-12)
    throw DomainError("SenderDist::trunc_mean: threshold outside the support");
  if (c >= zbar_ - 1e-9) return zbar_;
  const double tail = survival(c);
  if (!(tail > kDegenerateTail)) {
    std::ostringstream msg;
    msg << "SenderDist::trunc_mean: upper tail above " << c << " has no mass";
    throw DomainError(msg.str());
  }
  const double m = partial_moment(c, 1.0) / tail;
  return std::clamp(m, std::max(c, 0.0), zbar_);
}

}  // namespace dopt
