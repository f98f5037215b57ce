#include "dopt/separating.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dopt {
namespace {

constexpr QuadOptions kWageQuad{1e-12, 1e-15, 60, 5000};

}  // namespace

double s_lower(const ModelParams& p, double z_l) {
  if (z_l < 0.0) throw DomainError("s_lower: negative type");
  if (z_l == 0.0) return 0.0;
  return std::pow(p.A * p.k * std::pow(z_l, p.q + 2.0) / p.beta_cost, 1.0 / (2.0 - p.a));
}

SeparatingPath::SeparatingPath(const ModelParams& p, double zbar, double z_l, double t_l)
    : p_(p), zbar_(zbar), z_l_(z_l), s_l_(s_lower(p, z_l)), t_l_(t_l) {
  p_.validate();
  if (!(zbar > 0.0)) throw ConfigError("SeparatingPath: zbar must be positive");
  if (!(z_l >= 0.0 && z_l < zbar)) {
    std::ostringstream msg;
    msg << "SeparatingPath: z_l = " << z_l << " outside [0, " << zbar << ")";
    throw DomainError(msg.str());
  }
  const double w = p_.signal_weight();
  const double akw = p_.A * p_.k * w;
  K_ = 2.0 * p_.beta_cost * (2.0 + p_.q) / akw;
  D_ = z_l_ > 0.0 ? (akw * std::pow(z_l_, 2.0 + p_.q) -
                     2.0 * p_.beta_cost * (2.0 + p_.q) * std::pow(s_l_, 2.0 - p_.a)) /
                        akw
                  : 0.0;
  decay_ = p_.a * (2.0 + p_.q);
  s_l_decay_ = std::pow(s_l_, decay_);
  s_max_ = sigma(zbar_);
  tau_max_ = tau(s_max_);
}

void SeparatingPath::check_action(double s, const char* who) const {
  if (s < s_l_ * (1.0 - 1e-12) - 1e-300 || !std::isfinite(s)) {
    std::ostringstream msg;
    msg << who << ": action " << s << " below the entry action " << s_l_;
    throw DomainError(msg.str());
  }
}

void SeparatingPath::check_type(double z, const char* who) const {
  const double slack = 1e-12 * std::max(1.0, zbar_);
  if (z < z_l_ - slack || z > zbar_ + slack || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << who << ": type " << z << " outside [" << z_l_ << ", " << zbar_ << "]";
    throw DomainError(msg.str());
  }
}

double SeparatingPath::mu_power(double s) const {
  double value = K_ * std::pow(s, 2.0 - p_.a);
  if (D_ != 0.0) value += D_ * s_l_decay_ * std::pow(s, -decay_);
  return std::max(value, 0.0);
}

double SeparatingPath::mu_power_prime(double s) const {
  double value = K_ * (2.0 - p_.a) * std::pow(s, 1.0 - p_.a);
  if (D_ != 0.0) value -= decay_ * D_ * s_l_decay_ * std::pow(s, -decay_ - 1.0);
  return value;
}

double SeparatingPath::mu(double s) const {
  check_action(s, "mu");
  s = std::max(s, s_l_);
  if (s == s_l_) return z_l_;
  return std::pow(mu_power(s), 1.0 / (2.0 + p_.q));
}

double SeparatingPath::mu_prime(double s) const {
  check_action(s, "mu_prime");
  s = std::max(s, s_l_);
  const double e = 1.0 / (2.0 + p_.q);
  return e * std::pow(mu_power(s), e - 1.0) * mu_power_prime(s);
}

double SeparatingPath::sigma_closed_form(double z) const {
  // Inverse of mu with D = 0.
  return std::pow(std::pow(z, 2.0 + p_.q) / K_, 1.0 / (2.0 - p_.a));
}

double SeparatingPath::sigma(double z) const { return sigma(z, -1.0); }

double SeparatingPath::sigma(double z, double guess) const {
  check_type(z, "sigma");
  z = std::clamp(z, z_l_, zbar_);
  if (z == z_l_) return s_l_;
  if (z_l_ == 0.0) return sigma_closed_form(z);
  return sigma_newton(z, guess);
}

double SeparatingPath::sigma_newton(double z, double guess) const {
  const double target = std::pow(z, 2.0 + p_.q);
  // D < 0 and (s_l / s)^decay <= 1 give K s^(2-a) + D <= mu_power(s) <= K s^(2-a),
  // which brackets the root in closed form.
  double lo = std::max(s_l_, sigma_closed_form(z));
  double hi = std::pow((target - D_) / K_, 1.0 / (2.0 - p_.a));
  if (hi < lo) std::swap(lo, hi);
  double s = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = mu_power(s) - target;
    if (f == 0.0) return s;
    if (f < 0.0)
      lo = s;
    else
      hi = s;
    const double df = mu_power_prime(s);
    double next = s - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step <= 1e-14 * s || hi - lo <= 1e-14 * hi) return s;
  }
  std::ostringstream msg;
  msg << "sigma: inversion did not converge at z = " << z;
  throw ConvergenceError(msg.str());
}

double SeparatingPath::wage_integrand_sender(double y) const {
  return cost_c_s(p_, y, mu(y));
}

double SeparatingPath::wage_integrand_receiver(double y) const {
  const double belief = mu(y);
  const double x = match_n(p_, belief);
  return surplus_v_s(p_, x, y, belief) + surplus_v_z(p_, x, y, belief) * mu_prime(y);
}

double SeparatingPath::tau(double s) const {
  check_action(s, "tau");
  if (s_max_ > 0.0 && s > s_max_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "tau: action " << s << " beyond sigma(zbar) = " << s_max_;
    throw DomainError(msg.str());
  }
  if (z_l_ == 0.0) {
    // mu(s) = B s^m, so c_s(y, mu(y)) = (2 beta / B) y^(1 - m).
    const double m = (2.0 - p_.a) / (2.0 + p_.q);
    const double b = std::pow(K_, 1.0 / (2.0 + p_.q));
    return t_l_ + 2.0 * p_.beta_cost / b * std::pow(s, 2.0 - m) / (2.0 - m);
  }
  return tau_by_quadrature(s);
}

double SeparatingPath::tau_by_quadrature(double s) const {
  check_action(s, "tau");
  s = std::max(s, s_l_);
  return t_l_ + integrate([this](double y) { return wage_integrand_sender(y); }, s_l_, s, kWageQuad)
                    .value;
}

double SeparatingPath::tau_receiver_form(double s) const {
  check_action(s, "tau_receiver_form");
  s = std::max(s, s_l_);
  return t_l_ +
         integrate([this](double y) { return wage_integrand_receiver(y); }, s_l_, s, kWageQuad)
             .value;
}

double SeparatingPath::sender_rent(double z) const {
  const double s = sigma(z);
  const double cost = s == 0.0 ? 0.0 : p_.beta_cost * s * s / z;
  return tau(s) - cost;
}

double SeparatingPath::receiver_rent(double z) const {
  const double s = sigma(z);
  return surplus_v(p_, match_n(p_, z), s, z) - tau(s);
}

}  // namespace dopt
