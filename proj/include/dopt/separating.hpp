#pragma once

#include "dopt/model.hpp"
#include "dopt/numerics.hpp"

namespace dopt {

/// Entry action of the lowest matched sender: 0 at z_l = 0, otherwise the
/// positive root of v(n(z_l), s, z_l) = c(s, z_l), i.e.
/// (A k z_l^(q+2) / beta)^(1 / (2 - a)).
double s_lower(const ModelParams& p, double z_l);

/// Separating backbone of a well-behaved equilibrium anchored at (z_l, s_l, t_l).
///
/// The belief mu(s) solves the sender/receiver first-order ODE in closed form:
///
///   mu(s)^(2+q) = K s^(2-a) + D (s_l / s)^(a (2+q)),
///   K = 2 beta (2+q) / (A k (2+a+aq)),
///   D = [A k (2+a+aq) z_l^(2+q) - 2 beta (2+q) s_l^(2-a)] / (A k (2+a+aq)),
///
/// so that D = 0 when z_l = 0 and D < 0 otherwise. sigma is the inverse of mu
/// on [z_l, zbar] and tau the market wage, both defined up to sigma(zbar) only.
///
/// A path is immutable after construction and safe to share across threads.
class SeparatingPath {
 public:
  SeparatingPath(const ModelParams& p, double zbar, double z_l, double t_l);

  const ModelParams& params() const { return p_; }
  double zbar() const { return zbar_; }
  double z_l() const { return z_l_; }
  double s_l() const { return s_l_; }
  double t_l() const { return t_l_; }
  /// sigma(zbar), the largest action on the path.
  double s_max() const { return s_max_; }
  /// tau(sigma(zbar)); any cap at or above this leaves the equilibrium separating.
  double tau_max() const { return tau_max_; }

  double mu(double s) const;
  /// Analytic derivative of mu.
  double mu_prime(double s) const;

  double sigma(double z) const;
  /// Same as sigma(z), starting Newton from a nearby root (e.g. the previous node).
  double sigma(double z, double guess) const;

  /// Wage schedule, integrating the sender-side form c_s(y, mu(y)) from s_l.
  /// For z_l = 0 the integral is taken in closed form.
  double tau(double s) const;
  /// The same wage through quadrature of c_s(y, mu(y)), with no closed-form shortcut.
  double tau_by_quadrature(double s) const;
  /// The wage through the receiver-side integrand v_s + v_z mu'.
  double tau_receiver_form(double s) const;

  double wage_integrand_sender(double y) const;
  double wage_integrand_receiver(double y) const;

  /// Sender rent U(z) = tau(sigma(z)) - c(sigma(z), z).
  double sender_rent(double z) const;
  /// Receiver rent R(z) = v(n(z), sigma(z), z) - tau(sigma(z)).
  double receiver_rent(double z) const;

  /// mu(s)^(2+q) and its derivative; exposed for the inversion tests.
  double mu_power(double s) const;
  double mu_power_prime(double s) const;

 private:
  void check_action(double s, const char* who) const;
  void check_type(double z, const char* who) const;
  double sigma_closed_form(double z) const;
  double sigma_newton(double z, double guess) const;

  ModelParams p_;
  double zbar_;
  double z_l_;
  double s_l_;
  double t_l_;
  double K_;
  double D_;
  double decay_;      // a (2 + q)
  double s_l_decay_;  // s_l^(a (2+q))
  double s_max_ = 0.0;
  double tau_max_ = 0.0;
};

}  // namespace dopt
