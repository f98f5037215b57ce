#pragma once

#include "dopt/distributions.hpp"
#include "dopt/separating.hpp"

namespace dopt {

/// Aggregate net surplus of a well-behaved equilibrium, split into the
/// separating types [z_l, z_h) and the pooling types [z_h, zbar].
/// Transfers cancel, so nothing here depends on the wage schedule.
struct SurplusBreakdown {
  double separating_part = 0.0;
  double pooling_part = 0.0;
  double total = 0.0;
  double z_l = 0.0;
  double z_h = 0.0;
};

/// Distribution moments of the pooling region above z_h. They do not depend on
/// z_l, so a sweep over z_l can share them.
struct PoolingMoments {
  double z_h = 0.0;
  double trunc_mean = 0.0;  // E[z | z >= z_h]
  double moment_q = 0.0;    // integral of z^q g over [z_h, zbar]
  double moment_inv = 0.0;  // integral of g / z over [max(z_h, kEffectiveZero), zbar]
};

PoolingMoments pooling_moments(const ModelParams& p, const SenderDist& d, double z_h);

/// A k s_h^a E[z | z >= z_h] m_q - beta s_h^2 m_inv, with the cost term zero when s_h = 0.
double pooling_value(const ModelParams& p, double s_h, const PoolingMoments& m);

/// Net surplus of separating types, integral over [z_a, z_b] of
/// (A k z^(q+1) sigma(z)^a - beta sigma(z)^2 / z) g(z).
double separating_integral(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                           double z_a, double z_b);

/// Pi_w for 0 <= z_l <= z_h <= zbar on an already built path (path.z_l() == z_l).
SurplusBreakdown pi_w(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                      double z_l, double z_h);
SurplusBreakdown pi_w(const ModelParams& p, const SenderDist& d, double z_l, double z_h);

/// Surplus when every type above z_star pools on s_star.
double pi_p(const ModelParams& p, const SenderDist& d, double z_star);

/// Surplus of the separating equilibrium under full delegation (z_h = zbar).
double pi_s(const ModelParams& p, const SenderDist& d, double z_l = 0.0);

/// Pi_w(0, z_h) - Pi_s with q and a replaced by the given small values.
/// As (q, a, z_h) go to 0 the gap tends to A k E[z] / 2.
double theorem_gap(const ModelParams& p, const SenderDist& d, double q_small, double a_small,
                   double z_h_small);

}  // namespace dopt
