#pragma once

#include <string_view>

#include "dopt/distributions.hpp"
#include "dopt/separating.hpp"

namespace dopt {

enum class EquilibriumClass { Pooling, StrictlyWellBehaved, Separating };

std::string_view to_string(EquilibriumClass c);
/// Parses the names produced by to_string; throws ConfigError otherwise.
EquilibriumClass parse_equilibrium_class(std::string_view name);

/// Lower threshold of the delegation interval: entry action and the floor
/// reaction that makes type z_l the lowest matched sender.
struct BottomSolution {
  double s_l = 0.0;
  double t_l = 0.0;
};

BottomSolution solve_bottom(const ModelParams& p, const SenderDist& d, double z_l);

/// The entry type induced by a reaction floor t_l (inverse of solve_bottom).
/// Throws DomainError if the floor would shut the whole market.
double invert_floor(const ModelParams& p, const SenderDist& d, double t_l);

/// Separating path anchored at solve_bottom(z_l).
SeparatingPath make_path(const ModelParams& p, const SenderDist& d, double z_l);

/// Upper threshold system at a given pooling type z_h.
struct TopSolution {
  double s_h = 0.0;         // pooled action (larger root of the indifference equation)
  double t_h = 0.0;         // cap from the sender-indifference retrieval
  double t_h_buyers = 0.0;  // cap from the receiver-indifference retrieval
  double sigma_h = 0.0;     // separating action of type z_h
  double tau_h = 0.0;       // separating wage at sigma_h
  double trunc_mean = 0.0;  // E[z | z >= z_h]
};

/// Residual of the pooled-action equation at action s, for pooling type z_h:
/// A k s^a z_h^q E - beta s^2 / z_h - (A k sigma_h^a z_h^(1+q) - beta sigma_h^2 / z_h).
double top_residual(const ModelParams& p, double z_h, double trunc_mean, double sigma_h, double s);

/// Pooled action via Brent on (sigma_h (1 + 1e-10), S], S doubled from
/// 2 sigma_h until the residual is negative. Requires z_l < z_h < zbar.
double solve_pooled_action(const ModelParams& p, double z_h, double trunc_mean, double sigma_h);

/// Solves the top system: pooled action s_h and the cap t_h. Both retrievals of
/// t_h are computed; disagreement beyond 1e-6 relative throws ConsistencyError.
TopSolution solve_top(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                      double z_h);

struct PoolingSolution {
  double s_star = 0.0;
  double t_star = 0.0;
};

/// Pooled action and single reaction when every type above z_star pools.
PoolingSolution pooling_star(const ModelParams& p, const SenderDist& d, double z_star);

/// Threshold types of a well-behaved equilibrium with the induced actions and
/// reactions. For a pooling equilibrium the interval is the single reaction
/// t_l = t_h = t_star and s_l = s_h = s_star.
struct Thresholds {
  double z_l = 0.0;
  double z_h = 0.0;
  double s_l = 0.0;
  double t_l = 0.0;
  double s_h = 0.0;
  double t_h = 0.0;
  double x_h = 0.0;
  EquilibriumClass cls = EquilibriumClass::Pooling;
};

/// Classifies (path.z_l(), z_h), snapping z_h to z_l or zbar when within
/// kEffectiveZero, and fills in actions and reactions.
Thresholds make_thresholds(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                           double z_h);

/// The cap t_h mapped back to the pooling type z_h (monotone root search).
/// Caps at or above tau(sigma(zbar)) give a separating equilibrium; caps at or
/// below the z_h -> z_l limit of solve_top give pooling at z_l.
Thresholds invert_cap(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                      double t_h);

}  // namespace dopt
