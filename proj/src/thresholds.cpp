#include "dopt/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace dopt {
namespace {

// solve_top is not evaluated this close to the top of the support.
constexpr double kTopGuard = 1e-9;

bool agree(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max({std::abs(x), std::abs(y), 1e-12});
}

}  // namespace

std::string_view to_string(EquilibriumClass c) {
  switch (c) {
    case EquilibriumClass::Pooling:
      return "Pooling";
    case EquilibriumClass::StrictlyWellBehaved:
      return "StrictlyWellBehaved";
    case EquilibriumClass::Separating:
      return "Separating";
  }
  return "Unknown";
}

EquilibriumClass parse_equilibrium_class(std::string_view name) {
  if (name == "Pooling") return EquilibriumClass::Pooling;
  if (name == "StrictlyWellBehaved") return EquilibriumClass::StrictlyWellBehaved;
  if (name == "Separating") return EquilibriumClass::Separating;
  throw ConfigError("unknown equilibrium class '" + std::string(name) + "'");
}

BottomSolution solve_bottom(const ModelParams& p, const SenderDist& d, double z_l) {
  if (!(z_l >= 0.0 && z_l < d.zbar())) {
    std::ostringstream msg;
    msg << "solve_bottom: z_l = " << z_l << " outside [0, " << d.zbar() << ")";
    throw DomainError(msg.str());
  }
  if (z_l == 0.0) return {0.0, 0.0};
  const double s_l = s_lower(p, z_l);
  // Both bottom conditions bind, so t_l = c(s_l, z_l) = v(n(z_l), s_l, z_l).
  return {s_l, p.beta_cost * s_l * s_l / z_l};
}

double invert_floor(const ModelParams& p, const SenderDist& d, double t_l) {
  if (t_l < 0.0) throw DomainError("invert_floor: negative reaction floor");
  if (t_l == 0.0) return 0.0;
  // t_l(z) = beta (A k / beta)^(2 / (2-a)) z^((2q + 2 + a) / (2-a)).
  const double scale =
      p.beta_cost * std::pow(p.A * p.k / p.beta_cost, 2.0 / (2.0 - p.a));
  const double exponent = (2.0 * p.q + 2.0 + p.a) / (2.0 - p.a);
  const double z_l = std::pow(t_l / scale, 1.0 / exponent);
  if (z_l >= d.zbar()) {
    std::ostringstream msg;
    msg << "invert_floor: floor " << t_l << " excludes every sender type";
    throw DomainError(msg.str());
  }
  return z_l;
}

SeparatingPath make_path(const ModelParams& p, const SenderDist& d, double z_l) {
  const BottomSolution bottom = solve_bottom(p, d, z_l);
  return SeparatingPath(p, d.zbar(), z_l, bottom.t_l);
}

double top_residual(const ModelParams& p, double z_h, double trunc_mean, double sigma_h,
                    double s) {
  const double ak = p.A * p.k;
  const double zq = std::pow(z_h, p.q);
  const double rhs = ak * std::pow(sigma_h, p.a) * zq * z_h - p.beta_cost * sigma_h * sigma_h / z_h;
  return ak * std::pow(s, p.a) * zq * trunc_mean - p.beta_cost * s * s / z_h - rhs;
}

double solve_pooled_action(const ModelParams& p, double z_h, double trunc_mean, double sigma_h) {
  auto f = [&](double s) { return top_residual(p, z_h, trunc_mean, sigma_h, s); };
  const double lo = sigma_h * (1.0 + 1e-10);
  const double f_lo = f(lo);
  // Only possible when E[z | z >= z_h] is indistinguishable from z_h.
  if (f_lo <= 0.0) return sigma_h;
  double hi = 2.0 * sigma_h;
  double f_hi = f(hi);
  for (int i = 0; f_hi > 0.0; ++i) {
    if (i > 200) throw ConvergenceError("solve_pooled_action: could not bracket the upper root");
    hi *= 2.0;
    f_hi = f(hi);
  }
  return find_root(f, lo, hi, f_lo, f_hi, RootOptions{1e-13, 1e-300, 300});
}

TopSolution solve_top(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                      double z_h) {
  if (!(z_h > path.z_l() && z_h < d.zbar())) {
    std::ostringstream msg;
    msg << "solve_top: z_h = " << z_h << " outside (" << path.z_l() << ", " << d.zbar() << ")";
    throw DomainError(msg.str());
  }
  TopSolution top;
  top.sigma_h = path.sigma(z_h);
  top.trunc_mean = d.trunc_mean(z_h);
  top.s_h = solve_pooled_action(p, z_h, top.trunc_mean, top.sigma_h);
  top.tau_h = path.tau(top.sigma_h);

  const double n_h = match_n(p, z_h);
  const double cost_h = p.beta_cost * top.s_h * top.s_h / z_h;
  const double cost_sigma = p.beta_cost * top.sigma_h * top.sigma_h / z_h;
  top.t_h = cost_h + top.tau_h - cost_sigma;
  top.t_h_buyers = surplus_v(p, n_h, top.s_h, top.trunc_mean) -
                   surplus_v(p, n_h, top.sigma_h, z_h) + top.tau_h;
  if (!agree(top.t_h, top.t_h_buyers, 1e-6)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "solve_top: cap retrievals disagree at z_h = " << z_h << " (sellers " << top.t_h
        << ", buyers " << top.t_h_buyers << ")";
    throw ConsistencyError(msg.str());
  }
  return top;
}

PoolingSolution pooling_star(const ModelParams& p, const SenderDist& d, double z_star) {
  if (!(z_star >= 0.0 && z_star < d.zbar())) {
    std::ostringstream msg;
    msg << "pooling_star: z* = " << z_star << " outside [0, " << d.zbar() << ")";
    throw DomainError(msg.str());
  }
  if (z_star == 0.0) return {0.0, 0.0};
  const double e = d.trunc_mean(z_star);
  const double s =
      std::pow(std::pow(z_star, p.q + 1.0) * p.A * p.k * e / p.beta_cost, 1.0 / (2.0 - p.a));
  return {s, p.beta_cost * s * s / z_star};
}

Thresholds make_thresholds(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                           double z_h) {
  const double zbar = d.zbar();
  const double z_l = path.z_l();
  if (z_h < z_l - kEffectiveZero || z_h > zbar + kEffectiveZero) {
    std::ostringstream msg;
    msg << "make_thresholds: z_h = " << z_h << " outside [" << z_l << ", " << zbar << "]";
    throw DomainError(msg.str());
  }
  Thresholds th;
  th.z_l = z_l;
  if (z_h - z_l < kEffectiveZero) {
    const PoolingSolution pool = pooling_star(p, d, z_l);
    th.z_h = z_l;
    th.s_l = th.s_h = pool.s_star;
    th.t_l = th.t_h = pool.t_star;
    th.cls = EquilibriumClass::Pooling;
  } else if (zbar - z_h < kEffectiveZero) {
    th.z_h = zbar;
    th.s_l = path.s_l();
    th.t_l = path.t_l();
    th.s_h = path.s_max();
    th.t_h = path.tau_max();
    th.cls = EquilibriumClass::Separating;
  } else {
    const TopSolution top = solve_top(p, d, path, z_h);
    th.z_h = z_h;
    th.s_l = path.s_l();
    th.t_l = path.t_l();
    th.s_h = top.s_h;
    th.t_h = top.t_h;
    th.cls = EquilibriumClass::StrictlyWellBehaved;
  }
  th.x_h = match_n(p, th.z_h);
  return th;
}

Thresholds invert_cap(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                      double t_h) {
  if (t_h < path.t_l() * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "invert_cap: cap " << t_h << " below the floor " << path.t_l();
    throw DomainError(msg.str());
  }
  const double zbar = d.zbar();
  const double z_l = path.z_l();
  if (t_h >= path.tau_max()) return make_thresholds(p, d, path, zbar);
  const double t_bottom = pooling_star(p, d, z_l).t_star;
  if (t_h <= t_bottom) return make_thresholds(p, d, path, z_l);

  auto cap_of = [&](double z_h) {
    if (z_h >= zbar - kTopGuard) return path.tau_max() - t_h;
    if (z_h <= z_l) return t_bottom - t_h;
    return solve_top(p, d, path, z_h).t_h - t_h;
  };
  const double z_h =
      find_root(cap_of, z_l, zbar, t_bottom - t_h, path.tau_max() - t_h, RootOptions{1e-14, 1e-15, 300});
  Thresholds th = make_thresholds(p, d, path, z_h);
  if (th.cls == EquilibriumClass::StrictlyWellBehaved) th.t_h = t_h;
  return th;
}

}  // namespace dopt
