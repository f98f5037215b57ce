#include "dopt/surplus.hpp"

#include <sstream>

#include "dopt/thresholds.hpp"

namespace dopt {
namespace {

constexpr QuadOptions kSurplusQuad{1e-11, 1e-14, 60, 5000};

// Above this the pooling region carries no mass worth integrating.
constexpr double kTopGuard = 1e-9;

void check_pair(const SenderDist& d, double z_l, double z_h) {
  if (!(z_l >= 0.0 && z_l <= z_h && z_h <= d.zbar())) {
    std::ostringstream msg;
    msg << "pi_w: need 0 <= z_l <= z_h <= zbar (got z_l = " << z_l << ", z_h = " << z_h
        << ", zbar = " << d.zbar() << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

PoolingMoments pooling_moments(const ModelParams& p, const SenderDist& d, double z_h) {
  PoolingMoments m;
  m.z_h = z_h;
  if (z_h >= d.zbar() - kTopGuard) {
    m.trunc_mean = d.zbar();
    return m;
  }
  m.trunc_mean = d.trunc_mean(z_h);
  m.moment_q = d.partial_moment(z_h, p.q, kSurplusQuad);
  m.moment_inv = d.partial_moment(z_h, -1.0, kSurplusQuad);
  return m;
}

double pooling_value(const ModelParams& p, double s_h, const PoolingMoments& m) {
  const double gross = p.A * p.k * std::pow(s_h, p.a) * m.trunc_mean * m.moment_q;
  const double cost = s_h == 0.0 ? 0.0 : p.beta_cost * s_h * s_h * m.moment_inv;
  return gross - cost;
}

double separating_integral(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                           double z_a, double z_b) {
  if (z_b <= z_a) return 0.0;
  const double ak = p.A * p.k;
  auto net = [&](double z) {
    const double s = path.sigma(z);
    return (ak * std::pow(z, p.q + 1.0) * std::pow(s, p.a) - p.beta_cost * s * s / z) * d.pdf(z);
  };
  return integrate(net, z_a, z_b, kSurplusQuad).value;
}

SurplusBreakdown pi_w(const ModelParams& p, const SenderDist& d, const SeparatingPath& path,
                      double z_l, double z_h) {
  check_pair(d, z_l, z_h);
  if (path.z_l() != z_l) throw DomainError("pi_w: path is anchored at a different z_l");
  SurplusBreakdown out;
  out.z_l = z_l;
  out.z_h = z_h;
  out.separating_part = separating_integral(p, d, path, z_l, z_h);
  if (z_h < d.zbar() - kTopGuard) {
    const PoolingMoments m = pooling_moments(p, d, z_h);
    const double s_h = z_h == z_l
                           ? pooling_star(p, d, z_l).s_star
                           : solve_pooled_action(p, z_h, m.trunc_mean, path.sigma(z_h));
    out.pooling_part = pooling_value(p, s_h, m);
  }
  out.total = out.separating_part + out.pooling_part;
  return out;
}

SurplusBreakdown pi_w(const ModelParams& p, const SenderDist& d, double z_l, double z_h) {
  check_pair(d, z_l, z_h);
  if (z_l >= d.zbar()) return SurplusBreakdown{0.0, 0.0, 0.0, z_l, z_h};
  return pi_w(p, d, make_path(p, d, z_l), z_l, z_h);
}

double pi_p(const ModelParams& p, const SenderDist& d, double z_star) {
  const PoolingSolution pool = pooling_star(p, d, z_star);
  return pooling_value(p, pool.s_star, pooling_moments(p, d, z_star));
}

double pi_s(const ModelParams& p, const SenderDist& d, double z_l) {
  return pi_w(p, d, z_l, d.zbar()).total;
}

double theorem_gap(const ModelParams& p, const SenderDist& d, double q_small, double a_small,
                   double z_h_small) {
  ModelParams small = p;
  small.q = q_small;
  small.a = a_small;
  small.validate();
  const SeparatingPath path = make_path(small, d, 0.0);
  return pi_w(small, d, path, 0.0, z_h_small).total - pi_w(small, d, path, 0.0, d.zbar()).total;
}

}  // namespace dopt
