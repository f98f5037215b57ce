#include "dopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace dopt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// An interior point must beat a boundary by this (relative) margin to be chosen
// over it; otherwise the search is just creeping toward the boundary.
constexpr double kBoundaryMargin = 1e-12;
constexpr double kTieBand = 1e-9;
constexpr double kFlatBand = 1e-10;
constexpr double kSnapLoss = 1e-10;

double scaled(double band, double value) { return band * std::max(1.0, std::abs(value)); }

struct Candidate {
  double z_l = 0.0;
  double z_h = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// Pi_w with the separating path of the last z_l kept around, since the
// searches below mostly move z_h at fixed z_l.
class Objective {
 public:
  Objective(const ModelParams& p, const SenderDist& d) : p_(p), d_(d) {}

  double operator()(double z_l, double z_h) {
    ++evaluations;
    z_h = std::clamp(z_h, z_l, d_.zbar());
    if (!path_ || path_->z_l() != z_l) path_.emplace(make_path(p_, d_, z_l));
    return pi_w(p_, d_, *path_, z_l, z_h).total;
  }

  Candidate at(double z_l, double z_h) {
    z_h = std::clamp(z_h, z_l, d_.zbar());
    return {z_l, z_h, (*this)(z_l, z_h)};
  }

  long evaluations = 0;

 private:
  const ModelParams& p_;
  const SenderDist& d_;
  std::optional<SeparatingPath> path_;
};

struct EdgeFlags {
  bool lo_is_boundary = false;
  bool hi_is_boundary = false;
  bool* tie = nullptr;
};

// Maximizes g(x).value on [lo, hi]. The endpoints are compared explicitly and
// win unless the interior optimum is strictly better.
template <class G>
Candidate line_search(G&& g, double lo, double hi, double tol, const EdgeFlags& flags,
                      double (*coord)(const Candidate&)) {
  const Candidate at_lo = g(lo);
  const Candidate at_hi = g(hi);
  const bool hi_wins = at_hi.value > at_lo.value;
  const Candidate edge = hi_wins ? at_hi : at_lo;
  if (hi - lo <= tol) return edge;

  Candidate inner;
  auto negated = [&](double x) {
    const Candidate c = g(x);
    if (c.value > inner.value) inner = c;
    return -c.value;
  };
  minimize_scalar(negated, lo, hi, tol);
  if (inner.value > edge.value + scaled(kBoundaryMargin, edge.value)) return inner;

  const bool edge_is_boundary = hi_wins ? flags.hi_is_boundary : flags.lo_is_boundary;
  if (flags.tie && edge_is_boundary && inner.value >= edge.value - scaled(kTieBand, edge.value) &&
      std::abs(coord(inner) - coord(edge)) > kEffectiveZero)
    *flags.tie = true;
  return edge;
}

double coord_z_l(const Candidate& c) { return c.z_l; }
double coord_z_h(const Candidate& c) { return c.z_h; }

struct Grid {
  int n = 0;
  std::vector<double> z;
  std::vector<double> values;
};

void fill_row(const ModelParams& p, const SenderDist& d, const std::vector<double>& z,
              const std::vector<PoolingMoments>& moments, int i, double* row) {
  const int n = static_cast<int>(z.size());
  const SeparatingPath path = make_path(p, d, z[i]);
  row[i] = pooling_value(p, pooling_star(p, d, z[i]).s_star, moments[i]);
  double separating = 0.0;
  for (int j = i + 1; j < n; ++j) {
    separating += separating_integral(p, d, path, z[j - 1], z[j]);
    double pooling = 0.0;
    if (j < n - 1) {
      const double s_h =
          solve_pooled_action(p, z[j], moments[j].trunc_mean, path.sigma(z[j]));
      pooling = pooling_value(p, s_h, moments[j]);
    }
    row[j] = separating + pooling;
  }
}

Grid evaluate_grid(const ModelParams& p, const SenderDist& d, int n, int threads) {
  if (n < 3) throw ConfigError("optimizer: grid needs at least 3 points per axis");
  Grid g;
  g.n = n;
  g.z.resize(n);
  for (int i = 0; i < n; ++i) g.z[i] = d.zbar() * i / (n - 1);
  g.z[n - 1] = d.zbar();
  g.values.assign(static_cast<std::size_t>(n) * n, kNaN);

  std::vector<PoolingMoments> moments(n);
  for (int j = 0; j < n; ++j) moments[j] = pooling_moments(p, d, g.z[j]);

  // Every row writes only its own slice, so the values do not depend on
  // how rows are spread over threads.
  const int rows = n - 1;
  const int workers = std::clamp(threads, 1, rows);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](int w) {
    try {
      for (int i = w; i < rows; i += workers)
        fill_row(p, d, g.z, moments, i, g.values.data() + static_cast<std::size_t>(i) * n);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return g;
}

}  // namespace

std::string_view to_string(RefineMethod m) {
  switch (m) {
    case RefineMethod::Auto:
      return "auto";
    case RefineMethod::NelderMead:
      return "nelder-mead";
    case RefineMethod::NestedGolden:
      return "nested-golden";
    case RefineMethod::GridOnly:
      return "grid";
  }
  return "unknown";
}

RefineMethod parse_refine_method(std::string_view name) {
  for (RefineMethod m : {RefineMethod::Auto, RefineMethod::NelderMead, RefineMethod::NestedGolden,
                         RefineMethod::GridOnly})
    if (to_string(m) == name) return m;
  throw ConfigError("unknown refinement method '" + std::string(name) + "'");
}

std::vector<double> surplus_grid(const ModelParams& p, const SenderDist& d, int n, int threads) {
  p.validate();
  return evaluate_grid(p, d, n, threads).values;
}

DelegationOutcome evaluate_outcome(const ModelParams& p, const SenderDist& d, double z_l,
                                   double z_h) {
  p.validate();
  const SeparatingPath path = make_path(p, d, z_l);
  DelegationOutcome out;
  out.thresholds = make_thresholds(p, d, path, z_h);
  out.t_low = out.thresholds.t_l;
  out.t_high = out.thresholds.t_h;
  out.surplus = pi_w(p, d, path, z_l, out.thresholds.z_h);
  out.pi_s = pi_s(p, d, 0.0);
  out.percentile_zh = d.cdf(out.thresholds.z_h);
  return out;
}

DelegationOutcome optimize(const ModelParams& p, const SenderDist& d,
                           const OptimizerOptions& opts) {
  p.validate();
  if (!(opts.tol > 0.0)) throw ConfigError("optimizer: tol must be positive");
  const double zbar = d.zbar();
  const Grid grid = evaluate_grid(p, d, opts.grid, opts.threads);
  const int n = grid.n;

  OptimizerDiagnostics diag;
  diag.grid = n;
  diag.grid_evaluations = static_cast<long>(n) * (n + 1) / 2 - 1;

  // Reduction by value, then lexicographically smallest (z_l, z_h).
  int bi = 0, bj = 0;
  double best_value = grid.values[0];
  for (int i = 0; i < n - 1; ++i)
    for (int j = i; j < n; ++j) {
      const double v = grid.values[static_cast<std::size_t>(i) * n + j];
      if (v > best_value) {
        best_value = v;
        bi = i;
        bj = j;
      }
    }
  diag.grid_best = best_value;
  diag.grid_best_z_l = grid.z[bi];
  diag.grid_best_z_h = grid.z[bj];
  for (int i = 0; i < n - 1 && !diag.flat_objective; ++i)
    for (int j = i; j < n; ++j) {
      const double v = grid.values[static_cast<std::size_t>(i) * n + j];
      if (v >= best_value - scaled(kFlatBand, best_value) &&
          std::max(std::abs(i - bi), std::abs(j - bj)) > 1) {
        diag.flat_objective = true;
        diag.warnings.push_back("flat objective: best grid value matched by a non-adjacent cell");
        break;
      }
    }

  Objective f(p, d);
  const Candidate grid_best{grid.z[bi], grid.z[bj], best_value};
  const double tol = opts.tol;
  auto z_at = [&](int i) { return grid.z[std::clamp(i, 0, n - 1)]; };
  // z_l has to stay strictly inside the support.
  const double z_l_max = std::nextafter(zbar, 0.0) * (1.0 - 1e-12);

  auto best_z_h = [&](double z_l, double lo, double hi, bool* tie) {
    lo = std::max(lo, z_l);
    hi = std::min(hi, zbar);
    EdgeFlags flags{lo == z_l, hi == zbar, tie};
    return line_search([&](double z_h) { return f.at(z_l, z_h); }, lo, hi, tol, flags, coord_z_h);
  };

  auto nested = [&]() {
    const double l_lo = z_at(bi - 1);
    const double l_hi = std::min(z_at(bi + 1), z_l_max);
    const double h_lo = z_at(bj - 1);
    const double h_hi = z_at(bj + 1);
    const Candidate outer = line_search(
        [&](double z_l) { return best_z_h(z_l, h_lo, h_hi, nullptr); }, l_lo, l_hi, tol,
        EdgeFlags{l_lo == 0.0, false, nullptr}, coord_z_l);
    // Repeat the winning inner search to record boundary ties.
    return best_z_h(outer.z_l, h_lo, h_hi, &diag.tie);
  };

  auto simplex_search = [&]() {
    auto project = [&](Point<2> x) {
      x[0] = std::clamp(x[0], 0.0, z_l_max);
      x[1] = std::clamp(x[1], x[0], zbar);
      return x;
    };
    const double step = 0.5 * (zbar / (n - 1));
    const double dl = grid_best.z_l + step <= grid_best.z_h ? step : -step;
    const double dh = grid_best.z_h + step <= zbar ? step : -step;
    std::array<Point<2>, 3> simplex{Point<2>{grid_best.z_l, grid_best.z_h},
                                    Point<2>{grid_best.z_l + dl, grid_best.z_h},
                                    Point<2>{grid_best.z_l, grid_best.z_h + dh}};
    const auto res = nelder_mead<2>([&](const Point<2>& x) { return -f(x[0], x[1]); }, project,
                                    simplex, SimplexOptions{tol, 1e-13, 5000});
    return Candidate{res.x[0], res.x[1], -res.value};
  };

  auto pooling_line = [&]() {
    const double lo = z_at(bi - 1);
    const double hi = std::min(z_at(bi + 1), z_l_max);
    return line_search([&](double z) { return f.at(z, z); }, lo, hi, tol,
                       EdgeFlags{lo == 0.0, false, nullptr}, coord_z_l);
  };

  Candidate refined = grid_best;
  switch (opts.method) {
    case RefineMethod::GridOnly:
      diag.method = "grid";
      break;
    case RefineMethod::NestedGolden:
      diag.method = "nested-golden";
      refined = nested();
      break;
    case RefineMethod::NelderMead:
      diag.method = "nelder-mead";
      refined = simplex_search();
      break;
    case RefineMethod::Auto:
      if (bi == 0) {
        diag.method = "nested-golden";
        refined = nested();
      } else if (bj == bi) {
        diag.method = "pooling-line+nelder-mead";
        const Candidate line = pooling_line();
        const Candidate simplex = simplex_search();
        refined = simplex.value > line.value + scaled(kBoundaryMargin, line.value) ? simplex : line;
      } else {
        diag.method = "nelder-mead";
        refined = simplex_search();
      }
      break;
  }
  Candidate best = refined.value >= grid_best.value - scaled(kBoundaryMargin, grid_best.value)
                       ? refined
                       : grid_best;

  auto try_snap = [&](double z_l, double z_h) {
    const Candidate c = f.at(z_l, z_h);
    if (c.value >= best.value - scaled(kSnapLoss, best.value)) best = c;
  };
  if (best.z_l > 0.0 && best.z_l < kEffectiveZero) try_snap(0.0, best.z_h);
  if (best.z_h > best.z_l && best.z_h - best.z_l < kEffectiveZero) try_snap(best.z_l, best.z_l);
  if (best.z_h < zbar && zbar - best.z_h < kEffectiveZero) try_snap(best.z_l, zbar);
  diag.refine_evaluations = f.evaluations;
  if (diag.tie) diag.warnings.push_back("boundary optimum tied with an interior candidate");

  DelegationOutcome out = evaluate_outcome(p, d, best.z_l, best.z_h);
  if (out.surplus.total < out.pi_s - scaled(kTieBand, out.pi_s) ||
      out.surplus.total < best_value - scaled(kTieBand, best_value)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "optimum " << out.surplus.total << " below the full-delegation value " << out.pi_s
        << " or the best grid value " << best_value;
    diag.warnings.push_back(msg.str());
  }
  out.diagnostics = std::move(diag);
  return out;
}

}  // namespace dopt
