#pragma once

// Scalar numerical kernels shared by the equilibrium modules: adaptive
// Gauss-Kronrod quadrature, Brent's bracketed root finder, Brent's
// one-dimensional minimizer and a bounded Nelder-Mead simplex search.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "dopt/errors.hpp"

namespace dopt {

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 60;
  int max_intervals = 5000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  int depth;
};

template <class F>
Segment kronrod21(F& f, double a, double b, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_centre = f(centre);
  double res_k = kKronrodWeights[10] * f_centre;
  double res_g = 0.0;
  double res_abs = std::abs(res_k);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double sum = f1[j] + f2[j];
    res_k += kKronrodWeights[j] * sum;
    res_abs += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kGaussWeights[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kKronrodWeights[10] * std::abs(f_centre - mean);
  for (int j = 0; j < 10; ++j)
    res_asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double abs_half = std::abs(half);
  res_asc *= abs_half;
  res_abs *= abs_half;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0)
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * res_abs, err);
  return {a, b, res_k * half, err, depth};
}

}  // namespace detail

/// Globally adaptive 21-point Gauss-Kronrod quadrature of f over [a, b].
///
/// Bisects the segment with the largest error estimate until the summed
/// estimate is below max(abs_tol, rel_tol * |I|). Throws ConvergenceError when
/// a segment would exceed max_depth bisections or the segment budget runs out.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opts = {}) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw DomainError("integrate: non-finite integration limits");
  if (a > b) {
    QuadResult r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }

  auto worse = [](const detail::Segment& l, const detail::Segment& r) {
    return l.error < r.error;
  };
  std::vector<detail::Segment> heap;
  heap.push_back(detail::kronrod21(f, a, b, 0));
  int evaluations = 21;

  auto totals = [&heap] {
    double v = 0.0, e = 0.0;
    for (const auto& s : heap) {
      v += s.value;
      e += s.error;
    }
    return std::pair{v, e};
  };

  for (;;) {
    auto [value, error] = totals();
    if (!std::isfinite(value))
      throw ConvergenceError("integrate: non-finite integrand value");
    if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value)))
      return {value, error, evaluations};

    std::pop_heap(heap.begin(), heap.end(), worse);
    const detail::Segment worst = heap.back();
    heap.pop_back();
    if (worst.depth >= opts.max_depth ||
        static_cast<int>(heap.size()) + 2 > opts.max_intervals) {
      std::ostringstream msg;
      msg << "integrate: no convergence on [" << a << ", " << b
          << "], estimated error " << error << " after " << evaluations
          << " evaluations";
      throw ConvergenceError(msg.str());
    }
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(detail::kronrod21(f, worst.a, mid, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(detail::kronrod21(f, mid, worst.b, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), worse);
    evaluations += 42;
  }
}

struct RootOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_iter = 200;
};

/// Brent's method on a bracket with known endpoint values of opposite sign.
template <class F>
double find_root(F&& f, double lo, double hi, double f_lo, double f_hi,
                 const RootOptions& opts = {}) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << f_lo
        << ", " << f_hi << ")";
    throw ConvergenceError(msg.str());
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo, b = hi, fa = f_lo, fb = f_hi;
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * (opts.rel_tol * std::abs(b) + opts.abs_tol);
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw ConvergenceError("find_root: iteration limit reached");
}

template <class F>
double find_root(F&& f, double lo, double hi, const RootOptions& opts = {}) {
  return find_root(f, lo, hi, f(lo), f(hi), opts);
}

struct MinimumResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Brent's golden-section / parabolic minimizer of f on [lo, hi].
/// Only interior points are evaluated; callers that care about the endpoints
/// compare them explicitly.
template <class F>
MinimumResult minimize_scalar(F&& f, double lo, double hi, double x_tol, int max_iter = 200) {
  constexpr double golden = 0.3819660112501051;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo, b = hi;
  double x = a + golden * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int evals = 1;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = std::sqrt(eps) * std::abs(x) + x_tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) return {x, fx, evals};
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = mid > x ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= mid) ? a - x : b - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    ++evals;
    if (fu <= fx) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  throw ConvergenceError("minimize_scalar: iteration limit reached");
}

template <std::size_t N>
using Point = std::array<double, N>;

struct SimplexOptions {
  double x_tol = 1e-6;
  double f_tol = 1e-13;
  int max_iter = 2000;
};

template <std::size_t N>
struct SimplexResult {
  Point<N> x{};
  double value = 0.0;
  int iterations = 0;
};

/// Nelder-Mead minimization of f starting from an explicit simplex.
///
/// `project` maps any trial point back into the feasible set (e.g. by
/// reflecting it across the violated boundary); every evaluated point is
/// projected first. Terminates when both the simplex diameter (max-norm)
/// is below x_tol and the spread of values is below f_tol.
template <std::size_t N, class F, class Project>
SimplexResult<N> nelder_mead(F&& f, Project&& project, std::array<Point<N>, N + 1> simplex,
                             const SimplexOptions& opts = {}) {
  std::array<double, N + 1> values{};
  for (std::size_t i = 0; i <= N; ++i) {
    simplex[i] = project(simplex[i]);
    values[i] = f(simplex[i]);
  }
  auto combine = [](const Point<N>& base, const Point<N>& dir, double t) {
    Point<N> r{};
    for (std::size_t k = 0; k < N; ++k) r[k] = base[k] + t * (dir[k] - base[k]);
    return r;
  };

  std::array<std::size_t, N + 1> order{};
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Ties broken by index so the trajectory is reproducible.
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      return values[l] < values[r] || (values[l] == values[r] && l < r);
    });
    const std::size_t best = order.front(), worst = order.back(), second = order[N - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= N; ++i)
      for (std::size_t k = 0; k < N; ++k)
        diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
    if (diameter < opts.x_tol && values[worst] - values[best] <= opts.f_tol)
      return {simplex[best], values[best], iter};
    if (diameter < 1e-3 * opts.x_tol) return {simplex[best], values[best], iter};

    Point<N> centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < N; ++k) centroid[k] += simplex[i][k] / static_cast<double>(N);
    }

    const Point<N> reflected = project(combine(centroid, simplex[worst], -1.0));
    const double f_reflected = f(reflected);
    if (f_reflected < values[best]) {
      const Point<N> expanded = project(combine(centroid, simplex[worst], -2.0));
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Point<N> contracted =
        project(combine(centroid, outside ? reflected : simplex[worst], 0.5));
    const double f_contracted = f(contracted);
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      simplex[i] = project(combine(simplex[best], simplex[i], 0.5));
      values[i] = f(simplex[i]);
    }
  }
  throw ConvergenceError("nelder_mead: iteration limit reached");
}

}  // namespace dopt
