#ifndef MCG_QUADRATURE_HPP
#define MCG_QUADRATURE_HPP

// Globally adaptive 21-point Gauss-Kronrod quadrature over a list of
// panels. A panel may carry a power substitution y = lo + (hi - lo) v^p,
// v in [0, 1], which flattens an integrable y^(beta-1) spike at `lo` when
// p = 1 / beta.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "mcg/errors.hpp"

namespace mcg {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 200;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) {
      throw DomainError("QuadratureSpec tolerances must be positive");
    }
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;
  int subdivisions = 0;
  int evaluations = 0;
};

struct Panel {
  double lo;
  double hi;
  double power = 1;  // substitution exponent; 1 means plain
};

namespace detail {

inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208292238010, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights of the embedded 10-point rule (odd Kronrod nodes).
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  int panel;
  double u0, u1;
  double value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
void gk21(F& f, const Panel& pn, Segment& s) {
  const double center = 0.5 * (s.u0 + s.u1);
  const double half = 0.5 * (s.u1 - s.u0);
  auto eval = [&](double u) {
    if (pn.power == 1) {
      const double y = pn.lo + (pn.hi - pn.lo) * u;
      return (pn.hi - pn.lo) * f(y);
    }
    if (u <= 0) return 0.0;
    const double up = std::pow(u, pn.power);
    const double y = pn.lo + (pn.hi - pn.lo) * up;
    const double v = f(y);
    if (v == 0) return 0.0;
    return (pn.hi - pn.lo) * pn.power * (up / u) * v;
  };
  const double fc = eval(center);
  double rk = fc * kWgk[10];
  double rg = 0;
  double resabs = std::abs(rk);
  double fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = eval(center - dx);
    fv2[j] = eval(center + dx);
    rk += kWgk[j] * (fv1[j] + fv2[j]);
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) rg += kWg[j / 2] * (fv1[j] + fv2[j]);
  }
  const double mean = 0.5 * rk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }
  s.value = rk * half;
  double err = std::abs((rk - rg) * half);
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
  const double round_floor = 50 * std::numeric_limits<double>::epsilon() * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50 * std::numeric_limits<double>::epsilon())) {
    err = std::max(err, round_floor);
  }
  s.error = err;
  if (!std::isfinite(s.value) || !std::isfinite(s.error)) {
    throw NumericError("quadrature: integrand is not finite on the panel");
  }
}

}  // namespace detail

/// Integral of f over the union of `panels`. Throws NumericError when the
/// tolerance max(abs_tol, rel_tol |I|) is not met after max_subdivisions
/// bisections.
template <typename F>
QuadratureResult integrate(F&& f, const std::vector<Panel>& panels, const QuadratureSpec& spec = {}) {
  spec.validate();
  std::priority_queue<detail::Segment> heap;
  QuadratureResult out;
  double total = 0;
  double err = 0;
  for (int i = 0; i < static_cast<int>(panels.size()); ++i) {
    if (!(panels[i].hi > panels[i].lo)) continue;
    detail::Segment s{i, 0.0, 1.0, 0, 0};
    detail::gk21(f, panels[i], s);
    out.evaluations += 21;
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (out.subdivisions >= spec.max_subdivisions || heap.empty()) {
      throw NumericError("quadrature: tolerance not met after " +
                         std::to_string(out.subdivisions) + " subdivisions (error estimate " +
                         std::to_string(err) + ")");
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.u0 + worst.u1);
    detail::Segment left{worst.panel, worst.u0, mid, 0, 0};
    detail::Segment right{worst.panel, mid, worst.u1, 0, 0};
    detail::gk21(f, panels[worst.panel], left);
    detail::gk21(f, panels[worst.panel], right);
    out.evaluations += 42;
    ++out.subdivisions;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0;
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.abs_error = err;
  return out;
}

/// Plain panels from sorted breakpoints.
inline std::vector<Panel> panels_from_breaks(const std::vector<double>& breaks) {
  std::vector<Panel> out;
  for (std::size_t i = 1; i < breaks.size(); ++i) out.push_back({breaks[i - 1], breaks[i], 1});
  return out;
}

}  // namespace mcg

#endif  // MCG_QUADRATURE_HPP
