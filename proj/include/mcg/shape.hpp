#ifndef MCG_SHAPE_HPP
#define MCG_SHAPE_HPP

// Numeric moments, mgf and entropies by panelled quadrature, plus the
// quantile-based Bowley skewness and Moors kurtosis.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include "mcg/distribution.hpp"
#include "mcg/errors.hpp"
#include "mcg/quadrature.hpp"

namespace mcg {

using QuantileFn = std::function<double(double)>;

namespace detail {

inline constexpr double kLowerSplits[] = {1e-3, 1e-2, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999};
inline constexpr double kUpperSplits[] = {1e-4, 1e-6, 1e-9, 1e-13, 1e-18, 1e-24, 1e-30};

/// Point with upper-tail probability s. Falls back to the tail asymptote
/// 1 - F ~ (c e^{-w})^b / (b B(a/c, b)) when 1 - V underflows.
template <McDonaldLaw P>
double upper_tail_point(const P& p, double s) {
  double y = std::numeric_limits<double>::infinity();
  try {
    y = upper_quantile(p, s);
  } catch (const ConvergenceError&) {
  }
  if (std::isfinite(y)) return y;
  const double w = std::log(double(p.c)) -
                   (std::log(s) + std::log(double(p.b)) + log_beta(p.a / p.c, p.b)) / p.b;
  return p.base().inverse_cum_hazard(w);
}

/// Panels split at fixed quantiles of the law, ending where the upper
/// tail falls to 1e-30. The first panel carries a power substitution for
/// an integrand that behaves like y^(spike - 1) at the origin.
template <McDonaldLaw P>
std::vector<Panel> law_panels(const P& p, double spike) {
  std::vector<double> pts;
  for (double t : kLowerSplits) {
    double y = 0;
    try {
      y = quantile(p, t);
    } catch (const ConvergenceError&) {
      continue;
    }
    if (y > 0 && std::isfinite(y)) pts.push_back(y);
  }
  for (double s : kUpperSplits) {
    const double y = upper_tail_point(p, s);
    if (y > 0 && std::isfinite(y)) pts.push_back(y);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) throw NumericError("law_panels: no finite quantile breakpoints");
  std::vector<Panel> panels;
  const double power = spike < 1 ? 1 / spike : 1.0;
  panels.push_back({0.0, pts.front(), power});
  for (std::size_t i = 1; i < pts.size(); ++i) panels.push_back({pts[i - 1], pts[i], 1});
  return panels;
}

/// Integral of h(y, ln f(y)) over the support.
template <McDonaldLaw P, typename H>
double integrate_law(const P& p, H&& h, double spike, const QuadratureSpec& q) {
  p.validate();
  auto integrand = [&](double y) {
    const double lf = log_pdf(p, y);
    if (lf == -std::numeric_limits<double>::infinity()) return 0.0;
    return h(y, lf);
  };
  return integrate(integrand, law_panels(p, spike), q).value;
}

}  // namespace detail

/// Integral of the density over the support (normalization check).
template <McDonaldLaw P>
double total_mass(const P& p, const QuadratureSpec& q = {}) {
  return detail::integrate_law(
      p, [](double, double lf) { return std::exp(lf); }, double(p.a), q);
}

/// E(Y^k) by quadrature.
template <McDonaldLaw P>
double moment_numeric(const P& p, int k, const QuadratureSpec& q = {}) {
  if (k < 1) throw DomainError("moment_numeric: k must be >= 1");
  return detail::integrate_law(
      p, [k](double y, double lf) { return std::exp(k * std::log(y) + lf); }, double(p.a) + k, q);
}

/// E(e^{tY}) by quadrature.
template <McDonaldLaw P>
double mgf_numeric(const P& p, double t, const QuadratureSpec& q = {}) {
  return detail::integrate_law(
      p, [t](double y, double lf) { return std::exp(t * y + lf); }, double(p.a), q);
}

/// -integral f ln f.
template <McDonaldLaw P>
double shannon_numeric(const P& p, const QuadratureSpec& q = {}) {
  return detail::integrate_law(
      p, [](double, double lf) { return -std::exp(lf) * lf; }, double(p.a), q);
}

/// (1 - rho)^{-1} ln integral f^rho. The spike y^(rho (a - 1)) at the origin
/// is integrable only when rho (a - 1) > -1.
template <McDonaldLaw P>
double renyi_numeric(const P& p, double rho, const QuadratureSpec& q = {}) {
  if (!(rho > 0) || rho == 1) throw DomainError("renyi_numeric: rho must be positive and != 1");
  const double spike = rho * (double(p.a) - 1) + 1;
  if (!(spike > 0)) {
    throw DomainError("renyi_numeric: integral of f^rho diverges at 0 (rho (a - 1) <= -1)");
  }
  const double I = detail::integrate_law(
      p, [rho](double, double lf) { return std::exp(rho * lf); }, spike, q);
  return std::log(I) / (1 - rho);
}

/// [Q(3/4) - 2 Q(1/2) + Q(1/4)] / [Q(3/4) - Q(1/4)].
double bowley(const QuantileFn& q);

/// [Q(7/8) - Q(5/8) + Q(3/8) - Q(1/8)] / [Q(6/8) - Q(2/8)].
double moors(const QuantileFn& q);

template <McDonaldLaw P>
QuantileFn quantile_fn(const P& p) {
  return [p](double t) { return double(quantile(p, t)); };
}

enum class ShapeMeasure { bowley, moors };

const char* shape_measure_name(ShapeMeasure m);

struct ShapeCurveRow {
  double c;
  ShapeMeasure measure;
  double value;
  double a, b, theta, gamma;
};

/// n equally spaced c values in [c_min, c_max] around `base`.
std::vector<McGParams<double>> c_sweep(const McGParams<double>& base, double c_min, double c_max,
                                       int n);

std::vector<ShapeCurveRow> shape_curves(const std::vector<McGParams<double>>& sweep,
                                        ShapeMeasure measure);

/// CSV with header "c,measure,value,a,b,theta,gamma".
void write_shape_curves_csv(std::ostream& os, const std::vector<ShapeCurveRow>& rows);

struct ShannonClosed {
  double value;        // displayed form: (a-1) zeta(a,b) + (b-1) zeta(b,a)
  double corrected;    // (a-1)/c zeta(a/c,b) + (b-1) zeta(b,a/c)
  double numeric;      // shannon_numeric
  bool fidelity_ok;    // |value - numeric| <= 1e-4 max(1, |numeric|)
};

/// ln(B(a/c,b)/(c theta)) - theta/gamma - gamma E(Y) + (theta/gamma) M(gamma)
/// plus the digamma terms, with E(Y) and M(gamma) from quadrature.
/// zeta(r, s) = psi(r + s) - psi(r).
ShannonClosed shannon_closed(const McGParams<double>& p, const QuadratureSpec& q = {});

}  // namespace mcg

#endif  // MCG_SHAPE_HPP
