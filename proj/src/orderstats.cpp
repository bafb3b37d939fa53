#include "mcg/orderstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mcg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Truncation order for (sum_j p_j x^j)^m. When the weights terminate
// (integer b) the power is a polynomial of degree m J and may be summed
// exactly.
struct PowerPlan {
  int r_max;
  bool exact;
};

PowerPlan plan_power(const SeriesState& w, int m, const TruncationPolicy& policy) {
  if (w.converged && w.tail_bound == 0) {
    const long degree = static_cast<long>(m) * w.truncation;
    if (degree <= policy.max_terms) return {static_cast<int>(degree), true};
  }
  return {policy.max_terms, false};
}

double tail_of(double last_abs, int R, double decay, double x) {
  double bound = std::numeric_limits<double>::infinity();
  if (x < 1) bound = x / (1 - x);
  if (decay > 0) bound = std::min(bound, (R + 1.0) / decay);
  return last_abs * bound;
}

}  // namespace

SeriesValue os_series_cdf(const McGParams<double>& p, OrderSpec spec, double y,
                          const TruncationPolicy& policy) {
  p.validate();
  spec.validate();
  policy.validate();
  detail::require_eval_point(y);
  SeriesValue out;
  const double G = base_cdf(p.base(), y);
  if (G == 0) {
    out.converged = true;
    return out;
  }
  const double x = std::pow(G, p.c);
  const SeriesState w = mixture_weights_p(p, policy);
  const int nm = spec.n - spec.i;
  double sum = 0;
  double err = 0;
  bool ok = true;
  double binom = 1;
  for (int k = 0; k <= nm; ++k) {
    const int m = spec.i + k;
    const PowerPlan plan = plan_power(w, m, policy);
    const std::vector<double> cm = power_series_power(w.coeffs, m, plan.r_max);
    double inner = 0;
    double xr = 1;
    double last = 0;
    for (int r = 0; r <= plan.r_max; ++r) {
      if (r > 0) xr *= x;
      last = cm[r] * xr;
      inner += last;
    }
    double tail = 0;
    if (!plan.exact) {
      tail = tail_of(std::abs(last), plan.r_max, p.b, x);
      if (!(tail <= policy.term_tol)) ok = false;
    }
    const double weight = (k % 2 ? -binom : binom) / m * std::pow(G, p.a * m);
    sum += weight * inner;
    err += std::abs(weight) * tail;
    out.terms += plan.r_max + 1;
    binom = binom * (nm - k) / (k + 1);
  }
  const double B = beta_fn(double(spec.i), double(nm + 1));
  out.partial_sum = sum / B;
  out.value = out.partial_sum;
  out.error_estimate = err / B;
  out.converged = ok;
  if (!ok) out.note = "power series in G^c not converged within max_terms";
  return out;
}

SeriesValue os_moment_series(const McGParams<double>& p, OrderSpec spec, int s,
                             const TruncationPolicy& policy) {
  p.validate();
  spec.validate();
  policy.validate();
  if (s < 1) throw DomainError("os_moment_series: s must be >= 1");
  SeriesValue out;
  const SeriesState w = mixture_weights_p(p, policy);
  const int nm = spec.n - spec.i;
  double sum = 0;
  double err = 0;
  double binom = 1;
  for (int k = 0; k <= nm; ++k) {
    const int m = spec.i + k;
    const PowerPlan plan = plan_power(w, m, policy);
    const std::vector<double> cm = power_series_power(w.coeffs, m, plan.r_max);
    double inner = 0;
    double inner_err = 0;
    double last_abs = 0;
    for (int r = 0; r <= plan.r_max; ++r) {
      if (cm[r] == 0) continue;
      const SeriesValue e = gg_moment_series(p.a * m + p.c * r, p.theta, p.gamma, s, policy);
      out.terms += e.terms;
      if (!e.converged) {
        out.partial_sum = sum;
        out.value = kNaN;
        out.note = "GG moment at exponent " + std::to_string(p.a * m + p.c * r) + ": " + e.note;
        return out;
      }
      inner += cm[r] * e.value;
      inner_err += std::abs(cm[r]) * e.error_estimate;
      last_abs = std::abs(cm[r] * e.value);
    }
    if (!plan.exact) {
      const double tail = last_abs * (plan.r_max + 1.0) / p.b;
      if (!(tail <= 1e-6 * std::abs(inner))) {
        out.partial_sum = sum;
        out.value = kNaN;
        out.note = "power series in G^c not converged within max_terms";
        return out;
      }
      inner_err += tail;
    }
    const double weight = (k % 2 ? -binom : binom) / m;
    sum += weight * inner;
    err += std::abs(weight) * inner_err;
    binom = binom * (nm - k) / (k + 1);
  }
  const double B = beta_fn(double(spec.i), double(nm + 1));
  out.partial_sum = sum / B;
  out.error_estimate = err / B;
  out.converged = true;
  out.value = out.partial_sum;
  return out;
}

}  // namespace mcg
