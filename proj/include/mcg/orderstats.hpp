#ifndef MCG_ORDERSTATS_HPP
#define MCG_ORDERSTATS_HPP

// The i-th order statistic of n independent draws from a McDonald law:
//   f_{i:n} = f F^(i-1) (1-F)^(n-i) / B(i, n-i+1),   F_{i:n} = I(F; i, n-i+1).
// Exact routes go through the parent pdf/cdf. The series routes expand
// F^m = G^(a m) (sum_j p_j G^(c j))^m with the power-series recurrence and
// are kept for cross-checking.

#include <cmath>
#include <limits>

#include "mcg/distribution.hpp"
#include "mcg/expansions.hpp"
#include "mcg/shape.hpp"

namespace mcg {

struct OrderSpec {
  int i;
  int n;

  void validate() const {
    if (n < 1 || i < 1 || i > n) throw DomainError("OrderSpec requires 1 <= i <= n");
  }
};

template <McDonaldLaw P>
real_of<P> os_log_pdf(const P& p, OrderSpec spec, real_of<P> y) {
  using Real = real_of<P>;
  spec.validate();
  const Real lf = log_pdf(p, y);
  if (lf == -std::numeric_limits<Real>::infinity()) return lf;
  const auto F = cdf_pair(p, y);
  const Real lb = log_beta(Real(spec.i), Real(spec.n - spec.i + 1));
  return lf + detail::power_log(Real(spec.i), std::log(F.p)) +
         detail::power_log(Real(spec.n - spec.i + 1), std::log(F.q)) - lb;
}

template <McDonaldLaw P>
real_of<P> os_pdf(const P& p, OrderSpec spec, real_of<P> y) {
  return std::exp(os_log_pdf(p, spec, y));
}

/// I(F(y); i, n - i + 1).
template <McDonaldLaw P>
real_of<P> os_cdf(const P& p, OrderSpec spec, real_of<P> y) {
  using Real = real_of<P>;
  spec.validate();
  const auto F = cdf_pair(p, y);
  return inc_beta_pair(F.p, F.q, Real(spec.i), Real(spec.n - spec.i + 1)).p;
}

/// The alternating binomial sum
///   B(i, n-i+1)^{-1} sum_{k=0}^{n-i} (-1)^k C(n-i, k) F^(k+i) / (k+i).
template <McDonaldLaw P>
real_of<P> os_cdf_binomial(const P& p, OrderSpec spec, real_of<P> y) {
  using Real = real_of<P>;
  spec.validate();
  const Real F = cdf(p, y);
  const int m = spec.n - spec.i;
  Real sum = 0;
  Real binom = 1;
  for (int k = 0; k <= m; ++k) {
    sum += (k % 2 ? -binom : binom) * std::pow(F, Real(k + spec.i)) / Real(k + spec.i);
    binom = binom * Real(m - k) / Real(k + 1);
  }
  return sum / beta_fn(Real(spec.i), Real(m + 1));
}

/// E(Y_{i:n}^s) by quadrature.
template <McDonaldLaw P>
double os_moment(const P& p, OrderSpec spec, int s, const QuadratureSpec& q = {}) {
  spec.validate();
  if (s < 0) throw DomainError("os_moment: s must be >= 0");
  const double lb = log_beta(double(spec.i), double(spec.n - spec.i + 1));
  auto h = [&](double y, double lf) {
    const auto F = cdf_pair(p, y);
    const double l = lf + detail::power_log(double(spec.i), std::log(F.p)) +
                     detail::power_log(double(spec.n - spec.i + 1), std::log(F.q)) - lb;
    return std::exp((s > 0 ? s * std::log(y) : 0.0) + l);
  };
  return detail::integrate_law(p, h, double(p.a) * spec.i + s, q);
}

/// Series route for F_{i:n}; converged when every inner power series
/// meets the policy's tail bound.
SeriesValue os_series_cdf(const McGParams<double>& p, OrderSpec spec, double y,
                          const TruncationPolicy& policy = {});

/// Series route for E(Y_{i:n}^s): the inner integrals are GG moments with
/// exponents a (i+k) + c r, evaluated by gg_moment_series.
SeriesValue os_moment_series(const McGParams<double>& p, OrderSpec spec, int s,
                             const TruncationPolicy& policy = {});

}  // namespace mcg

#endif  // MCG_ORDERSTATS_HPP
