#ifndef MCG_EXPANSIONS_HPP
#define MCG_EXPANSIONS_HPP

// Series forms of the McDonald-Gompertz law.
//
// Mixture representation: with V = G^c,
//   F(y) = sum_j p_j G(y)^(a + j c),
//   p_j  = (-1)^j C(b-1, j) / (B(a/c, b) (a/c + j)),
// i.e. an infinite mixture of exponentiated-Gompertz (GG) laws with
// exponents a + j c. Moments and the mgf follow termwise from the GG
// moments, which are themselves double series. Those double series are
// carried for fidelity only: quadrature in shape.hpp is authoritative.

#include <optional>
#include <string>
#include <vector>

#include "mcg/distribution.hpp"
#include "mcg/specfun.hpp"

namespace mcg {

struct TruncationPolicy {
  int max_terms = 200;
  double term_tol = 1e-12;

  void validate() const;
};

/// Coefficients of a truncated series plus its convergence verdict.
struct SeriesState {
  std::vector<double> coeffs;  // length truncation + 1
  int truncation = 0;
  double last_term = 0;
  double tail_bound = 0;       // estimate of |sum_{j > J}|
  bool converged = false;
  Tolerance tol{};

  double sum() const;
};

/// A series value with its convergence verdict. Moment and mgf series
/// withhold `value` (NaN) unless converged; `partial_sum` always holds the
/// last partial sum.
struct SeriesValue {
  double value = 0;
  bool converged = false;
  double partial_sum = 0;
  int terms = 0;
  double error_estimate = 0;
  std::string note;
};

// ---- mixture weights and truncated mixtures --------------------------------

/// p_0..p_J via the product form of C(b-1, j), which stays finite at
/// integer b (where the series terminates). Converged when the same-sign
/// tail estimate |p_J| (J + a/c) / b drops below term_tol.
SeriesState mixture_weights_p(double a, double b, double c, const TruncationPolicy& policy = {});

template <McDonaldLaw P>
SeriesState mixture_weights_p(const P& p, const TruncationPolicy& policy = {}) {
  return mixture_weights_p(double(p.a), double(p.b), double(p.c), policy);
}

/// sum_j w_j p_j x^j for x = G^c in [0, 1], with w_j = 1 (cdf) or
/// w_j = a + j c (pdf). The tail bound uses both the geometric factor x and
/// the algebraic decay of p_j.
SeriesValue mixture_sum(double a, double b, double c, double x, bool pdf_weights,
                        const TruncationPolicy& policy);

template <McDonaldLaw P>
SeriesValue mixture_cdf(const P& p, real_of<P> y, const TruncationPolicy& policy = {}) {
  detail::require_eval_point(y);
  const double G = base_cdf(p.base(), double(y));
  if (G == 0) return {0.0, true, 0.0, 1, 0.0, {}};
  const double x = std::pow(G, double(p.c));
  SeriesValue s = mixture_sum(p.a, p.b, p.c, x, false, policy);
  s.value *= std::pow(G, double(p.a));
  s.partial_sum = s.value;
  s.error_estimate *= std::pow(G, double(p.a));
  return s;
}

template <McDonaldLaw P>
SeriesValue mixture_pdf(const P& p, real_of<P> y, const TruncationPolicy& policy = {}) {
  detail::require_eval_point(y);
  const double G = base_cdf(p.base(), double(y));
  const double g = base_pdf(p.base(), double(y));
  if (G == 0) {
    // Only the leading term can survive at y = 0.
    SeriesValue s = mixture_sum(p.a, p.b, p.c, 0.0, true, policy);
    s.value = p.a < 1 ? std::numeric_limits<double>::infinity()
                      : (p.a == 1 ? s.value * g : 0.0);
    return s;
  }
  const double x = std::pow(G, double(p.c));
  const double scale = g * std::pow(G, double(p.a) - 1);
  SeriesValue s = mixture_sum(p.a, p.b, p.c, x, true, policy);
  s.value *= scale;
  s.partial_sum = s.value;
  s.error_estimate *= scale;
  return s;
}

// ---- power series ----------------------------------------------------------

/// Coefficients of (sum_r b_r u^r)^m up to r_max by the classical
/// recurrence c_{m,r} = (r b_0)^{-1} sum_{k=1}^{r} [k (m+1) - r] b_k c_{m,r-k}.
/// Requires b_seq[0] != 0.
std::vector<double> power_series_power(const std::vector<double>& b_seq, int m, int r_max);

/// The recurrence with the bracket printed as [k (m+1) - r + k]. Kept for
/// the erratum report; it does not reproduce polynomial powers.
std::vector<double> power_series_power_printed(const std::vector<double>& b_seq, int m,
                                               int r_max);

/// Brute-force oracle: repeated truncated convolution.
std::vector<double> power_series_power_convolution(const std::vector<double>& b_seq, int m,
                                                   int r_max);

/// Coefficients b_r of F = sum_r b_r G^r. Such an expansion in integer
/// powers of G exists only when every exponent a + j c is an integer
/// (a, c integers); otherwise nullopt. b_r collects p_j at r = a + j c.
std::optional<SeriesState> cdf_power_coefficients(double a, double b, double c,
                                                  const TruncationPolicy& policy = {});

/// Coefficients c_r of f = g sum_r c_r G^r (same existence condition):
/// c_r = (r + 1) b_{r+1}.
std::optional<SeriesState> pdf_power_coefficients(double a, double b, double c,
                                                  const TruncationPolicy& policy = {});

// ---- moments and mgf -------------------------------------------------------

/// Derivatives Gamma^{(m)}(1), m = 0..k.
std::vector<double> gamma_derivatives_at_one(int k);

/// Riemann zeta for s > 1.
double riemann_zeta(double s);

/// k-th moment of the GG law with cdf G^alpha (Gompertz base) from the
/// double series over i (binomial in G^(alpha-1)) and r (exponential
/// series). `printed` selects the displayed form, which omits the
/// integral over (0, infinity) of (ln u)^k e^{-lambda u}; the default is the
/// complete expansion.
SeriesValue gg_moment_series(double alpha, double theta, double gamma, int k,
                             const TruncationPolicy& policy = {}, bool printed = false);

/// mgf of the GG law by the binomial series in (u - 1), u = e^{gamma y}.
/// The inner series is asymptotic unless t / gamma is a nonnegative
/// integer. `printed` uses the displayed denominator [alpha theta/gamma]^{k+1}
/// in place of [(i+1) theta/gamma]^{k+1}.
SeriesValue gg_mgf_series(double alpha, double theta, double gamma, double t,
                          const TruncationPolicy& policy = {}, bool printed = false);

/// E(Y^k) = sum_j p_j E(Y_j^k). Converged only when every inner series
/// converged and the accumulated rounding estimate stays below 1e-6
/// relative; `value` is withheld (NaN) otherwise.
SeriesValue moment_series(const McGParams<double>& p, int k, const TruncationPolicy& policy = {},
                          bool printed = false);

/// M(t) = sum_j p_j M_j(t).
SeriesValue mgf_series(const McGParams<double>& p, double t, const TruncationPolicy& policy = {},
                       bool printed = false);

}  // namespace mcg

#endif  // MCG_EXPANSIONS_HPP
