#ifndef MCG_DISTRIBUTION_HPP
#define MCG_DISTRIBUTION_HPP

// The McDonald-generated distribution over a cumulative-hazard base:
//
//   G(y) = 1 - exp(-w(y)),   g(y) = w'(y) exp(-w(y))
//   F(y) = I(G(y)^c; a/c, b)
//   f(y) = c / B(a/c, b) g(y) G(y)^(a-1) (1 - G(y)^c)^(b-1)
//
// With the Gompertz base w(y) = (theta/gamma)(exp(gamma y) - 1) this is the
// McDonald-Gompertz (McG) law; with w(y) = theta y it is the McDonald
// exponential (McE) law, the gamma -> 0 limit. All tail-sensitive
// quantities are assembled in log space from w(y).

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mcg/errors.hpp"
#include "mcg/specfun.hpp"

namespace mcg {

template <typename Real>
struct GompertzBase {
  Real theta;
  Real gamma;

  void validate() const {
    detail::require_positive(theta, "GompertzBase theta");
    detail::require_positive(gamma, "GompertzBase gamma");
  }
  /// Cumulative hazard w(y) = (theta/gamma) expm1(gamma y).
  Real cum_hazard(Real y) const { return theta / gamma * std::expm1(gamma * y); }
  Real log_hazard(Real y) const { return std::log(theta) + gamma * y; }
  Real inverse_cum_hazard(Real w) const { return std::log1p(gamma * w / theta) / gamma; }
};

template <typename Real>
struct ExponentialBase {
  Real theta;

  void validate() const { detail::require_positive(theta, "ExponentialBase theta"); }
  Real cum_hazard(Real y) const { return theta * y; }
  Real log_hazard(Real /*y*/) const { return std::log(theta); }
  Real inverse_cum_hazard(Real w) const { return w / theta; }
};

template <typename Real = double>
struct McGParams {
  Real a;
  Real b;
  Real c;
  Real theta;
  Real gamma;

  GompertzBase<Real> base() const { return {theta, gamma}; }
  void validate() const {
    detail::require_positive(a, "McGParams a");
    detail::require_positive(b, "McGParams b");
    detail::require_positive(c, "McGParams c");
    base().validate();
  }
  friend bool operator==(const McGParams&, const McGParams&) = default;
};

/// McDonald generator over the exponential base (McE / BGE).
template <typename Real = double>
struct McEParams {
  Real a;
  Real b;
  Real c;
  Real theta;

  ExponentialBase<Real> base() const { return {theta}; }
  void validate() const {
    detail::require_positive(a, "McEParams a");
    detail::require_positive(b, "McEParams b");
    detail::require_positive(c, "McEParams c");
    base().validate();
  }
  friend bool operator==(const McEParams&, const McEParams&) = default;
};

template <typename P>
concept McDonaldLaw = requires(const P& p) {
  p.a;
  p.b;
  p.c;
  p.base().cum_hazard(p.a);
  p.validate();
};

template <typename P>
using real_of = std::remove_cvref_t<decltype(std::declval<P>().a)>;

namespace detail {

template <typename Real>
void require_eval_point(Real y) {
  if (!(y >= 0) || !std::isfinite(y)) {
    throw DomainError("evaluation point y must be finite and nonnegative");
  }
}

/// Log-domain state of the base at one point.
template <typename Real>
struct BaseState {
  Real w;         // cumulative hazard
  Real log_g;     // ln g(y)
  Real log_G;     // ln G(y)
  Real Gc;        // G^c
  Real Sc;        // 1 - G^c
  Real log_Sc;    // ln(1 - G^c)
};

template <typename Real, typename Base>
BaseState<Real> base_state(const Base& base, Real c, Real y) {
  BaseState<Real> s{};
  s.w = base.cum_hazard(y);
  s.log_g = base.log_hazard(y) - s.w;
  if (std::isinf(s.w)) {
    s.log_g = -std::numeric_limits<Real>::infinity();
    s.log_G = 0;
    s.Gc = 1;
    s.Sc = 0;
    s.log_Sc = -std::numeric_limits<Real>::infinity();
    return s;
  }
  s.log_G = s.w > std::numbers::ln2_v<Real> ? std::log1p(-std::exp(-s.w))
                                            : std::log(-std::expm1(-s.w));
  const Real u = c * s.log_G;
  s.Gc = std::exp(u);
  s.Sc = -std::expm1(u);
  if (u == 0 && s.w > 0) {
    // exp(-w) underflowed: 1 - G^c ~ c exp(-w).
    s.log_Sc = std::log(c) - s.w;
  } else {
    s.log_Sc = std::log(s.Sc);
  }
  return s;
}

/// -ln(1 - e^x) for x <= 0, accurate at both ends.
template <typename Real>
Real neg_log1m_exp(Real x) {
  if (x < -std::numbers::ln2_v<Real>) return -std::log1p(-std::exp(x));
  return -std::log(-std::expm1(x));
}

/// (k - 1) * log_term with the convention 0 * (+-inf) = 0 at k == 1.
template <typename Real>
Real power_log(Real k, Real log_term) {
  if (k == 1) return 0;
  return (k - 1) * log_term;
}

}  // namespace detail

template <typename Real, typename Base>
Real base_cdf(const Base& base, Real y) {
  detail::require_eval_point(y);
  const Real w = base.cum_hazard(y);
  if (std::isinf(w)) return 1;
  return -std::expm1(-w);
}

template <typename Real, typename Base>
Real base_pdf(const Base& base, Real y) {
  detail::require_eval_point(y);
  const Real w = base.cum_hazard(y);
  if (std::isinf(w)) return 0;
  return std::exp(base.log_hazard(y) - w);
}

template <McDonaldLaw P>
real_of<P> log_pdf(const P& p, real_of<P> y) {
  using Real = real_of<P>;
  detail::require_eval_point(y);
  const auto s = detail::base_state(p.base(), p.c, y);
  if (std::isinf(s.w)) return -std::numeric_limits<Real>::infinity();
  return std::log(p.c) - log_beta(p.a / p.c, p.b) + s.log_g + detail::power_log(p.a, s.log_G) +
         detail::power_log(p.b, s.log_Sc);
}

/// Density. At y = 0 with a < 1 the value is +infinity.
template <McDonaldLaw P>
real_of<P> pdf(const P& p, real_of<P> y) {
  return std::exp(log_pdf(p, y));
}

/// (F(y), 1 - F(y)), each to full relative precision.
template <McDonaldLaw P>
ProbPair<real_of<P>> cdf_pair(const P& p, real_of<P> y, const Tolerance& tol = {}) {
  detail::require_eval_point(y);
  const auto s = detail::base_state(p.base(), p.c, y);
  return inc_beta_pair_log(s.Gc, s.Sc, p.c * s.log_G, s.log_Sc, p.a / p.c, p.b, tol);
}

template <McDonaldLaw P>
real_of<P> cdf(const P& p, real_of<P> y, const Tolerance& tol = {}) {
  return cdf_pair(p, y, tol).p;
}

template <McDonaldLaw P>
real_of<P> survival(const P& p, real_of<P> y, const Tolerance& tol = {}) {
  return cdf_pair(p, y, tol).q;
}

/// h(y) = f(y) / (1 - F(y)).
template <McDonaldLaw P>
real_of<P> hazard(const P& p, real_of<P> y, const Tolerance& tol = {}) {
  const auto sf = survival(p, y, tol);
  if (!(sf > 0)) throw DomainError("hazard: survival underflows to 0 at this point");
  return pdf(p, y) / sf;
}

/// r(y) = f(y) / F(y).
template <McDonaldLaw P>
real_of<P> reversed_hazard(const P& p, real_of<P> y, const Tolerance& tol = {}) {
  const auto F = cdf(p, y, tol);
  if (!(F > 0)) throw DomainError("reversed_hazard: cdf underflows to 0 at this point");
  return pdf(p, y) / F;
}

/// Hazard from the unnormalized form
///   c g G^(a-1) (1-G^c)^(b-1) / (B(a/c,b) - B_x(a/c,b)),  x = G^c,
/// with B_x = B I(x). Second route for cross-checking `hazard`.
template <McDonaldLaw P>
real_of<P> hazard_direct(const P& p, real_of<P> y, const Tolerance& tol = {}) {
  using Real = real_of<P>;
  detail::require_eval_point(y);
  const auto s = detail::base_state(p.base(), p.c, y);
  // B - B_x is formed as B (1 - I(x)) from the complementary ratio; the
  // literal difference cancels in the upper tail.
  const Real B = beta_fn(p.a / p.c, p.b);
  const Real denom =
      B * inc_beta_pair_log(s.Gc, s.Sc, p.c * s.log_G, s.log_Sc, p.a / p.c, p.b, tol).q;
  if (!(denom > 0)) throw DomainError("hazard: survival underflows to 0 at this point");
  const Real log_num = std::log(p.c) + s.log_g + detail::power_log(p.a, s.log_G) +
                       detail::power_log(p.b, s.log_Sc);
  return std::exp(log_num) / denom;
}

template <McDonaldLaw P>
real_of<P> reversed_hazard_direct(const P& p, real_of<P> y, const Tolerance& tol = {}) {
  using Real = real_of<P>;
  detail::require_eval_point(y);
  const auto s = detail::base_state(p.base(), p.c, y);
  const Real Bx = beta_fn(p.a / p.c, p.b) *
                  inc_beta_pair_log(s.Gc, s.Sc, p.c * s.log_G, s.log_Sc, p.a / p.c, p.b, tol).p;
  if (!(Bx > 0)) throw DomainError("reversed_hazard: cdf underflows to 0 at this point");
  const Real log_num = std::log(p.c) + s.log_g + detail::power_log(p.a, s.log_G) +
                       detail::power_log(p.b, s.log_Sc);
  return std::exp(log_num) / Bx;
}

/// Quantile from a probability pair (t, 1 - t):
///   V = I^{-1}(t; a/c, b),  G = V^{1/c},  y = w^{-1}(-ln(1 - G)).
template <McDonaldLaw P>
real_of<P> quantile_pair(const P& p, real_of<P> t, real_of<P> t_complement,
                         const Tolerance& tol = {}) {
  using Real = real_of<P>;
  const Real s = p.a / p.c;
  const auto v = inc_beta_inv_pair(t, t_complement, s, p.b, tol);
  Real w;
  if (v.p == 0) {
    // V underflowed; I(V) ~ V^s / (s B) gives ln V directly.
    if (!(t > 0)) return 0;
    const Real log_v = (std::log(t) + std::log(s) + log_beta(s, p.b)) / s;
    w = detail::neg_log1m_exp(log_v / p.c);
  } else if (v.q == 0) {
    // 1 - V underflowed; 1 - I(V) ~ (1 - V)^b / (b B) and 1 - G ~ (1 - V) / c.
    if (!(t_complement > 0)) return std::numeric_limits<Real>::infinity();
    const Real log_vc = (std::log(t_complement) + std::log(p.b) + log_beta(s, p.b)) / p.b;
    w = std::log(p.c) - log_vc;
  } else {
    const Real log_v = v.p <= Real(0.5) ? std::log(v.p) : std::log1p(-v.q);
    w = detail::neg_log1m_exp(log_v / p.c);
  }
  return p.base().inverse_cum_hazard(w);
}

template <McDonaldLaw P>
real_of<P> quantile(const P& p, real_of<P> t, const Tolerance& tol = {}) {
  if (!(t > 0 && t < 1)) throw DomainError("quantile: t must lie in (0, 1)");
  return quantile_pair(p, t, real_of<P>(1) - t, tol);
}

/// Quantile at upper-tail probability s, i.e. Q(1 - s) without forming 1 - s.
template <McDonaldLaw P>
real_of<P> upper_quantile(const P& p, real_of<P> s, const Tolerance& tol = {}) {
  if (!(s > 0 && s < 1)) throw DomainError("upper_quantile: s must lie in (0, 1)");
  return quantile_pair(p, real_of<P>(1) - s, s, tol);
}

/// Uniform deviate in (0, 1) from the top 53 bits of a 64-bit draw.
inline double open_unit_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Inverse-transform sampler; deterministic in `seed`.
template <McDonaldLaw P>
std::vector<real_of<P>> sample(const P& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  std::mt19937_64 rng(seed);
  std::vector<real_of<P>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = open_unit_uniform(rng);
    out.push_back(quantile_pair(p, real_of<P>(u), real_of<P>(1.0 - u)));
  }
  return out;
}

/// lim_{y -> 0+} f(y): theta c / B(1/c, b) when a = 1, 0 when a > 1,
/// +infinity when a < 1.
template <McDonaldLaw P>
real_of<P> density_limit_at_zero(const P& p) {
  using Real = real_of<P>;
  if (p.a > 1) return 0;
  if (p.a < 1) return std::numeric_limits<Real>::infinity();
  return std::exp(p.base().log_hazard(Real(0))) * p.c / beta_fn(1 / p.c, p.b);
}

/// Grid evaluation of any pointwise evaluator.
template <typename Fn>
Eigen::ArrayXd evaluate(Fn&& fn, const Eigen::ArrayXd& y) {
  return y.unaryExpr([&](double v) { return static_cast<double>(fn(v)); });
}

}  // namespace mcg

#endif  // MCG_DISTRIBUTION_HPP
