#ifndef MCG_SPECFUN_HPP
#define MCG_SPECFUN_HPP

// Special-function kernel: log-gamma, polygammas, beta, the regularized
// incomplete beta with its inverse, the regularized upper incomplete gamma,
// the standard normal quantile and the asymptotic Kolmogorov law.
//
// Everything is templated on the real type and has no shared state.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "mcg/errors.hpp"

namespace mcg {

struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 300;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || max_iter < 1) {
      throw DomainError("Tolerance: abs_tol, rel_tol must be > 0 and max_iter >= 1");
    }
  }
};

/// A probability together with its complement, each carried to full
/// relative precision. Lets tail quantities avoid `1 - p` cancellation.
template <typename Real>
struct ProbPair {
  Real p;
  Real q;
};

namespace detail {

template <typename Real>
inline void require_positive(Real x, const char* what) {
  if (!(x > 0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be positive and finite");
  }
}

template <typename Real>
inline Real eps() {
  return std::numeric_limits<Real>::epsilon();
}

}  // namespace detail

template <typename Real>
Real log_gamma(Real x) {
  detail::require_positive(x, "log_gamma");
  return std::lgamma(x);
}

/// psi(x), by upward recurrence to x >= 6 followed by the asymptotic series.
template <typename Real>
Real digamma(Real x) {
  detail::require_positive(x, "digamma");
  Real acc = 0;
  while (x < 6) {
    acc -= 1 / x;
    x += 1;
  }
  const Real r = 1 / (x * x);
  // Bernoulli-number tail: -sum B_2k / (2k x^2k).
  const Real tail =
      r * (Real(1) / 12 -
           r * (Real(1) / 120 -
                r * (Real(1) / 252 -
                     r * (Real(1) / 240 -
                          r * (Real(1) / 132 -
                               r * (Real(691) / 32760 - r * (Real(1) / 12)))))));
  return acc + std::log(x) - Real(0.5) / x - tail;
}

/// psi'(x), same scheme as digamma.
template <typename Real>
Real trigamma(Real x) {
  detail::require_positive(x, "trigamma");
  Real acc = 0;
  while (x < 6) {
    acc += 1 / (x * x);
    x += 1;
  }
  const Real r = 1 / (x * x);
  const Real tail =
      r * (Real(1) / 6 -
           r * (Real(1) / 30 -
                r * (Real(1) / 42 -
                     r * (Real(1) / 30 -
                          r * (Real(5) / 66 - r * (Real(691) / 2730 - r * (Real(7) / 6)))))));
  return acc + (1 + Real(0.5) / x + tail) / x;
}

template <typename Real>
Real log_beta(Real a, Real b) {
  detail::require_positive(a, "log_beta");
  detail::require_positive(b, "log_beta");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

template <typename Real>
Real beta_fn(Real a, Real b) {
  return std::exp(log_beta(a, b));
}

namespace detail {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
template <typename Real>
Real inc_beta_cf(Real a, Real b, Real x, const Tolerance& tol) {
  const Real tiny = std::numeric_limits<Real>::min() / eps<Real>();
  const Real stop = std::max<Real>(4 * eps<Real>(), Real(tol.abs_tol) * Real(1e-4));
  const Real qab = a + b;
  const Real qap = a + 1;
  const Real qam = a - 1;
  Real c = 1;
  Real d = 1 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1 / d;
  Real h = d;
  for (int m = 1; m <= tol.max_iter; ++m) {
    const Real m2 = 2 * Real(m);
    Real aa = Real(m) * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const Real del = d * c;
    h *= del;
    if (std::abs(del - 1) <= stop) return h;
  }
  throw ConvergenceError("inc_beta_reg: continued fraction did not converge within max_iter");
}

}  // namespace detail

/// I(x; a, b) and its complement from x, xc = 1 - x and their logs. The
/// logs carry the answer when x or xc underflows: with x = 0 but
/// ln x = -800, I(x; 0.002, b) is still O(1).
template <typename Real>
ProbPair<Real> inc_beta_pair_log(Real x, Real xc, Real log_x, Real log_xc, Real a, Real b,
                                 const Tolerance& tol = {}) {
  tol.validate();
  detail::require_positive(a, "inc_beta_reg");
  detail::require_positive(b, "inc_beta_reg");
  if (!(x >= 0 && x <= 1) || !(xc >= 0 && xc <= 1)) {
    throw DomainError("inc_beta_reg: y must lie in [0, 1]");
  }
  constexpr Real ninf = -std::numeric_limits<Real>::infinity();
  if (log_x == ninf) return {0, 1};
  if (log_xc == ninf) return {1, 0};
  const Real log_front = a * log_x + b * log_xc - log_beta(a, b);
  if (x < (a + 1) / (a + b + 2)) {
    const Real lower = std::exp(log_front) * detail::inc_beta_cf(a, b, x, tol) / a;
    return {lower, 1 - lower};
  }
  const Real upper = std::exp(log_front) * detail::inc_beta_cf(b, a, xc, tol) / b;
  return {1 - upper, upper};
}

/// Regularized incomplete beta I(x; a, b) and its complement, given x and
/// xc = 1 - x supplied separately so callers with an accurate complement
/// keep it.
template <typename Real>
ProbPair<Real> inc_beta_pair(Real x, Real xc, Real a, Real b, const Tolerance& tol = {}) {
  if (!(x >= 0 && x <= 1) || !(xc >= 0 && xc <= 1)) {
    throw DomainError("inc_beta_reg: y must lie in [0, 1]");
  }
  return inc_beta_pair_log(x, xc, std::log(x), std::log(xc), a, b, tol);
}

template <typename Real>
Real inc_beta_reg(Real y, Real a, Real b, const Tolerance& tol = {}) {
  if (!(y >= 0 && y <= 1)) throw DomainError("inc_beta_reg: y must lie in [0, 1]");
  return inc_beta_pair(y, Real(1) - y, a, b, tol).p;
}

namespace detail {

// Solves I(x; a, b) = target for x in (0, 1/2] where target <= I(1/2; a, b).
// Newton on u = log x, safeguarded by a bracket that is bisected
// geometrically (or stepped down by decades while the lower end is 0).
template <typename Real>
Real inc_beta_solve_lower(Real target, Real a, Real b, const Tolerance& tol) {
  const Real lbeta = log_beta(a, b);
  Real lo = 0;
  Real hi = Real(0.5);
  // Small-x behaviour I(x) ~ x^a / (a B(a,b)).
  const Real log_x0 = (std::log(target) + std::log(a) + lbeta) / a;
  // Relative error of the asymptote is O(b x); return it when below eps.
  if (log_x0 + std::log(std::max(Real(1), b)) < std::log(eps<Real>()) - 2) {
    return std::exp(log_x0);
  }
  Real x = std::exp(log_x0);
  if (!(x > 0) || !(x < hi)) x = Real(0.25);
  for (int it = 0; it < tol.max_iter; ++it) {
    const Real xi = inc_beta_pair(x, Real(1) - x, a, b, tol).p;
    const Real f = xi - target;
    if (f == 0) return x;
    if (f > 0) {
      hi = x;
    } else {
      lo = x;
    }
    // dI/du = x * density(x)
    const Real slope = std::exp(a * std::log(x) + (b - 1) * std::log1p(-x) - lbeta);
    Real next = x * std::exp(-f / slope);
    const bool newton_ok = std::isfinite(next) && slope > 0 && next > lo && next < hi;
    if (!newton_ok) {
      next = lo > 0 ? std::sqrt(lo * hi) : hi * Real(1e-3);
      if (lo > 0 && hi / lo < 4) next = Real(0.5) * (lo + hi);
    }
    const Real step = std::abs(std::log(next / x));
    x = next;
    if (newton_ok && (step <= Real(1e-13) || std::abs(f) <= 16 * eps<Real>() * target)) {
      return x;
    }
    if (lo > 0 && (hi - lo) <= 4 * eps<Real>() * hi) return x;
  }
  throw ConvergenceError("inc_beta_inv: safeguarded Newton did not converge within max_iter");
}

}  // namespace detail

/// Inverse of the regularized incomplete beta from a probability pair
/// (p, q = 1 - p). Returns (x, 1 - x), each to full relative precision: the
/// solver works on whichever of x or 1 - x is below one half.
template <typename Real>
ProbPair<Real> inc_beta_inv_pair(Real p, Real q, Real a, Real b, const Tolerance& tol = {}) {
  tol.validate();
  detail::require_positive(a, "inc_beta_inv");
  detail::require_positive(b, "inc_beta_inv");
  if (!(p >= 0 && p <= 1) || !(q >= 0 && q <= 1)) {
    throw DomainError("inc_beta_inv: p must lie in [0, 1]");
  }
  if (p == 0) return {0, 1};
  if (q == 0) return {1, 0};
  const ProbPair<Real> mid = inc_beta_pair(Real(0.5), Real(0.5), a, b, tol);
  if (p <= mid.p) {
    const Real x = detail::inc_beta_solve_lower(p, a, b, tol);
    return {x, 1 - x};
  }
  const Real xc = detail::inc_beta_solve_lower(q, b, a, tol);
  return {1 - xc, xc};
}

template <typename Real>
Real inc_beta_inv(Real p, Real a, Real b, const Tolerance& tol = {}) {
  if (!(p >= 0 && p <= 1)) throw DomainError("inc_beta_inv: p must lie in [0, 1]");
  return inc_beta_inv_pair(p, Real(1) - p, a, b, tol).p;
}

/// Regularized upper incomplete gamma Q(s, x).
template <typename Real>
Real gamma_q(Real s, Real x, const Tolerance& tol = {}) {
  detail::require_positive(s, "gamma_q");
  if (!(x >= 0)) throw DomainError("gamma_q: x must be nonnegative");
  if (x == 0) return 1;
  if (std::isinf(x)) return 0;
  const Real log_front = s * std::log(x) - x - std::lgamma(s);
  if (x < s + 1) {
    Real term = 1 / s;
    Real sum = term;
    for (int n = 1; n <= 10 * tol.max_iter; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * detail::eps<Real>()) {
        return 1 - sum * std::exp(log_front);
      }
    }
    throw ConvergenceError("gamma_q: series did not converge");
  }
  const Real tiny = std::numeric_limits<Real>::min() / detail::eps<Real>();
  Real b = x + 1 - s;
  Real c = 1 / tiny;
  Real d = 1 / b;
  Real h = d;
  for (int i = 1; i <= 10 * tol.max_iter; ++i) {
    const Real an = -Real(i) * (Real(i) - s);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const Real del = d * c;
    h *= del;
    if (std::abs(del - 1) <= 4 * detail::eps<Real>()) return std::exp(log_front) * h;
  }
  throw ConvergenceError("gamma_q: continued fraction did not converge");
}

template <typename Real>
Real normal_cdf(Real z) {
  return Real(0.5) * std::erfc(-z / std::numbers::sqrt2_v<Real>);
}

/// Standard normal quantile (Wichura AS241) with one Newton refinement.
template <typename Real>
Real normal_quantile(Real p) {
  if (!(p > 0 && p < 1)) {
    if (p == 0) return -std::numeric_limits<Real>::infinity();
    if (p == 1) return std::numeric_limits<Real>::infinity();
    throw DomainError("normal_quantile: p must lie in [0, 1]");
  }
  const Real q = p - Real(0.5);
  Real x;
  if (std::abs(q) <= Real(0.425)) {
    const Real r = Real(0.180625) - q * q;
    const Real num =
        (((((((Real(2509.0809287301226727) * r + Real(33430.575583588128105)) * r +
              Real(67265.770927008700853)) * r + Real(45921.953931549871457)) * r +
            Real(13731.693765509461125)) * r + Real(1971.5909503065514427)) * r +
          Real(133.14166789178437745)) * r + Real(3.387132872796366608));
    const Real den =
        (((((((Real(5226.495278852545925) * r + Real(28729.085735721942674)) * r +
              Real(39307.89580009271061)) * r + Real(21213.794301586595867)) * r +
            Real(5394.1960214247511077)) * r + Real(687.1870074920579083)) * r +
          Real(42.313330701600911252)) * r + 1);
    x = q * num / den;
  } else {
    Real r = std::sqrt(-std::log(q < 0 ? p : 1 - p));
    Real num;
    Real den;
    if (r <= 5) {
      r -= Real(1.6);
      num = (((((((Real(7.7454501427834140764e-4) * r + Real(0.0227238449892691845833)) * r +
                  Real(0.24178072517745061177)) * r + Real(1.27045825245236838258)) * r +
                Real(3.64784832476320460504)) * r + Real(5.7694972214606914055)) * r +
              Real(4.6303378461565452959)) * r + Real(1.42343711074968357734));
      den = (((((((Real(1.05075007164441684324e-9) * r + Real(5.475938084995344946e-4)) * r +
                  Real(0.0151986665636164571966)) * r + Real(0.14810397642748007459)) * r +
                Real(0.68976733498510000455)) * r + Real(1.6763848301838038494)) * r +
              Real(2.05319162663775882187)) * r + 1);
    } else {
      r -= 5;
      num = (((((((Real(2.01033439929228813265e-7) * r + Real(2.71155556874348757815e-5)) * r +
                  Real(0.0012426609473880784386)) * r + Real(0.026532189526576123093)) * r +
                Real(0.29656057182850489123)) * r + Real(1.7848265399172913358)) * r +
              Real(5.4637849111641143699)) * r + Real(6.6579046435011037772));
      den = (((((((Real(2.04426310338993978564e-15) * r + Real(1.4215117583164458887e-7)) * r +
                  Real(1.8463183175100546818e-5)) * r + Real(7.868691311456132591e-4)) * r +
                Real(0.0148753612908506148525)) * r + Real(0.13692988092273580531)) * r +
              Real(0.59983220655588793769)) * r + 1);
    }
    x = num / den;
    if (q < 0) x = -x;
  }
  const Real err = normal_cdf(x) - p;
  const Real dens = std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi_v<Real>);
  if (dens > 0) x -= err / dens;
  return x;
}

/// Asymptotic Kolmogorov survival probability P(sqrt(n) D > sqrt(n) d).
template <typename Real>
Real kolmogorov_sf(Real d, int n) {
  if (!(d >= 0)) throw DomainError("kolmogorov_sf: d must be nonnegative");
  if (n < 1) throw DomainError("kolmogorov_sf: n must be >= 1");
  if (d == 0) return 1;
  const Real lambda = std::sqrt(Real(n)) * d;
  Real sf;
  if (lambda < Real(1.18)) {
    // Jacobi-transformed form of the same series; converges fast for small lambda.
    const Real pi = std::numbers::pi_v<Real>;
    const Real f = -pi * pi / (8 * lambda * lambda);
    Real cdf = 0;
    for (int k = 1; k < 100; k += 2) {
      const Real term = std::exp(f * k * k);
      cdf += term;
      if (term < Real(1e-16)) break;
    }
    sf = 1 - std::sqrt(2 * pi) / lambda * cdf;
  } else {
    sf = 0;
    for (int k = 1; k < 100; ++k) {
      const Real term = std::exp(-2 * Real(k) * k * lambda * lambda);
      sf += (k % 2 == 1 ? 2 : -2) * term;
      if (term < Real(1e-12)) break;
    }
  }
  return std::clamp<Real>(sf, 0, 1);
}

}  // namespace mcg

#endif  // MCG_SPECFUN_HPP
