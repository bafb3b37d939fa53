#include "mcg/expansions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Cauchy criterion for the moment/mgf double series.
constexpr double kSeriesRelTol = 1e-6;

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

// Tail of sum_{j > J} t_j given |t_J| when t_j ~ j^(-(decay + 1)) x^j with
// constant sign. Infinite when neither factor forces convergence.
double tail_estimate(double last_abs, int J, double decay, double x) {
  double bound = std::numeric_limits<double>::infinity();
  if (x < 1) bound = x / (1 - x);
  if (decay > 0) bound = std::min(bound, (J + 1.0) / decay);
  return last_abs * bound;
}

}  // namespace

void TruncationPolicy::validate() const {
  if (max_terms < 1) throw DomainError("TruncationPolicy max_terms must be >= 1");
  if (!(term_tol > 0)) throw DomainError("TruncationPolicy term_tol must be positive");
}

double SeriesState::sum() const { return std::accumulate(coeffs.begin(), coeffs.end(), 0.0); }

SeriesState mixture_weights_p(double a, double b, double c, const TruncationPolicy& policy) {
  policy.validate();
  detail::require_positive(a, "mixture_weights_p a");
  detail::require_positive(b, "mixture_weights_p b");
  detail::require_positive(c, "mixture_weights_p c");
  const double s = a / c;
  const double B = beta_fn(s, b);
  SeriesState st;
  st.tol.abs_tol = policy.term_tol;
  st.tol.max_iter = policy.max_terms;
  double binom = 1;  // C(b-1, j)
  for (int j = 0; j <= policy.max_terms; ++j) {
    if (j > 0) binom *= (b - j) / j;
    const double pj = (j % 2 ? -binom : binom) / (B * (s + j));
    st.coeffs.push_back(pj);
    st.truncation = j;
    st.last_term = pj;
    if (binom == 0) {
      st.tail_bound = 0;
      st.converged = true;
      break;
    }
    // Past j = b the terms keep one sign and decay like j^(-b-1).
    if (j > b) {
      st.tail_bound = std::abs(pj) * (j + s + 1) / b;
      if (st.tail_bound <= policy.term_tol) {
        st.converged = true;
        break;
      }
    } else {
      st.tail_bound = std::numeric_limits<double>::infinity();
    }
  }
  return st;
}

SeriesValue mixture_sum(double a, double b, double c, double x, bool pdf_weights,
                        const TruncationPolicy& policy) {
  policy.validate();
  if (!(x >= 0 && x <= 1)) throw DomainError("mixture_sum: x must lie in [0, 1]");
  const double s = a / c;
  const double B = beta_fn(s, b);
  SeriesValue out;
  double binom = 1;
  double xj = 1;
  double sum = 0;
  const double decay = pdf_weights ? b - 1 : b;
  for (int j = 0; j <= policy.max_terms; ++j) {
    if (j > 0) {
      binom *= (b - j) / j;
      xj *= x;
    }
    const double pj = (j % 2 ? -binom : binom) / (B * (s + j));
    const double term = pj * xj * (pdf_weights ? a + j * c : 1.0);
    sum += term;
    out.terms = j + 1;
    if (binom == 0 || xj == 0) {
      out.converged = true;
      out.error_estimate = 0;
      break;
    }
    if (j > b) {
      out.error_estimate = tail_estimate(std::abs(term), j, decay, x);
      if (out.error_estimate <= policy.term_tol) {
        out.converged = true;
        break;
      }
    } else {
      out.error_estimate = std::numeric_limits<double>::infinity();
    }
  }
  out.value = sum;
  out.partial_sum = sum;
  if (!out.converged) out.note = "mixture series not converged within max_terms";
  return out;
}

namespace {

void require_power_args(const std::vector<double>& b_seq, int m, int r_max) {
  if (b_seq.empty() || b_seq[0] == 0) {
    throw DomainError("power_series_power requires a nonzero leading coefficient");
  }
  if (m < 1) throw DomainError("power_series_power requires m >= 1");
  if (r_max < 0) throw DomainError("power_series_power requires r_max >= 0");
}

std::vector<double> power_recurrence(const std::vector<double>& b_seq, int m, int r_max,
                                     double extra_k) {
  require_power_args(b_seq, m, r_max);
  std::vector<double> c(static_cast<std::size_t>(r_max) + 1, 0.0);
  c[0] = std::pow(b_seq[0], m);
  const int kmax_seq = static_cast<int>(b_seq.size()) - 1;
  for (int r = 1; r <= r_max; ++r) {
    double acc = 0;
    for (int k = 1; k <= std::min(r, kmax_seq); ++k) {
      acc += (k * (m + 1.0) - r + extra_k * k) * b_seq[k] * c[r - k];
    }
    c[r] = acc / (r * b_seq[0]);
  }
  return c;
}

}  // namespace

std::vector<double> power_series_power(const std::vector<double>& b_seq, int m, int r_max) {
  return power_recurrence(b_seq, m, r_max, 0.0);
}

std::vector<double> power_series_power_printed(const std::vector<double>& b_seq, int m,
                                               int r_max) {
  return power_recurrence(b_seq, m, r_max, 1.0);
}

std::vector<double> power_series_power_convolution(const std::vector<double>& b_seq, int m,
                                                   int r_max) {
  require_power_args(b_seq, m, r_max);
  const auto n = static_cast<std::size_t>(r_max) + 1;
  std::vector<double> acc(n, 0.0);
  acc[0] = 1;
  for (int p = 0; p < m; ++p) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (acc[i] == 0) continue;
      for (std::size_t k = 0; k < b_seq.size() && i + k < n; ++k) next[i + k] += acc[i] * b_seq[k];
    }
    acc = std::move(next);
  }
  return acc;
}

std::optional<SeriesState> cdf_power_coefficients(double a, double b, double c,
                                                  const TruncationPolicy& policy) {
  if (!is_integer(a) || !is_integer(c)) return std::nullopt;
  const SeriesState w = mixture_weights_p(a, b, c, policy);
  const int ia = static_cast<int>(a);
  const int ic = static_cast<int>(c);
  SeriesState out = w;
  out.truncation = ia + w.truncation * ic;
  out.coeffs.assign(static_cast<std::size_t>(out.truncation) + 1, 0.0);
  for (int j = 0; j <= w.truncation; ++j) out.coeffs[ia + j * ic] += w.coeffs[j];
  out.last_term = out.coeffs.back();
  return out;
}

std::optional<SeriesState> pdf_power_coefficients(double a, double b, double c,
                                                  const TruncationPolicy& policy) {
  auto bc = cdf_power_coefficients(a, b, c, policy);
  if (!bc) return std::nullopt;
  SeriesState out = *bc;
  out.truncation = std::max(0, bc->truncation - 1);
  out.coeffs.assign(static_cast<std::size_t>(out.truncation) + 1, 0.0);
  for (int r = 0; r < bc->truncation; ++r) out.coeffs[r] = (r + 1) * bc->coeffs[r + 1];
  out.last_term = out.coeffs.back();
  return out;
}

double riemann_zeta(double s) {
  if (!(s > 1)) throw DomainError("riemann_zeta requires s > 1");
  // Euler-Maclaurin with N = 10 and six Bernoulli corrections.
  constexpr int N = 10;
  static constexpr double kB2k[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
                                    -691.0 / 2730};
  double sum = 0;
  for (int n = 1; n < N; ++n) sum += std::pow(n, -s);
  sum += std::pow(N, 1 - s) / (s - 1) + 0.5 * std::pow(N, -s);
  double rising = s;  // s (s+1) ... (s + 2k - 2)
  double fact = 2;    // (2k)!
  for (int k = 1; k <= 6; ++k) {
    sum += kB2k[k - 1] / fact * rising * std::pow(N, -s - 2 * k + 1);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return sum;
}

std::vector<double> gamma_derivatives_at_one(int k) {
  if (k < 0) throw DomainError("gamma_derivatives_at_one requires k >= 0");
  // psi^(n)(1): -euler_gamma, then (-1)^(n+1) n! zeta(n+1).
  std::vector<double> psi(static_cast<std::size_t>(k) + 1);
  psi[0] = -std::numbers::egamma;
  double fact = 1;
  for (int n = 1; n <= k; ++n) {
    fact *= n;
    psi[n] = (n % 2 ? 1.0 : -1.0) * fact * riemann_zeta(n + 1.0);
  }
  // Gamma' = Gamma psi, differentiated by Leibniz.
  std::vector<double> h(static_cast<std::size_t>(k) + 1);
  h[0] = 1;
  for (int m = 1; m <= k; ++m) {
    double acc = 0;
    double binom = 1;  // C(m-1, j)
    for (int j = 0; j <= m - 1; ++j) {
      acc += binom * h[j] * psi[m - 1 - j];
      binom = binom * (m - 1 - j) / (j + 1);
    }
    h[m] = acc;
  }
  return h;
}

namespace {

// Outer loop shared by the GG moment/mgf double series: sum over i of
// C(alpha-1, i) (-1)^i inner(i). `decay` drives the tail estimate of the
// constant-sign regime i > alpha - 1.
template <typename Inner>
SeriesValue gg_outer_sum(double alpha, double prefactor, double decay,
                         const TruncationPolicy& policy, Inner&& inner) {
  SeriesValue out;
  double binom = 1;
  double sum = 0;
  double rounding = 0;
  bool inner_ok = true;
  bool tail_ok = false;
  std::string note;
  for (int i = 0; i <= policy.max_terms; ++i) {
    if (i > 0) binom *= (alpha - i) / i;
    if (binom == 0) {
      tail_ok = true;
      break;
    }
    const double coef = (i % 2 ? -binom : binom) * prefactor;
    double err = 0;
    bool ok = true;
    const double v = inner(i, err, ok);
    if (!ok || !std::isfinite(v) || !std::isfinite(err)) {
      inner_ok = false;
      note = "inner series failed at i = " + std::to_string(i);
      break;
    }
    const double term = coef * v;
    sum += term;
    rounding += std::abs(coef) * err;
    out.terms = i + 1;
    if (i > alpha - 1 && decay > 0) {
      const double tail = std::abs(term) * (i + 1.0) / decay;
      if (tail <= kSeriesRelTol * std::abs(sum) || tail <= policy.term_tol) {
        tail_ok = true;
        break;
      }
    }
  }
  out.partial_sum = sum;
  out.error_estimate = rounding;
  if (!inner_ok) {
    out.note = note;
  } else if (!tail_ok) {
    out.note = "outer binomial series not Cauchy within max_terms";
  } else if (rounding > kSeriesRelTol * std::abs(sum)) {
    out.note = "cancellation: rounding estimate exceeds 1e-6 relative";
  } else {
    out.converged = true;
  }
  out.value = out.converged ? sum : kNaN;
  return out;
}

}  // namespace

SeriesValue gg_moment_series(double alpha, double theta, double gamma, int k,
                             const TruncationPolicy& policy, bool printed) {
  policy.validate();
  detail::require_positive(alpha, "gg_moment_series alpha");
  detail::require_positive(theta, "gg_moment_series theta");
  detail::require_positive(gamma, "gg_moment_series gamma");
  if (k < 1) throw DomainError("moment order k must be >= 1");
  const std::vector<double> h = gamma_derivatives_at_one(k);
  double kfact = std::tgamma(k + 1.0);
  const double sign_k = k % 2 ? -1.0 : 1.0;

  // E = alpha theta / gamma^(k+1) sum_i C(alpha-1,i)(-1)^i e^lambda
  //     [D_k(lambda) - (-1)^k k! sum_r (-lambda)^r / (r! (r+1)^(k+1))],
  // lambda = (theta/gamma)(i+1), D_k = integral_0^inf (ln u)^k e^{-lambda u} du.
  auto inner = [&](int i, double& err, bool& ok) {
    const double lambda = theta / gamma * (i + 1);
    if (lambda > 700) {
      ok = false;
      return 0.0;
    }
    double q = 1;  // (-lambda)^r / r!
    double S = 0;
    double abs_sum = 0;
    bool conv = false;
    const int r_cap = std::max(policy.max_terms, static_cast<int>(4 * lambda) + 50);
    for (int r = 0; r <= r_cap; ++r) {
      if (r > 0) q *= -lambda / r;
      const double t = q / std::pow(r + 1.0, k + 1);
      S += t;
      abs_sum += std::abs(t);
      if (r > lambda && std::abs(t) <= kEps * std::abs(S)) {
        conv = true;
        break;
      }
    }
    if (!conv) {
      ok = false;
      return 0.0;
    }
    double D = 0;
    if (!printed) {
      const double ll = -std::log(lambda);
      double binom = 1;
      for (int m = 0; m <= k; ++m) {
        D += binom * std::pow(ll, k - m) * h[m];
        binom = binom * (k - m) / (m + 1);
      }
      D /= lambda;
    }
    const double bracket = D - sign_k * kfact * S;
    const double scale = std::exp(lambda);
    err = scale * kEps * 4 * (std::abs(D) + kfact * abs_sum);
    return scale * bracket;
  };
  return gg_outer_sum(alpha, alpha * theta / std::pow(gamma, k + 1), alpha + k, policy, inner);
}

SeriesValue gg_mgf_series(double alpha, double theta, double gamma, double t,
                          const TruncationPolicy& policy, bool printed) {
  policy.validate();
  detail::require_positive(alpha, "gg_mgf_series alpha");
  detail::require_positive(theta, "gg_mgf_series theta");
  detail::require_positive(gamma, "gg_mgf_series gamma");
  const double s = t / gamma;
  // M = (alpha theta/gamma) sum_i C(alpha-1,i)(-1)^i sum_k C(s,k) k! / L^(k+1)
  // with L = (i+1) theta/gamma; the printed form has L = alpha theta/gamma.
  auto inner = [&](int i, double& err, bool& ok) {
    const double L = printed ? alpha * theta / gamma : theta / gamma * (i + 1);
    double term = 1 / L;
    double sum = term;
    double prev_abs = std::abs(term);
    for (int k = 1; k <= policy.max_terms; ++k) {
      term *= (s - k + 1) / L;
      if (term == 0) {
        err = kEps * std::abs(sum);
        return sum;
      }
      sum += term;
      const double a_t = std::abs(term);
      if (a_t <= kEps * std::abs(sum)) {
        err = kEps * std::abs(sum);
        return sum;
      }
      if (a_t > prev_abs) break;  // asymptotic series turned around
      prev_abs = a_t;
    }
    ok = false;
    return sum;
  };
  const double decay = printed ? alpha - 1 : alpha;
  return gg_outer_sum(alpha, alpha * theta / gamma, decay, policy, inner);
}

namespace {

template <typename GGSeries>
SeriesValue mixture_of_gg(const McGParams<double>& p, const TruncationPolicy& policy,
                          GGSeries&& gg) {
  p.validate();
  const SeriesState w = mixture_weights_p(p, policy);
  SeriesValue out;
  double sum = 0;
  double err = 0;
  double last_gg = 0;
  for (int j = 0; j <= w.truncation; ++j) {
    if (w.coeffs[j] == 0) continue;
    const SeriesValue e = gg(p.a + j * p.c);
    sum += w.coeffs[j] * e.partial_sum;
    err += std::abs(w.coeffs[j]) * e.error_estimate;
    out.terms += e.terms;
    last_gg = e.partial_sum;
    if (!e.converged) {
      out.partial_sum = sum;
      out.error_estimate = err;
      out.note = "GG component j = " + std::to_string(j) + ": " + e.note;
      out.value = kNaN;
      return out;
    }
  }
  out.partial_sum = sum;
  const double tail = w.converged ? w.tail_bound * std::abs(last_gg)
                                  : std::numeric_limits<double>::infinity();
  out.error_estimate = err + tail;
  if (!(tail <= kSeriesRelTol * std::abs(sum) || tail <= policy.term_tol)) {
    out.note = "mixture weights not converged within max_terms";
  } else if (err > kSeriesRelTol * std::abs(sum)) {
    out.note = "cancellation: rounding estimate exceeds 1e-6 relative";
  } else {
    out.converged = true;
  }
  out.value = out.converged ? sum : kNaN;
  return out;
}

}  // namespace

SeriesValue moment_series(const McGParams<double>& p, int k, const TruncationPolicy& policy,
                          bool printed) {
  return mixture_of_gg(p, policy, [&](double alpha) {
    return gg_moment_series(alpha, p.theta, p.gamma, k, policy, printed);
  });
}

SeriesValue mgf_series(const McGParams<double>& p, double t, const TruncationPolicy& policy,
                       bool printed) {
  return mixture_of_gg(p, policy, [&](double alpha) {
    return gg_mgf_series(alpha, p.theta, p.gamma, t, policy, printed);
  });
}

}  // namespace mcg
