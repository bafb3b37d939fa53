#include "mcg/errata.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mcg/distribution.hpp"
#include "mcg/expansions.hpp"
#include "mcg/shape.hpp"
#include "mcg/specfun.hpp"

namespace mcg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-observation quantities in the notation of the displays.
struct Obs {
  double y, x, E, m, t, u, lu, P, Q;
};

Obs observe(double y, double theta, double gamma, double c) {
  Obs o;
  o.y = y;
  o.x = gamma * y;
  o.E = std::exp(o.x);
  o.m = o.E - 1;
  o.t = std::exp(-theta / gamma * o.m);
  o.u = 1 - o.t;
  o.lu = std::log(o.u);
  o.P = std::pow(o.u, c);
  o.Q = 1 - o.P;
  return o;
}

}  // namespace

FullVector printed_score(const FullVector& full, const Dataset& data) {
  const double a = full(0), b = full(1), c = full(2), th = full(3), g = full(4);
  const double n = static_cast<double>(data.size());
  const double s = a / c;
  const double Ks = digamma(s + b) - digamma(s);
  const double Kb = digamma(s + b) - digamma(b);
  FullVector U;
  U << n / c * Ks, n * Kb, n / c - n * a / (c * c) * Ks, n / th, 0;
  for (double y : data.values) {
    const Obs o = observe(y, th, g, c);
    U(0) += o.lu;
    U(1) += std::log(1 - (1 - std::pow(o.t, c)));
    U(2) -= (b - 1) * (1 - std::pow(o.t, c)) * o.lu / o.Q;
    U(3) += -o.m / g + (a - 1) / g * o.t * o.m / o.u -
            c * (b - 1) / g * o.t * std::pow(o.u, c - 1) * o.m / o.Q;
    U(4) += o.y + th / (g * g) * (o.E - o.x * o.E - 1) +
            th * (a - 1) / (g * g) * o.t * (o.x * o.E - o.E + 1) / o.u +
            th * (b - 1) * c / (g * g) * o.t * std::pow(o.u, c - 1) * (o.E - o.x * o.E - 1) / o.Q;
  }
  return U;
}

FullMatrix printed_hessian(const FullVector& full, const Dataset& data) {
  const double a = full(0), b = full(1), c = full(2), th = full(3), g = full(4);
  const double n = static_cast<double>(data.size());
  const double s = a / c;
  const double Ks = digamma(s + b) - digamma(s);
  const double T_sb = trigamma(s + b);
  const double Kss = T_sb - trigamma(s);
  const double Kbb = T_sb - trigamma(b);
  const double g2 = g * g, g3 = g2 * g, g4 = g3 * g;
  FullMatrix J = FullMatrix::Zero();
  J(0, 0) = n / (c * c) * Kss;
  J(0, 1) = n / c * T_sb;
  J(0, 2) = -n * a / (c * c * c) * Kss;
  J(1, 1) = n * Kbb;
  J(1, 2) = -n * a / (c * c) * T_sb;
  J(2, 2) = -n / (c * c) + 2 * n * a / (c * c * c) * Ks + n * a * a / (c * c * c * c) * Kss;
  J(3, 3) = -n / (th * th);
  for (double y : data.values) {
    const Obs o = observe(y, th, g, c);
    const double t = o.t, u = o.u, E = o.E, m = o.m, x = o.x, P = o.P, Q = o.Q, lu = o.lu;
    const double R = x * E - E + 1;   // gamma y e^{gamma y} - e^{gamma y} + 1
    const double Rn = E - x * E - 1;  // its negative as printed
    J(0, 3) += 1 / g * t * m / u;
    J(0, 4) += th / g2 * t * R / u;
    J(1, 2) -= P * lu / Q;
    J(1, 3) += -c / g * t * std::pow(u, c - 1) * m / Q;
    J(1, 4) += -c * th / g2 * t * std::pow(u, c - 1) * R / Q;
    J(2, 2) -= (b - 1) * P * lu * lu / (Q * Q);
    J(2, 3) += -(b - 1) / g * t * std::pow(u, c - 1) * m * (c * lu + 1 - P) / (Q * Q);
    J(2, 4) += -th * (b - 1) / g2 * t * R * (c * lu + 1 - P) / (std::pow(u, 1 - c) * Q * Q);
    J(3, 3) += -(a - 1) / g2 * t * m * m / (u * u) -
               c * (b - 1) / g2 * t * std::pow(u, c - 2) * m * m * (c * t + P - 1) / (Q * Q);
    J(3, 4) += 1 / g2 * Rn -
               c * (b - 1) / g3 * t * Rn / (std::pow(u, 2 - c) * Q * Q) *
                   (P * (th * E + t * g - g - th) + c * th * t * m + g * u + th * (1 - E)) +
               (a - 1) / g3 * t * Rn * (th * E + g * t - g - th) / (u * u);
    const double y2 = y * y;
    J(4, 4) += 2 * th / g3 * (x * E - E - x * x * E / 2 + 1) -
               c * (b - 1) * th * th / g4 * t * t * std::pow(u, c - 2) * R * R *
                   (2 * c * P + P - c - 1) / (Q * Q) +
               c * (b - 1) * th / g4 * t * std::pow(u, c - 1) / Q *
                   (-g3 * y2 * E + 2 * g2 * y * E - 2 * g * E + 2 * g + th * g2 * y2 * E * E +
                    th * m * m - 2 * th * g * y * E * m) -
               (a - 1) * th / g4 * t / u *
                   (-g3 * y2 * E + 2 * g2 * y * E - 2 * g * m + th * R * R) -
               (a - 1) * th * th / g4 * t * t * R * R / (u * u);
  }
  J.triangularView<Eigen::StrictlyLower>() = J.transpose().triangularView<Eigen::StrictlyLower>();
  return J;
}

std::string derivative_entry_name(int k) {
  static const char* names[] = {"a", "b", "c", "theta", "gamma"};
  if (k < 5) return std::string("U_") + names[k];
  int idx = k - 5;
  for (int i = 0; i < 5; ++i) {
    for (int j = i; j < 5; ++j) {
      if (idx-- == 0) return std::string("J_") + names[i] + "," + names[j];
    }
  }
  return "?";
}

std::vector<double> derivative_discrepancies(const ErrataConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> shape(0.6, 3.0), th(0.2, 1.5), gm(0.2, 1.2);
  std::vector<double> worst(20, 0.0);
  for (int k = 0; k < cfg.random_points; ++k) {
    FullVector full;
    full << shape(rng), shape(rng), shape(rng), th(rng), gm(rng);
    const McGParams<double> p{full(0), full(1), full(2), full(3), full(4)};
    Dataset data{sample(p, 15, rng()), "audit"};
    const auto d = full_derivatives(full, false, data, 2);
    const FullVector U = printed_score(full, data);
    const FullMatrix J = printed_hessian(full, data);
    auto rel = [](double printed, double exact) {
      return std::abs(printed - exact) / std::max(std::abs(exact), 1e-8);
    };
    for (int i = 0; i < 5; ++i) worst[i] = std::max(worst[i], rel(U(i), d.grad(i)));
    int idx = 5;
    for (int i = 0; i < 5; ++i) {
      for (int j = i; j < 5; ++j, ++idx) {
        worst[idx] = std::max(worst[idx], rel(J(i, j), d.hess(i, j)));
      }
    }
  }
  return worst;
}

std::vector<Erratum> collect_errata(const ErrataConfig& cfg) {
  std::vector<Erratum> out;

  // Score and information displays.
  const auto disc = derivative_discrepancies(cfg);
  for (int k = 0; k < static_cast<int>(disc.size()); ++k) {
    const std::string name = derivative_entry_name(k);
    Erratum e;
    e.id = "derivative." + name;
    e.location = k < 5 ? "score vector display" : "observed information display";
    e.category = "printed_formula";
    e.printed = name + " as displayed";
    e.implemented = "derivative of the log-likelihood (finite-difference verified)";
    e.discrepancy = disc[k];
    e.confirmed = disc[k] > cfg.tolerance;
    if (!e.confirmed) continue;
    if (name == "U_b") e.note = "log(1 - (1 - t^c)) printed where log(1 - (1 - t)^c) is meant";
    if (name == "U_c") e.note = "(1 - t^c) printed where (1 - t)^c is meant";
    if (name == "J_a,c") e.note = "missing -(n/c^2)[psi(a/c + b) - psi(a/c)]";
    if (name == "J_theta,gamma") {
      e.note = "(b - 1) term wrong; at c = 1 it reduces to +(b - 1) N / gamma^2 where the "
               "likelihood gives -(b - 1) N / gamma^2, N = gamma y e^{gamma y} - e^{gamma y} + 1";
    }
    if (name == "J_gamma,gamma") e.note = "(b - 1) terms disagree; (a - 1) and base terms agree";
    out.push_back(e);
  }

  // Power-series recurrence bracket.
  {
    const std::vector<double> bs{1.0, 0.5, -0.3, 0.2, 0.1, -0.05};
    const auto conv = power_series_power_convolution(bs, 3, 8);
    const auto good = power_series_power(bs, 3, 8);
    const auto bad = power_series_power_printed(bs, 3, 8);
    double d_good = 0, d_bad = 0;
    for (int r = 0; r <= 8; ++r) {
      const double sc = std::max(std::abs(conv[r]), 1e-300);
      d_good = std::max(d_good, std::abs(good[r] - conv[r]) / sc);
      d_bad = std::max(d_bad, std::abs(bad[r] - conv[r]) / sc);
    }
    out.push_back({"series.power_recurrence", "power of a power series", "printed_formula",
                   "c_{m,r} = (r b_0)^{-1} sum [k(m+1) - r + k] b_k c_{m,r-k}",
                   "bracket [k(m+1) - r]", d_bad, d_bad > cfg.tolerance,
                   "implemented form matches brute-force convolution to " + std::to_string(d_good)});
  }

  // Binomial coefficient index order in the mixture expansion.
  out.push_back({"series.binomial_index", "binomial series for (1 - z)^m", "printed_formula",
                 "binom(j, m)", "binom(m, j), computed by the product (m - j + 1)/j", kNaN, true,
                 "binom(j, m) vanishes for integer m > j, dropping the leading terms"});

  // Moments: Gompertz case a = b = c = 1.
  {
    const McGParams<double> p{1, 1, 1, 1, 1};
    const double q = moment_numeric(p, 1);
    const auto printed = moment_series(p, 1, {}, true);
    const auto fixed = moment_series(p, 1, {}, false);
    const double d = std::abs(printed.value - q) / q;
    out.push_back({"series.moment", "k-th moment of the GG components", "printed_formula",
                   "omits the gamma^{-(k+1)} integral of (ln u)^k e^{-lambda u}",
                   "complete expansion with Gamma^{(m)}(1) terms", d, d > 1e-3,
                   "Gompertz(1,1) mean: printed " + std::to_string(printed.value) + ", complete " +
                       std::to_string(fixed.value) + ", quadrature " + std::to_string(q)});
  }

  // Mgf denominator.
  {
    const McGParams<double> p{2, 1, 1, 1, 1};
    const double t = 1.0;
    const double q = mgf_numeric(p, t);
    const auto printed = mgf_series(p, t, {}, true);
    const auto fixed = mgf_series(p, t, {}, false);
    const double d = std::abs(printed.partial_sum - q) / q;
    Erratum e{"series.mgf", "moment generating function", "printed_formula",
              "denominator [(a + j c) theta / gamma]^{k+1} without the inner index",
              "denominator [(i + 1) theta / gamma]^{k+1}", d, d > 1e-3,
              "a=2 b=c=theta=gamma=1, t=1: printed partial sum " +
                  std::to_string(printed.partial_sum) +
                  (printed.converged ? "" : " (flagged: " + printed.note + ")") + ", corrected " +
                  std::to_string(fixed.value) + ", quadrature " + std::to_string(q) +
                  "; with the index dropped the i-sum is sum (-1)^i C(a-1, i) = 0"};
    out.push_back(e);
  }
  // The inner mgf series is asymptotic; record a case where it fails.
  {
    const McGParams<double> p{1.5, 2.5, 1.3, 1, 1};
    const auto s = mgf_series(p, 0.7);
    if (!s.converged) {
      out.push_back({"series.mgf_divergence", "moment generating function", "series_divergence",
                     "convergent series", "asymptotic inner series, flagged", kNaN, true,
                     "a=1.5 b=2.5 c=1.3 theta=gamma=1, t=0.7: " + s.note});
    }
  }

  // Shannon entropy digamma terms.
  {
    const McGParams<double> p{1.8, 1.6, 2.2, 0.8, 0.6};
    const auto sh = shannon_closed(p);
    const double d = std::abs(sh.value - sh.numeric) / std::abs(sh.numeric);
    out.push_back({"entropy.shannon", "Shannon entropy", "printed_formula",
                   "(a - 1) zeta(a, b) + (b - 1) zeta(b, a)",
                   "(a - 1)/c zeta(a/c, b) + (b - 1) zeta(b, a/c)", d, d > 1e-4,
                   "a=1.8 b=1.6 c=2.2 theta=0.8 gamma=0.6: printed " + std::to_string(sh.value) +
                       ", corrected " + std::to_string(sh.corrected) + ", quadrature " +
                       std::to_string(sh.numeric)});
  }

  out.push_back({"entropy.renyi", "Renyi entropy", "printed_formula",
                 "log of a j-sum times an expectation over a Beta law indexed by j", "quadrature only",
                 kNaN, true, "j is bound inside the sum but used outside it"});
  out.push_back({"orderstats.moment_lambda", "order-statistic moments", "printed_formula",
                 "binom(r lambda - 1, i1) with lambda undefined",
                 "GG moments with exponent a (i + k) + c r", kNaN, true,
                 "interpretation, not a transcription"});
  out.push_back({"expansions.power_of_G", "expansion in powers of G", "printed_formula",
                 "F = sum_r b_r G^r for general a, c",
                 "exists only for integer a and c; otherwise expansion in G^c", kNaN, true, ""});
  out.push_back({"family.submodel_names", "list of sub-models", "prose",
                 "KumG and BG for c = 1 and a = c respectively",
                 "BG for c = 1, KumG for a = c", kNaN, true,
                 "I(G; a, b) is beta-generated, 1 - (1 - G^a)^b is Kumaraswamy-generated"});
  return out;
}

std::string errata_json(const std::vector<Erratum>& errata) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["errata"] = nlohmann::ordered_json::array();
  for (const auto& e : errata) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["location"] = e.location;
    j["category"] = e.category;
    j["printed"] = e.printed;
    j["implemented"] = e.implemented;
    if (std::isfinite(e.discrepancy)) {
      j["discrepancy"] = e.discrepancy;
    } else {
      j["discrepancy"] = nullptr;
    }
    j["confirmed"] = e.confirmed;
    j["note"] = e.note;
    doc["errata"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

}  // namespace mcg
