#include "mcg/selection.hpp"

#include <algorithm>
#include <cmath>

#include "mcg/errors.hpp"
#include "mcg/specfun.hpp"

namespace mcg {

InfoCriteria info_criteria(double neg_loglik, int k, int n) {
  if (k < 0 || n < 1) throw DomainError("info_criteria: need k >= 0 and n >= 1");
  InfoCriteria out;
  out.aic = 2 * neg_loglik + 2.0 * k;
  out.bic = 2 * neg_loglik + k * std::log(double(n));
  if (n > k + 1) out.aicc = out.aic + 2.0 * k * (k + 1) / (n - k - 1);
  return out;
}

KsResult ks_test(const Dataset& data, const std::function<double(double)>& cdf) {
  data.validate();
  std::vector<double> y = data.values;
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(y.size());
  double d = 0;
  // At a run of ties the empirical cdf jumps from i/n to j/n in one step.
  for (std::size_t i = 0; i < y.size();) {
    std::size_t j = i;
    while (j < y.size() && y[j] == y[i]) ++j;
    const double F = cdf(y[i]);
    d = std::max({d, j / n - F, F - i / n});
    i = j;
  }
  return {d, kolmogorov_sf(d, static_cast<int>(y.size()))};
}

double chi_square_sf(double x, int df) {
  if (!(x >= 0)) throw DomainError("chi_square_sf: x must be >= 0");
  if (df < 1) throw DomainError("chi_square_sf: df must be >= 1");
  if (x == 0) return 1;
  return gamma_q(df / 2.0, x / 2);
}

bool is_nested(ModelName full, ModelName nested) {
  // Reachability in the sub-model lattice.
  std::vector<ModelName> frontier{full};
  std::vector<ModelName> seen{full};
  const auto edges = lattice_edges();
  while (!frontier.empty()) {
    const ModelName m = frontier.back();
    frontier.pop_back();
    for (const auto& e : edges) {
      if (e.parent != m || std::find(seen.begin(), seen.end(), e.child) != seen.end()) continue;
      if (e.child == nested) return true;
      seen.push_back(e.child);
      frontier.push_back(e.child);
    }
  }
  return false;
}

LrtResult lrt(const FitResult& full, const FitResult& nested) {
  if (!is_nested(full.model, nested.model)) {
    throw DomainError("lrt: " + std::string(model_key(nested.model)) + " is not nested in " +
                      std::string(model_key(full.model)));
  }
  double stat = 2 * (nested.neg_loglik - full.neg_loglik);
  if (stat < -1e-3) {
    throw NumericError("lrt: negative statistic " + std::to_string(stat) +
                       "; the full fit did not reach the nested optimum");
  }
  stat = std::max(stat, 0.0);
  const int df = full.k_params() - nested.k_params();
  return {stat, df, chi_square_sf(stat, df)};
}

GofReport gof_report(const FitResult& fit, const Dataset& data, const FitResult* full) {
  const int n = static_cast<int>(data.size());
  const int k = fit.k_params();
  const auto ic = info_criteria(fit.neg_loglik, k, n);
  const AnyLaw law = law_from_full(model_spec(fit.model), fit.full());
  const auto ks = ks_test(data, [&](double y) { return any_cdf(law, y); });
  GofReport r{fit.model, fit.neg_loglik, k, n, ic.aic, ic.aicc, ic.bic, ks.statistic, ks.p_value,
              std::nullopt, std::nullopt, std::nullopt};
  if (full) {
    const auto t = lrt(*full, fit);
    r.lrt_stat = t.statistic;
    r.lrt_df = t.df;
    r.lrt_pvalue = t.p_value;
  }
  return r;
}

}  // namespace mcg
