#ifndef MCG_SELECTION_HPP
#define MCG_SELECTION_HPP

// Information criteria, one-sample Kolmogorov-Smirnov test and nested
// likelihood-ratio tests.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcg/inference.hpp"

namespace mcg {

struct InfoCriteria {
  double aic;
  std::optional<double> aicc;  // absent when n <= k + 1
  double bic;
};

InfoCriteria info_criteria(double neg_loglik, int k, int n);

struct KsResult {
  double statistic;
  double p_value;  // asymptotic Kolmogorov law, no Lilliefors correction
};

KsResult ks_test(const Dataset& data, const std::function<double(double)>& cdf);

/// Upper tail of chi-square(df).
double chi_square_sf(double x, int df);

struct LrtResult {
  double statistic;
  int df;
  double p_value;
};

/// 2 (l_full - l_nested). The nested model must be a strict restriction of
/// the full one. Throws NumericError when the statistic is below -1e-3
/// (the full fit missed the nested optimum); small negatives clamp to 0.
LrtResult lrt(const FitResult& full, const FitResult& nested);

/// True when `nested` is reachable from `full` in the sub-model lattice.
bool is_nested(ModelName full, ModelName nested);

struct GofReport {
  ModelName model;
  double neg_loglik;
  int k_params;
  int n_obs;
  double aic;
  std::optional<double> aicc;
  double bic;
  double ks_stat;
  double ks_pvalue;
  std::optional<double> lrt_stat;
  std::optional<int> lrt_df;
  std::optional<double> lrt_pvalue;
};

inline constexpr const char* kKsCaveat =
    "K-S p-value from the asymptotic Kolmogorov law with estimated parameters; "
    "no Lilliefors correction";

/// Criteria and K-S for a fit; pass `full` to add the LRT against it.
GofReport gof_report(const FitResult& fit, const Dataset& data,
                     const FitResult* full = nullptr);

}  // namespace mcg

#endif  // MCG_SELECTION_HPP
