#ifndef MCG_TESTS_SUPPORT_HPP
#define MCG_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace testing {

inline double rel_err(double got, double want) {
  if (got == want) return 0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v = linspace(lo, hi, n);
  for (double& x : v) x = std::pow(10.0, x);
  return v;
}

// Mean and standard error of a sample.
struct MeanSe {
  double mean, se;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  double s2 = 0;
  for (double x : v) s2 += (x - m) * (x - m);
  s2 /= (v.size() - 1);
  return {m, std::sqrt(s2 / v.size())};
}

}  // namespace testing

#endif
