#ifndef MCG_INFERENCE_HPP
#define MCG_INFERENCE_HPP

// Maximum likelihood for the McDonald-Gompertz family and its sub-models.
//
// Parameters of a sub-model are its free coordinates (ModelSpec::free_params);
// the full five-vector is J * free + offset and derivatives are pulled back
// through J. Observed information is the negated Hessian of the
// log-likelihood.

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcg/family.hpp"

namespace mcg {

struct Dataset {
  std::vector<double> values;
  std::string label;

  /// Throws DomainError unless nonempty with finite positive values.
  void validate() const;
  std::size_t size() const { return values.size(); }
};

/// Log-likelihood with first and second derivatives in the full
/// (a, b, c, theta, gamma) coordinates. For exponential-base models the
/// gamma row and column are zero.
struct FullDerivatives {
  double loglik = 0;
  FullVector grad = FullVector::Zero();
  FullMatrix hess = FullMatrix::Zero();
};

/// order 0: loglik only; 1: plus gradient; 2: plus Hessian.
FullDerivatives full_derivatives(const FullVector& full, bool exponential_base,
                                 const Dataset& data, int order = 2);

double log_likelihood(const ModelSpec& model, const Eigen::VectorXd& free, const Dataset& data);

/// Gradient in the model's free coordinates.
Eigen::VectorXd score(const ModelSpec& model, const Eigen::VectorXd& free, const Dataset& data);

/// -d^2 l in the model's free coordinates; symmetric by construction.
Eigen::MatrixXd observed_info(const ModelSpec& model, const Eigen::VectorXd& free,
                              const Dataset& data);

struct OptimizerConfig {
  int max_iter = 500;
  double grad_tol = 1e-6;
  double step_tol = 1e-10;
  int n_starts = 8;
  std::uint64_t seed = 20240101;

  void validate() const;
};

/// Box for the log-parameter search. Estimates that stop on a face are
/// reported as not converged.
struct ParameterBox {
  double shape_lo = 1e-4, shape_hi = 1e4;
  double theta_lo = 1e-12, theta_hi = 1e4;
  double gamma_lo = 1e-6, gamma_hi = 1e3;
};

struct StartSummary {
  int index;
  double neg_loglik;
  bool converged;
  double grad_norm;
};

struct FitResult {
  ModelName model;
  std::vector<Param> free_params;
  Eigen::VectorXd free;                        // estimates in free coordinates
  std::map<std::string, double> estimates;     // keyed by parameter name
  std::optional<std::map<std::string, double>> std_errors;
  double neg_loglik = 0;
  Eigen::MatrixXd info_matrix;                 // observed information, free coords
  double condition_number = 0;
  bool converged = false;
  bool on_boundary = false;
  int iterations = 0;
  double grad_norm = 0;                        // max |x_i dl/dx_i|
  int best_start = 0;
  std::vector<StartSummary> starts;
  std::vector<double> trace;                   // -log L after each accepted step
  std::string message;

  int k_params() const { return static_cast<int>(free.size()); }
  FullVector full() const;
};

/// Gompertz (or exponential) base fit used to seed every model.
FitResult fit_base(bool exponential_base, const Dataset& data, const OptimizerConfig& cfg = {});

FitResult fit_mle(const ModelSpec& model, const Dataset& data, const OptimizerConfig& cfg = {},
                  const ParameterBox& box = {});

/// Local fit from a given start (free coordinates); no multistart.
FitResult fit_from(const ModelSpec& model, const Dataset& data, const Eigen::VectorXd& start,
                   const OptimizerConfig& cfg = {}, const ParameterBox& box = {});

/// Estimates, SEs and information at a fixed parameter point.
FitResult evaluate_at(const ModelSpec& model, const Dataset& data, const Eigen::VectorXd& free);

struct Interval {
  std::string param;
  double estimate, lower, upper;
};

/// estimate +- z_{(1+level)/2} SE per free parameter.
std::vector<Interval> asymptotic_ci(const FitResult& fit, double level);

}  // namespace mcg

#endif  // MCG_INFERENCE_HPP
