#ifndef MCG_FAMILY_HPP
#define MCG_FAMILY_HPP

// Sub-model lattice of the McDonald-Gompertz family.
//
//   c = 1        beta-generated      (BG)
//   a = c        Kumaraswamy-generated (KumG)
//   gamma -> 0   exponential base    (McE, alias BGE)
//
// and their intersections: GG (b = c = 1), G (a = b = c = 1), BE, KumE,
// GE, E on the exponential base. Exponential-base members are carried by
// McEParams rather than by a tiny gamma.

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mcg/distribution.hpp"

namespace mcg {

enum class ModelName { McG, BG, KumG, McE, BGE, GG, GE, BE, KumE, G, E };

/// Index of a parameter inside the full (a, b, c, theta, gamma) vector.
enum class Param : int { a = 0, b = 1, c = 2, theta = 3, gamma = 4 };

inline constexpr int kFullDim = 5;
using FullVector = Eigen::Matrix<double, kFullDim, 1>;
using FullMatrix = Eigen::Matrix<double, kFullDim, kFullDim>;

struct Constraint {
  enum class Kind { Fixed, Tie };
  Param target;
  Kind kind;
  double value = 0;            // Fixed
  Param tie_to = Param::a;     // Tie: target = tie_to
};

struct ModelSpec {
  ModelName name;
  std::vector<Constraint> constraints;
  bool exponential_base = false;   // gamma -> 0 limit; gamma is not a parameter
  std::vector<Param> free_params;  // in (a, b, c, theta, gamma) order

  int free_count() const { return static_cast<int>(free_params.size()); }

  /// Linear embedding full = J * free + offset (gamma row is zero for
  /// exponential-base models).
  Eigen::Matrix<double, kFullDim, Eigen::Dynamic> embedding_jacobian() const;
  FullVector embedding_offset() const;
  FullVector embed(const Eigen::VectorXd& free) const;
  /// Inverse of embed on the constraint set.
  Eigen::VectorXd restrict(const FullVector& full) const;
};

const ModelSpec& model_spec(ModelName name);

/// Lowercase CLI key: mcg, bg, kumg, mce, bge, gg, ge, be, kume, g, e.
std::string_view model_key(ModelName name);
std::string_view model_display_name(ModelName name);
std::optional<ModelName> parse_model(std::string_view key);
std::string_view param_name(Param p);
std::optional<Param> parse_param(std::string_view key);

/// All names, canonical order (BGE omitted; it aliases McE).
const std::vector<ModelName>& all_models();

using AnyLaw = std::variant<McGParams<double>, McEParams<double>>;

/// Five-parameter embedding of a named sub-model. `values` must hold
/// exactly the model's free parameters (for KumG the shared shape may be
/// given as either "a" or "c").
AnyLaw make_submodel(ModelName name, const std::map<std::string, double>& values);

/// Law for a full parameter vector under `spec`'s base.
AnyLaw law_from_full(const ModelSpec& spec, const FullVector& full);

double any_pdf(const AnyLaw& law, double y);
double any_cdf(const AnyLaw& law, double y);
double any_log_pdf(const AnyLaw& law, double y);
double any_hazard(const AnyLaw& law, double y);
double any_quantile(const AnyLaw& law, double t);
std::vector<double> any_sample(const AnyLaw& law, std::size_t n, std::uint64_t seed);

/// Density of the named sub-model from its own textbook formula (beta-G,
/// Kumaraswamy-G, exponentiated-G, ...), independent of the McDonald form.
double closed_form_pdf(ModelName name, const std::map<std::string, double>& values, double y);

/// McE density: the McDonald generator over G(y) = 1 - exp(-theta y).
double exp_limit_pdf(const McEParams<double>& p, double y);

/// Directed edge of the sub-model lattice: `child` is `parent` under
/// `restriction` (a constraint or the gamma -> 0 limit).
struct LatticeEdge {
  ModelName parent;
  ModelName child;
  std::string restriction;
};
const std::vector<LatticeEdge>& lattice_edges();

/// The McG cdf at (a = i, b = n - i + 1, c = 1, theta, gamma) and the cdf of
/// the i-th order statistic of n draws from G, the latter as the binomial
/// tail sum_{k>=i} C(n,k) G^k (1-G)^(n-k).
std::pair<double, double> order_stat_identity_check(int i, int n,
                                                    const GompertzBase<double>& base,
                                                    double y);

/// Same identity for a GG(c) parent: McG(a = i c, b = n - i + 1, c) against
/// the binomial tail in G^c.
std::pair<double, double> order_stat_identity_check_gg(int i, int n,
                                                       const GompertzBase<double>& base,
                                                       double c, double y);

}  // namespace mcg

#endif  // MCG_FAMILY_HPP
