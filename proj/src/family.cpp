#include "mcg/family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

using Kind = Constraint::Kind;

Constraint fixed(Param p, double v) { return {p, Kind::Fixed, v, Param::a}; }
Constraint tie(Param p, Param to) { return {p, Kind::Tie, 0.0, to}; }

ModelSpec build(ModelName name, std::vector<Constraint> cons, bool exp_base) {
  ModelSpec s{name, std::move(cons), exp_base, {}};
  for (int i = 0; i < kFullDim; ++i) {
    const auto p = static_cast<Param>(i);
    if (exp_base && p == Param::gamma) continue;
    const bool constrained = std::any_of(s.constraints.begin(), s.constraints.end(),
                                         [p](const Constraint& c) { return c.target == p; });
    if (!constrained) s.free_params.push_back(p);
  }
  return s;
}

const std::array<ModelSpec, 11>& spec_table() {
  static const std::array<ModelSpec, 11> table = {
      build(ModelName::McG, {}, false),
      build(ModelName::BG, {fixed(Param::c, 1)}, false),
      build(ModelName::KumG, {tie(Param::c, Param::a)}, false),
      build(ModelName::McE, {}, true),
      build(ModelName::BGE, {}, true),
      build(ModelName::GG, {fixed(Param::b, 1), fixed(Param::c, 1)}, false),
      build(ModelName::GE, {fixed(Param::b, 1), fixed(Param::c, 1)}, true),
      build(ModelName::BE, {fixed(Param::c, 1)}, true),
      build(ModelName::KumE, {tie(Param::c, Param::a)}, true),
      build(ModelName::G, {fixed(Param::a, 1), fixed(Param::b, 1), fixed(Param::c, 1)}, false),
      build(ModelName::E, {fixed(Param::a, 1), fixed(Param::b, 1), fixed(Param::c, 1)}, true),
  };
  return table;
}

struct NameEntry {
  ModelName name;
  std::string_view key;
  std::string_view display;
};

constexpr std::array<NameEntry, 11> kNames = {{
    {ModelName::McG, "mcg", "McG"},
    {ModelName::BG, "bg", "BG"},
    {ModelName::KumG, "kumg", "KumG"},
    {ModelName::McE, "mce", "McE"},
    {ModelName::BGE, "bge", "BGE"},
    {ModelName::GG, "gg", "GG"},
    {ModelName::GE, "ge", "GE"},
    {ModelName::BE, "be", "BE"},
    {ModelName::KumE, "kume", "KumE"},
    {ModelName::G, "g", "G"},
    {ModelName::E, "e", "E"},
}};

constexpr std::array<std::string_view, kFullDim> kParamNames = {"a", "b", "c", "theta", "gamma"};

double get(const std::map<std::string, double>& v, const char* key) {
  const auto it = v.find(key);
  if (it == v.end()) throw DomainError(std::string("missing parameter '") + key + "'");
  return it->second;
}

// Free values keyed by name, with the KumG/KumE shared shape accepted as "c".
Eigen::VectorXd free_from_map(const ModelSpec& spec, std::map<std::string, double> values) {
  const bool tied = std::any_of(spec.constraints.begin(), spec.constraints.end(),
                                [](const Constraint& c) { return c.kind == Kind::Tie; });
  if (tied && values.count("c") && !values.count("a")) {
    values["a"] = values["c"];
    values.erase("c");
  }
  std::set<std::string> expected;
  for (Param p : spec.free_params) expected.insert(std::string(param_name(p)));
  for (const auto& [k, v] : values) {
    if (!expected.count(k)) {
      throw DomainError("parameter '" + k + "' is not free in model " +
                        std::string(model_display_name(spec.name)));
    }
  }
  Eigen::VectorXd free(spec.free_count());
  for (int i = 0; i < spec.free_count(); ++i) {
    free(i) = get(values, std::string(param_name(spec.free_params[i])).c_str());
  }
  return free;
}

double naive_mcdonald(double a, double b, double c, double G, double g) {
  return c / std::beta(a / c, b) * g * std::pow(G, a - 1) * std::pow(1 - std::pow(G, c), b - 1);
}

}  // namespace

Eigen::Matrix<double, kFullDim, Eigen::Dynamic> ModelSpec::embedding_jacobian() const {
  Eigen::Matrix<double, kFullDim, Eigen::Dynamic> J =
      Eigen::Matrix<double, kFullDim, Eigen::Dynamic>::Zero(kFullDim, free_count());
  for (int j = 0; j < free_count(); ++j) J(static_cast<int>(free_params[j]), j) = 1;
  for (const auto& con : constraints) {
    if (con.kind != Constraint::Kind::Tie) continue;
    const auto src = std::find(free_params.begin(), free_params.end(), con.tie_to);
    J(static_cast<int>(con.target), static_cast<int>(src - free_params.begin())) = 1;
  }
  return J;
}

FullVector ModelSpec::embedding_offset() const {
  FullVector off = FullVector::Zero();
  for (const auto& con : constraints) {
    if (con.kind == Constraint::Kind::Fixed) off(static_cast<int>(con.target)) = con.value;
  }
  return off;
}

FullVector ModelSpec::embed(const Eigen::VectorXd& free) const {
  if (free.size() != free_count()) {
    throw DomainError("embed: expected " + std::to_string(free_count()) + " free parameters");
  }
  return embedding_jacobian() * free + embedding_offset();
}

Eigen::VectorXd ModelSpec::restrict(const FullVector& full) const {
  Eigen::VectorXd free(free_count());
  for (int j = 0; j < free_count(); ++j) free(j) = full(static_cast<int>(free_params[j]));
  return free;
}

const ModelSpec& model_spec(ModelName name) {
  return spec_table()[static_cast<std::size_t>(name)];
}

std::string_view model_key(ModelName name) { return kNames[static_cast<std::size_t>(name)].key; }

std::string_view model_display_name(ModelName name) {
  return kNames[static_cast<std::size_t>(name)].display;
}

std::optional<ModelName> parse_model(std::string_view key) {
  std::string lower(key);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (const auto& e : kNames) {
    if (e.key == lower) return e.name;
  }
  return std::nullopt;
}

std::string_view param_name(Param p) { return kParamNames[static_cast<std::size_t>(p)]; }

std::optional<Param> parse_param(std::string_view key) {
  for (std::size_t i = 0; i < kParamNames.size(); ++i) {
    if (kParamNames[i] == key) return static_cast<Param>(i);
  }
  return std::nullopt;
}

const std::vector<ModelName>& all_models() {
  static const std::vector<ModelName> names = {ModelName::McG, ModelName::BG,  ModelName::KumG,
                                               ModelName::McE, ModelName::GG,  ModelName::GE,
                                               ModelName::BE,  ModelName::KumE, ModelName::G,
                                               ModelName::E};
  return names;
}

AnyLaw law_from_full(const ModelSpec& spec, const FullVector& full) {
  if (spec.exponential_base) {
    McEParams<double> p{full(0), full(1), full(2), full(3)};
    p.validate();
    return p;
  }
  McGParams<double> p{full(0), full(1), full(2), full(3), full(4)};
  p.validate();
  return p;
}

AnyLaw make_submodel(ModelName name, const std::map<std::string, double>& values) {
  const ModelSpec& spec = model_spec(name);
  return law_from_full(spec, spec.embed(free_from_map(spec, values)));
}

double any_pdf(const AnyLaw& law, double y) {
  return std::visit([y](const auto& p) { return pdf(p, y); }, law);
}
double any_cdf(const AnyLaw& law, double y) {
  return std::visit([y](const auto& p) { return cdf(p, y); }, law);
}
double any_log_pdf(const AnyLaw& law, double y) {
  return std::visit([y](const auto& p) { return log_pdf(p, y); }, law);
}
double any_hazard(const AnyLaw& law, double y) {
  return std::visit([y](const auto& p) { return hazard(p, y); }, law);
}
double any_quantile(const AnyLaw& law, double t) {
  return std::visit([t](const auto& p) { return quantile(p, t); }, law);
}
std::vector<double> any_sample(const AnyLaw& law, std::size_t n, std::uint64_t seed) {
  return std::visit([&](const auto& p) { return sample(p, n, seed); }, law);
}

double closed_form_pdf(ModelName name, const std::map<std::string, double>& values, double y) {
  const ModelSpec& spec = model_spec(name);
  const Eigen::VectorXd free = free_from_map(spec, values);
  auto val = [&](const char* key) {
    const auto p = *parse_param(key);
    const auto it = std::find(spec.free_params.begin(), spec.free_params.end(), p);
    return free(static_cast<int>(it - spec.free_params.begin()));
  };
  const double theta = val("theta");
  double G;
  double g;
  if (spec.exponential_base) {
    G = 1 - std::exp(-theta * y);
    g = theta * std::exp(-theta * y);
  } else {
    const double gamma = val("gamma");
    const double w = theta / gamma * (std::exp(gamma * y) - 1);
    G = 1 - std::exp(-w);
    g = theta * std::exp(gamma * y) * std::exp(-w);
  }
  switch (name) {
    case ModelName::McG:
    case ModelName::McE:
    case ModelName::BGE:
      return naive_mcdonald(val("a"), val("b"), val("c"), G, g);
    case ModelName::BG:
    case ModelName::BE: {
      const double a = val("a");
      const double b = val("b");
      return g * std::pow(G, a - 1) * std::pow(1 - G, b - 1) / std::beta(a, b);
    }
    case ModelName::KumG:
    case ModelName::KumE: {
      const double a = val("a");
      const double b = val("b");
      return a * b * g * std::pow(G, a - 1) * std::pow(1 - std::pow(G, a), b - 1);
    }
    case ModelName::GG:
    case ModelName::GE: {
      const double a = val("a");
      return a * g * std::pow(G, a - 1);
    }
    case ModelName::G:
    case ModelName::E:
      return g;
  }
  throw DomainError("closed_form_pdf: unknown model");
}

double exp_limit_pdf(const McEParams<double>& p, double y) { return pdf(p, y); }

const std::vector<LatticeEdge>& lattice_edges() {
  static const std::vector<LatticeEdge> edges = {
      {ModelName::McG, ModelName::BG, "c = 1"},
      {ModelName::McG, ModelName::KumG, "a = c"},
      {ModelName::McG, ModelName::McE, "gamma -> 0"},
      {ModelName::BG, ModelName::GG, "b = 1"},
      {ModelName::KumG, ModelName::GG, "b = 1"},
      {ModelName::BG, ModelName::BE, "gamma -> 0"},
      {ModelName::KumG, ModelName::KumE, "gamma -> 0"},
      {ModelName::McE, ModelName::BE, "c = 1"},
      {ModelName::McE, ModelName::KumE, "a = c"},
      {ModelName::GG, ModelName::G, "a = 1"},
      {ModelName::GG, ModelName::GE, "gamma -> 0"},
      {ModelName::BE, ModelName::GE, "b = 1"},
      {ModelName::KumE, ModelName::GE, "b = 1"},
      {ModelName::GE, ModelName::E, "a = 1"},
      {ModelName::G, ModelName::E, "gamma -> 0"},
  };
  return edges;
}

namespace {

double binomial_upper_tail(int i, int n, double x) {
  double sum = 0;
  for (int k = i; k <= n; ++k) {
    const double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    sum += std::exp(logc) * std::pow(x, k) * std::pow(1 - x, n - k);
  }
  return sum;
}

void require_rank(int i, int n) {
  if (n < 1 || i < 1 || i > n) throw DomainError("order statistic rank requires 1 <= i <= n");
}

}  // namespace

std::pair<double, double> order_stat_identity_check(int i, int n, const GompertzBase<double>& base,
                                                    double y) {
  return order_stat_identity_check_gg(i, n, base, 1.0, y);
}

std::pair<double, double> order_stat_identity_check_gg(int i, int n,
                                                       const GompertzBase<double>& base, double c,
                                                       double y) {
  require_rank(i, n);
  const McGParams<double> p{i * c, static_cast<double>(n - i + 1), c, base.theta, base.gamma};
  p.validate();
  const double Gc = std::pow(base_cdf(base, y), c);
  return {cdf(p, y), binomial_upper_tail(i, n, Gc)};
}

}  // namespace mcg
