// mcg: fit, compare and evaluate McDonald-Gompertz models from the shell.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "mcg/errata.hpp"
#include "mcg/errors.hpp"
#include "mcg/family.hpp"
#include "mcg/inference.hpp"
#include "mcg/io.hpp"
#include "mcg/selection.hpp"
#include "mcg/shape.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitNumeric = 4;

struct Options {
  std::string model = "mcg";
  std::string data;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 20240101;
  std::size_t n = 100;
  double grid_min = 0, grid_max = 5;
  int grid_points = 101;
  int starts = 8;
  int max_iter = 500;
  std::map<std::string, std::optional<double>> params{
      {"a", {}}, {"b", {}}, {"c", {}}, {"theta", {}}, {"gamma", {}}};
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

mcg::ModelName model_of(const Options& o) {
  auto m = mcg::parse_model(o.model);
  if (!m) throw mcg::DomainError("unknown model '" + o.model + "'");
  return *m;
}

mcg::OptimizerConfig optimizer_of(const Options& o) {
  mcg::OptimizerConfig cfg;
  cfg.n_starts = o.starts;
  cfg.max_iter = o.max_iter;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

mcg::AnyLaw law_of(const Options& o) {
  std::map<std::string, double> values;
  for (const auto& [k, v] : o.params) {
    if (v) values[k] = *v;
  }
  return mcg::make_submodel(model_of(o), values);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw mcg::DomainError("cannot write " + o.out);
  f << text;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + "\n";
}

std::string opt_cell(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

int cmd_fit(const Options& o) {
  const auto data = mcg::read_dataset(o.data);
  const auto fit = mcg::fit_mle(mcg::model_spec(model_of(o)), data, optimizer_of(o));
  auto doc = mcg::document("fit");
  doc["data"] = {{"path", o.data}, {"n_obs", data.size()}};
  doc["fit"] = mcg::to_json(fit);
  emit(o, doc.dump(2) + "\n");
  return fit.converged ? kExitOk : kExitNoConvergence;
}

int cmd_gof(const Options& o) {
  const auto data = mcg::read_dataset(o.data);
  const auto cfg = optimizer_of(o);
  const auto name = model_of(o);
  const auto fit = mcg::fit_mle(mcg::model_spec(name), data, cfg);
  std::optional<mcg::FitResult> full;
  if (name != mcg::ModelName::McG && mcg::is_nested(mcg::ModelName::McG, name)) {
    full = mcg::fit_mle(mcg::model_spec(mcg::ModelName::McG), data, cfg);
  }
  const auto report = mcg::gof_report(fit, data, full ? &*full : nullptr);
  auto doc = mcg::document("gof");
  doc["data"] = {{"path", o.data}, {"n_obs", data.size()}};
  doc["report"] = mcg::to_json(report);
  doc["fit"] = mcg::to_json(fit);
  doc["caveats"] = {mcg::kKsCaveat};
  emit(o, doc.dump(2) + "\n");
  return fit.converged ? kExitOk : kExitNoConvergence;
}

int cmd_compare(const Options& o) {
  const auto data = mcg::read_dataset(o.data);
  const auto cfg = optimizer_of(o);
  const auto top = model_of(o);
  const auto full = mcg::fit_mle(mcg::model_spec(top), data, cfg);
  int code = full.converged ? kExitOk : kExitNoConvergence;

  std::vector<mcg::GofReport> rows{mcg::gof_report(full, data)};
  std::vector<std::string> errors{""};
  std::vector<bool> converged{full.converged};
  for (auto sub : {mcg::ModelName::BG, mcg::ModelName::KumG, mcg::ModelName::McE}) {
    if (!mcg::is_nested(top, sub)) continue;
    const auto fit = mcg::fit_mle(mcg::model_spec(sub), data, cfg);
    converged.push_back(fit.converged);
    try {
      rows.push_back(mcg::gof_report(fit, data, &full));
      errors.emplace_back();
    } catch (const mcg::NumericError& e) {
      rows.push_back(mcg::gof_report(fit, data));
      errors.emplace_back(e.what());
      code = kExitNumeric;
    }
  }

  if (o.format == "csv") {
    std::string s = csv_row({"model", "neg_loglik", "k_params", "n_obs", "aic", "aicc", "bic",
                             "ks_stat", "ks_pvalue", "lrt_stat", "lrt_df", "lrt_pvalue",
                             "converged"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      s += csv_row({std::string(mcg::model_key(r.model)), fmt(r.neg_loglik),
                    std::to_string(r.k_params), std::to_string(r.n_obs), fmt(r.aic),
                    opt_cell(r.aicc), fmt(r.bic), fmt(r.ks_stat), fmt(r.ks_pvalue),
                    opt_cell(r.lrt_stat), r.lrt_df ? std::to_string(*r.lrt_df) : "",
                    opt_cell(r.lrt_pvalue), converged[i] ? "true" : "false"});
    }
    emit(o, s);
    return code;
  }
  auto doc = mcg::document("compare");
  doc["data"] = {{"path", o.data}, {"n_obs", data.size()}};
  doc["full_model"] = std::string(mcg::model_key(top));
  doc["full"] = mcg::to_json(rows[0]);
  doc["full"]["converged"] = full.converged;
  mcg::Json ladder = mcg::Json::array();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto r = mcg::to_json(rows[i]);
    r["converged"] = bool(converged[i]);
    if (!errors[i].empty()) r["lrt_error"] = errors[i];
    ladder.push_back(r);
  }
  doc["ladder"] = ladder;
  doc["caveats"] = {mcg::kKsCaveat};
  emit(o, doc.dump(2) + "\n");
  return code;
}

int cmd_sample(const Options& o) {
  const auto law = law_of(o);
  const auto draws = mcg::any_sample(law, o.n, o.seed);
  std::string s = "value\n";
  for (double v : draws) s += fmt(v) + "\n";
  emit(o, s);
  return kExitOk;
}

void check_grid(const Options& o) {
  if (o.grid_points < 2) throw mcg::DomainError("--grid-points must be >= 2");
  if (!(o.grid_max > o.grid_min)) throw mcg::DomainError("--grid-max must exceed --grid-min");
}

int cmd_eval(const Options& o) {
  check_grid(o);
  if (o.grid_min < 0) throw mcg::DomainError("--grid-min must be >= 0");
  const auto law = law_of(o);
  std::string s = "y,pdf,cdf,hazard\n";
  for (int i = 0; i < o.grid_points; ++i) {
    const double y = o.grid_min + (o.grid_max - o.grid_min) * i / (o.grid_points - 1);
    s += csv_row({fmt(y), fmt(mcg::any_pdf(law, y)), fmt(mcg::any_cdf(law, y)),
                  fmt(mcg::any_hazard(law, y))});
  }
  emit(o, s);
  return kExitOk;
}

int cmd_curves(const Options& o) {
  check_grid(o);
  if (model_of(o) != mcg::ModelName::McG) {
    throw mcg::DomainError("curves sweeps c and needs --model mcg");
  }
  Options with_c = o;
  if (!with_c.params["c"]) with_c.params["c"] = o.grid_min;  // swept anyway
  const auto law = law_of(with_c);
  const auto& base = std::get<mcg::McGParams<double>>(law);
  const auto sweep = mcg::c_sweep(base, o.grid_min, o.grid_max, o.grid_points);
  auto rows = mcg::shape_curves(sweep, mcg::ShapeMeasure::bowley);
  const auto moors = mcg::shape_curves(sweep, mcg::ShapeMeasure::moors);
  rows.insert(rows.end(), moors.begin(), moors.end());
  std::ostringstream os;
  mcg::write_shape_curves_csv(os, rows);
  emit(o, os.str());
  return kExitOk;
}

int cmd_errata(const Options& o) {
  emit(o, mcg::errata_json(mcg::collect_errata()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"McDonald-Gompertz family: fitting, model comparison and evaluation"};
  app.require_subcommand(1);
  Options o;

  auto add_data = [&](CLI::App* c) {
    c->add_option("--data", o.data, "CSV with one positive value per line")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--model", o.model, "mcg, bg, kumg, mce, bge, gg, ge, be, kume, g, e");
    c->add_option("--starts", o.starts, "multistart count")->check(CLI::PositiveNumber);
    c->add_option("--max-iter", o.max_iter, "iterations per local search")
        ->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "seed for random starts");
    c->add_option("--out", o.out, "output file (default stdout)");
  };
  auto add_params = [&](CLI::App* c) {
    c->add_option("--model", o.model, "mcg, bg, kumg, mce, bge, gg, ge, be, kume, g, e");
    for (auto& [k, v] : o.params) c->add_option("--" + k, v, "parameter " + k);
    c->add_option("--out", o.out, "output file (default stdout)");
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--grid-min", o.grid_min, "grid start");
    c->add_option("--grid-max", o.grid_max, "grid end");
    c->add_option("--grid-points", o.grid_points, "number of grid points");
  };

  auto* fit = app.add_subcommand("fit", "maximum likelihood fit; JSON");
  add_data(fit);
  auto* gof = app.add_subcommand("gof", "fit plus AIC/AICC/BIC, K-S and LRT against McG; JSON");
  add_data(gof);
  auto* compare = app.add_subcommand("compare", "fit --model and its nested BG/KumG/McE; LRT ladder");
  add_data(compare);
  compare->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  auto* smp = app.add_subcommand("sample", "seeded draws; CSV");
  add_params(smp);
  smp->add_option("--n", o.n, "number of draws")->check(CLI::PositiveNumber);
  smp->add_option("--seed", o.seed, "seed");
  auto* ev = app.add_subcommand("eval", "pdf, cdf and hazard on a grid; CSV");
  add_params(ev);
  add_grid(ev);
  auto* cur = app.add_subcommand("curves", "Bowley and Moors over a c grid; CSV");
  add_params(cur);
  add_grid(cur);
  auto* err = app.add_subcommand("errata", "printed-formula audit; JSON");
  err->add_option("--out", o.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*fit) return cmd_fit(o);
    if (*gof) return cmd_gof(o);
    if (*compare) return cmd_compare(o);
    if (*smp) return cmd_sample(o);
    if (*ev) return cmd_eval(o);
    if (*cur) return cmd_curves(o);
    if (*err) return cmd_errata(o);
  } catch (const mcg::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mcg::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
