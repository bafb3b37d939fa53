#include "mcg/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

Json number_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return number_or_null(*v);
  } else {
    return *v;
  }
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& label) {
  Dataset d;
  d.label = label;
  std::string line;
  int lineno = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string t = trim(line);
    if (t.empty()) continue;
    double v;
    if (!parse_number(t, v)) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw DomainError(label + ":" + std::to_string(lineno) + ": not a number: '" + t + "'");
    }
    seen_content = true;
    if (!(v > 0) || !std::isfinite(v)) {
      throw DomainError(label + ":" + std::to_string(lineno) + ": value must be finite and > 0");
    }
    d.values.push_back(v);
  }
  if (d.values.empty()) throw DomainError(label + ": no data values");
  return d;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  return parse_dataset(in, path);
}

Json document(const std::string& command) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = command;
  return j;
}

Json to_json(const FitResult& fit) {
  Json j;
  j["model"] = std::string(model_key(fit.model));
  j["display_name"] = std::string(model_display_name(fit.model));
  Json params = Json::array();
  for (Param p : fit.free_params) params.push_back(std::string(param_name(p)));
  j["free_params"] = params;
  Json est;
  for (Param p : fit.free_params) {
    const std::string name(param_name(p));
    est[name] = number_or_null(fit.estimates.at(name));
  }
  j["estimates"] = est;
  if (fit.std_errors) {
    Json se;
    for (Param p : fit.free_params) {
      const std::string name(param_name(p));
      se[name] = number_or_null(fit.std_errors->at(name));
    }
    j["std_errors"] = se;
  } else {
    j["std_errors"] = nullptr;
  }
  j["neg_loglik"] = number_or_null(fit.neg_loglik);
  j["k_params"] = fit.k_params();
  Json info = Json::array();
  for (Eigen::Index r = 0; r < fit.info_matrix.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < fit.info_matrix.cols(); ++c) {
      row.push_back(number_or_null(fit.info_matrix(r, c)));
    }
    info.push_back(row);
  }
  j["info_matrix"] = info;
  j["condition_number"] = number_or_null(fit.condition_number);
  j["converged"] = fit.converged;
  j["on_boundary"] = fit.on_boundary;
  j["iterations"] = fit.iterations;
  j["grad_norm"] = number_or_null(fit.grad_norm);
  j["best_start"] = fit.best_start;
  Json starts = Json::array();
  for (const auto& s : fit.starts) {
    starts.push_back({{"index", s.index},
                      {"neg_loglik", number_or_null(s.neg_loglik)},
                      {"converged", s.converged},
                      {"grad_norm", number_or_null(s.grad_norm)}});
  }
  j["starts"] = starts;
  j["message"] = fit.message;
  return j;
}

Json to_json(const GofReport& r) {
  Json j;
  j["model"] = std::string(model_key(r.model));
  j["neg_loglik"] = number_or_null(r.neg_loglik);
  j["k_params"] = r.k_params;
  j["n_obs"] = r.n_obs;
  j["aic"] = number_or_null(r.aic);
  j["aicc"] = optional_json(r.aicc);
  j["bic"] = number_or_null(r.bic);
  j["ks_stat"] = number_or_null(r.ks_stat);
  j["ks_pvalue"] = number_or_null(r.ks_pvalue);
  j["lrt_stat"] = optional_json(r.lrt_stat);
  j["lrt_df"] = optional_json(r.lrt_df);
  j["lrt_pvalue"] = optional_json(r.lrt_pvalue);
  return j;
}

}  // namespace mcg
