#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mcg/errors.hpp"
#include "mcg/io.hpp"

using namespace mcg;

namespace {

Dataset parse(const std::string& s) {
  std::istringstream in(s);
  return parse_dataset(in, "mem");
}

}  // namespace

TEST_CASE("dataset parsing: headers, line endings, blank lines") {
  CHECK(parse("1.5\n2\n3e-1\n").values == std::vector<double>{1.5, 2, 0.3});
  CHECK(parse("lifetime\n1\n2\n").values == std::vector<double>{1, 2});
  CHECK(parse("\xEF\xBB\xBFstrength\r\n0.55\r\n0.74\r\n").values == std::vector<double>{0.55, 0.74});
  CHECK(parse("\n\n  4.5  \n\n6\n\n").values == std::vector<double>{4.5, 6});
  CHECK(parse("7").values == std::vector<double>{7});
}

TEST_CASE("dataset parsing: rejected input") {
  CHECK_THROWS_AS(parse(""), DomainError);
  CHECK_THROWS_AS(parse("header only\n"), DomainError);
  CHECK_THROWS_AS(parse("1\nabc\n"), DomainError);
  CHECK_THROWS_AS(parse("a\nb\n1\n"), DomainError);
  CHECK_THROWS_AS(parse("1\n0\n"), DomainError);
  CHECK_THROWS_AS(parse("1\n-2\n"), DomainError);
  CHECK_THROWS_AS(parse("1\ninf\n"), DomainError);
  CHECK_THROWS_AS(parse("1\n1e999\n"), DomainError);
  CHECK_THROWS_AS(parse("1,2\n"), DomainError);
  CHECK_THROWS_AS(read_dataset("/nonexistent/file.csv"), DomainError);
}

TEST_CASE("bundled datasets") {
  const Dataset a = read_dataset(std::string(MCG_DATA_DIR) + "/aarset_devices.csv");
  const Dataset g = read_dataset(std::string(MCG_DATA_DIR) + "/glass_fibers.csv");
  CHECK(a.size() == 50);
  CHECK(g.size() == 63);
  // glass-fibre AICC - AIC = 2k(k+1)/(n-k-1) with k = 5: 33.8943 - 32.8417.
  CHECK(std::abs(2.0 * 5 * 6 / (63 - 5 - 1) - (33.8943 - 32.8417)) <= 2e-4);
}

TEST_CASE("JSON documents") {
  const Json d = document("fit");
  CHECK(d["schema_version"] == 1);
  CHECK(d["command"] == "fit");
  CHECK(d.begin().key() == "schema_version");

  FitResult f;
  f.model = ModelName::G;
  f.free_params = model_spec(ModelName::G).free_params;
  f.free = Eigen::Vector2d(0.1, 0.2);
  f.estimates = {{"theta", 0.1}, {"gamma", 0.2}};
  f.neg_loglik = 1.0 / 3;
  f.info_matrix = Eigen::Matrix2d::Identity();
  f.condition_number = INFINITY;
  const Json j = to_json(f);
  CHECK(j["model"] == "g");
  CHECK(j["std_errors"].is_null());
  CHECK(j["condition_number"].is_null());
  CHECK(j["neg_loglik"].get<double>() == 1.0 / 3);
  // Full double precision survives the text round trip.
  CHECK(Json::parse(j.dump())["neg_loglik"].get<double>() == 1.0 / 3);

  GofReport r{ModelName::BG, 10, 4, 50, 28, std::nullopt, 35, 0.1, 0.5, 1.2, 1, 0.27};
  const Json g = to_json(r);
  for (const char* k : {"model", "neg_loglik", "k_params", "n_obs", "aic", "aicc", "bic", "ks_stat", "ks_pvalue",
                        "lrt_stat", "lrt_df", "lrt_pvalue"}) {
    CHECK(g.contains(k));
  }
  CHECK(g["aicc"].is_null());
  CHECK(g["lrt_df"] == 1);
}
