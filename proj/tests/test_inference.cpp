#include <doctest.h>

#include <cmath>
#include <random>

#include "mcg/errors.hpp"
#include "mcg/inference.hpp"
#include "mcg/io.hpp"
#include "support.hpp"

using namespace mcg;

namespace {

const ModelSpec& mcg_model() { return model_spec(ModelName::McG); }

Dataset data_file(const char* name) { return read_dataset(std::string(MCG_DATA_DIR) + "/" + name); }

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

struct Case {
  ModelName model;
  Eigen::VectorXd free;
  Dataset data;
};

// 25 random interior points, each with a small dataset drawn from a
// nearby law; models cycle through the Gompertz and exponential bases.
std::vector<Case> random_cases() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> shape(0.4, 3), th(0.1, 1.2), ga(0.1, 1.2);
  const ModelName models[] = {ModelName::McG, ModelName::McG, ModelName::McG, ModelName::BG,
                              ModelName::KumG, ModelName::McE};
  std::vector<Case> out;
  for (int k = 0; k < 25; ++k) {
    const McGParams<double> p{shape(rng), shape(rng), shape(rng), th(rng), ga(rng)};
    const auto ys = sample(p, 12, 100 + k);
    const ModelSpec& m = model_spec(models[k % 6]);
    FullVector full;
    full << p.a, p.b, p.c, p.theta, p.gamma;
    out.push_back({m.name, m.restrict(full), Dataset{ys, "random"}});
  }
  return out;
}

}  // namespace

TEST_CASE("single observation values") {
  const Dataset one{{std::log(2.0)}, "one"};
  const Eigen::VectorXd ones = vec({1, 1, 1, 1, 1});
  CHECK(log_likelihood(mcg_model(), ones, one) == doctest::Approx(std::log(2 / std::exp(1.0))).epsilon(1e-13));
  const Eigen::VectorXd U = score(mcg_model(), ones, one);
  CHECK(U(0) == doctest::Approx(0.5413249).epsilon(1e-7));
  const double h = 1e-6;
  const double fd = (log_likelihood(mcg_model(), vec({1 + h, 1, 1, 1, 1}), one) -
                     log_likelihood(mcg_model(), vec({1 - h, 1, 1, 1, 1}), one)) / (2 * h);
  CHECK(std::abs(U(0) - fd) <= 1e-8);
}

TEST_CASE("observed information at a = b = c = 1: J_aa = n") {
  // With J = -d2l, the raw entry d2l/da2 = n [psi'(2) - psi'(1)] = -n
  // becomes +n.
  for (const Dataset& d : {Dataset{{0.3, 1.1, 2.0}, "three"}, data_file("glass_fibers.csv")}) {
    const Eigen::MatrixXd J = observed_info(mcg_model(), vec({1, 1, 1, 0.7, 0.4}), d);
    CHECK(J(0, 0) == doctest::Approx(double(d.size())).epsilon(1e-12));
  }
}

TEST_CASE("log-likelihood equals the sum of log densities") {
  for (const auto& c : random_cases()) {
    const AnyLaw law = law_from_full(model_spec(c.model), model_spec(c.model).embed(c.free));
    double sum = 0;
    for (double y : c.data.values) sum += any_log_pdf(law, y);
    CHECK(std::abs(log_likelihood(model_spec(c.model), c.free, c.data) - sum) <= 1e-8 * c.data.size());
  }
}

TEST_CASE("score against central finite differences") {
  for (const auto& c : random_cases()) {
    const ModelSpec& m = model_spec(c.model);
    const Eigen::VectorXd U = score(m, c.free, c.data);
    for (int i = 0; i < m.free_count(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(c.free(i)));
      Eigen::VectorXd up = c.free, dn = c.free;
      up(i) += h;
      dn(i) -= h;
      const double fd = (log_likelihood(m, up, c.data) - log_likelihood(m, dn, c.data)) / (2 * h);
      CAPTURE(model_key(c.model));
      CAPTURE(i);
      CHECK(std::abs(U(i) - fd) <= 1e-5 * std::max(std::abs(fd), 1.0));
    }
  }
}

TEST_CASE("observed information against finite differences of the score") {
  for (const auto& c : random_cases()) {
    const ModelSpec& m = model_spec(c.model);
    const Eigen::MatrixXd J = observed_info(m, c.free, c.data);
    CHECK((J - J.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
    for (int j = 0; j < m.free_count(); ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(c.free(j)));
      Eigen::VectorXd up = c.free, dn = c.free;
      up(j) += h;
      dn(j) -= h;
      const Eigen::VectorXd col = -(score(m, up, c.data) - score(m, dn, c.data)) / (2 * h);
      for (int i = 0; i < m.free_count(); ++i) {
        CAPTURE(model_key(c.model));
        CAPTURE(i);
        CAPTURE(j);
        CHECK(std::abs(J(i, j) - col(i)) <= 1e-4 * std::max(std::abs(col(i)), 1.0));
      }
    }
  }
}

TEST_CASE("Gompertz recovery from n = 5000 draws") {
  const auto ys = sample(McGParams<double>{1, 1, 1, 1, 1}, 5000, 12345);
  const FitResult f = fit_mle(model_spec(ModelName::G), Dataset{ys, "sim"});
  REQUIRE(f.converged);
  REQUIRE(f.std_errors.has_value());
  CHECK(std::abs(f.estimates.at("theta") - 1) <= 3 * f.std_errors->at("theta"));
  CHECK(std::abs(f.estimates.at("gamma") - 1) <= 3 * f.std_errors->at("gamma"));
  CHECK(f.grad_norm <= 1e-5);
}

TEST_CASE("fit invariants on the bundled data") {
  for (const char* file : {"aarset_devices.csv", "glass_fibers.csv"}) {
    const Dataset d = data_file(file);
    const FitResult full = fit_mle(mcg_model(), d);
    CAPTURE(file);
    CHECK((full.info_matrix - full.info_matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
    for (ModelName sub : {ModelName::BG, ModelName::KumG, ModelName::GG, ModelName::G}) {
      const FitResult f = fit_mle(model_spec(sub), d);
      CAPTURE(model_key(sub));
      CHECK(full.neg_loglik <= f.neg_loglik + 1e-3);
      // Incumbent never worsens.
      REQUIRE(f.trace.size() >= 2);
      for (std::size_t i = 1; i < f.trace.size(); ++i) CHECK(f.trace[i] <= f.trace[i - 1]);
      if (f.converged) {
        CHECK(f.grad_norm <= 1e-4);
        CHECK(f.std_errors.has_value());
      }
    }
    REQUIRE(full.trace.size() >= 2);
    for (std::size_t i = 1; i < full.trace.size(); ++i) CHECK(full.trace[i] <= full.trace[i - 1]);
  }
}

TEST_CASE("deterministic multistart") {
  const Dataset d = data_file("glass_fibers.csv");
  const FitResult a = fit_mle(model_spec(ModelName::BG), d);
  const FitResult b = fit_mle(model_spec(ModelName::BG), d);
  CHECK(a.neg_loglik == b.neg_loglik);
  CHECK(a.free == b.free);
  CHECK(a.best_start == b.best_start);
  CHECK(a.starts.size() == 8);
}

TEST_CASE("asymptotic confidence intervals") {
  const auto ys = sample(McGParams<double>{2, 1, 1, 0.5, 0.8}, 300, 4);
  const FitResult f = fit_mle(model_spec(ModelName::GG), Dataset{ys, "sim"});
  REQUIRE(f.converged);
  REQUIRE(f.std_errors.has_value());
  for (const auto& iv : asymptotic_ci(f, 0.0)) {
    CHECK(iv.lower == iv.estimate);
    CHECK(iv.upper == iv.estimate);
  }
  for (const auto& iv : asymptotic_ci(f, 0.95)) {
    const double se = f.std_errors->at(iv.param);
    CHECK(iv.upper - iv.estimate == doctest::Approx(1.959964 * se).epsilon(1e-6));
    CHECK(iv.estimate - iv.lower == doctest::Approx(1.959964 * se).epsilon(1e-6));
  }
  FitResult bad = f;
  bad.std_errors.reset();
  CHECK_THROWS_AS(asymptotic_ci(bad, 0.95), DomainError);
  bad = f;
  bad.converged = false;
  CHECK_THROWS_AS(asymptotic_ci(bad, 0.95), DomainError);
  CHECK_THROWS_AS(asymptotic_ci(f, 1.0), DomainError);
}

TEST_CASE("95% interval coverage over 500 simulated GG datasets") {
  const McGParams<double> truth{2, 1, 1, 0.5, 0.8};
  const std::map<std::string, double> want{{"a", 2}, {"theta", 0.5}, {"gamma", 0.8}};
  std::map<std::string, int> covered;
  int reps = 0;
  for (int r = 0; r < 500; ++r) {
    const auto ys = sample(truth, 200, 9000 + r);
    const FitResult f = fit_mle(model_spec(ModelName::GG), Dataset{ys, "sim"});
    ++reps;
    if (!f.converged || !f.std_errors) continue;  // counted as not covering
    for (const auto& iv : asymptotic_ci(f, 0.95)) {
      if (iv.lower <= want.at(iv.param) && want.at(iv.param) <= iv.upper) ++covered[iv.param];
    }
  }
  for (const auto& [k, v] : want) {
    const double rate = double(covered[k]) / reps;
    MESSAGE(k << " coverage " << rate);
    CHECK(rate >= 0.93);
    CHECK(rate <= 0.97);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_mle(mcg_model(), Dataset{{}, "empty"}), DomainError);
  CHECK_THROWS_AS(fit_mle(mcg_model(), Dataset{{1.0, -2.0}, "neg"}), DomainError);
  OptimizerConfig cfg;
  cfg.n_starts = 0;
  CHECK_THROWS_AS(fit_mle(mcg_model(), Dataset{{1.0, 2.0}, "ok"}, cfg), DomainError);
  CHECK_THROWS_AS(score(mcg_model(), vec({1, 1, 1}), Dataset{{1.0}, "x"}), DomainError);
}
