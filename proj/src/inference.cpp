#include "mcg/inference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mcg/errors.hpp"
#include "mcg/specfun.hpp"

namespace mcg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// N(x) = x e^x - expm1(x) = sum_{n>=2} (n-1) x^n / n!
double n_term(double x) {
  if (std::abs(x) < 0.05) {
    double p = x;  // x^n / n!
    double s = 0;
    for (int n = 2; n <= 14; ++n) {
      p *= x / n;
      s += (n - 1) * p;
    }
    return s;
  }
  return x * std::exp(x) - std::expm1(x);
}

// M(x) = x^2 e^x - 2 N(x) = sum_{n>=3} (n-1)(n-2) x^n / n!
double m_term(double x) {
  if (std::abs(x) < 0.05) {
    double p = x * x / 2;
    double s = 0;
    for (int n = 3; n <= 15; ++n) {
      p *= x / n;
      s += (n - 1.0) * (n - 2.0) * p;
    }
    return s;
  }
  return x * x * std::exp(x) - 2 * n_term(x);
}

}  // namespace

void Dataset::validate() const {
  if (values.empty()) throw DomainError("dataset '" + label + "' is empty");
  for (double v : values) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw DomainError("dataset '" + label + "' holds a non-positive or non-finite value");
    }
  }
}

FullDerivatives full_derivatives(const FullVector& full, bool exponential_base,
                                 const Dataset& data, int order) {
  const double a = full(0), b = full(1), c = full(2), theta = full(3);
  const double gamma = exponential_base ? 0.0 : full(4);
  FullDerivatives d;
  if (!(a > 0 && b > 0 && c > 0 && theta > 0 && (exponential_base || gamma > 0))) {
    d.loglik = -kInf;
    return d;
  }
  const double s = a / c;
  const double n = static_cast<double>(data.size());
  d.loglik = n * (std::log(c) - log_beta(s, b));

  double sum_lnG = 0, sum_lnS = 0, sum_Lc = 0, sum_Lcc = 0;
  double g_theta = 0, g_gamma = 0;
  double h_at = 0, h_ag = 0, h_bt = 0, h_bg = 0, h_ct = 0, h_cg = 0;
  double h_tt = 0, h_tg = 0, h_gg = 0;

  for (double y : data.values) {
    double w, wt, wg = 0, wtg = 0, wgg = 0, log_haz;
    if (exponential_base) {
      w = theta * y;
      wt = y;
      log_haz = std::log(theta);
    } else {
      const double x = gamma * y;
      const double m = std::expm1(x);
      w = theta / gamma * m;
      wt = m / gamma;
      // N / gamma^2 and M / gamma^3 written as powers of y to stay exact
      // for small gamma y.
      const double Nn = std::abs(x) > 0 ? n_term(x) / (x * x) : 0.5;
      const double Mm = std::abs(x) > 0 ? m_term(x) / (x * x * x) : 1.0 / 3;
      wg = theta * y * y * Nn;
      wtg = y * y * Nn;
      wgg = theta * y * y * y * Mm;
      log_haz = std::log(theta) + x;
    }
    if (!std::isfinite(w)) {
      d.loglik = -kInf;
      return d;
    }
    const double t = std::exp(-w);
    const double G = -std::expm1(-w);
    const double lnG = w > std::numbers::ln2 ? std::log1p(-t) : std::log(-std::expm1(-w));
    const double cu = c * lnG;
    const double H = std::exp(cu);
    const double S = -std::expm1(cu);
    const double lnS = S > 0 ? std::log(S) : std::log(c) - w;
    if (!(G > 0)) {
      d.loglik = -kInf;
      return d;
    }
    d.loglik += log_haz - w + detail::power_log(a, lnG) + detail::power_log(b, lnS);
    if (order < 1) continue;

    const double r = (S > 0 && t > 0) ? t / S : 1 / c;
    const double rho = t > 0 ? lnG / t : -1.0;
    const double HoG = std::exp((c - 1) * lnG);
    const double A = t / G;
    const double B1 = -c * HoG * r;
    const double Lc = -H * rho * r;
    const double D1 = -1 + (a - 1) * A + (b - 1) * B1;

    sum_lnG += lnG;
    sum_lnS += lnS;
    sum_Lc += Lc;
    g_theta += 1 / theta + D1 * wt;
    if (!exponential_base) g_gamma += y + D1 * wg;
    if (order < 2) continue;

    const double Aw = -A / G;
    const double B1w = B1 * ((c - 1) * A - 1 - B1);
    const double Lcc = -rho * rho * H * r * r;
    const double Lcw = -(c * HoG * rho * r * r + HoG * r);
    const double D2 = (a - 1) * Aw + (b - 1) * B1w;

    sum_Lcc += Lcc;
    h_at += A * wt;
    h_bt += B1 * wt;
    h_ct += (b - 1) * Lcw * wt;
    h_tt += -1 / (theta * theta) + D2 * wt * wt;
    if (!exponential_base) {
      h_ag += A * wg;
      h_bg += B1 * wg;
      h_cg += (b - 1) * Lcw * wg;
      h_tg += D2 * wt * wg + D1 * wtg;
      h_gg += D2 * wg * wg + D1 * wgg;
    }
  }
  if (order < 1) return d;

  // K = -ln B(s, b), s = a / c.
  const double psi_sb = digamma(s + b);
  const double Ks = psi_sb - digamma(s);
  const double Kb = psi_sb - digamma(b);
  d.grad(0) = n * Ks / c + sum_lnG;
  d.grad(1) = n * Kb + sum_lnS;
  d.grad(2) = n / c - n * a * Ks / (c * c) + (b - 1) * sum_Lc;
  d.grad(3) = g_theta;
  d.grad(4) = g_gamma;
  if (order < 2) return d;

  const double tri_sb = trigamma(s + b);
  const double Kss = tri_sb - trigamma(s);
  const double Ksb = tri_sb;
  const double Kbb = tri_sb - trigamma(b);
  FullMatrix& h = d.hess;
  h(0, 0) = n * Kss / (c * c);
  h(0, 1) = n * Ksb / c;
  h(0, 2) = -n * Ks / (c * c) - n * a * Kss / (c * c * c);
  h(0, 3) = h_at;
  h(0, 4) = h_ag;
  h(1, 1) = n * Kbb;
  h(1, 2) = -n * a * Ksb / (c * c) + sum_Lc;
  h(1, 3) = h_bt;
  h(1, 4) = h_bg;
  h(2, 2) = -n / (c * c) + 2 * n * a * Ks / (c * c * c) + n * a * a * Kss / (c * c * c * c) +
            (b - 1) * sum_Lcc;
  h(2, 3) = h_ct;
  h(2, 4) = h_cg;
  h(3, 3) = h_tt;
  h(3, 4) = h_tg;
  h(4, 4) = h_gg;
  h.triangularView<Eigen::StrictlyLower>() = h.transpose().triangularView<Eigen::StrictlyLower>();
  return d;
}

double log_likelihood(const ModelSpec& model, const Eigen::VectorXd& free, const Dataset& data) {
  return full_derivatives(model.embed(free), model.exponential_base, data, 0).loglik;
}

Eigen::VectorXd score(const ModelSpec& model, const Eigen::VectorXd& free, const Dataset& data) {
  const auto d = full_derivatives(model.embed(free), model.exponential_base, data, 1);
  return model.embedding_jacobian().transpose() * d.grad;
}

Eigen::MatrixXd observed_info(const ModelSpec& model, const Eigen::VectorXd& free,
                              const Dataset& data) {
  const auto d = full_derivatives(model.embed(free), model.exponential_base, data, 2);
  const auto J = model.embedding_jacobian();
  Eigen::MatrixXd info = -(J.transpose() * d.hess * J);
  return 0.5 * (info + info.transpose());
}

void OptimizerConfig::validate() const {
  if (max_iter < 1) throw DomainError("OptimizerConfig max_iter must be >= 1");
  if (!(grad_tol > 0) || !(step_tol > 0)) {
    throw DomainError("OptimizerConfig tolerances must be positive");
  }
  if (n_starts < 1) throw DomainError("OptimizerConfig n_starts must be >= 1");
}

FullVector FitResult::full() const { return model_spec(model).embed(free); }

namespace {

// -l as a function of eta = log(free), restricted to a box.
class Objective {
 public:
  Objective(const ModelSpec& model, const Dataset& data, const ParameterBox& box)
      : model_(model), data_(data), J_(model.embedding_jacobian()),
        off_(model.embedding_offset()) {
    const int k = model.free_count();
    lo_.resize(k);
    hi_.resize(k);
    for (int i = 0; i < k; ++i) {
      switch (model.free_params[i]) {
        case Param::theta:
          lo_(i) = std::log(box.theta_lo);
          hi_(i) = std::log(box.theta_hi);
          break;
        case Param::gamma:
          lo_(i) = std::log(box.gamma_lo);
          hi_(i) = std::log(box.gamma_hi);
          break;
        default:
          lo_(i) = std::log(box.shape_lo);
          hi_(i) = std::log(box.shape_hi);
      }
    }
  }

  int dim() const { return static_cast<int>(lo_.size()); }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }

  Eigen::VectorXd clamp(const Eigen::VectorXd& eta) const {
    return eta.cwiseMax(lo_).cwiseMin(hi_);
  }

  double value(const Eigen::VectorXd& eta) const {
    ++evals;
    const double ll = full_derivatives(embed(eta), model_.exponential_base, data_, 0).loglik;
    return std::isfinite(ll) ? -ll : kInf;
  }

  // Value, gradient and (optionally) Hessian in eta.
  double eval(const Eigen::VectorXd& eta, Eigen::VectorXd& g, Eigen::MatrixXd* H) const {
    ++evals;
    const Eigen::VectorXd x = eta.array().exp();
    const auto d =
        full_derivatives(embed(eta), model_.exponential_base, data_, H ? 2 : 1);
    if (!std::isfinite(d.loglik)) {
      g = Eigen::VectorXd::Zero(dim());
      return kInf;
    }
    const Eigen::VectorXd gx = J_.transpose() * d.grad;
    g = -(gx.array() * x.array()).matrix();
    if (H) {
      const Eigen::MatrixXd Hx = J_.transpose() * d.hess * J_;
      *H = -(x.asDiagonal() * Hx * x.asDiagonal());
      H->diagonal() -= (gx.array() * x.array()).matrix();
    }
    return -d.loglik;
  }

  // Gradient with components that push out of the box zeroed.
  Eigen::VectorXd projected(const Eigen::VectorXd& eta, const Eigen::VectorXd& g) const {
    Eigen::VectorXd pg = g;
    for (int i = 0; i < dim(); ++i) {
      if ((eta(i) <= lo_(i) && g(i) > 0) || (eta(i) >= hi_(i) && g(i) < 0)) pg(i) = 0;
    }
    return pg;
  }

  bool on_face(const Eigen::VectorXd& eta) const {
    for (int i = 0; i < dim(); ++i) {
      if (eta(i) <= lo_(i) + 1e-9 || eta(i) >= hi_(i) - 1e-9) return true;
    }
    return false;
  }

  mutable long evals = 0;

 private:
  FullVector embed(const Eigen::VectorXd& eta) const {
    return J_ * eta.array().exp().matrix() + off_;
  }

  const ModelSpec& model_;
  const Dataset& data_;
  Eigen::Matrix<double, kFullDim, Eigen::Dynamic> J_;
  FullVector off_;
  Eigen::VectorXd lo_, hi_;
};

struct LocalState {
  Eigen::VectorXd eta;
  double f;
  int iterations = 0;
  std::vector<double> trace;  // incumbent after each accepted step

  void record() { trace.push_back(f); }
};

// Nelder-Mead with projection onto the box.
void nelder_mead(const Objective& obj, LocalState& st, int max_iter) {
  const int k = obj.dim();
  std::vector<Eigen::VectorXd> pts(k + 1, st.eta);
  std::vector<double> fv(k + 1, st.f);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd p = st.eta;
    const double step = std::log(4.0);  // same scale as the x4 start pattern
    p(i) = (p(i) + step <= obj.hi()(i)) ? p(i) + step : p(i) - step;
    pts[i + 1] = obj.clamp(p);
    fv[i + 1] = obj.value(pts[i + 1]);
  }
  std::vector<int> idx(k + 1);
  for (int it = 0; it < max_iter; ++it) {
    for (int i = 0; i <= k; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return fv[x] < fv[y]; });
    const int best = idx[0], worst = idx[k], second = idx[k - 1];
    double diam = 0;
    for (int i = 1; i <= k; ++i) diam = std::max(diam, (pts[idx[i]] - pts[best]).cwiseAbs().maxCoeff());
    st.iterations++;
    st.trace.push_back(std::min(st.f, fv[best]));
    if (std::isfinite(fv[worst]) && fv[worst] - fv[best] <= 1e-10 * (1 + std::abs(fv[best])) &&
        diam <= 1e-8) {
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i) centroid += pts[idx[i]];
    centroid /= k;
    const Eigen::VectorXd xr = obj.clamp(centroid + (centroid - pts[worst]));
    const double fr = obj.value(xr);
    if (fr < fv[best]) {
      const Eigen::VectorXd xe = obj.clamp(centroid + 2 * (centroid - pts[worst]));
      const double fe = obj.value(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = obj.value(xc);
    if (fc < (outside ? fr : fv[worst])) {
      pts[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (int i = 1; i <= k; ++i) {
      pts[idx[i]] = pts[best] + 0.5 * (pts[idx[i]] - pts[best]);
      fv[idx[i]] = obj.value(pts[idx[i]]);
    }
  }
  const int best = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  if (fv[best] <= st.f) {
    st.eta = pts[best];
    st.f = fv[best];
  }
}

// Backtracking projected line search; true when an Armijo step was taken.
bool line_search(const Objective& obj, LocalState& st, const Eigen::VectorXd& g,
                 const Eigen::VectorXd& dir, double step_tol) {
  const double dmax = dir.cwiseAbs().maxCoeff();
  if (!(dmax > 0)) return false;
  double alpha = std::min(1.0, 2.0 / dmax);
  for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
    const Eigen::VectorXd cand = obj.clamp(st.eta + alpha * dir);
    const Eigen::VectorXd s = cand - st.eta;
    if (s.cwiseAbs().maxCoeff() <= step_tol * 1e-3) return false;
    const double fc = obj.value(cand);
    if (fc <= st.f + 1e-4 * g.dot(s) && fc <= st.f) {
      st.eta = cand;
      st.f = fc;
      return true;
    }
  }
  return false;
}

void bfgs(const Objective& obj, LocalState& st, const OptimizerConfig& cfg) {
  const int k = obj.dim();
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd g;
  st.f = obj.eval(st.eta, g, nullptr);
  for (int it = 0; it < cfg.max_iter; ++it) {
    st.iterations++;
    const Eigen::VectorXd pg = obj.projected(st.eta, g);
    if (pg.cwiseAbs().maxCoeff() <= cfg.grad_tol) break;
    Eigen::VectorXd dir = -(Hinv * g);
    for (int i = 0; i < k; ++i) {
      if ((st.eta(i) <= obj.lo()(i) && dir(i) < 0) || (st.eta(i) >= obj.hi()(i) && dir(i) > 0)) {
        dir(i) = 0;
      }
    }
    if (g.dot(dir) >= 0) {
      Hinv.setIdentity();
      dir = -pg;
    }
    const Eigen::VectorXd prev = st.eta;
    const Eigen::VectorXd gprev = g;
    if (!line_search(obj, st, g, dir, cfg.step_tol)) {
      if (Hinv.isIdentity()) break;
      Hinv.setIdentity();
      continue;
    }
    st.record();
    obj.eval(st.eta, g, nullptr);
    const Eigen::VectorXd s = st.eta - prev;
    const Eigen::VectorXd yv = g - gprev;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (it == 0) Hinv *= sy / yv.squaredNorm();
      const double rho = 1 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
      Hinv = (I - rho * s * yv.transpose()) * Hinv * (I - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
    if (s.cwiseAbs().maxCoeff() <= cfg.step_tol) break;
  }
}

// Newton steps with the analytic Hessian on the free (inactive) set,
// Levenberg-damped when it is not positive definite.
void newton(const Objective& obj, LocalState& st, const OptimizerConfig& cfg) {
  const int k = obj.dim();
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  for (int it = 0; it < 100; ++it) {
    st.f = obj.eval(st.eta, g, &H);
    st.iterations++;
    const Eigen::VectorXd pg = obj.projected(st.eta, g);
    if (pg.cwiseAbs().maxCoeff() <= cfg.grad_tol * 1e-2) break;
    std::vector<int> act;
    for (int i = 0; i < k; ++i) {
      if (pg(i) != 0 || (st.eta(i) > obj.lo()(i) && st.eta(i) < obj.hi()(i))) act.push_back(i);
    }
    const int m = static_cast<int>(act.size());
    if (m == 0) break;
    Eigen::MatrixXd Hs(m, m);
    Eigen::VectorXd gs(m);
    for (int i = 0; i < m; ++i) {
      gs(i) = g(act[i]);
      for (int j = 0; j < m; ++j) Hs(i, j) = H(act[i], act[j]);
    }
    double mu = 0;
    Eigen::VectorXd ds;
    const double scale = std::max(1e-8, Hs.diagonal().cwiseAbs().maxCoeff());
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::LLT<Eigen::MatrixXd> llt(Hs + mu * Eigen::MatrixXd::Identity(m, m));
      if (llt.info() == Eigen::Success) {
        ds = llt.solve(-gs);
        if (ds.allFinite()) break;
      }
      mu = mu == 0 ? 1e-10 * scale : mu * 10;
    }
    if (ds.size() != m || !ds.allFinite()) break;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < m; ++i) dir(act[i]) = ds(i);
    if (!line_search(obj, st, g, dir, cfg.step_tol)) {
      // Near the optimum of a large sample the decrease can fall below the
      // rounding noise of the summed objective; take the full step if it
      // stays within that noise and shrinks the gradient.
      const Eigen::VectorXd cand = obj.clamp(st.eta + dir);
      Eigen::VectorXd gc;
      const double fc = obj.eval(cand, gc, nullptr);
      const double noise = 64 * std::numeric_limits<double>::epsilon() * std::abs(st.f);
      if (!(fc <= st.f + noise) ||
          !(obj.projected(cand, gc).cwiseAbs().maxCoeff() < 0.5 * pg.cwiseAbs().maxCoeff())) {
        break;
      }
      st.eta = cand;
      st.f = std::min(st.f, fc);
    }
    st.record();
  }
  st.f = obj.eval(st.eta, g, nullptr);
}

double scaled_grad_norm(const Objective& obj, const Eigen::VectorXd& eta) {
  Eigen::VectorXd g;
  obj.eval(eta, g, nullptr);
  return g.cwiseAbs().maxCoeff();
}

std::map<std::string, double> name_values(const ModelSpec& model, const Eigen::VectorXd& v) {
  std::map<std::string, double> out;
  for (int i = 0; i < model.free_count(); ++i) {
    out[std::string(param_name(model.free_params[i]))] = v(i);
  }
  return out;
}

}  // namespace

FitResult evaluate_at(const ModelSpec& model, const Dataset& data, const Eigen::VectorXd& free) {
  data.validate();
  FitResult r;
  r.model = model.name;
  r.free_params = model.free_params;
  r.free = free;
  r.estimates = name_values(model, free);
  const auto d = full_derivatives(model.embed(free), model.exponential_base, data, 2);
  r.neg_loglik = -d.loglik;
  const auto J = model.embedding_jacobian();
  const Eigen::VectorXd gx = J.transpose() * d.grad;
  r.grad_norm = (gx.array() * free.array()).abs().maxCoeff();
  Eigen::MatrixXd info = -(J.transpose() * d.hess * J);
  info = 0.5 * (info + info.transpose());
  r.info_matrix = info;
  if (!info.allFinite()) {
    r.condition_number = kInf;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  r.condition_number = lmin > 0 ? lmax / lmin : kInf;
  if (lmin > 0) {
    const Eigen::MatrixXd cov = info.inverse();
    std::map<std::string, double> se;
    bool ok = true;
    for (int i = 0; i < model.free_count(); ++i) {
      if (!(cov(i, i) > 0)) ok = false;
      se[std::string(param_name(model.free_params[i]))] = std::sqrt(cov(i, i));
    }
    if (ok) r.std_errors = se;
  }
  return r;
}

FitResult fit_from(const ModelSpec& model, const Dataset& data, const Eigen::VectorXd& start,
                   const OptimizerConfig& cfg, const ParameterBox& box) {
  cfg.validate();
  data.validate();
  if (start.size() != model.free_count() || !(start.array() > 0).all()) {
    throw DomainError("fit_from: start must hold the model's positive free parameters");
  }
  Objective obj(model, data, box);
  LocalState st{obj.clamp(start.array().log().matrix()), 0.0, 0, {}};
  st.f = obj.value(st.eta);
  if (!std::isfinite(st.f)) {
    throw NumericError("fit_from: log-likelihood is not finite at the start");
  }
  st.record();
  nelder_mead(obj, st, cfg.max_iter);
  bfgs(obj, st, cfg);
  newton(obj, st, cfg);

  FitResult r = evaluate_at(model, data, st.eta.array().exp().matrix());
  r.iterations = st.iterations;
  r.trace = std::move(st.trace);
  r.grad_norm = scaled_grad_norm(obj, st.eta);
  r.on_boundary = obj.on_face(st.eta);
  r.converged = !r.on_boundary && r.grad_norm <= 10 * cfg.grad_tol;
  if (r.on_boundary) {
    r.message = "estimate on a face of the search box";
  } else if (!r.converged) {
    r.message = "scaled gradient above tolerance";
  } else {
    r.message = "converged";
  }
  return r;
}

FitResult fit_base(bool exponential_base, const Dataset& data, const OptimizerConfig& cfg) {
  data.validate();
  const double n = static_cast<double>(data.size());
  if (exponential_base) {
    double sum = 0;
    for (double y : data.values) sum += y;
    Eigen::VectorXd v(1);
    v << n / sum;
    FitResult r = evaluate_at(model_spec(ModelName::E), data, v);
    r.converged = true;
    r.message = "closed form";
    return r;
  }
  // Profile over gamma: theta_hat(gamma) = n gamma / sum expm1(gamma y).
  double sum_y = 0;
  for (double y : data.values) sum_y += y;
  auto profile = [&](double lg) {
    const double g = std::exp(lg);
    double sm = 0;
    for (double y : data.values) sm += std::expm1(g * y);
    const double th = n * g / sm;
    return n * std::log(th) + g * sum_y - n;
  };
  const ParameterBox box;
  const double lo = std::log(box.gamma_lo), hi = std::log(box.gamma_hi);
  const int grid = 120;
  double best_lg = lo, best_v = -kInf;
  for (int i = 0; i <= grid; ++i) {
    const double lg = lo + (hi - lo) * i / grid;
    const double v = profile(lg);
    if (std::isfinite(v) && v > best_v) {
      best_v = v;
      best_lg = lg;
    }
  }
  double a = std::max(lo, best_lg - (hi - lo) / grid);
  double b = std::min(hi, best_lg + (hi - lo) / grid);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
    const double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    if (profile(x1) > profile(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  const double g = std::exp(0.5 * (a + b));
  double sm = 0;
  for (double y : data.values) sm += std::expm1(g * y);
  Eigen::VectorXd start(2);
  start << n * g / sm, g;
  return fit_from(model_spec(ModelName::G), data, start, cfg);
}

FitResult fit_mle(const ModelSpec& model, const Dataset& data, const OptimizerConfig& cfg,
                  const ParameterBox& box) {
  cfg.validate();
  data.validate();
  const FitResult base = fit_base(model.exponential_base, data, cfg);
  FullVector seed;
  seed << 1, 1, 1, base.free(0), model.exponential_base ? 0.0 : base.free(1);
  const Eigen::VectorXd seed_free = model.restrict(seed);

  std::vector<int> shape_idx;
  for (int i = 0; i < model.free_count(); ++i) {
    const Param p = model.free_params[i];
    if (p == Param::a || p == Param::b || p == Param::c) shape_idx.push_back(i);
  }
  std::vector<Eigen::VectorXd> starts{seed_free};
  if (!shape_idx.empty()) {
    const int ns = static_cast<int>(shape_idx.size());
    for (int mask = 0; mask < (1 << ns) && static_cast<int>(starts.size()) < cfg.n_starts;
         ++mask) {
      Eigen::VectorXd s = seed_free;
      for (int j = 0; j < ns; ++j) s(shape_idx[j]) *= (mask >> j & 1) ? 4.0 : 0.25;
      starts.push_back(s);
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-std::log(4.0), std::log(4.0));
    while (static_cast<int>(starts.size()) < cfg.n_starts) {
      Eigen::VectorXd s = seed_free;
      for (int j : shape_idx) s(j) *= std::exp(u(rng));
      starts.push_back(s);
    }
  }

  std::vector<FitResult> fits;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    try {
      fits.push_back(fit_from(model, data, starts[i], cfg, box));
    } catch (const NumericError&) {
      FitResult bad;
      bad.model = model.name;
      bad.neg_loglik = kInf;
      bad.message = "start failed";
      fits.push_back(bad);
    }
  }
  // Best objective wins; ties go to the lowest start index.
  int best = -1;
  for (int i = 0; i < static_cast<int>(fits.size()); ++i) {
    if (!std::isfinite(fits[i].neg_loglik)) continue;
    if (best < 0 || fits[i].neg_loglik < fits[best].neg_loglik - 1e-9) best = i;
  }
  if (best < 0) throw NumericError("fit_mle: every start failed");
  FitResult out = fits[best];
  out.best_start = best;
  for (int i = 0; i < static_cast<int>(fits.size()); ++i) {
    out.starts.push_back({i, fits[i].neg_loglik, fits[i].converged, fits[i].grad_norm});
  }
  return out;
}

std::vector<Interval> asymptotic_ci(const FitResult& fit, double level) {
  if (!(level >= 0 && level < 1)) throw DomainError("asymptotic_ci: level must lie in [0, 1)");
  if (!fit.converged) throw DomainError("asymptotic_ci: fit did not converge");
  if (!fit.std_errors) throw DomainError("asymptotic_ci: standard errors are absent");
  const double z = level == 0 ? 0.0 : normal_quantile((1 + level) / 2);
  std::vector<Interval> out;
  for (Param p : fit.free_params) {
    const std::string name(param_name(p));
    const double est = fit.estimates.at(name);
    const double se = fit.std_errors->at(name);
    out.push_back({name, est, est - z * se, est + z * se});
  }
  return out;
}

}  // namespace mcg
