#include "dqgp/gp/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp::gp {

namespace {

std::vector<Feature> features_of(InputSpace space, const std::vector<Input>& xs) {
  std::vector<Feature> f;
  f.reserve(xs.size());
  for (const Input& x : xs) f.push_back(make_feature(space, x));
  return f;
}

Eigen::MatrixXd gram_from_features(const KernelConfig& cfg, InputSpace space, const std::vector<Feature>& f,
                                   bool parallel) {
  const auto n = static_cast<Eigen::Index>(f.size());
  Eigen::MatrixXd k(n, n);
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kernel_eval(cfg, space, f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(j)]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

BatchPrediction predict_many(const GPPosterior& post, const std::vector<Input>& xs, bool parallel) {
  const auto m = static_cast<Eigen::Index>(xs.size());
  BatchPrediction out{Eigen::MatrixXd(m, 3), Eigen::VectorXd(m)};
#pragma omp parallel for schedule(static) if (parallel)
  for (Eigen::Index i = 0; i < m; ++i) {
    const Prediction p = post.predict(xs[static_cast<std::size_t>(i)]);
    out.mean.row(i) = p.mean.transpose();
    out.var(i) = p.var(0);
  }
  return out;
}

struct Candidate {
  KernelConfig kernel;
  double noise_var;
};

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Enumerated so that a strict ">" scan realises the tie-break order.
std::vector<Candidate> candidates(const GPDataset& data, const HyperGrid& grid) {
  const auto sf = sorted(grid.sigma_f2), ell = sorted(grid.ell), lam = sorted(grid.lambda);
  const auto noise = grid.noise_var.empty() ? std::vector<double>{data.noise_var()} : sorted(grid.noise_var);
  if (sf.empty() || ell.empty() || (!grid.ard && lam.empty())) {
    throw InvalidInput("hyperparameter grid has an empty axis");
  }
  std::vector<Candidate> out;
  if (grid.ard) {
    for (double lr : ell)
      for (double lt : ell)
        for (double s : sf)
          for (double nv : noise) {
            KernelConfig k;
            k.sigma_f2 = s;
            k.ard = true;
            k.ell = lr;
            k.ell_rot = lr;
            k.ell_trans = lt;
            out.push_back({k, nv});
          }
  } else {
    for (double l : ell)
      for (double s : sf)
        for (double la : lam)
          for (double nv : noise) {
            KernelConfig k;
            k.sigma_f2 = s;
            k.ell = l;
            k.lambda = la;
            out.push_back({k, nv});
          }
  }
  return out;
}

HyperFit fit_grid(const GPDataset& data, const HyperGrid& grid, bool parallel) {
  if (data.size() < 3) {
    throw InvalidInput("hyperparameter fitting needs at least 3 samples");
  }
  const std::vector<Candidate> cands = candidates(data, grid);
  std::vector<double> ll(cands.size(), -std::numeric_limits<double>::infinity());
  const auto nc = static_cast<long>(cands.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long c = 0; c < nc; ++c) {
    const Candidate& cd = cands[static_cast<std::size_t>(c)];
    try {
      const GPDataset d = cd.noise_var == data.noise_var() ? data : data.with_noise_var(cd.noise_var);
      ll[static_cast<std::size_t>(c)] = log_marginal_likelihood(detail::fit(d, cd.kernel, false));
    } catch (const FactorizationFailure&) {
      // Left at -inf.
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < cands.size(); ++c) {
    if (ll[c] > ll[best]) best = c;
  }
  if (!std::isfinite(ll[best])) {
    throw FactorizationFailure("no grid point produced a factorizable Gram matrix");
  }
  return {cands[best].kernel, cands[best].noise_var, ll[best]};
}

}  // namespace

namespace detail {

GPPosterior fit(const GPDataset& data, const KernelConfig& cfg, bool parallel) {
  cfg.validate();
  auto st = std::make_shared<GPPosterior::State>();
  st->data = data;
  st->kernel = cfg;
  st->features = features_of(data.space(), data.inputs());
  const auto n = static_cast<Eigen::Index>(data.size());
  if (n == 0) {
    st->chol.resize(0, 0);
    st->alpha.resize(0, 3);
    st->gram.resize(0, 0);
    GPPosterior out;
    out.state_ = std::move(st);
    return out;
  }

  const Eigen::MatrixXd base = gram_from_features(cfg, data.space(), st->features, parallel) +
                               data.noise_var() * Eigen::MatrixXd::Identity(n, n);
  const std::array<double, 8> jitters{0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};
  for (const double j : jitters) {
    Eigen::MatrixXd k = base;
    if (j > 0.0) k.diagonal().array() += j * cfg.sigma_f2;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd l = llt.matrixL();
    if (!l.allFinite() || (l.diagonal().array() <= 0.0).any()) continue;
    st->alpha = llt.solve(data.target_matrix());
    st->chol = std::move(l);
    st->jitter = j * cfg.sigma_f2;
    st->gram = std::move(k);
    GPPosterior out;
    out.state_ = std::move(st);
    return out;
  }
  std::ostringstream os;
  os << "Gram matrix of " << n << " samples is not positive definite even with jitter 1e-4";
  throw FactorizationFailure(os.str());
}

}  // namespace detail

Eigen::MatrixXd GPPosterior::gram() const { return state_->gram; }

double GPPosterior::factorization_residual() const {
  if (size() == 0) return 0.0;
  return (state_->chol * state_->chol.transpose() - state_->gram).cwiseAbs().maxCoeff();
}

double GPPosterior::log_det() const { return 2.0 * state_->chol.diagonal().array().log().sum(); }

Prediction GPPosterior::predict(const Input& x) const {
  const State& st = *state_;
  const Feature fx = make_feature(st.data.space(), x);
  const double prior = kernel_eval(st.kernel, st.data.space(), fx, fx);
  Prediction p;
  const auto n = static_cast<Eigen::Index>(st.features.size());
  if (n == 0) {
    p.var.setConstant(prior);
    return p;
  }
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel_eval(st.kernel, st.data.space(), st.features[static_cast<std::size_t>(i)], fx);
  p.mean = st.alpha.transpose() * k;
  const Eigen::VectorXd v = st.chol.triangularView<Eigen::Lower>().solve(k);
  p.var.setConstant(std::max(0.0, prior - v.squaredNorm()));
  return p;
}

GPPosterior fit_posterior(const GPDataset& data, const KernelConfig& cfg) { return detail::fit(data, cfg, true); }

BatchPrediction predict_batch(const GPPosterior& post, const std::vector<Input>& xs) {
  return predict_many(post, xs, true);
}

Eigen::MatrixXd gram_matrix(const KernelConfig& cfg, InputSpace space, const std::vector<Input>& xs) {
  return gram_from_features(cfg, space, features_of(space, xs), true);
}

double log_marginal_likelihood(const GPPosterior& post) {
  const auto n = static_cast<double>(post.size());
  const Eigen::MatrixXd y = post.data().target_matrix();
  const double fit = (y.array() * post.alpha().array()).sum();
  return -0.5 * fit - 1.5 * post.log_det() - 1.5 * n * std::log(2.0 * std::numbers::pi);
}

HyperFit fit_hyperparameters(const GPDataset& data, const HyperGrid& grid) { return fit_grid(data, grid, true); }

Vec3 information_gain(const GPPosterior& post) {
  const auto n = static_cast<Eigen::Index>(post.size());
  if (n == 0) return Vec3::Zero();
  const double s2 = post.data().noise_var();
  if (!(s2 > 0.0)) return Vec3::Constant(std::numeric_limits<double>::infinity());
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) +
                            gram_matrix(post.kernel(), post.data().space(), post.data().inputs()) / s2;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw FactorizationFailure("I + K/σ² is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  return Vec3::Constant(l.diagonal().array().log().sum());
}

double beta_bound(double xi, double Gamma, std::size_t N, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    std::ostringstream os;
    os << "confidence " << gamma << " is outside (0, 1)";
    throw InvalidConfidence(os.str());
  }
  const double l = std::log((static_cast<double>(N) + 1.0) / (1.0 - std::cbrt(gamma)));
  return std::sqrt(2.0 * xi * xi + 300.0 * Gamma * l * l * l);
}

ErrorBoundModel make_error_bound(const GPPosterior& post, const Vec3& xi, double gamma) {
  ErrorBoundModel b;
  b.rkhs_bound = xi;
  b.info_gain = information_gain(post);
  b.gamma = gamma;
  for (int i = 0; i < 3; ++i) b.beta(i) = beta_bound(xi(i), b.info_gain(i), post.size(), gamma);
  return b;
}

double rho_bound(const GPPosterior& post, const ErrorBoundModel& bound, const Input& x) {
  const Prediction p = post.predict(x);
  return std::sqrt((bound.beta.array().square() * p.var.array()).sum());
}

Eigen::VectorXd rho_bound_batch(const GPPosterior& post, const ErrorBoundModel& bound,
                                const std::vector<Input>& xs) {
  const BatchPrediction bp = predict_batch(post, xs);
  return (bp.var * bound.beta.squaredNorm()).cwiseSqrt();
}

namespace serial {

Eigen::MatrixXd gram_matrix(const KernelConfig& cfg, InputSpace space, const std::vector<Input>& xs) {
  return gram_from_features(cfg, space, features_of(space, xs), false);
}

BatchPrediction predict_batch(const GPPosterior& post, const std::vector<Input>& xs) {
  return predict_many(post, xs, false);
}

HyperFit fit_hyperparameters(const GPDataset& data, const HyperGrid& grid) { return fit_grid(data, grid, false); }

}  // namespace serial

}  // namespace dqgp::gp
