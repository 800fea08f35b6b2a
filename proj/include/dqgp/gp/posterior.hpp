#pragma once

#include <memory>
#include <vector>

#include <Eigen/Cholesky>

#include "dqgp/gp/dataset.hpp"

namespace dqgp::gp {

struct Prediction {
  Vec3 mean = Vec3::Zero();
  Vec3 var = Vec3::Zero();
};

class GPPosterior;
namespace detail {
GPPosterior fit(const GPDataset& data, const KernelConfig& cfg, bool parallel);
}

/// Immutable posterior. Copies share the factorization.
class GPPosterior {
 public:
  GPPosterior() = default;

  const GPDataset& data() const { return state_->data; }
  const KernelConfig& kernel() const { return state_->kernel; }
  std::size_t size() const { return state_ ? state_->data.size() : 0; }
  /// Diagonal jitter beyond σ² needed to factorize K (0 if none).
  double jitter() const { return state_->jitter; }
  const Eigen::MatrixXd& chol() const { return state_->chol; }
  const Eigen::MatrixXd& alpha() const { return state_->alpha; }
  /// K + jitter·I as factorized.
  Eigen::MatrixXd gram() const;
  /// max |LLᵀ - (K + jitter·I)|.
  double factorization_residual() const;
  /// log det(K + jitter·I) from the factor.
  double log_det() const;

  Prediction predict(const Input& x) const;

 private:
  struct State {
    GPDataset data;
    KernelConfig kernel;
    std::vector<Feature> features;
    Eigen::MatrixXd chol;   // lower triangular
    Eigen::MatrixXd alpha;  // N x 3
    double jitter = 0.0;
    Eigen::MatrixXd gram;   // noisy Gram with jitter
  };
  std::shared_ptr<const State> state_;

  friend GPPosterior detail::fit(const GPDataset& data, const KernelConfig& cfg, bool parallel);
};

/// K_{jj′} = k(x_j, x_j′) + δ_{jj′}σ², factorized once, α_i = K⁻¹Y_{:,i}.
/// Factorization failures are retried with diagonal jitter 1e-10·σ_f²,
/// growing by decades to 1e-4·σ_f², before throwing FactorizationFailure.
/// An empty dataset yields the prior.
GPPosterior fit_posterior(const GPDataset& data, const KernelConfig& cfg);

/// Posterior means and variances for many query points. Rows of `mean`
/// and `var` follow the order of `xs`.
struct BatchPrediction {
  Eigen::MatrixXd mean;  // M x 3
  Eigen::VectorXd var;   // M (shared by the three outputs)
};
BatchPrediction predict_batch(const GPPosterior& post, const std::vector<Input>& xs);

/// Noise-free Gram matrix K̃ on a set of inputs.
Eigen::MatrixXd gram_matrix(const KernelConfig& cfg, InputSpace space, const std::vector<Input>& xs);

/// -½ Σ_i (Y_iᵀα_i + log det K) - (3N/2) log 2π.
double log_marginal_likelihood(const GPPosterior& post);

/// Candidate values for grid search. Empty `noise_var` keeps the dataset's
/// known noise. With `ard` the `ell` list is searched for both ℓ_rot and
/// ℓ_trans and λ is fixed at 1.
struct HyperGrid {
  std::vector<double> sigma_f2{0.01, 0.03, 0.1, 0.3, 1.0};
  std::vector<double> ell{0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5};
  std::vector<double> lambda{1.0};
  std::vector<double> noise_var;
  bool ard = false;
};

struct HyperFit {
  KernelConfig kernel;
  double noise_var = 0.0;
  double log_ml = 0.0;
};

/// The grid point of largest log marginal likelihood. Ties go to the
/// smallest ℓ, then the smallest σ_f² (then λ, then noise). Requires N ≥ 3.
HyperFit fit_hyperparameters(const GPDataset& data, const HyperGrid& grid);

/// ½ log det(I + σ⁻²K̃) over the training inputs, per output.
Vec3 information_gain(const GPPosterior& post);

/// √(2ξ² + 300 Γ ln³((N+1)/(1 - γ^{1/3}))). Throws InvalidConfidence
/// unless 0 < γ < 1.
double beta_bound(double xi, double Gamma, std::size_t N, double gamma);

struct ErrorBoundModel {
  Vec3 rkhs_bound = Vec3::Ones();
  Vec3 info_gain = Vec3::Zero();
  Vec3 beta = Vec3::Zero();
  double gamma = 0.9;
};

ErrorBoundModel make_error_bound(const GPPosterior& post, const Vec3& xi, double gamma);

/// ρ‡(x) = √(Σ_i β_i² var_i(x)).
double rho_bound(const GPPosterior& post, const ErrorBoundModel& bound, const Input& x);
Eigen::VectorXd rho_bound_batch(const GPPosterior& post, const ErrorBoundModel& bound,
                                const std::vector<Input>& xs);

/// Single-threaded versions of the parallel kernels, kept as the reference
/// the OpenMP paths are tested against.
namespace serial {
Eigen::MatrixXd gram_matrix(const KernelConfig& cfg, InputSpace space, const std::vector<Input>& xs);
BatchPrediction predict_batch(const GPPosterior& post, const std::vector<Input>& xs);
HyperFit fit_hyperparameters(const GPDataset& data, const HyperGrid& grid);
}  // namespace serial

}  // namespace dqgp::gp
