#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include "gemcmc/types.hpp"

namespace gemcmc {

/// Deterministic log-likelihood evaluator theta -> log L(theta | X).
/// Implementations never return +inf or NaN; -inf encodes zero likelihood.
/// Instances are immutable after construction apart from the atomic
/// evaluation counter and may be shared across threads.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  TargetModel(const TargetModel& other) : dim_(other.dim_), evals_(0) {}
  TargetModel& operator=(const TargetModel& other) {
    dim_ = other.dim_;
    evals_.store(0, std::memory_order_relaxed);
    return *this;
  }

  int dim() const { return dim_; }

  /// Validates the dimension, counts the evaluation, and dispatches.
  double log_lik(const Vector& theta) const;

  /// Known supremum of log L over R^d, when available.
  virtual std::optional<double> sup_log_lik() const { return std::nullopt; }

  /// Whether the model declares integral of L(theta) d theta to be finite
  /// (precondition of the adaptive sampler).
  virtual bool likelihood_integrable() const { return false; }

  std::uint64_t eval_count() const {
    return evals_.load(std::memory_order_relaxed);
  }
  void reset_eval_count() const { evals_.store(0, std::memory_order_relaxed); }

 protected:
  explicit TargetModel(int dim);
  virtual double eval_log_lik(const Vector& theta) const = 0;

 private:
  int dim_;
  mutable std::atomic<std::uint64_t> evals_{0};
};

/// Gaussian mean model: X_1..X_n iid N(theta, tau^2 I_d). The log-likelihood
/// includes the full normalizing constant -nd/2 log(2 pi tau^2), so the
/// declared supremum is the supremum of the actual likelihood, not of an
/// unnormalized kernel. Evaluation runs on precomputed sufficient statistics,
/// O(d) per call.
class GaussianMeanModel : public TargetModel {
 public:
  /// observations: n x d, one observation per row. noise_sd: tau > 0.
  /// Observations are stored in a canonical sorted order so the value is
  /// exactly invariant under reordering of the inputs.
  GaussianMeanModel(Matrix observations, double noise_sd);

  const Matrix& observations() const { return observations_; }
  double noise_sd() const { return noise_sd_; }
  Vector observation_mean() const { return sum_ / static_cast<double>(n_); }

  std::optional<double> sup_log_lik() const override;
  bool likelihood_integrable() const override { return true; }

 protected:
  double eval_log_lik(const Vector& theta) const override;

 private:
  Matrix observations_;  // n x d
  double noise_sd_;
  std::int64_t n_;
  Vector sum_;      // sum of observations
  double sum_sq_;   // sum of squared norms
  double log_norm_;
};

/// Bernoulli-logit regression model: y_i | x_i ~ Bernoulli(sigmoid(x_i' b)).
/// Computed with the overflow-safe log(1 + exp(z)) so the value is finite for
/// every finite beta.
class LogisticModel : public TargetModel {
 public:
  /// design: n x d rows x_i; response: y_i in {0, 1}. Rows are stored in a
  /// canonical sorted order (jointly with their responses) so the value is
  /// exactly invariant under reordering of the inputs.
  LogisticModel(Matrix design, std::vector<int> response);

  const Matrix& design() const { return design_; }
  const std::vector<int>& response() const { return response_; }

  std::optional<double> sup_log_lik() const override { return sup_log_lik_; }
  bool likelihood_integrable() const override { return integrable_; }

  /// Supplies an externally computed supremum (e.g. the value at the MLE);
  /// the logistic likelihood has no closed-form supremum.
  void set_sup_log_lik(double value) { sup_log_lik_ = value; }
  /// Declares integral of L d beta finite (holds when the data are not
  /// linearly separable). Callers of the adaptive sampler must set this.
  void declare_likelihood_integrable(bool value) { integrable_ = value; }

 protected:
  double eval_log_lik(const Vector& beta) const override;

 private:
  Matrix design_;  // n x d
  std::vector<int> response_;
  std::optional<double> sup_log_lik_;
  bool integrable_ = false;
};

/// log(1 + exp(z)) without overflow.
inline double log1p_exp(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace gemcmc
