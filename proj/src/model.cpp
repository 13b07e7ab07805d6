#include "gemcmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gemcmc {

namespace {

// Canonical (lexicographic) observation order. Summation order is fixed by
// it, which makes the log-likelihood exactly invariant under reordering of
// the constructor inputs.
std::vector<Eigen::Index> canonical_row_order(const Matrix& rows) {
  std::vector<Eigen::Index> order(rows.rows());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (rows(a, j) != rows(b, j)) return rows(a, j) < rows(b, j);
    }
    return a < b;
  });
  return order;
}

Matrix permute_rows(const Matrix& rows, const std::vector<Eigen::Index>& order) {
  Matrix out(rows.rows(), rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out.row(i) = rows.row(order[i]);
  return out;
}

}  // namespace

TargetModel::TargetModel(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("TargetModel: dimension must be >= 1");
}

double TargetModel::log_lik(const Vector& theta) const {
  if (theta.size() != dim_) {
    throw std::invalid_argument(
        "TargetModel::log_lik: expected dimension " + std::to_string(dim_) +
        ", got " + std::to_string(theta.size()));
  }
  evals_.fetch_add(1, std::memory_order_relaxed);
  const double value = eval_log_lik(theta);
  if (std::isnan(value) || value == std::numeric_limits<double>::infinity()) {
    throw std::logic_error("TargetModel: log-likelihood evaluated to " +
                           std::to_string(value));
  }
  return value;
}

GaussianMeanModel::GaussianMeanModel(Matrix observations, double noise_sd)
    : TargetModel(static_cast<int>(observations.cols())),
      observations_(std::move(observations)),
      noise_sd_(noise_sd) {
  if (observations_.rows() < 1) {
    throw std::invalid_argument("GaussianMeanModel: need at least 1 observation");
  }
  if (!observations_.allFinite()) {
    throw std::invalid_argument("GaussianMeanModel: non-finite observation");
  }
  if (!(noise_sd_ > 0.0) || !std::isfinite(noise_sd_)) {
    throw std::invalid_argument("GaussianMeanModel: noise_sd must be positive");
  }
  observations_ = permute_rows(observations_, canonical_row_order(observations_));
  n_ = observations_.rows();
  sum_ = observations_.colwise().sum().transpose();
  sum_sq_ = observations_.squaredNorm();
  const double nd = static_cast<double>(n_) * dim();
  log_norm_ = -0.5 * nd * (kLog2Pi + 2.0 * std::log(noise_sd_));
}

double GaussianMeanModel::eval_log_lik(const Vector& theta) const {
  // sum_i |X_i - theta|^2 via the sufficient statistics
  const double quad = sum_sq_ - 2.0 * theta.dot(sum_) +
                      static_cast<double>(n_) * theta.squaredNorm();
  return -quad / (2.0 * noise_sd_ * noise_sd_) + log_norm_;
}

std::optional<double> GaussianMeanModel::sup_log_lik() const {
  return eval_log_lik(observation_mean());
}

LogisticModel::LogisticModel(Matrix design, std::vector<int> response)
    : TargetModel(static_cast<int>(design.cols())),
      design_(std::move(design)),
      response_(std::move(response)) {
  if (design_.rows() < 1) {
    throw std::invalid_argument("LogisticModel: need at least 1 row");
  }
  if (!design_.allFinite()) {
    throw std::invalid_argument("LogisticModel: non-finite design entry");
  }
  if (static_cast<std::int64_t>(response_.size()) != design_.rows()) {
    throw std::invalid_argument(
        "LogisticModel: design rows and response length differ");
  }
  for (int y : response_) {
    if (y != 0 && y != 1) {
      throw std::invalid_argument("LogisticModel: responses must be 0 or 1");
    }
  }
  // sort on (response, row) so ties between identical covariate rows with
  // different responses still order deterministically
  Matrix keyed(design_.rows(), design_.cols() + 1);
  for (Eigen::Index i = 0; i < design_.rows(); ++i) {
    keyed(i, 0) = response_[i];
    keyed.row(i).tail(design_.cols()) = design_.row(i);
  }
  const auto order = canonical_row_order(keyed);
  design_ = permute_rows(design_, order);
  std::vector<int> sorted_response(response_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_response[i] = response_[order[i]];
  }
  response_ = std::move(sorted_response);
}

double LogisticModel::eval_log_lik(const Vector& beta) const {
  const Vector z = design_ * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    ll += (response_[static_cast<std::size_t>(i)] ? z[i] : 0.0) - log1p_exp(z[i]);
  }
  return ll;
}

}  // namespace gemcmc
