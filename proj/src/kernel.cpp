#include "gemcmc/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gemcmc {

namespace {

void check_dim(const KernelSpec& spec, const Vector& v, const char* where) {
  if (v.size() != spec.dim) {
    throw std::invalid_argument(std::string(where) + ": expected dimension " +
                                std::to_string(spec.dim) + ", got " +
                                std::to_string(v.size()));
  }
}

}  // namespace

KernelSpec::KernelSpec(double bandwidth, int dim, KernelFamily family)
    : family(family), bandwidth(bandwidth), dim(dim) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("KernelSpec: bandwidth must be finite and > 0");
  }
  if (dim < 1) throw std::invalid_argument("KernelSpec: dim must be >= 1");
}

double log_kernel_value(const KernelSpec& spec, const Vector& u) {
  check_dim(spec, u, "log_kernel_value");
  return -0.5 * (spec.dim * kLog2Pi + u.squaredNorm());
}

double kernel_value(const KernelSpec& spec, const Vector& u) {
  return std::exp(log_kernel_value(spec, u));
}

double log_smoothing_density(const KernelSpec& spec, const Vector& center,
                             const Vector& theta) {
  check_dim(spec, center, "log_smoothing_density");
  check_dim(spec, theta, "log_smoothing_density");
  const double h = spec.bandwidth;
  return -0.5 * (spec.dim * kLog2Pi + (theta - center).squaredNorm() / (h * h)) -
         spec.dim * std::log(h);
}

double kde_density(const Vector& theta, const PriorSampleSet& set,
                   const KernelSpec& spec, KernelEvalCounter* counter) {
  check_dim(spec, theta, "kde_density");
  if (set.dim() != spec.dim) {
    throw std::invalid_argument("kde_density: sample set dimension mismatch");
  }
  const double h = spec.bandwidth;
  const int b = set.size();
  const double norm = std::exp(-0.5 * spec.dim * kLog2Pi);
  double sum = 0.0;
  for (int i = 0; i < b; ++i) {
    const double q = (theta - set.point(i)).squaredNorm() / (h * h);
    sum += norm * std::exp(-0.5 * q);
  }
  if (counter) counter->count += static_cast<std::uint64_t>(b);
  return sum / (static_cast<double>(b) * std::pow(h, spec.dim));
}

double kde_log_density(const Vector& theta, const PriorSampleSet& set,
                       const KernelSpec& spec, KernelEvalCounter* counter) {
  check_dim(spec, theta, "kde_log_density");
  if (set.dim() != spec.dim) {
    throw std::invalid_argument("kde_log_density: sample set dimension mismatch");
  }
  const double h = spec.bandwidth;
  const double inv2h2 = 1.0 / (2.0 * h * h);
  const int b = set.size();
  // streaming log-sum-exp over the exponents, no scratch allocation
  double running_max = kNegInf;
  double scaled_sum = 0.0;
  for (int i = 0; i < b; ++i) {
    const double e = -(theta - set.point(i)).squaredNorm() * inv2h2;
    if (e <= running_max) {
      scaled_sum += std::exp(e - running_max);
    } else {
      scaled_sum = scaled_sum * std::exp(running_max - e) + 1.0;
      running_max = e;
    }
  }
  if (counter) counter->count += static_cast<std::uint64_t>(b);
  return running_max + std::log(scaled_sum) - 0.5 * spec.dim * kLog2Pi -
         spec.dim * std::log(h) - std::log(static_cast<double>(b));
}

Vector sample_smoothing(const Vector& center, const KernelSpec& spec,
                        RngStream& rng) {
  check_dim(spec, center, "sample_smoothing");
  return center + spec.bandwidth * rng.normal_vector(spec.dim);
}

GaussianFit::GaussianFit(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  const int d = static_cast<int>(mean_.size());
  if (covariance_.rows() != d || covariance_.cols() != d) {
    throw std::invalid_argument("GaussianFit: covariance shape mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance_);
  const double min_ev = eig.eigenvalues().minCoeff();
  const double max_ev = eig.eigenvalues().maxCoeff();
  if (!(min_ev > 0.0) || min_ev <= 1e-12 * max_ev) {
    throw std::runtime_error(
        "GaussianFit: singular covariance (eigenvalue range [" +
        std::to_string(min_ev) + ", " + std::to_string(max_ev) + "])");
  }
  llt_.compute(covariance_);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("GaussianFit: Cholesky factorization failed");
  }
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(llt_.matrixL()(i, i));
  log_norm_ = -0.5 * (d * kLog2Pi + log_det);
}

double GaussianFit::log_density(const Vector& theta) const {
  if (theta.size() != mean_.size()) {
    throw std::invalid_argument("GaussianFit::log_density: dimension mismatch");
  }
  const Vector y = llt_.matrixL().solve(theta - mean_);
  return log_norm_ - 0.5 * y.squaredNorm();
}

Vector GaussianFit::sample(RngStream& rng) const {
  return mean_ + llt_.matrixL() * rng.normal_vector(dim());
}

GaussianFit fit_gaussian(const PriorSampleSet& set) {
  const int b = set.size();
  const int d = set.dim();
  if (b < d + 1) {
    throw std::invalid_argument(
        "fit_gaussian: need at least d+1 = " + std::to_string(d + 1) +
        " samples for a nonsingular covariance, got " + std::to_string(b));
  }
  const Vector mean = set.points().rowwise().mean();
  const Matrix centered = set.points().colwise() - mean;
  const Matrix cov = centered * centered.transpose() / static_cast<double>(b - 1);
  return GaussianFit(mean, cov);
}

}  // namespace gemcmc
