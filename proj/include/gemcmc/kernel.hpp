#pragma once

#include <cstdint>

#include "gemcmc/rng.hpp"
#include "gemcmc/types.hpp"

namespace gemcmc {

enum class KernelFamily { kGaussian };

/// Kernel K on R^d with bandwidth h. Only the Gaussian family ships; the
/// family tag keeps the surface extensible.
struct KernelSpec {
  KernelSpec(double bandwidth, int dim,
             KernelFamily family = KernelFamily::kGaussian);

  KernelFamily family;
  double bandwidth;
  int dim;
};

/// Counts individual kernel evaluations performed by the KDE routines; used
/// to verify per-iteration cost claims.
struct KernelEvalCounter {
  std::uint64_t count = 0;
};

/// K(u) = (2 pi)^(-d/2) exp(-|u|^2 / 2).
double kernel_value(const KernelSpec& spec, const Vector& u);
double log_kernel_value(const KernelSpec& spec, const Vector& u);

/// log p_{center,h}(theta) = log[h^-d K((theta - center)/h)].
double log_smoothing_density(const KernelSpec& spec, const Vector& center,
                             const Vector& theta);

/// Kernel density estimate of the prior at theta:
/// (1/(B h^d)) sum_i K((theta - theta_i)/h). Linear-space; underflows for
/// distant theta, use kde_log_density in acceptance ratios.
double kde_density(const Vector& theta, const PriorSampleSet& set,
                   const KernelSpec& spec, KernelEvalCounter* counter = nullptr);

/// log of kde_density via a streaming log-sum-exp; safe for large B and
/// small bandwidths.
double kde_log_density(const Vector& theta, const PriorSampleSet& set,
                       const KernelSpec& spec,
                       KernelEvalCounter* counter = nullptr);

/// One draw from the smoothing distribution p_{center,h}: center + h Z with
/// Z standard d-variate normal.
Vector sample_smoothing(const Vector& center, const KernelSpec& spec,
                        RngStream& rng);

/// Gaussian fitted to a sample set: mean, covariance (denominator B-1), and
/// the derived density/sampling operations used by the Gaussian MCMC
/// baseline.
class GaussianFit {
 public:
  GaussianFit(Vector mean, Matrix covariance);

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }
  int dim() const { return static_cast<int>(mean_.size()); }

  double log_density(const Vector& theta) const;
  Vector sample(RngStream& rng) const;

 private:
  Vector mean_;
  Matrix covariance_;
  Eigen::LLT<Matrix> llt_;
  double log_norm_;
};

/// Sample mean and covariance of the prior set. Throws when B < d + 1 or the
/// covariance is numerically singular.
GaussianFit fit_gaussian(const PriorSampleSet& set);

}  // namespace gemcmc
