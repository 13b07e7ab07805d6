// Test-side oracles, independent of the library's implementation paths:
// quadrature, distribution tests, and brute-force reference computations the
// assertions are checked against.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gemcmc/model.hpp"
#include "gemcmc/types.hpp"

namespace oracle {

using gemcmc::Matrix;
using gemcmc::Vector;

/// Composite trapezoid rule on intervals+1 equally spaced nodes.
double trapezoid(const std::function<double(double)>& f, double lo, double hi,
                 int intervals);

/// Normalized density and CDF tabulated from an unnormalized log-density on a
/// uniform grid; cdf() interpolates linearly.
class Density1D {
 public:
  Density1D(const std::function<double(double)>& log_f, double lo, double hi,
            int points);

  double cdf(double x) const;

 private:
  double lo_, hi_, step_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
};

/// Normalized density on a 2-d tensor grid with marginal CDFs per axis.
class Density2D {
 public:
  Density2D(const std::function<double(double, double)>& log_f, double lo_x,
            double hi_x, double lo_y, double hi_y, int points);

  double marginal_cdf_x(double x) const;
  double marginal_cdf_y(double y) const;

 private:
  double lo_x_, hi_x_, lo_y_, hi_y_, step_x_, step_y_;
  std::vector<double> cum_x_, cum_y_;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf);

/// Regularized lower incomplete gamma P(a, x).
double reg_gamma_p(double a, double x);
double chi_square_cdf(double x, int df);
double chi_square_quantile(double p, int df);

struct BatchMeans {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Batch-means standard error of the series mean; the chain-aware sigma used
/// for occupancy-frequency bands.
BatchMeans batch_means(std::span<const double> series, int batches);

/// Exhaustive O(B^2) k-nearest-neighbor scan, ties by index; written against
/// plain arrays, independent of the library's heap/tree code.
std::vector<int> brute_knn_oracle(const Matrix& points_by_col, int i, int k);

/// Minimum-cost assignment by full permutation enumeration, n <= 9.
double brute_min_assignment(const Matrix& cost);

/// Standard normal CDF.
double normal_cdf(double x);

/// Test model wrapping an arbitrary log-likelihood function.
class LambdaModel : public gemcmc::TargetModel {
 public:
  LambdaModel(int dim, std::function<double(const Vector&)> fn,
              std::optional<double> sup = std::nullopt, bool integrable = false)
      : TargetModel(dim), fn_(std::move(fn)), sup_(sup),
        integrable_(integrable) {}

  std::optional<double> sup_log_lik() const override { return sup_; }
  bool likelihood_integrable() const override { return integrable_; }

 protected:
  double eval_log_lik(const Vector& theta) const override { return fn_(theta); }

 private:
  std::function<double(const Vector&)> fn_;
  std::optional<double> sup_;
  bool integrable_;
};

}  // namespace oracle
