#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace gemcmc {

inline constexpr std::string_view kVersion = "0.1.0";

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLog2Pi = 1.8378770664093454836;

// Anchor sentinels used in ChainState and in serialized chain records.
inline constexpr int kDeltaAnchor = -1;  // the adaptive sampler's flat-prior state
inline constexpr int kNoAnchor = -2;     // samplers that carry no anchor component

/// The B prior draws available to the samplers. Points are stored columnwise
/// (d x B) so that per-point access is contiguous.
class PriorSampleSet {
 public:
  /// Takes a d x B matrix, one sample per column. Requires B >= 2, d >= 1 and
  /// finite coordinates throughout.
  explicit PriorSampleSet(Matrix points_by_column);

  /// Builds from a B x d matrix, one sample per row (the CSV layout).
  static PriorSampleSet from_rows(const Matrix& rows);

  int dim() const { return static_cast<int>(points_.rows()); }
  int size() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }
  Eigen::Ref<const Vector> point(int i) const { return points_.col(i); }
  Matrix rows() const { return points_.transpose(); }

 private:
  Matrix points_;  // d x B
};

/// Current position of a chain: the discrete anchor (index into the prior
/// set, kDeltaAnchor, or kNoAnchor), the continuous point, and the cached
/// target log-likelihood at that point.
struct ChainState {
  int anchor = kNoAnchor;
  Vector point;
  double log_lik = kNegInf;
};

/// Numerically stable log(sum(exp(v))).
inline double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace gemcmc
