#include "gemcmc/types.hpp"

namespace gemcmc {

PriorSampleSet::PriorSampleSet(Matrix points_by_column)
    : points_(std::move(points_by_column)) {
  if (points_.cols() < 2) {
    throw std::invalid_argument(
        "PriorSampleSet: need at least 2 samples, got " +
        std::to_string(points_.cols()));
  }
  if (points_.rows() < 1) {
    throw std::invalid_argument("PriorSampleSet: dimension must be >= 1");
  }
  if (!points_.allFinite()) {
    throw std::invalid_argument(
        "PriorSampleSet: samples contain a non-finite coordinate");
  }
}

PriorSampleSet PriorSampleSet::from_rows(const Matrix& rows) {
  return PriorSampleSet(rows.transpose());
}

}  // namespace gemcmc
