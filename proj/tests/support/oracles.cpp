#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

double trapezoid(const std::function<double(double)>& f, double lo, double hi,
                 int intervals) {
  const double step = (hi - lo) / intervals;
  double total = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < intervals; ++i) total += f(lo + i * step);
  return total * step;
}

Density1D::Density1D(const std::function<double(double)>& log_f, double lo,
                     double hi, int points)
    : lo_(lo), hi_(hi), step_((hi - lo) / (points - 1)) {
  std::vector<double> logs(points);
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    logs[i] = log_f(lo + i * step_);
    peak = std::max(peak, logs[i]);
  }
  density_.resize(points);
  for (int i = 0; i < points; ++i) density_[i] = std::exp(logs[i] - peak);
  cumulative_.resize(points);
  cumulative_[0] = 0.0;
  for (int i = 1; i < points; ++i) {
    cumulative_[i] =
        cumulative_[i - 1] + 0.5 * (density_[i - 1] + density_[i]) * step_;
  }
  const double mass = cumulative_.back();
  for (double& v : density_) v /= mass;
  for (double& v : cumulative_) v /= mass;
}

double Density1D::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const double pos = (x - lo_) / step_;
  const auto idx = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(idx);
  return cumulative_[idx] * (1.0 - frac) + cumulative_[idx + 1] * frac;
}

Density2D::Density2D(const std::function<double(double, double)>& log_f,
                     double lo_x, double hi_x, double lo_y, double hi_y,
                     int points)
    : lo_x_(lo_x), hi_x_(hi_x), lo_y_(lo_y), hi_y_(hi_y),
      step_x_((hi_x - lo_x) / (points - 1)),
      step_y_((hi_y - lo_y) / (points - 1)) {
  // tensor grid, trapezoid weights on both axes
  std::vector<double> values(static_cast<std::size_t>(points) * points);
  double peak = -std::numeric_limits<double>::infinity();
  for (int ix = 0; ix < points; ++ix) {
    for (int iy = 0; iy < points; ++iy) {
      const double v = log_f(lo_x + ix * step_x_, lo_y + iy * step_y_);
      values[static_cast<std::size_t>(ix) * points + iy] = v;
      peak = std::max(peak, v);
    }
  }
  std::vector<double> mass_x(points, 0.0), mass_y(points, 0.0);
  double total = 0.0;
  for (int ix = 0; ix < points; ++ix) {
    const double wx = (ix == 0 || ix == points - 1) ? 0.5 : 1.0;
    for (int iy = 0; iy < points; ++iy) {
      const double wy = (iy == 0 || iy == points - 1) ? 0.5 : 1.0;
      const double cell =
          wx * wy *
          std::exp(values[static_cast<std::size_t>(ix) * points + iy] - peak);
      mass_x[ix] += cell;
      mass_y[iy] += cell;
      total += cell;
    }
  }
  cum_x_.resize(points);
  cum_y_.resize(points);
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    acc += mass_x[i];
    cum_x_[i] = acc / total;
  }
  acc = 0.0;
  for (int i = 0; i < points; ++i) {
    acc += mass_y[i];
    cum_y_[i] = acc / total;
  }
}

namespace {

double interp_cdf(const std::vector<double>& cum, double lo, double step,
                  double x) {
  if (x <= lo) return 0.0;
  const double pos = (x - lo) / step;
  if (pos >= static_cast<double>(cum.size() - 1)) return 1.0;
  const auto idx = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(idx);
  return cum[idx] * (1.0 - frac) + cum[idx + 1] * frac;
}

}  // namespace

double Density2D::marginal_cdf_x(double x) const {
  return interp_cdf(cum_x_, lo_x_, step_x_, x);
}

double Density2D::marginal_cdf_y(double y) const {
  return interp_cdf(cum_y_, lo_y_, step_y_, y);
}

KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d_stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double upper = static_cast<double>(i + 1) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d_stat = std::max({d_stat, upper, lower});
  }
  // asymptotic Kolmogorov tail with the finite-n correction
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d_stat;
  double p = 0.0;
  if (lambda < 0.2) {
    p = 1.0;
  } else {
    for (int j = 1; j <= 100; ++j) {
      const double term =
          2.0 * ((j % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
      p += term;
      if (std::abs(term) < 1e-12) break;
    }
    p = std::clamp(p, 0.0, 1.0);
  }
  return {d_stat, p};
}

double reg_gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("reg_gamma_p: bad args");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    // series expansion
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // continued fraction for Q(a, x), Lentz's method
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return 1.0 - q;
}

double chi_square_cdf(double x, int df) {
  return reg_gamma_p(0.5 * df, 0.5 * x);
}

double chi_square_quantile(double p, int df) {
  if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("chi_square_quantile");
  double lo = 0.0, hi = 10.0 * df + 100.0;
  while (chi_square_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi_square_cdf(mid, df) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BatchMeans batch_means(std::span<const double> series, int batches) {
  const auto n = static_cast<std::int64_t>(series.size());
  const std::int64_t size = n / batches;
  if (size < 2) throw std::invalid_argument("batch_means: batches too small");
  std::vector<double> means(batches);
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::int64_t i = b * size; i < (b + 1) * size; ++i) s += series[i];
    means[b] = s / static_cast<double>(size);
  }
  const double grand =
      std::accumulate(means.begin(), means.end(), 0.0) / batches;
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var /= static_cast<double>(batches - 1);
  return {grand, std::sqrt(var / batches)};
}

std::vector<int> brute_knn_oracle(const Matrix& points_by_col, int i, int k) {
  const int b = static_cast<int>(points_by_col.cols());
  std::vector<std::pair<double, int>> all;
  for (int j = 0; j < b; ++j) {
    if (j == i) continue;
    all.emplace_back((points_by_col.col(i) - points_by_col.col(j)).squaredNorm(),
                     j);
  }
  std::sort(all.begin(), all.end());
  std::vector<int> out;
  for (int j = 0; j < k; ++j) out.push_back(all[j].second);
  return out;
}

double brute_min_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (n > 9) throw std::invalid_argument("brute_min_assignment: n too large");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost(i, perm[i]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle
