#include "gemcmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gemcmc {

namespace {

struct SeriesStats {
  double mean = 0.0;
  double centered_sq = 0.0;  // sum of squared deviations
};

SeriesStats series_stats(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, ss};
}

double acf_at(std::span<const double> x, double mean, double denom, int lag) {
  const auto n = static_cast<std::int64_t>(x.size());
  double num = 0.0;
  for (std::int64_t t = 0; t + lag < n; ++t) {
    num += (x[t] - mean) * (x[t + lag] - mean);
  }
  return num / denom;
}

/// ceil with a small relative nudge so analytically integral bounds are not
/// rounded up by floating-point noise.
double ceil_guarded(double x) {
  return std::ceil(x * (1.0 - 1e-9));
}

}  // namespace

std::vector<double> autocorrelation(std::span<const double> series,
                                    int max_lag) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (max_lag < 0) throw std::invalid_argument("autocorrelation: max_lag < 0");
  if (n <= max_lag) {
    throw std::invalid_argument("autocorrelation: series length must exceed max_lag");
  }
  const auto [mean, ss] = series_stats(series);
  if (ss == 0.0) {
    throw std::invalid_argument("autocorrelation: constant series has no ACF");
  }
  std::vector<double> acf(max_lag + 1);
  for (int lag = 0; lag <= max_lag; ++lag) {
    acf[lag] = acf_at(series, mean, ss, lag);
  }
  return acf;
}

double effective_sample_size(std::span<const double> series) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (n < 4) throw std::invalid_argument("effective_sample_size: series too short");
  const auto [mean, ss] = series_stats(series);
  if (ss == 0.0) {
    throw std::invalid_argument("effective_sample_size: constant series");
  }
  // Geyer initial positive sequence: accumulate lag-pair sums
  // Gamma_m = rho(2m) + rho(2m+1) until the first nonpositive pair.
  double pair_total = 0.0;
  for (int m = 0;; ++m) {
    const int lag0 = 2 * m;
    const int lag1 = 2 * m + 1;
    if (lag0 >= n - 1) break;
    double gamma = acf_at(series, mean, ss, lag0);
    if (lag1 < n) gamma += acf_at(series, mean, ss, lag1);
    if (m > 0 && gamma <= 0.0) break;
    pair_total += gamma;
    if (lag1 >= n / 2) break;
  }
  const double tau = 2.0 * pair_total - 1.0;
  const auto nd = static_cast<double>(n);
  if (tau <= 1.0) return nd;  // antithetic chains clamp to N
  return nd / tau;
}

double psrf(const std::vector<std::vector<double>>& chains) {
  const auto m = static_cast<std::int64_t>(chains.size());
  if (m < 2) throw std::invalid_argument("psrf: need at least 2 chains");
  const auto n = static_cast<std::int64_t>(chains[0].size());
  if (n < 10) throw std::invalid_argument("psrf: chains too short");
  for (const auto& c : chains) {
    if (static_cast<std::int64_t>(c.size()) != n) {
      throw std::invalid_argument("psrf: chains must have equal length");
    }
  }
  double within = 0.0;
  double grand = 0.0;
  std::vector<double> means(m);
  for (std::int64_t j = 0; j < m; ++j) {
    const auto [mean, ss] = series_stats(chains[j]);
    means[j] = mean;
    grand += mean;
    within += ss / static_cast<double>(n - 1);
  }
  within /= static_cast<double>(m);
  grand /= static_cast<double>(m);
  if (within == 0.0) {
    throw std::invalid_argument("psrf: zero within-chain variance");
  }
  double between = 0.0;  // B = n * var(chain means)
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between *= static_cast<double>(n) / static_cast<double>(m - 1);

  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double v_hat =
      (nd - 1.0) / nd * within + (md + 1.0) / (md * nd) * between;
  return std::sqrt(v_hat / within);
}

double mpsrf(const std::vector<Matrix>& chains) {
  const auto m = static_cast<std::int64_t>(chains.size());
  if (m < 2) throw std::invalid_argument("mpsrf: need at least 2 chains");
  const auto n = chains[0].rows();
  const auto d = chains[0].cols();
  if (n < 10) throw std::invalid_argument("mpsrf: chains too short");
  for (const auto& c : chains) {
    if (c.rows() != n || c.cols() != d) {
      throw std::invalid_argument("mpsrf: chains must share shape");
    }
  }
  Matrix within = Matrix::Zero(d, d);
  Matrix means(m, d);
  for (std::int64_t j = 0; j < m; ++j) {
    const Vector mu = chains[j].colwise().mean().transpose();
    means.row(j) = mu.transpose();
    const Matrix centered = chains[j].rowwise() - mu.transpose();
    within += centered.transpose() * centered / static_cast<double>(n - 1);
  }
  within /= static_cast<double>(m);
  const Vector grand = means.colwise().mean().transpose();
  const Matrix mc = means.rowwise() - grand.transpose();
  const Matrix between_over_n =
      mc.transpose() * mc / static_cast<double>(m - 1);  // B/n

  Eigen::LLT<Matrix> llt(within);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("mpsrf: singular within-chain covariance");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(between_over_n,
                                                          within);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("mpsrf: eigensolver failed");
  }
  const double lambda_max = solver.eigenvalues().maxCoeff();
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return std::sqrt((nd - 1.0) / nd + (md + 1.0) / md * lambda_max);
}

double assignment_min_cost(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n || n == 0) {
    throw std::invalid_argument("assignment_min_cost: square matrix required");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // shortest augmenting paths with potentials, 1-based sentinels
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1, kInf);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(match[j] - 1, j - 1);
  return total;
}

namespace {

Matrix subsample_rows(const Matrix& x, int m, RngStream& rng) {
  const auto n = x.rows();
  if (m == n) return x;
  // partial Fisher-Yates over the row indices
  std::vector<std::int64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Matrix out(m, x.cols());
  for (int i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::int64_t>(rng.uniform_index(n - i));
    std::swap(idx[i], idx[j]);
    out.row(i) = x.row(idx[i]);
  }
  return out;
}

bool rows_lex_less(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    }
  }
  return false;
}

}  // namespace

double wasserstein2(const Matrix& a, const Matrix& b, int m,
                    std::uint64_t seed) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("wasserstein2: dimension mismatch");
  }
  if (a.rows() == 0 || b.rows() == 0) {
    throw std::invalid_argument("wasserstein2: empty sample set");
  }
  if (m < 1 || m > std::min(a.rows(), b.rows())) {
    throw std::invalid_argument("wasserstein2: subsample size out of range");
  }
  // canonical argument order makes the metric exactly symmetric
  const bool swapped = rows_lex_less(b, a);
  const Matrix& first = swapped ? b : a;
  const Matrix& second = swapped ? a : b;

  RngStream root(seed);
  RngStream rng_a = root.split(1);
  RngStream rng_b = root.split(2);
  const Matrix sa = subsample_rows(first, m, rng_a);
  const Matrix sb = subsample_rows(second, m, rng_b);

  Matrix cost(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      cost(i, j) = (sa.row(i) - sb.row(j)).squaredNorm();
    }
  }
  return std::sqrt(assignment_min_cost(cost) / static_cast<double>(m));
}

DiscreteChainAnalysis exact_discrete_chain(const PriorSampleSet& set,
                                           const KnnGraph& graph,
                                           const TargetModel& model,
                                           double rho, double tol) {
  const int b = set.size();
  if (b > 2000) {
    throw std::invalid_argument("exact_discrete_chain: B too large for a dense matrix");
  }
  if (graph.size() != b) {
    throw std::invalid_argument("exact_discrete_chain: graph size mismatch");
  }
  Vector log_lik(b);
  double max_ll = kNegInf;
  for (int i = 0; i < b; ++i) {
    log_lik[i] = model.log_lik(set.point(i));
    max_ll = std::max(max_ll, log_lik[i]);
  }
  if (max_ll == kNegInf) {
    throw std::invalid_argument("exact_discrete_chain: all likelihoods are zero");
  }

  Matrix transition = Matrix::Zero(b, b);
  for (int i = 0; i < b; ++i) {
    double off_diagonal = 0.0;
    for (int j = 0; j < b; ++j) {
      if (j == i) continue;
      const auto [forward, reverse] = graph.proposal_pair(i, j, rho);
      double accept;
      if (log_lik[j] == kNegInf) {
        accept = 0.0;
      } else if (log_lik[i] == kNegInf) {
        accept = 1.0;
      } else {
        const double log_ratio =
            std::log(reverse) - std::log(forward) + log_lik[j] - log_lik[i];
        accept = std::exp(std::min(0.0, log_ratio));
      }
      transition(i, j) = forward * accept;
      off_diagonal += transition(i, j);
    }
    transition(i, i) = 1.0 - off_diagonal;
  }

  // power iteration on the lazy chain (P + I)/2; same stationary vector,
  // immune to periodicity
  Vector pi = Vector::Constant(b, 1.0 / b);
  for (int iter = 0; iter < 1000000; ++iter) {
    Vector next = 0.5 * (transition.transpose() * pi + pi);
    next /= next.sum();
    const double delta = (next - pi).cwiseAbs().sum();
    pi = next;
    if (delta <= tol) break;
  }
  return {std::move(transition), std::move(pi)};
}

double worst_start_tv(const Matrix& transition, const Vector& stationary,
                      std::int64_t t) {
  const auto b = transition.rows();
  // P^t by binary exponentiation
  Matrix power = Matrix::Identity(b, b);
  Matrix base = transition;
  std::int64_t e = t;
  while (e > 0) {
    if (e & 1) power = power * base;
    base = base * base;
    e >>= 1;
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const double tv =
        0.5 * (power.row(i).transpose() - stationary).cwiseAbs().sum();
    worst = std::max(worst, tv);
  }
  return worst;
}

std::int64_t empirical_mixing_time(const Matrix& transition,
                                   const Vector& stationary, double epsilon,
                                   std::int64_t t_max) {
  const auto b = transition.rows();
  Matrix dist = Matrix::Identity(b, b);  // row i: distribution from start i
  for (std::int64_t t = 1; t <= t_max; ++t) {
    dist = dist * transition;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < b; ++i) {
      const double tv =
          0.5 * (dist.row(i).transpose() - stationary).cwiseAbs().sum();
      worst = std::max(worst, tv);
    }
    if (worst <= epsilon) return t;
  }
  return -1;
}

MixingBound mixing_bound_discrete(const PriorSampleSet& set,
                                  const TargetModel& model, double rho,
                                  double epsilon) {
  if (!(rho > 0.0) || rho > 1.0) {
    throw std::invalid_argument("mixing_bound_discrete: rho must be in (0, 1]");
  }
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("mixing_bound_discrete: epsilon must be in (0, 1)");
  }
  const int b = set.size();
  std::vector<double> log_lik(b);
  for (int i = 0; i < b; ++i) log_lik[i] = model.log_lik(set.point(i));
  const double log_max = *std::max_element(log_lik.begin(), log_lik.end());
  if (log_max == kNegInf) {
    throw std::invalid_argument("mixing_bound_discrete: all likelihoods are zero");
  }
  const double log_mean = log_sum_exp(log_lik) - std::log(static_cast<double>(b));

  MixingBound bound;
  bound.epsilon = epsilon;
  bound.rho = rho;
  bound.log_numerator = log_max;
  bound.log_denominator = log_mean;
  bound.bound = std::max(
      1.0, ceil_guarded(std::exp(log_max - log_mean) / rho * -std::log(epsilon)));
  return bound;
}

MixingBound mixing_bound_continuous(const PriorSampleSet& set,
                                    const TargetModel& model,
                                    const KernelSpec& spec, double rho,
                                    double epsilon, std::int64_t mc_samples,
                                    std::uint64_t seed) {
  if (!(rho > 0.0) || rho > 1.0) {
    throw std::invalid_argument("mixing_bound_continuous: rho must be in (0, 1]");
  }
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("mixing_bound_continuous: epsilon must be in (0, 1)");
  }
  if (mc_samples < 2) {
    throw std::invalid_argument("mixing_bound_continuous: need >= 2 MC samples");
  }
  const auto sup = model.sup_log_lik();
  if (!sup) {
    throw std::invalid_argument(
        "mixing_bound_continuous: model does not declare sup log-likelihood");
  }
  // Unbiased estimator of the KDE/likelihood overlap: draw an anchor
  // uniformly, smooth, average the likelihood.
  RngStream rng(seed);
  std::vector<double> draws(mc_samples);
  for (std::int64_t j = 0; j < mc_samples; ++j) {
    const auto anchor = rng.uniform_index(set.size());
    const Vector theta = sample_smoothing(set.point(anchor), spec, rng);
    draws[j] = model.log_lik(theta);
  }
  const double log_integral =
      log_sum_exp(draws) - std::log(static_cast<double>(mc_samples));
  // relative standard error from the max-scaled weights
  const double scale = *std::max_element(draws.begin(), draws.end());
  double mean_w = 0.0;
  for (double v : draws) mean_w += std::exp(v - scale);
  mean_w /= static_cast<double>(mc_samples);
  double var_w = 0.0;
  for (double v : draws) {
    const double w = std::exp(v - scale) - mean_w;
    var_w += w * w;
  }
  var_w /= static_cast<double>(mc_samples - 1);
  const double rel_se =
      std::sqrt(var_w / static_cast<double>(mc_samples)) / mean_w;

  MixingBound bound;
  bound.epsilon = epsilon;
  bound.rho = rho;
  bound.log_numerator = *sup;
  bound.log_denominator = log_integral;
  bound.mc_relative_se = rel_se;
  bound.mc_samples = mc_samples;
  bound.bound = std::max(1.0, ceil_guarded(std::exp(*sup - log_integral) / rho *
                                           -std::log(epsilon)));
  return bound;
}

namespace {

std::vector<double> normalized_on_grid(const std::function<double(double)>& log_f,
                                       const std::vector<double>& xs,
                                       double step) {
  std::vector<double> logs(xs.size());
  double peak = kNegInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    logs[i] = log_f(xs[i]);
    peak = std::max(peak, logs[i]);
  }
  if (peak == kNegInf) {
    throw std::invalid_argument("l1_density_distance: density is zero on the grid");
  }
  std::vector<double> dens(xs.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    dens[i] = std::exp(logs[i] - peak);
    const double w = (i == 0 || i + 1 == xs.size()) ? 0.5 : 1.0;
    mass += w * dens[i];
  }
  mass *= step;
  for (double& v : dens) v /= mass;
  return dens;
}

double l1_on_grid(const std::function<double(double)>& log_f,
                  const std::function<double(double)>& log_g, double lo,
                  double hi, int points) {
  const double step = (hi - lo) / (points - 1);
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = lo + i * step;
  const auto fa = normalized_on_grid(log_f, xs, step);
  const auto fb = normalized_on_grid(log_g, xs, step);
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    const double w = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    total += w * std::abs(fa[i] - fb[i]);
  }
  return total * step;
}

}  // namespace

L1Result l1_density_distance(const std::function<double(double)>& log_f,
                             const std::function<double(double)>& log_g,
                             const QuadratureGrid& grid) {
  if (grid.points < 5 || grid.hi <= grid.lo) {
    throw std::invalid_argument("l1_density_distance: bad grid");
  }
  const int points = grid.points % 2 == 0 ? grid.points + 1 : grid.points;
  const double full = l1_on_grid(log_f, log_g, grid.lo, grid.hi, points);
  const double half = l1_on_grid(log_f, log_g, grid.lo, grid.hi,
                                 (points - 1) / 2 + 1);
  return {full, std::abs(full - half)};
}

std::function<double(double)> anchor_mixture_log_density(
    const PriorSampleSet& set, const TargetModel& model,
    const KernelSpec& spec) {
  if (set.dim() != 1 || spec.dim != 1) {
    throw std::invalid_argument("anchor_mixture_log_density: d = 1 only");
  }
  const int b = set.size();
  std::vector<double> anchor_ll(b);
  std::vector<double> centers(b);
  for (int i = 0; i < b; ++i) {
    anchor_ll[i] = model.log_lik(set.point(i));
    centers[i] = set.point(i)[0];
  }
  const double h = spec.bandwidth;
  return [anchor_ll, centers, h](double theta) {
    std::vector<double> terms(anchor_ll.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const double u = (theta - centers[i]) / h;
      terms[i] = anchor_ll[i] - 0.5 * (kLog2Pi + u * u);
    }
    return log_sum_exp(terms);
  };
}

std::function<double(double)> kde_posterior_log_density(
    const PriorSampleSet& set, const TargetModel& model,
    const KernelSpec& spec) {
  if (set.dim() != 1 || spec.dim != 1) {
    throw std::invalid_argument("kde_posterior_log_density: d = 1 only");
  }
  return [&set, &model, spec](double theta) {
    Vector t(1);
    t[0] = theta;
    return kde_log_density(t, set, spec) + model.log_lik(t);
  };
}

L1Result l1_posterior_error(const PriorSampleSet& set, const TargetModel& model,
                            const KernelSpec& spec, const QuadratureGrid& grid,
                            const std::function<double(double)>& log_prior) {
  auto kde_posterior = kde_posterior_log_density(set, model, spec);
  auto true_posterior = [&model, &log_prior](double theta) {
    Vector t(1);
    t[0] = theta;
    return log_prior(theta) + model.log_lik(t);
  };
  return l1_density_distance(kde_posterior, true_posterior, grid);
}

L1Result l1_discretized_gap(const PriorSampleSet& set, const TargetModel& model,
                            const KernelSpec& spec, const QuadratureGrid& grid) {
  return l1_density_distance(anchor_mixture_log_density(set, model, spec),
                             kde_posterior_log_density(set, model, spec), grid);
}

DiagnosticsReport diagnose(const std::vector<ChainOutput>& chains, int max_lag,
                           const std::optional<Matrix>& reference,
                           int w2_subsample, std::uint64_t seed) {
  if (chains.empty()) throw std::invalid_argument("diagnose: no chains");
  const auto d = chains[0].samples.cols();
  const auto n_chains = static_cast<std::int64_t>(chains.size());

  DiagnosticsReport report;
  report.ess_per_chain.resize(n_chains, d);
  double accept = 0.0;
  std::vector<Matrix> post;
  post.reserve(chains.size());
  for (const auto& chain : chains) {
    post.push_back(chain.post_burn_in());
    accept += chain.acceptance_rate;
  }
  report.acceptance_rate = accept / static_cast<double>(n_chains);

  for (std::int64_t c = 0; c < n_chains; ++c) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const Vector col = post[c].col(j);
      report.ess_per_chain(c, j) =
          effective_sample_size({col.data(), static_cast<std::size_t>(col.size())});
    }
  }
  report.ess.assign(d, 0.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    report.ess[j] = report.ess_per_chain.col(j).mean();
  }

  if (n_chains >= 2) {
    report.psrf_per_coord.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      std::vector<std::vector<double>> columns;
      for (const auto& p : post) {
        const Vector col = p.col(j);
        columns.emplace_back(col.data(), col.data() + col.size());
      }
      report.psrf_per_coord[j] = psrf(columns);
    }
    report.mpsrf = mpsrf(post);
  }

  const auto lag = std::min<std::int64_t>(max_lag, post[0].rows() - 1);
  report.acf.resize(lag + 1, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Vector col = post[0].col(j);
    const auto acf = autocorrelation(
        {col.data(), static_cast<std::size_t>(col.size())}, static_cast<int>(lag));
    for (std::int64_t l = 0; l <= lag; ++l) report.acf(l, j) = acf[l];
  }

  if (reference) {
    Matrix pooled(post[0].rows() * n_chains, d);
    for (std::int64_t c = 0; c < n_chains; ++c) {
      pooled.middleRows(c * post[0].rows(), post[0].rows()) = post[c];
    }
    const int m = std::min<int>(
        w2_subsample, static_cast<int>(std::min(pooled.rows(), reference->rows())));
    report.w2 = wasserstein2(pooled, *reference, m, seed);
    report.w2_subsample = m;
    report.w2_seed = seed;
  }
  return report;
}

}  // namespace gemcmc
