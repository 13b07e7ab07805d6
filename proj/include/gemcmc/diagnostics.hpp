#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gemcmc/kernel.hpp"
#include "gemcmc/knn_graph.hpp"
#include "gemcmc/model.hpp"
#include "gemcmc/samplers.hpp"
#include "gemcmc/types.hpp"

namespace gemcmc {

/// Sample autocorrelation function, lags 0..max_lag, lag 0 normalized to 1.
/// Throws on a constant series.
std::vector<double> autocorrelation(std::span<const double> series,
                                    int max_lag);

/// N / (1 + 2 sum rho(l)) with Geyer initial-positive-sequence truncation of
/// the lag-pair sums; clamped to at most N.
double effective_sample_size(std::span<const double> series);

/// Gelman-Rubin potential scale reduction factor over >= 2 equal-length
/// chains of a scalar quantity (between/within variance form).
double psrf(const std::vector<std::vector<double>>& chains);

/// Brooks-Gelman multivariate PSRF (largest-eigenvalue form); each chain is
/// an n x d sample matrix.
double mpsrf(const std::vector<Matrix>& chains);

/// Exact 2-Wasserstein distance between two m-point empirical measures:
/// m rows are subsampled from each input (seed recorded by the caller), costs
/// are squared Euclidean, the optimal assignment is solved exactly, and the
/// result is sqrt(mean matched cost). Arguments are ordered canonically
/// internally so the distance is exactly symmetric.
double wasserstein2(const Matrix& a, const Matrix& b, int m,
                    std::uint64_t seed);

/// Exact minimum-cost perfect assignment on a square cost matrix (O(n^3)
/// shortest augmenting paths).
double assignment_min_cost(const Matrix& cost);

/// Exact anchor-chain analysis of the discretized sampler: the full B x B
/// transition matrix (rejection and self-proposal mass on the diagonal) and
/// its stationary vector by power iteration.
struct DiscreteChainAnalysis {
  Matrix transition;
  Vector stationary;
};

DiscreteChainAnalysis exact_discrete_chain(const PriorSampleSet& set,
                                           const KnnGraph& graph,
                                           const TargetModel& model,
                                           double rho, double tol = 1e-13);

/// max over deterministic starts i of TV(delta_i P^t, pi).
double worst_start_tv(const Matrix& transition, const Vector& stationary,
                      std::int64_t t);

/// Smallest t <= t_max with worst-start TV <= epsilon (-1 if none).
std::int64_t empirical_mixing_time(const Matrix& transition,
                                   const Vector& stationary, double epsilon,
                                   std::int64_t t_max);

/// Doeblin mixing-time upper bound and its constituents (stored in log
/// space). For the discrete bound the denominator is the mean anchor
/// likelihood; for the continuous bound it is the KDE-prior/likelihood
/// overlap integral, estimated by Monte Carlo over the smoothing mixture.
struct MixingBound {
  double bound = 0.0;  // iterations
  double epsilon = 0.0;
  double rho = 0.0;
  double log_numerator = 0.0;    // log max_i L  /  log sup L
  double log_denominator = 0.0;  // log mean_i L /  log integral
  double mc_relative_se = std::numeric_limits<double>::quiet_NaN();
  std::int64_t mc_samples = 0;
};

MixingBound mixing_bound_discrete(const PriorSampleSet& set,
                                  const TargetModel& model, double rho,
                                  double epsilon);

MixingBound mixing_bound_continuous(const PriorSampleSet& set,
                                    const TargetModel& model,
                                    const KernelSpec& spec, double rho,
                                    double epsilon, std::int64_t mc_samples,
                                    std::uint64_t seed);

/// Uniform grid for 1-d quadrature.
struct QuadratureGrid {
  double lo = -10.0;
  double hi = 10.0;
  int points = 2001;
};

/// L1 distance between two densities given as unnormalized log-density
/// functions, each normalized numerically on the grid. refinement_gap is the
/// change when recomputed at half resolution, a discretization estimate.
struct L1Result {
  double value = 0.0;
  double refinement_gap = 0.0;
};

L1Result l1_density_distance(const std::function<double(double)>& log_f,
                             const std::function<double(double)>& log_g,
                             const QuadratureGrid& grid);

/// Unnormalized log-densities of the two graph-sampler stationary laws,
/// d = 1 only. The anchor-weighted mixture evaluates the likelihood at the
/// anchors; the continuous form multiplies the KDE prior by the likelihood.
std::function<double(double)> anchor_mixture_log_density(
    const PriorSampleSet& set, const TargetModel& model,
    const KernelSpec& spec);
std::function<double(double)> kde_posterior_log_density(
    const PriorSampleSet& set, const TargetModel& model,
    const KernelSpec& spec);

/// L1 quadrature error of the KDE posterior against the analytic-prior
/// posterior (d = 1).
L1Result l1_posterior_error(const PriorSampleSet& set, const TargetModel& model,
                            const KernelSpec& spec, const QuadratureGrid& grid,
                            const std::function<double(double)>& log_prior);

/// L1 gap between the discretized and continuous stationary laws (d = 1).
L1Result l1_discretized_gap(const PriorSampleSet& set, const TargetModel& model,
                            const KernelSpec& spec, const QuadratureGrid& grid);

/// Summary diagnostics over replicate chains of one sampler. Burn-in samples
/// are excluded. PSRF/MPSRF require >= 2 chains and are NaN otherwise.
struct DiagnosticsReport {
  Matrix ess_per_chain;       // chains x d
  std::vector<double> ess;    // per coordinate, mean over chains
  std::vector<double> psrf_per_coord;
  double mpsrf = std::numeric_limits<double>::quiet_NaN();
  double acceptance_rate = 0.0;
  Matrix acf;  // (max_lag + 1) x d, first chain
  double w2 = std::numeric_limits<double>::quiet_NaN();
  int w2_subsample = 0;
  std::uint64_t w2_seed = 0;
};

DiagnosticsReport diagnose(const std::vector<ChainOutput>& chains,
                           int max_lag = 50,
                           const std::optional<Matrix>& reference = {},
                           int w2_subsample = 1000, std::uint64_t seed = 0);

}  // namespace gemcmc
