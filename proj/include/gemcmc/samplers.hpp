#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gemcmc/kernel.hpp"
#include "gemcmc/knn_graph.hpp"
#include "gemcmc/model.hpp"
#include "gemcmc/rng.hpp"
#include "gemcmc/types.hpp"

namespace gemcmc {

/// Tuning parameters shared by all chains. Variant-specific fields:
///   step_sd   sigma_p, the Metropolis / Gaussian-baseline walk step;
///   walk_sd   sigma, the partial-overlap unique-block step and the adaptive
///             sampler's walk step at Delta (required, no default);
///   gamma, epsilon_mass, rho_prime   adaptive sampler only (required, no
///             defaults).
struct SamplerConfig {
  int k = 10;
  double rho = 0.5;  // restart probability; (0, 1], rho = 1 restarts always
  double bandwidth = 1.0;
  std::int64_t iterations = 10000;
  std::int64_t burn_in = 5000;
  std::uint64_t seed = 0;
  double step_sd = 0.5;
  double walk_sd = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double epsilon_mass = std::numeric_limits<double>::quiet_NaN();
  double rho_prime = std::numeric_limits<double>::quiet_NaN();

  void validate_common() const;
  void validate_graph() const;      // k, rho, bandwidth
  void validate_metropolis() const; // step_sd, bandwidth
  void validate_overlap() const;    // graph fields + walk_sd
  void validate_adaptive() const;   // graph fields + walk_sd, gamma, epsilon_mass, rho_prime
};

/// Output of one chain run. Sample t lives in row t of samples; pre-burn-in
/// iterations are recorded and flagged via burn_in rather than dropped.
struct ChainOutput {
  Matrix samples;                       // N x d
  std::vector<int> anchors;             // N; kDeltaAnchor / kNoAnchor sentinels
  std::vector<std::uint8_t> accepted;   // N
  std::vector<double> log_liks;         // N; cached target log-lik per step
  std::int64_t burn_in = 0;
  double acceptance_rate = 0.0;
  double seconds_per_iteration = 0.0;   // sampling loop only (wall clock)
  double total_seconds = 0.0;
  std::uint64_t likelihood_evals = 0;
  std::uint64_t kernel_evals = 0;

  std::int64_t iterations() const { return samples.rows(); }
  /// Samples after the burn-in cut, one per row.
  Matrix post_burn_in() const;
};

// ---------------------------------------------------------------------------
// Log acceptance probabilities, log min(1, ratio). Pure functions of the
// documented per-sampler formulas; the step functions below use exactly
// these, which makes the detailed-balance identity directly testable.
// ---------------------------------------------------------------------------

/// Anchor move shared by the graph samplers: proposal-mass ratio times the
/// likelihood ratio exp(ll_to - ll_from).
double log_accept_anchor_move(const KnnGraph& graph, double rho, int from,
                              int to, double ll_from, double ll_to);

/// Partial-overlap move: anchor ratio times likelihood ratio times the
/// unique-block prior ratio (the unique-block walk itself is symmetric).
double log_accept_overlap_move(const KnnGraph& graph, double rho, int from,
                               int to, double score_from, double score_to);

/// Adaptive sampler, anchor -> Delta jump:
/// min{ (1-gamma) eps h^d / (gamma K((theta - anchor)/h)), 1 }.
double log_accept_jump_to_delta(const KernelSpec& spec, double gamma,
                                double epsilon_mass, const Vector& point,
                                const Vector& anchor_point);

/// Adaptive sampler, Delta -> anchor re-anchoring (reciprocal of the jump).
double log_accept_reanchor(const KernelSpec& spec, double gamma,
                           double epsilon_mass, const Vector& point,
                           const Vector& anchor_point);

/// Symmetric-proposal move on an arbitrary log target score.
double log_accept_symmetric(double score_from, double score_to);

// ---------------------------------------------------------------------------
// Single steps. Each returns the next state; on rejection the returned state
// is the input state, bit-identical. accepted reports the MH outcome.
// ---------------------------------------------------------------------------

/// Algorithm step of the discretized graph chain (anchors only; the state's
/// point is the anchor location and log_lik is the likelihood there).
ChainState step_discretized(const ChainState& state, const PriorSampleSet& set,
                            const KnnGraph& graph, const TargetModel& model,
                            const SamplerConfig& cfg, RngStream& rng,
                            bool* accepted = nullptr);

/// Joint (anchor, point) step of the graph-enabled chain: anchor proposal,
/// kernel-smoothed point proposal, joint accept/reject.
ChainState step_graph_mcmc(const ChainState& state, const PriorSampleSet& set,
                           const KnnGraph& graph, const TargetModel& model,
                           const SamplerConfig& cfg, RngStream& rng,
                           bool* accepted = nullptr);

/// Two-study target with a shared parameter block anchored to reference
/// draws and a unique block with its own prior. The model evaluates the full
/// parameter laid out as [unique; shared].
struct PartialOverlapTarget {
  const PriorSampleSet* shared_anchors = nullptr;  // B x d_C reference draws
  const KnnGraph* graph = nullptr;                 // over shared_anchors
  const TargetModel* model = nullptr;              // dim = unique_dim + d_C
  int unique_dim = 0;
  std::function<double(const Vector&)> log_prior_unique;
  Vector unique_init;  // empty -> zero vector
};

ChainState step_partial_overlap(const ChainState& state,
                                const PartialOverlapTarget& target,
                                const SamplerConfig& cfg, RngStream& rng,
                                bool* accepted = nullptr);

/// Four-branch adaptive step on the anchor set augmented with Delta. From a
/// graph anchor: with probability rho_prime a graph move, otherwise a jump to
/// Delta holding the point. From Delta: with probability rho_prime a Gaussian
/// walk on the point with a pure likelihood ratio, otherwise a uniform
/// re-anchoring holding the point.
ChainState step_adaptive(const ChainState& state, const PriorSampleSet& set,
                         const KnnGraph& graph, const TargetModel& model,
                         const SamplerConfig& cfg, RngStream& rng,
                         bool* accepted = nullptr);

/// Metropolis random walk baseline on the KDE-prior target. Recomputes the
/// KDE at both the current and the proposed point every step (2B kernel
/// evaluations per iteration); only the model log-likelihood is cached.
ChainState step_metropolis_rw(const ChainState& state,
                              const PriorSampleSet& set,
                              const TargetModel& model,
                              const SamplerConfig& cfg, RngStream& rng,
                              KernelEvalCounter* kernel_counter = nullptr,
                              bool* accepted = nullptr);

/// Gaussian-MCMC baseline: random walk targeting phi_fit(theta) L(theta).
ChainState step_gaussian_mcmc(const ChainState& state, const GaussianFit& fit,
                              const TargetModel& model,
                              const SamplerConfig& cfg, RngStream& rng,
                              bool* accepted = nullptr);

// ---------------------------------------------------------------------------
// Full runs: initialization, N steps, recording. Deterministic given
// (inputs, cfg.seed) apart from the wall-clock timing fields.
// ---------------------------------------------------------------------------

/// Discretized chain: N anchor steps from a uniform start; every recorded
/// anchor is smoothed through the kernel into the output sample.
ChainOutput run_discretized(const PriorSampleSet& set, const KnnGraph& graph,
                            const TargetModel& model, const SamplerConfig& cfg);

/// Graph-enabled chain on (anchor, point); the point trace is the output.
ChainOutput run_graph_mcmc(const PriorSampleSet& set, const KnnGraph& graph,
                           const TargetModel& model, const SamplerConfig& cfg);

ChainOutput run_partial_overlap(const PartialOverlapTarget& target,
                                const SamplerConfig& cfg);

/// Requires cfg.gamma/epsilon_mass/rho_prime/walk_sd and a model declaring
/// an integrable likelihood.
ChainOutput run_adaptive(const PriorSampleSet& set, const KnnGraph& graph,
                         const TargetModel& model, const SamplerConfig& cfg);

ChainOutput run_metropolis_rw(const PriorSampleSet& set,
                              const TargetModel& model,
                              const SamplerConfig& cfg);

/// Gaussian baseline; starts from a uniformly drawn prior point like the
/// other chains.
ChainOutput run_gaussian_mcmc(const PriorSampleSet& set, const GaussianFit& fit,
                              const TargetModel& model,
                              const SamplerConfig& cfg);

}  // namespace gemcmc
