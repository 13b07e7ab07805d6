#include "gemcmc/samplers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gemcmc {

namespace {

using Clock = std::chrono::steady_clock;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

/// Accept with probability exp(log_mh); log_mh <= 0 by construction.
bool mh_accept(RngStream& rng, double log_mh) {
  if (log_mh >= 0.0) return true;
  return std::log(rng.uniform()) < log_mh;
}

/// log min(1, exp(score_to - score_from)) with -inf guards: a zero-density
/// proposal is never accepted, and a zero-density current state always
/// escapes.
double log_min1_ratio(double score_from, double score_to) {
  if (score_to == kNegInf) return kNegInf;
  if (score_from == kNegInf) return 0.0;
  return std::min(0.0, score_to - score_from);
}

struct Recorder {
  explicit Recorder(std::int64_t n, int d, std::int64_t burn_in) {
    out.samples.resize(n, d);
    out.anchors.resize(n);
    out.accepted.resize(n);
    out.log_liks.resize(n);
    out.burn_in = burn_in;
  }

  void record(std::int64_t t, const ChainState& state, const Vector& sample,
              bool accepted) {
    out.samples.row(t) = sample.transpose();
    out.anchors[t] = state.anchor;
    out.accepted[t] = accepted ? 1 : 0;
    out.log_liks[t] = state.log_lik;
    accepted_count += accepted ? 1 : 0;
  }

  ChainOutput finish(double loop_seconds, std::uint64_t lik_evals,
                     std::uint64_t kernel_evals) {
    const auto n = static_cast<double>(out.samples.rows());
    out.acceptance_rate = accepted_count / n;
    out.total_seconds = loop_seconds;
    out.seconds_per_iteration = loop_seconds / n;
    out.likelihood_evals = lik_evals;
    out.kernel_evals = kernel_evals;
    return std::move(out);
  }

  ChainOutput out;
  double accepted_count = 0.0;
};

}  // namespace

void SamplerConfig::validate_common() const {
  require(iterations >= 1, "SamplerConfig: iterations must be >= 1");
  require(burn_in >= 0 && burn_in < iterations,
          "SamplerConfig: burn_in must lie in [0, iterations)");
}

void SamplerConfig::validate_graph() const {
  validate_common();
  require(k >= 1, "SamplerConfig: k must be >= 1");
  require(rho > 0.0 && rho <= 1.0, "SamplerConfig: rho must be in (0, 1]");
  require(finite_positive(bandwidth), "SamplerConfig: bandwidth must be > 0");
}

void SamplerConfig::validate_metropolis() const {
  validate_common();
  require(finite_positive(step_sd), "SamplerConfig: step_sd must be > 0");
  require(finite_positive(bandwidth), "SamplerConfig: bandwidth must be > 0");
}

void SamplerConfig::validate_overlap() const {
  validate_graph();
  require(finite_positive(walk_sd), "SamplerConfig: walk_sd must be > 0");
}

void SamplerConfig::validate_adaptive() const {
  validate_graph();
  require(finite_positive(walk_sd), "SamplerConfig: walk_sd must be > 0");
  require(std::isfinite(gamma) && gamma > 0.0 && gamma < 1.0,
          "SamplerConfig: gamma must be in (0, 1)");
  require(finite_positive(epsilon_mass),
          "SamplerConfig: epsilon_mass must be > 0");
  require(std::isfinite(rho_prime) && rho_prime > 0.0 && rho_prime < 1.0,
          "SamplerConfig: rho_prime must be in (0, 1)");
}

Matrix ChainOutput::post_burn_in() const {
  const auto n = samples.rows();
  return samples.bottomRows(n - burn_in);
}

double log_accept_anchor_move(const KnnGraph& graph, double rho, int from,
                              int to, double ll_from, double ll_to) {
  if (ll_to == kNegInf) return kNegInf;
  if (ll_from == kNegInf) return 0.0;
  const auto [forward, reverse] = graph.proposal_pair(from, to, rho);
  const double log_ratio =
      std::log(reverse) - std::log(forward) + (ll_to - ll_from);
  return std::min(0.0, log_ratio);
}

double log_accept_overlap_move(const KnnGraph& graph, double rho, int from,
                               int to, double score_from, double score_to) {
  if (score_to == kNegInf) return kNegInf;
  if (score_from == kNegInf) return 0.0;
  const auto [forward, reverse] = graph.proposal_pair(from, to, rho);
  const double log_ratio =
      std::log(reverse) - std::log(forward) + (score_to - score_from);
  return std::min(0.0, log_ratio);
}

double log_accept_jump_to_delta(const KernelSpec& spec, double gamma,
                                double epsilon_mass, const Vector& point,
                                const Vector& anchor_point) {
  const double h = spec.bandwidth;
  const double log_flat =
      std::log1p(-gamma) + std::log(epsilon_mass) + spec.dim * std::log(h);
  const double log_kernel =
      std::log(gamma) + log_kernel_value(spec, (point - anchor_point) / h);
  return std::min(0.0, log_flat - log_kernel);
}

double log_accept_reanchor(const KernelSpec& spec, double gamma,
                           double epsilon_mass, const Vector& point,
                           const Vector& anchor_point) {
  const double h = spec.bandwidth;
  const double log_flat =
      std::log1p(-gamma) + std::log(epsilon_mass) + spec.dim * std::log(h);
  const double log_kernel =
      std::log(gamma) + log_kernel_value(spec, (point - anchor_point) / h);
  return std::min(0.0, log_kernel - log_flat);
}

double log_accept_symmetric(double score_from, double score_to) {
  return log_min1_ratio(score_from, score_to);
}

namespace {

/// Draws the anchor proposal: restart with probability rho (the uniform draw
/// may return the current anchor itself), otherwise a uniform graph
/// neighbor.
int propose_anchor(int current, const KnnGraph& graph, double rho,
                   RngStream& rng) {
  if (rng.uniform() < rho) {
    return static_cast<int>(rng.uniform_index(graph.size()));
  }
  return graph.sample_neighbor(current, rng);
}

void check_graph_state(const ChainState& state, const KnnGraph& graph) {
  if (state.anchor < 0 || state.anchor >= graph.size()) {
    throw std::invalid_argument("sampler step: state anchor out of range");
  }
}

}  // namespace

ChainState step_discretized(const ChainState& state, const PriorSampleSet& set,
                            const KnnGraph& graph, const TargetModel& model,
                            const SamplerConfig& cfg, RngStream& rng,
                            bool* accepted) {
  check_graph_state(state, graph);
  const int proposal = propose_anchor(state.anchor, graph, cfg.rho, rng);
  const double ll_proposal = model.log_lik(set.point(proposal));
  const double log_mh = log_accept_anchor_move(graph, cfg.rho, state.anchor,
                                               proposal, state.log_lik,
                                               ll_proposal);
  const bool ok = mh_accept(rng, log_mh);
  if (accepted) *accepted = ok;
  if (!ok) return state;
  return ChainState{proposal, set.point(proposal), ll_proposal};
}

ChainState step_graph_mcmc(const ChainState& state, const PriorSampleSet& set,
                           const KnnGraph& graph, const TargetModel& model,
                           const SamplerConfig& cfg, RngStream& rng,
                           bool* accepted) {
  check_graph_state(state, graph);
  const KernelSpec spec(cfg.bandwidth, set.dim());
  const int proposal_anchor = propose_anchor(state.anchor, graph, cfg.rho, rng);
  const Vector proposal_point =
      sample_smoothing(set.point(proposal_anchor), spec, rng);
  const double ll_proposal = model.log_lik(proposal_point);
  const double log_mh = log_accept_anchor_move(
      graph, cfg.rho, state.anchor, proposal_anchor, state.log_lik, ll_proposal);
  const bool ok = mh_accept(rng, log_mh);
  if (accepted) *accepted = ok;
  if (!ok) return state;
  return ChainState{proposal_anchor, proposal_point, ll_proposal};
}

ChainState step_partial_overlap(const ChainState& state,
                                const PartialOverlapTarget& target,
                                const SamplerConfig& cfg, RngStream& rng,
                                bool* accepted) {
  const PriorSampleSet& anchors = *target.shared_anchors;
  const KnnGraph& graph = *target.graph;
  check_graph_state(state, graph);
  const int d_unique = target.unique_dim;
  const int d_shared = anchors.dim();
  const KernelSpec spec(cfg.bandwidth, d_shared);

  const int proposal_anchor = propose_anchor(state.anchor, graph, cfg.rho, rng);
  Vector proposal(d_unique + d_shared);
  proposal.tail(d_shared) =
      sample_smoothing(anchors.point(proposal_anchor), spec, rng);
  proposal.head(d_unique) =
      state.point.head(d_unique) + cfg.walk_sd * rng.normal_vector(d_unique);

  const double ll_proposal = target.model->log_lik(proposal);
  const double score_from =
      state.log_lik + target.log_prior_unique(state.point.head(d_unique));
  const double score_to =
      ll_proposal + target.log_prior_unique(proposal.head(d_unique));
  const double log_mh = log_accept_overlap_move(
      graph, cfg.rho, state.anchor, proposal_anchor, score_from, score_to);
  const bool ok = mh_accept(rng, log_mh);
  if (accepted) *accepted = ok;
  if (!ok) return state;
  return ChainState{proposal_anchor, std::move(proposal), ll_proposal};
}

ChainState step_adaptive(const ChainState& state, const PriorSampleSet& set,
                         const KnnGraph& graph, const TargetModel& model,
                         const SamplerConfig& cfg, RngStream& rng,
                         bool* accepted) {
  const KernelSpec spec(cfg.bandwidth, set.dim());
  if (state.anchor != kDeltaAnchor) {
    check_graph_state(state, graph);
    if (rng.uniform() < cfg.rho_prime) {
      return step_graph_mcmc(state, set, graph, model, cfg, rng, accepted);
    }
    // propose moving the anchor to Delta, holding the point
    const double log_mh =
        log_accept_jump_to_delta(spec, cfg.gamma, cfg.epsilon_mass, state.point,
                                 set.point(state.anchor));
    const bool ok = mh_accept(rng, log_mh);
    if (accepted) *accepted = ok;
    if (!ok) return state;
    return ChainState{kDeltaAnchor, state.point, state.log_lik};
  }

  if (rng.uniform() < cfg.rho_prime) {
    // Gaussian walk at Delta with a pure likelihood ratio
    const Vector proposal =
        state.point + cfg.walk_sd * rng.normal_vector(set.dim());
    const double ll_proposal = model.log_lik(proposal);
    const double log_mh = log_min1_ratio(state.log_lik, ll_proposal);
    const bool ok = mh_accept(rng, log_mh);
    if (accepted) *accepted = ok;
    if (!ok) return state;
    return ChainState{kDeltaAnchor, proposal, ll_proposal};
  }
  // uniform re-anchoring, holding the point
  const int proposal_anchor = static_cast<int>(rng.uniform_index(set.size()));
  const double log_mh = log_accept_reanchor(spec, cfg.gamma, cfg.epsilon_mass,
                                            state.point,
                                            set.point(proposal_anchor));
  const bool ok = mh_accept(rng, log_mh);
  if (accepted) *accepted = ok;
  if (!ok) return state;
  return ChainState{proposal_anchor, state.point, state.log_lik};
}

ChainState step_metropolis_rw(const ChainState& state,
                              const PriorSampleSet& set,
                              const TargetModel& model,
                              const SamplerConfig& cfg, RngStream& rng,
                              KernelEvalCounter* kernel_counter,
                              bool* accepted) {
  const KernelSpec spec(cfg.bandwidth, set.dim());
  const Vector proposal =
      state.point + cfg.step_sd * rng.normal_vector(set.dim());
  // Both KDE values are recomputed every iteration: 2B kernel evaluations,
  // the baseline's documented per-step cost.
  const double kde_current =
      kde_log_density(state.point, set, spec, kernel_counter);
  const double kde_proposal =
      kde_log_density(proposal, set, spec, kernel_counter);
  const double ll_proposal = model.log_lik(proposal);
  const double log_mh = log_min1_ratio(kde_current + state.log_lik,
                                       kde_proposal + ll_proposal);
  const bool ok = mh_accept(rng, log_mh);
  if (accepted) *accepted = ok;
  if (!ok) return state;
  return ChainState{kNoAnchor, proposal, ll_proposal};
}

ChainState step_gaussian_mcmc(const ChainState& state, const GaussianFit& fit,
                              const TargetModel& model,
                              const SamplerConfig& cfg, RngStream& rng,
                              bool* accepted) {
  const Vector proposal =
      state.point + cfg.step_sd * rng.normal_vector(fit.dim());
  const double ll_proposal = model.log_lik(proposal);
  const double log_mh =
      log_min1_ratio(fit.log_density(state.point) + state.log_lik,
                     fit.log_density(proposal) + ll_proposal);
  const bool ok = mh_accept(rng, log_mh);
  if (accepted) *accepted = ok;
  if (!ok) return state;
  return ChainState{kNoAnchor, proposal, ll_proposal};
}

namespace {

void check_graph_inputs(const PriorSampleSet& set, const KnnGraph& graph,
                        const TargetModel& model, const SamplerConfig& cfg) {
  require(graph.size() == set.size(),
          "run: graph and sample set disagree on B");
  require(graph.k() == cfg.k, "run: cfg.k differs from the graph's k");
  require(model.dim() == set.dim(), "run: model and sample set dimensions differ");
}

}  // namespace

ChainOutput run_discretized(const PriorSampleSet& set, const KnnGraph& graph,
                            const TargetModel& model, const SamplerConfig& cfg) {
  cfg.validate_graph();
  check_graph_inputs(set, graph, model, cfg);
  RngStream rng(cfg.seed);
  const KernelSpec spec(cfg.bandwidth, set.dim());
  const std::uint64_t evals_before = model.eval_count();

  ChainState state;
  state.anchor = static_cast<int>(rng.uniform_index(set.size()));
  state.point = set.point(state.anchor);
  state.log_lik = model.log_lik(state.point);

  Recorder rec(cfg.iterations, set.dim(), cfg.burn_in);
  const auto start = Clock::now();
  for (std::int64_t t = 0; t < cfg.iterations; ++t) {
    bool accepted = false;
    state = step_discretized(state, set, graph, model, cfg, rng, &accepted);
    rec.record(t, state, sample_smoothing(state.point, spec, rng), accepted);
  }
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return rec.finish(elapsed.count(), model.eval_count() - evals_before, 0);
}

ChainOutput run_graph_mcmc(const PriorSampleSet& set, const KnnGraph& graph,
                           const TargetModel& model, const SamplerConfig& cfg) {
  cfg.validate_graph();
  check_graph_inputs(set, graph, model, cfg);
  RngStream rng(cfg.seed);
  const KernelSpec spec(cfg.bandwidth, set.dim());
  const std::uint64_t evals_before = model.eval_count();

  ChainState state;
  state.anchor = static_cast<int>(rng.uniform_index(set.size()));
  state.point = sample_smoothing(set.point(state.anchor), spec, rng);
  state.log_lik = model.log_lik(state.point);

  Recorder rec(cfg.iterations, set.dim(), cfg.burn_in);
  const auto start = Clock::now();
  for (std::int64_t t = 0; t < cfg.iterations; ++t) {
    bool accepted = false;
    state = step_graph_mcmc(state, set, graph, model, cfg, rng, &accepted);
    rec.record(t, state, state.point, accepted);
  }
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return rec.finish(elapsed.count(), model.eval_count() - evals_before, 0);
}

ChainOutput run_partial_overlap(const PartialOverlapTarget& target,
                                const SamplerConfig& cfg) {
  cfg.validate_overlap();
  require(target.shared_anchors && target.graph && target.model,
          "run_partial_overlap: incomplete target");
  require(target.unique_dim >= 1, "run_partial_overlap: unique_dim must be >= 1");
  const PriorSampleSet& anchors = *target.shared_anchors;
  require(target.graph->size() == anchors.size(),
          "run_partial_overlap: graph and shared set disagree on B");
  require(target.graph->k() == cfg.k,
          "run_partial_overlap: cfg.k differs from the graph's k");
  require(target.model->dim() == target.unique_dim + anchors.dim(),
          "run_partial_overlap: model dimension must be unique_dim + shared dim");
  require(static_cast<bool>(target.log_prior_unique),
          "run_partial_overlap: log_prior_unique not set");

  RngStream rng(cfg.seed);
  const KernelSpec spec(cfg.bandwidth, anchors.dim());
  const std::uint64_t evals_before = target.model->eval_count();

  ChainState state;
  state.anchor = static_cast<int>(rng.uniform_index(anchors.size()));
  Vector init(target.unique_dim + anchors.dim());
  if (target.unique_init.size() > 0) {
    require(target.unique_init.size() == target.unique_dim,
            "run_partial_overlap: unique_init dimension mismatch");
    init.head(target.unique_dim) = target.unique_init;
  } else {
    init.head(target.unique_dim).setZero();
  }
  init.tail(anchors.dim()) =
      sample_smoothing(anchors.point(state.anchor), spec, rng);
  state.point = std::move(init);
  state.log_lik = target.model->log_lik(state.point);

  Recorder rec(cfg.iterations, target.model->dim(), cfg.burn_in);
  const auto start = Clock::now();
  for (std::int64_t t = 0; t < cfg.iterations; ++t) {
    bool accepted = false;
    state = step_partial_overlap(state, target, cfg, rng, &accepted);
    rec.record(t, state, state.point, accepted);
  }
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return rec.finish(elapsed.count(),
                    target.model->eval_count() - evals_before, 0);
}

ChainOutput run_adaptive(const PriorSampleSet& set, const KnnGraph& graph,
                         const TargetModel& model, const SamplerConfig& cfg) {
  cfg.validate_adaptive();
  check_graph_inputs(set, graph, model, cfg);
  require(model.likelihood_integrable(),
          "run_adaptive: model must declare an integrable likelihood");
  RngStream rng(cfg.seed);
  const KernelSpec spec(cfg.bandwidth, set.dim());
  const std::uint64_t evals_before = model.eval_count();

  ChainState state;
  state.anchor = static_cast<int>(rng.uniform_index(set.size()));
  state.point = sample_smoothing(set.point(state.anchor), spec, rng);
  state.log_lik = model.log_lik(state.point);

  Recorder rec(cfg.iterations, set.dim(), cfg.burn_in);
  const auto start = Clock::now();
  for (std::int64_t t = 0; t < cfg.iterations; ++t) {
    bool accepted = false;
    state = step_adaptive(state, set, graph, model, cfg, rng, &accepted);
    rec.record(t, state, state.point, accepted);
  }
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return rec.finish(elapsed.count(), model.eval_count() - evals_before, 0);
}

ChainOutput run_metropolis_rw(const PriorSampleSet& set,
                              const TargetModel& model,
                              const SamplerConfig& cfg) {
  cfg.validate_metropolis();
  require(model.dim() == set.dim(),
          "run_metropolis_rw: model and sample set dimensions differ");
  RngStream rng(cfg.seed);
  const std::uint64_t evals_before = model.eval_count();
  KernelEvalCounter kernel_counter;

  ChainState state;
  state.anchor = kNoAnchor;
  state.point = set.point(rng.uniform_index(set.size()));
  state.log_lik = model.log_lik(state.point);

  Recorder rec(cfg.iterations, set.dim(), cfg.burn_in);
  const auto start = Clock::now();
  for (std::int64_t t = 0; t < cfg.iterations; ++t) {
    bool accepted = false;
    state = step_metropolis_rw(state, set, model, cfg, rng, &kernel_counter,
                               &accepted);
    rec.record(t, state, state.point, accepted);
  }
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return rec.finish(elapsed.count(), model.eval_count() - evals_before,
                    kernel_counter.count);
}

ChainOutput run_gaussian_mcmc(const PriorSampleSet& set, const GaussianFit& fit,
                              const TargetModel& model,
                              const SamplerConfig& cfg) {
  cfg.validate_metropolis();
  require(model.dim() == set.dim() && fit.dim() == set.dim(),
          "run_gaussian_mcmc: dimension mismatch");
  RngStream rng(cfg.seed);
  const std::uint64_t evals_before = model.eval_count();

  ChainState state;
  state.anchor = kNoAnchor;
  state.point = set.point(rng.uniform_index(set.size()));
  state.log_lik = model.log_lik(state.point);

  Recorder rec(cfg.iterations, set.dim(), cfg.burn_in);
  const auto start = Clock::now();
  for (std::int64_t t = 0; t < cfg.iterations; ++t) {
    bool accepted = false;
    state = step_gaussian_mcmc(state, fit, model, cfg, rng, &accepted);
    rec.record(t, state, state.point, accepted);
  }
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return rec.finish(elapsed.count(), model.eval_count() - evals_before, 0);
}

}  // namespace gemcmc
