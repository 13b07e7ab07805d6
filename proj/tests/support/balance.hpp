// Detailed-balance identity checks: for random (state, proposal) pairs of
// each sampler, target(x) q(x,y) MH(x->y) must equal target(y) q(y,x)
// MH(y->x). Both sides are assembled in log space from the documented
// formulas, so the check is exact up to rounding.
#pragma once

#include <algorithm>
#include <cmath>

#include "gemcmc/kernel.hpp"
#include "gemcmc/knn_graph.hpp"
#include "gemcmc/model.hpp"
#include "gemcmc/rng.hpp"
#include "gemcmc/samplers.hpp"

namespace balance {

using gemcmc::KernelSpec;
using gemcmc::KnnGraph;
using gemcmc::PriorSampleSet;
using gemcmc::RngStream;
using gemcmc::TargetModel;
using gemcmc::Vector;

inline double gap(double lhs, double rhs) {
  if (lhs == rhs) return 0.0;  // covers the both -inf case
  return std::abs(lhs - rhs);
}

/// Anchor-only chain: target is L at the anchors.
inline double max_gap_discretized(const PriorSampleSet& set,
                                  const KnnGraph& graph,
                                  const TargetModel& model, double rho,
                                  int pairs, RngStream& rng) {
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const int i = static_cast<int>(rng.uniform_index(set.size()));
    const int j = static_cast<int>(rng.uniform_index(set.size()));
    const double ll_i = model.log_lik(set.point(i));
    const double ll_j = model.log_lik(set.point(j));
    const auto [q_ij, q_ji] = graph.proposal_pair(i, j, rho);
    const double lhs = ll_i + std::log(q_ij) +
                       gemcmc::log_accept_anchor_move(graph, rho, i, j, ll_i, ll_j);
    const double rhs = ll_j + std::log(q_ji) +
                       gemcmc::log_accept_anchor_move(graph, rho, j, i, ll_j, ll_i);
    worst = std::max(worst, gap(lhs, rhs));
  }
  return worst;
}

/// Joint (anchor, point) chain: target K((theta - anchor)/h) L(theta).
inline double max_gap_graph_mcmc(const PriorSampleSet& set,
                                 const KnnGraph& graph,
                                 const TargetModel& model, double rho, double h,
                                 int pairs, RngStream& rng) {
  const KernelSpec spec(h, set.dim());
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const int i = static_cast<int>(rng.uniform_index(set.size()));
    const int j = static_cast<int>(rng.uniform_index(set.size()));
    const Vector theta = gemcmc::sample_smoothing(set.point(i), spec, rng);
    const Vector theta2 = gemcmc::sample_smoothing(set.point(j), spec, rng);
    const double ll = model.log_lik(theta);
    const double ll2 = model.log_lik(theta2);
    const auto [q_ij, q_ji] = graph.proposal_pair(i, j, rho);
    const double k_i = gemcmc::log_smoothing_density(spec, set.point(i), theta);
    const double k_j = gemcmc::log_smoothing_density(spec, set.point(j), theta2);
    const double lhs =
        (k_i + ll) + (std::log(q_ij) + k_j) +
        gemcmc::log_accept_anchor_move(graph, rho, i, j, ll, ll2);
    const double rhs =
        (k_j + ll2) + (std::log(q_ji) + k_i) +
        gemcmc::log_accept_anchor_move(graph, rho, j, i, ll2, ll);
    worst = std::max(worst, gap(lhs, rhs));
  }
  return worst;
}

/// Partial overlap: target pi_T(theta_T) K((theta_C - anchor)/h) L(theta);
/// the symmetric unique-block walk density appears on both sides.
inline double max_gap_overlap(const gemcmc::PartialOverlapTarget& target,
                              double rho, double h, double walk_sd, int pairs,
                              RngStream& rng) {
  const PriorSampleSet& anchors = *target.shared_anchors;
  const KnnGraph& graph = *target.graph;
  const int d_t = target.unique_dim;
  const int d_c = anchors.dim();
  const KernelSpec spec(h, d_c);
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const int i = static_cast<int>(rng.uniform_index(anchors.size()));
    const int j = static_cast<int>(rng.uniform_index(anchors.size()));
    Vector x(d_t + d_c), y(d_t + d_c);
    x.head(d_t) = rng.normal_vector(d_t);
    x.tail(d_c) = gemcmc::sample_smoothing(anchors.point(i), spec, rng);
    y.head(d_t) = x.head(d_t) + walk_sd * rng.normal_vector(d_t);
    y.tail(d_c) = gemcmc::sample_smoothing(anchors.point(j), spec, rng);

    const double ll_x = target.model->log_lik(x);
    const double ll_y = target.model->log_lik(y);
    const double prior_x = target.log_prior_unique(x.head(d_t));
    const double prior_y = target.log_prior_unique(y.head(d_t));
    const auto [q_ij, q_ji] = graph.proposal_pair(i, j, rho);
    const double k_i = gemcmc::log_smoothing_density(spec, anchors.point(i),
                                                     x.tail(d_c));
    const double k_j = gemcmc::log_smoothing_density(spec, anchors.point(j),
                                                     y.tail(d_c));
    // the Gaussian walk density of the unique block, identical in both
    // directions
    const double walk = -0.5 * (y.head(d_t) - x.head(d_t)).squaredNorm() /
                        (walk_sd * walk_sd);

    const double lhs =
        (prior_x + k_i + ll_x) + (std::log(q_ij) + k_j + walk) +
        gemcmc::log_accept_overlap_move(graph, rho, i, j, ll_x + prior_x,
                                        ll_y + prior_y);
    const double rhs =
        (prior_y + k_j + ll_y) + (std::log(q_ji) + k_i + walk) +
        gemcmc::log_accept_overlap_move(graph, rho, j, i, ll_y + prior_y,
                                        ll_x + prior_x);
    worst = std::max(worst, gap(lhs, rhs));
  }
  return worst;
}

/// Adaptive chain: all three move pair types against the augmented target
///   Phi(i, theta)    = gamma/(B h^d) K((theta - anchor_i)/h) L(theta)
///   Phi(Delta, theta) = (1 - gamma) eps L(theta).
inline double max_gap_adaptive(const PriorSampleSet& set, const KnnGraph& graph,
                               const TargetModel& model,
                               const gemcmc::SamplerConfig& cfg, int pairs,
                               RngStream& rng) {
  const KernelSpec spec(cfg.bandwidth, set.dim());
  const double h = cfg.bandwidth;
  const double log_b = std::log(static_cast<double>(set.size()));
  const double log_hd = set.dim() * std::log(h);
  const double log_gamma = std::log(cfg.gamma);
  const double log_flat = std::log1p(-cfg.gamma) + std::log(cfg.epsilon_mass);
  double worst = 0.0;

  auto log_target_anchor = [&](int i, const Vector& theta, double ll) {
    return log_gamma - log_b - log_hd +
           gemcmc::log_kernel_value(spec, (theta - set.point(i)) / h) + ll;
  };
  auto log_target_delta = [&](double ll) { return log_flat + ll; };

  for (int t = 0; t < pairs; ++t) {
    const int i = static_cast<int>(rng.uniform_index(set.size()));
    const Vector theta = gemcmc::sample_smoothing(set.point(i), spec, rng);
    const double ll = model.log_lik(theta);

    // graph move pair
    {
      const int j = static_cast<int>(rng.uniform_index(set.size()));
      const Vector theta2 = gemcmc::sample_smoothing(set.point(j), spec, rng);
      const double ll2 = model.log_lik(theta2);
      const auto [q_ij, q_ji] = graph.proposal_pair(i, j, cfg.rho);
      const double smooth_j =
          gemcmc::log_smoothing_density(spec, set.point(j), theta2);
      const double smooth_i =
          gemcmc::log_smoothing_density(spec, set.point(i), theta);
      const double lhs =
          log_target_anchor(i, theta, ll) +
          (std::log(cfg.rho_prime) + std::log(q_ij) + smooth_j) +
          gemcmc::log_accept_anchor_move(graph, cfg.rho, i, j, ll, ll2);
      const double rhs =
          log_target_anchor(j, theta2, ll2) +
          (std::log(cfg.rho_prime) + std::log(q_ji) + smooth_i) +
          gemcmc::log_accept_anchor_move(graph, cfg.rho, j, i, ll2, ll);
      worst = std::max(worst, gap(lhs, rhs));
    }
    // jump pair (i, theta) <-> (Delta, theta)
    {
      const double lhs =
          log_target_anchor(i, theta, ll) + std::log1p(-cfg.rho_prime) +
          gemcmc::log_accept_jump_to_delta(spec, cfg.gamma, cfg.epsilon_mass,
                                           theta, set.point(i));
      const double rhs =
          log_target_delta(ll) + std::log1p(-cfg.rho_prime) - log_b +
          gemcmc::log_accept_reanchor(spec, cfg.gamma, cfg.epsilon_mass, theta,
                                      set.point(i));
      worst = std::max(worst, gap(lhs, rhs));
    }
    // walk pair at Delta
    {
      const Vector theta2 = theta + cfg.walk_sd * rng.normal_vector(set.dim());
      const double ll2 = model.log_lik(theta2);
      const double walk = -0.5 * (theta2 - theta).squaredNorm() /
                          (cfg.walk_sd * cfg.walk_sd);
      const double lhs = log_target_delta(ll) +
                         (std::log(cfg.rho_prime) + walk) +
                         gemcmc::log_accept_symmetric(ll, ll2);
      const double rhs = log_target_delta(ll2) +
                         (std::log(cfg.rho_prime) + walk) +
                         gemcmc::log_accept_symmetric(ll2, ll);
      worst = std::max(worst, gap(lhs, rhs));
    }
  }
  return worst;
}

/// Metropolis baseline: target KDE(theta) L(theta), symmetric proposal.
inline double max_gap_metropolis(const PriorSampleSet& set,
                                 const TargetModel& model, double h,
                                 double step_sd, int pairs, RngStream& rng) {
  const KernelSpec spec(h, set.dim());
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const Vector x =
        set.point(rng.uniform_index(set.size())) + rng.normal_vector(set.dim());
    const Vector y = x + step_sd * rng.normal_vector(set.dim());
    const double score_x = gemcmc::kde_log_density(x, set, spec) + model.log_lik(x);
    const double score_y = gemcmc::kde_log_density(y, set, spec) + model.log_lik(y);
    const double lhs = score_x + gemcmc::log_accept_symmetric(score_x, score_y);
    const double rhs = score_y + gemcmc::log_accept_symmetric(score_y, score_x);
    worst = std::max(worst, gap(lhs, rhs));
  }
  return worst;
}

/// Gaussian baseline: target phi_fit(theta) L(theta), symmetric proposal.
inline double max_gap_gaussian(const PriorSampleSet& set,
                               const gemcmc::GaussianFit& fit,
                               const TargetModel& model, double step_sd,
                               int pairs, RngStream& rng) {
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const Vector x =
        set.point(rng.uniform_index(set.size())) + rng.normal_vector(set.dim());
    const Vector y = x + step_sd * rng.normal_vector(set.dim());
    const double score_x = fit.log_density(x) + model.log_lik(x);
    const double score_y = fit.log_density(y) + model.log_lik(y);
    const double lhs = score_x + gemcmc::log_accept_symmetric(score_x, score_y);
    const double rhs = score_y + gemcmc::log_accept_symmetric(score_y, score_x);
    worst = std::max(worst, gap(lhs, rhs));
  }
  return worst;
}

}  // namespace balance
