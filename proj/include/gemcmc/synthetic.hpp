#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gemcmc/model.hpp"
#include "gemcmc/types.hpp"

namespace gemcmc {

/// Gaussian-mixture-prior experiment: theta drawn from
/// (1/3) sum_k N(mu_k, sigma^2 I_2), observations N(theta, tau^2 I_2),
/// B prior draws from the same mixture.
struct Experiment1Data {
  PriorSampleSet prior;
  GaussianMeanModel model;
  Vector true_theta;
  std::array<Vector, 3> mixture_means;
  double mixture_sd;

  /// Analytic mixture prior log-density. Harness-side only: the samplers
  /// themselves never see it.
  double log_prior(const Vector& theta) const;
};

Experiment1Data generate_experiment1(std::uint64_t seed, int B = 100,
                                     int n = 10);

struct LogisticStudy {
  Matrix design;              // rows x d
  std::vector<int> response;  // 0/1
};

/// Two-population logistic experiment: beta ~ N(0, I_d); population-1
/// covariates N(+1, I_d), population-2 covariates N(-1, I_d); Bernoulli
/// responses through the logit link. force_beta substitutes a fixed beta
/// instead of drawing one.
struct Experiment2Data {
  LogisticStudy pop1;  // reference-study data
  LogisticStudy pop2;  // current-study data
  Vector true_beta;
  int dim;

  /// N(0, I_d) prior log-density defined on the parameter.
  double log_prior(const Vector& beta) const;
};

Experiment2Data generate_experiment2(std::uint64_t seed, int d, int m = 1500,
                                     int n = 1500,
                                     std::optional<Vector> force_beta = {});

/// Two-study repeated-decision data: participant i in condition X_i in {0,1}
/// decides over rounds t = 1..T with
///   logit p_it = b1 + b2 X_i + b3 t + b4 X_i t.
/// Design rows are (1, X_i, t, X_i t), so the parameter layout is
/// [unique (b1, b2); shared (b3, b4)]. The two studies share (b3, b4) and
/// differ in (b1, b2); the reference study is the larger one, so its draws
/// carry real precision about the shared block.
struct OverlapDemoData {
  LogisticStudy reference_study;
  LogisticStudy current_study;
  Vector true_beta_reference;
  Vector true_beta_current;
  Vector prior_sd;  // independent zero-mean Gaussian prior scales, length 4

  double log_prior(const Vector& beta) const;
};

OverlapDemoData generate_overlap_demo(std::uint64_t seed,
                                      int reference_participants = 600,
                                      int current_participants = 200,
                                      int rounds = 10);

}  // namespace gemcmc
