#include "gemcmc/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "gemcmc/rng.hpp"

namespace gemcmc {

namespace {

double log_normal_density(const Vector& x, const Vector& mean, double sd) {
  const double d = static_cast<double>(x.size());
  return -0.5 * (d * kLog2Pi + (x - mean).squaredNorm() / (sd * sd)) -
         d * std::log(sd);
}

int bernoulli(double logit, RngStream& rng) {
  const double p = 1.0 / (1.0 + std::exp(-logit));
  return rng.uniform() < p ? 1 : 0;
}

LogisticStudy make_logistic_study(const Vector& beta, const Vector& cov_mean,
                                  int rows, RngStream& rng) {
  const int d = static_cast<int>(beta.size());
  Matrix design(rows, d);
  std::vector<int> response(rows);
  for (int i = 0; i < rows; ++i) {
    const Vector x = cov_mean + rng.normal_vector(d);
    design.row(i) = x.transpose();
    response[i] = bernoulli(x.dot(beta), rng);
  }
  return {std::move(design), std::move(response)};
}

}  // namespace

double Experiment1Data::log_prior(const Vector& theta) const {
  double terms[3];
  for (int kcomp = 0; kcomp < 3; ++kcomp) {
    terms[kcomp] = log_normal_density(theta, mixture_means[kcomp], mixture_sd);
  }
  return log_sum_exp(terms) - std::log(3.0);
}

Experiment1Data generate_experiment1(std::uint64_t seed, int B, int n) {
  if (B < 2) throw std::invalid_argument("generate_experiment1: B must be >= 2");
  if (n < 1) throw std::invalid_argument("generate_experiment1: n must be >= 1");
  constexpr int d = 2;
  constexpr double sigma = 1.0;
  constexpr double tau = 2.0;
  std::array<Vector, 3> means = {Vector{{4.0, 0.0}}, Vector{{-4.0, 0.0}},
                                 Vector{{0.0, 4.0}}};

  RngStream root(seed);
  RngStream prior_rng = root.split(1);
  RngStream theta_rng = root.split(2);
  RngStream obs_rng = root.split(3);

  Matrix prior_points(d, B);
  for (int i = 0; i < B; ++i) {
    const auto component = prior_rng.uniform_index(3);
    prior_points.col(i) =
        means[component] + sigma * prior_rng.normal_vector(d);
  }
  const Vector true_theta =
      means[theta_rng.uniform_index(3)] + sigma * theta_rng.normal_vector(d);

  Matrix observations(n, d);
  for (int i = 0; i < n; ++i) {
    observations.row(i) =
        (true_theta + tau * obs_rng.normal_vector(d)).transpose();
  }

  return Experiment1Data{PriorSampleSet(std::move(prior_points)),
                         GaussianMeanModel(std::move(observations), tau),
                         true_theta, means, sigma};
}

double Experiment2Data::log_prior(const Vector& beta) const {
  return log_normal_density(beta, Vector::Zero(dim), 1.0);
}

Experiment2Data generate_experiment2(std::uint64_t seed, int d, int m, int n,
                                     std::optional<Vector> force_beta) {
  if (d < 1) throw std::invalid_argument("generate_experiment2: d must be >= 1");
  if (m < 1 || n < 1) {
    throw std::invalid_argument("generate_experiment2: m, n must be >= 1");
  }
  RngStream root(seed);
  RngStream beta_rng = root.split(1);
  RngStream pop1_rng = root.split(2);
  RngStream pop2_rng = root.split(3);

  Vector beta;
  if (force_beta) {
    if (force_beta->size() != d) {
      throw std::invalid_argument("generate_experiment2: force_beta dimension");
    }
    beta = *force_beta;
  } else {
    beta = beta_rng.normal_vector(d);
  }

  LogisticStudy pop1 =
      make_logistic_study(beta, Vector::Constant(d, 1.0), m, pop1_rng);
  LogisticStudy pop2 =
      make_logistic_study(beta, Vector::Constant(d, -1.0), n, pop2_rng);
  return Experiment2Data{std::move(pop1), std::move(pop2), std::move(beta), d};
}

double OverlapDemoData::log_prior(const Vector& beta) const {
  double ll = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double s = prior_sd[j];
    ll += -0.5 * (kLog2Pi + beta[j] * beta[j] / (s * s)) - std::log(s);
  }
  return ll;
}

OverlapDemoData generate_overlap_demo(std::uint64_t seed,
                                      int reference_participants,
                                      int current_participants, int rounds) {
  if (reference_participants < 2 || current_participants < 2 || rounds < 1) {
    throw std::invalid_argument("generate_overlap_demo: bad sizes");
  }
  // Shared (b3, b4) across studies; the unique intercept/condition effects
  // (b1, b2) differ, mirroring the two-study setting this reproduces.
  Vector beta_ref{{0.5, -0.8, -0.12, 0.15}};
  Vector beta_cur{{-0.4, 0.9, -0.12, 0.15}};
  Vector prior_sd{{2.5, 5.3, 0.8, 1.0}};

  RngStream root(seed);

  auto make_study = [&](const Vector& beta, int participants, RngStream rng) {
    const int rows = participants * rounds;
    Matrix design(rows, 4);
    std::vector<int> response(rows);
    int r = 0;
    for (int i = 0; i < participants; ++i) {
      const double condition = rng.uniform() < 0.5 ? 1.0 : 0.0;
      for (int t = 1; t <= rounds; ++t, ++r) {
        design(r, 0) = 1.0;
        design(r, 1) = condition;
        design(r, 2) = static_cast<double>(t);
        design(r, 3) = condition * static_cast<double>(t);
        response[r] = bernoulli(design.row(r).dot(beta), rng);
      }
    }
    return LogisticStudy{std::move(design), std::move(response)};
  };

  return OverlapDemoData{
      make_study(beta_ref, reference_participants, root.split(1)),
      make_study(beta_cur, current_participants, root.split(2)),
      std::move(beta_ref), std::move(beta_cur), std::move(prior_sd)};
}

}  // namespace gemcmc
