#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gemcmc/diagnostics.hpp"
#include "gemcmc/samplers.hpp"
#include "gemcmc/synthetic.hpp"
#include "gemcmc/types.hpp"

namespace gemcmc {

/// Per-method outcome of an experiment: replicate chains plus the evaluation
/// summary used in the report tables.
struct MethodResult {
  std::string name;
  std::vector<ChainOutput> replicates;
  std::vector<double> w2;  // per replicate, vs the reference posterior
  double w2_mean = std::numeric_limits<double>::quiet_NaN();
  Matrix ess;  // replicates x d
  std::vector<double> psrf_per_coord;
  double mpsrf = std::numeric_limits<double>::quiet_NaN();
  double acceptance_mean = 0.0;
  double seconds_per_iteration = 0.0;  // mean over replicates

  nlohmann::json to_json() const;
};

/// Gaussian-mixture-prior experiment: graph-enabled MCMC (k=10, rho=0.5,
/// h=1), Metropolis random walk (sigma_p=0.5, h=1), and the Gaussian-fit
/// baseline, each replicated on a shared data set and scored against a long
/// reference chain that uses the analytic prior.
struct Experiment1Config {
  std::uint64_t seed = 25;
  int B = 100;
  int n = 10;
  std::int64_t iterations = 10000;
  std::int64_t burn_in = 5000;
  int replicates = 3;
  int w2_subsample = 1000;
  int reference_multiplier = 10;  // reference chain length = multiplier * iterations
  std::filesystem::path out_dir;  // empty: no files written
};

struct Experiment1Result {
  nlohmann::json parameters;
  Vector true_theta;
  Matrix reference_samples;  // post-burn-in analytic-prior draws
  double graph_build_seconds = 0.0;
  std::vector<MethodResult> methods;  // graph, metropolis, gaussian

  const MethodResult& method(const std::string& name) const;
  nlohmann::json to_json() const;
};

Experiment1Result run_experiment1(const Experiment1Config& cfg = {});

/// Two-population logistic experiment at dimension d: B reference-study
/// posterior draws are generated internally by a Metropolis chain on the
/// analytic reference target, then the graph-enabled chain
/// (k=ceil(sqrt(B)), rho=0.5, h=0.04) and the Metropolis baseline
/// (sigma_p=0.02, h=0.04) sample the informative current-study posterior.
struct Experiment2Config {
  std::uint64_t seed = 20240802;
  int d = 2;
  int B = 10000;
  int m = 1500;
  int n = 1500;
  std::int64_t reference_iterations = 40000;
  std::int64_t reference_burn_in = 30000;
  std::int64_t iterations = 10000;
  std::int64_t burn_in = 5000;
  int replicates = 3;
  int w2_subsample = 1000;
  int reference_multiplier = 10;
  std::filesystem::path out_dir;
};

struct Experiment2Result {
  nlohmann::json parameters;
  Matrix reference_samples;  // informative-target draws (the W2 reference)
  double graph_build_seconds = 0.0;
  std::vector<MethodResult> methods;  // graph, metropolis

  const MethodResult& method(const std::string& name) const;
  nlohmann::json to_json() const;
};

Experiment2Result run_experiment2(const Experiment2Config& cfg = {});

/// Per-iteration timing of the graph-enabled chain and the Metropolis
/// baseline across prior sample sizes (the d=6 logistic setting). Runs are
/// pinned to sequential execution; graph construction is its own line item.
struct ScalingConfig {
  std::uint64_t seed = 20240803;
  int d = 6;
  std::vector<int> b_values = {1000, 2500, 5000, 10000, 15000, 20000};
  std::int64_t timing_iterations = 3000;
  std::filesystem::path out_dir;
};

struct ScalingPoint {
  int B = 0;
  double graph_build_seconds = 0.0;
  double graph_seconds_per_iteration = 0.0;
  double metropolis_seconds_per_iteration = 0.0;
};

struct ScalingResult {
  nlohmann::json parameters;
  std::vector<ScalingPoint> points;

  nlohmann::json to_json() const;
};

ScalingResult run_scaling_study(const ScalingConfig& cfg = {});

/// Synthetic two-study partial-overlap demonstration: reference draws are
/// generated internally, the shared block (b3, b4) is anchored to them, and
/// the partial-overlap sampler produces the informative posterior, compared
/// against the uninformative single-study posterior.
struct OverlapDemoConfig {
  std::uint64_t seed = 20240804;
  int reference_participants = 600;
  int current_participants = 200;
  int rounds = 10;
  std::int64_t reference_iterations = 20000;
  std::int64_t reference_burn_in = 15000;  // leaves B = 5000 reference draws
  std::int64_t iterations = 100000;
  std::int64_t burn_in = 50000;
  double bandwidth = 0.01;
  double walk_sd = 0.05;
  double rho = 0.5;
  std::filesystem::path out_dir;
};

struct OverlapDemoResult {
  nlohmann::json parameters;
  Matrix reference_draws;         // B x 4
  Matrix uninformative_samples;   // post-burn-in, 4 columns
  Matrix informative_samples;     // post-burn-in, 4 columns
  Vector iqr_informative;         // per coordinate
  Vector iqr_uninformative;
  Vector mean_informative;
  Vector mean_uninformative;
  Vector mean_reference;
  double acceptance_rate = 0.0;

  nlohmann::json to_json() const;
};

OverlapDemoResult run_partial_overlap_demo(const OverlapDemoConfig& cfg = {});

/// Gaussian random-walk Metropolis on an analytic log target; the harness
/// tool behind reference posteriors. Returns the post-burn-in rows.
Matrix run_analytic_metropolis(
    const std::function<double(const Vector&)>& log_target, const Vector& init,
    double step_sd, std::int64_t iterations, std::int64_t burn_in,
    RngStream& rng);

/// Pilot-tuned step size: short run at sigma0, then 2.4 * s / sqrt(d) from
/// the pilot's per-coordinate spread.
double tune_step_sd(const std::function<double(const Vector&)>& log_target,
                    const Vector& init, double sigma0, RngStream& rng);

}  // namespace gemcmc
