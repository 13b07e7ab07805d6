#include "gemcmc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "gemcmc/io.hpp"

namespace gemcmc {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(const Clock::time_point& start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double quantile(Vector column, double q) {
  std::sort(column.data(), column.data() + column.size());
  const double pos = q * static_cast<double>(column.size() - 1);
  const auto lo = static_cast<Eigen::Index>(std::floor(pos));
  const auto hi = static_cast<Eigen::Index>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return (1.0 - frac) * column[lo] + frac * column[hi];
}

Vector per_coordinate_iqr(const Matrix& samples) {
  Vector iqr(samples.cols());
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    iqr[j] = quantile(samples.col(j), 0.75) - quantile(samples.col(j), 0.25);
  }
  return iqr;
}

std::vector<double> to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

/// Scores replicate chains of one method against the reference posterior.
MethodResult evaluate_method(std::string name, std::vector<ChainOutput> chains,
                             const Matrix& reference, int w2_subsample,
                             RngStream w2_seeds) {
  MethodResult result;
  result.name = std::move(name);
  const auto reps = static_cast<int>(chains.size());
  const auto d = chains[0].samples.cols();

  result.ess.resize(reps, d);
  double accept = 0.0;
  double sec_per_iter = 0.0;
  std::vector<Matrix> post;
  for (int r = 0; r < reps; ++r) {
    post.push_back(chains[r].post_burn_in());
    accept += chains[r].acceptance_rate;
    sec_per_iter += chains[r].seconds_per_iteration;
    const int m = std::min<int>(
        w2_subsample,
        static_cast<int>(std::min(post[r].rows(), reference.rows())));
    result.w2.push_back(
        wasserstein2(post[r], reference, m, w2_seeds.split(r).seed()));
    for (Eigen::Index j = 0; j < d; ++j) {
      const Vector col = post[r].col(j);
      result.ess(r, j) = effective_sample_size(
          {col.data(), static_cast<std::size_t>(col.size())});
    }
  }
  result.w2_mean = 0.0;
  for (double w : result.w2) result.w2_mean += w;
  result.w2_mean /= static_cast<double>(reps);
  result.acceptance_mean = accept / reps;
  result.seconds_per_iteration = sec_per_iter / reps;

  if (reps >= 2) {
    result.psrf_per_coord.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      std::vector<std::vector<double>> columns;
      for (const auto& p : post) {
        const Vector col = p.col(j);
        columns.emplace_back(col.data(), col.data() + col.size());
      }
      result.psrf_per_coord[j] = psrf(columns);
    }
    result.mpsrf = mpsrf(post);
  }
  result.replicates = std::move(chains);
  return result;
}

/// Plot data: 2-d KDE of the samples on a regular grid (Scott-rule
/// bandwidth), rows (x, y, density).
Matrix kde_contour_grid(const Matrix& samples, int grid_points = 60) {
  if (samples.cols() != 2) {
    throw std::invalid_argument("kde_contour_grid: 2-d samples required");
  }
  const auto n = samples.rows();
  const Vector mean = samples.colwise().mean().transpose();
  Vector sd(2);
  for (int j = 0; j < 2; ++j) {
    sd[j] = std::sqrt((samples.col(j).array() - mean[j]).square().sum() /
                      static_cast<double>(n - 1));
  }
  const double scott = std::pow(static_cast<double>(n), -1.0 / 6.0);
  const double h = scott * 0.5 * (sd[0] + sd[1]);
  const KernelSpec spec(std::max(h, 1e-6), 2);
  const PriorSampleSet as_set = PriorSampleSet::from_rows(samples);

  Matrix out(grid_points * grid_points, 3);
  int row = 0;
  for (int ix = 0; ix < grid_points; ++ix) {
    const double x = mean[0] - 3.5 * sd[0] +
                     7.0 * sd[0] * ix / static_cast<double>(grid_points - 1);
    for (int iy = 0; iy < grid_points; ++iy) {
      const double y = mean[1] - 3.5 * sd[1] +
                       7.0 * sd[1] * iy / static_cast<double>(grid_points - 1);
      Vector point{{x, y}};
      out(row, 0) = x;
      out(row, 1) = y;
      out(row, 2) = kde_density(point, as_set, spec);
      ++row;
    }
  }
  return out;
}

void write_acf_csv(const MethodResult& method,
                   const std::filesystem::path& path, int max_lag = 50) {
  const Matrix post = method.replicates.front().post_burn_in();
  const auto d = post.cols();
  const int lag = static_cast<int>(std::min<std::int64_t>(max_lag, post.rows() - 1));
  Matrix table(lag + 1, d + 1);
  for (int l = 0; l <= lag; ++l) table(l, 0) = l;
  for (Eigen::Index j = 0; j < d; ++j) {
    const Vector col = post.col(j);
    const auto acf = autocorrelation(
        {col.data(), static_cast<std::size_t>(col.size())}, lag);
    for (int l = 0; l <= lag; ++l) table(l, j + 1) = acf[l];
  }
  std::vector<std::string> header = {"lag"};
  for (Eigen::Index j = 0; j < d; ++j) header.push_back("x" + std::to_string(j));
  write_matrix_csv(table, path, header);
}

void write_method_files(const std::filesystem::path& dir,
                        const MethodResult& method, bool contours) {
  std::filesystem::create_directories(dir / "chains");
  for (std::size_t r = 0; r < method.replicates.size(); ++r) {
    write_chain(method.replicates[r],
                dir / "chains" /
                    (method.name + "_rep" + std::to_string(r) + ".chain"));
  }
  write_acf_csv(method, dir / ("acf_" + method.name + ".csv"));
  if (contours) {
    write_matrix_csv(kde_contour_grid(method.replicates.front().post_burn_in()),
                     dir / ("contour_" + method.name + ".csv"),
                     {"x", "y", "density"});
  }
}

}  // namespace

json MethodResult::to_json() const {
  json ess_rows = json::array();
  for (Eigen::Index r = 0; r < ess.rows(); ++r) {
    ess_rows.push_back(to_std(ess.row(r).transpose()));
  }
  std::vector<double> acceptance, sec;
  for (const auto& chain : replicates) {
    acceptance.push_back(chain.acceptance_rate);
    sec.push_back(chain.seconds_per_iteration);
  }
  return {{"name", name},
          {"w2", w2},
          {"w2_mean", w2_mean},
          {"ess", ess_rows},
          {"psrf", psrf_per_coord},
          {"mpsrf", mpsrf},
          {"acceptance", acceptance},
          {"acceptance_mean", acceptance_mean},
          {"seconds_per_iteration", sec},
          {"seconds_per_iteration_mean", seconds_per_iteration}};
}

double tune_step_sd(const std::function<double(const Vector&)>& log_target,
                    const Vector& init, double sigma0, RngStream& rng) {
  const auto d = static_cast<int>(init.size());
  constexpr int kPilot = 2000;
  double sigma = sigma0;
  Vector x = init;
  double fx = log_target(x);
  for (int round = 0; round < 2; ++round) {
    Matrix trace(kPilot / 2, d);
    for (int t = 0; t < kPilot; ++t) {
      const Vector proposal = x + sigma * rng.normal_vector(d);
      const double fp = log_target(proposal);
      const bool accept =
          fp != kNegInf &&
          (fx == kNegInf || std::log(rng.uniform()) < std::min(0.0, fp - fx));
      if (accept) {
        x = proposal;
        fx = fp;
      }
      if (t >= kPilot / 2) trace.row(t - kPilot / 2) = x.transpose();
    }
    const Vector mean = trace.colwise().mean().transpose();
    double spread = 0.0;
    for (int j = 0; j < d; ++j) {
      spread += std::sqrt((trace.col(j).array() - mean[j]).square().sum() /
                          static_cast<double>(trace.rows() - 1));
    }
    spread /= d;
    sigma = 2.4 * std::max(spread, 1e-4) / std::sqrt(static_cast<double>(d));
  }
  return sigma;
}

Matrix run_analytic_metropolis(
    const std::function<double(const Vector&)>& log_target, const Vector& init,
    double step_sd, std::int64_t iterations, std::int64_t burn_in,
    RngStream& rng) {
  if (iterations <= burn_in || burn_in < 0) {
    throw std::invalid_argument("run_analytic_metropolis: bad burn-in split");
  }
  if (!(step_sd > 0.0)) {
    throw std::invalid_argument("run_analytic_metropolis: step_sd must be > 0");
  }
  const auto d = static_cast<int>(init.size());
  Vector x = init;
  double fx = log_target(x);
  Matrix out(iterations - burn_in, d);
  for (std::int64_t t = 0; t < iterations; ++t) {
    const Vector proposal = x + step_sd * rng.normal_vector(d);
    const double fp = log_target(proposal);
    const bool accept =
        fp != kNegInf &&
        (fx == kNegInf || std::log(rng.uniform()) < std::min(0.0, fp - fx));
    if (accept) {
      x = proposal;
      fx = fp;
    }
    if (t >= burn_in) out.row(t - burn_in) = x.transpose();
  }
  return out;
}

const MethodResult& Experiment1Result::method(const std::string& name) const {
  for (const auto& m : methods) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("no method named " + name);
}

json Experiment1Result::to_json() const {
  json j = {{"experiment", "1"},
            {"parameters", parameters},
            {"true_theta", to_std(true_theta)},
            {"graph_build_seconds", graph_build_seconds},
            {"methods", json::object()}};
  for (const auto& m : methods) j["methods"][m.name] = m.to_json();
  return j;
}

Experiment1Result run_experiment1(const Experiment1Config& cfg) {
  RngStream root(cfg.seed);
  const auto data = generate_experiment1(root.split(1).seed(), cfg.B, cfg.n);

  const auto build_start = Clock::now();
  const KnnGraph graph = KnnGraph::build(data.prior, 10);
  const double build_seconds = seconds_since(build_start);

  // Reference posterior: Metropolis with the exact mixture prior, ten times
  // the evaluation chain length.
  const auto reference_target = [&data](const Vector& theta) {
    return data.log_prior(theta) + data.model.log_lik(theta);
  };
  RngStream reference_rng = root.split(2);
  const Vector reference_start =
      data.prior.point(reference_rng.uniform_index(data.prior.size()));
  const std::int64_t reference_iterations =
      cfg.reference_multiplier * cfg.iterations;
  const Matrix reference =
      run_analytic_metropolis(reference_target, reference_start, 0.5,
                              reference_iterations, reference_iterations / 2,
                              reference_rng);

  SamplerConfig base;
  base.k = 10;
  base.rho = 0.5;
  base.bandwidth = 1.0;
  base.iterations = cfg.iterations;
  base.burn_in = cfg.burn_in;
  base.step_sd = 0.5;

  const GaussianFit fit = fit_gaussian(data.prior);

  std::vector<ChainOutput> graph_chains, metropolis_chains, gaussian_chains;
  for (int r = 0; r < cfg.replicates; ++r) {
    SamplerConfig c = base;
    c.seed = root.split(10 + r).seed();
    graph_chains.push_back(run_graph_mcmc(data.prior, graph, data.model, c));
    c.seed = root.split(20 + r).seed();
    metropolis_chains.push_back(run_metropolis_rw(data.prior, data.model, c));
    c.seed = root.split(30 + r).seed();
    gaussian_chains.push_back(
        run_gaussian_mcmc(data.prior, fit, data.model, c));
  }

  Experiment1Result result;
  result.true_theta = data.true_theta;
  result.reference_samples = reference;
  result.graph_build_seconds = build_seconds;
  result.methods.push_back(evaluate_method("graph", std::move(graph_chains),
                                           reference, cfg.w2_subsample,
                                           root.split(40)));
  result.methods.push_back(
      evaluate_method("metropolis", std::move(metropolis_chains), reference,
                      cfg.w2_subsample, root.split(41)));
  result.methods.push_back(
      evaluate_method("gaussian", std::move(gaussian_chains), reference,
                      cfg.w2_subsample, root.split(42)));
  result.parameters = {{"seed", cfg.seed},
                       {"B", cfg.B},
                       {"n", cfg.n},
                       {"iterations", cfg.iterations},
                       {"burn_in", cfg.burn_in},
                       {"replicates", cfg.replicates},
                       {"k", 10},
                       {"rho", 0.5},
                       {"bandwidth", 1.0},
                       {"step_sd", 0.5},
                       {"w2_subsample", cfg.w2_subsample},
                       {"reference_iterations", reference_iterations}};

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_json(result.to_json(), cfg.out_dir / "report.json");
    write_matrix_csv(data.prior.rows(), cfg.out_dir / "prior_samples.csv");
    write_matrix_csv(reference, cfg.out_dir / "reference_samples.csv");
    write_matrix_csv(kde_contour_grid(reference),
                     cfg.out_dir / "contour_reference.csv",
                     {"x", "y", "density"});
    for (const auto& m : result.methods) {
      write_method_files(cfg.out_dir, m, true);
    }
  }
  return result;
}

const MethodResult& Experiment2Result::method(const std::string& name) const {
  for (const auto& m : methods) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("no method named " + name);
}

json Experiment2Result::to_json() const {
  json j = {{"experiment", "2"},
            {"parameters", parameters},
            {"graph_build_seconds", graph_build_seconds},
            {"methods", json::object()}};
  for (const auto& m : methods) j["methods"][m.name] = m.to_json();
  return j;
}

Experiment2Result run_experiment2(const Experiment2Config& cfg) {
  if (cfg.reference_iterations - cfg.reference_burn_in < cfg.B) {
    throw std::invalid_argument(
        "run_experiment2: reference run too short to yield B draws");
  }
  RngStream root(cfg.seed);
  const auto data =
      generate_experiment2(root.split(1).seed(), cfg.d, cfg.m, cfg.n);
  const LogisticModel reference_model(data.pop1.design, data.pop1.response);
  const LogisticModel current_model(data.pop2.design, data.pop2.response);

  // Reference-study draws: Metropolis on the analytic reference posterior
  // (Gaussian prior x population-1 likelihood); these become the prior
  // sample set the samplers are allowed to see.
  const auto reference_study_target = [&](const Vector& beta) {
    return data.log_prior(beta) + reference_model.log_lik(beta);
  };
  RngStream tune_rng_1 = root.split(2);
  const double sigma_reference = tune_step_sd(
      reference_study_target, Vector::Zero(cfg.d), 0.1, tune_rng_1);
  RngStream chain_rng_1 = root.split(3);
  Matrix reference_rows = run_analytic_metropolis(
      reference_study_target, Vector::Zero(cfg.d), sigma_reference,
      cfg.reference_iterations, cfg.reference_burn_in, chain_rng_1);
  reference_rows = reference_rows.bottomRows(cfg.B).eval();
  const PriorSampleSet prior = PriorSampleSet::from_rows(reference_rows);

  // True posterior of the current study with informative prior: Gaussian
  // prior x both likelihoods, sampled long for the W2 reference.
  const auto informative_target = [&](const Vector& beta) {
    return data.log_prior(beta) + reference_model.log_lik(beta) +
           current_model.log_lik(beta);
  };
  RngStream tune_rng_2 = root.split(4);
  const double sigma_informative =
      tune_step_sd(informative_target, Vector::Zero(cfg.d), 0.1, tune_rng_2);
  RngStream chain_rng_2 = root.split(5);
  const std::int64_t reference_iterations =
      cfg.reference_multiplier * cfg.iterations;
  const Matrix reference = run_analytic_metropolis(
      informative_target, Vector::Zero(cfg.d), sigma_informative,
      reference_iterations, reference_iterations / 2, chain_rng_2);

  const int k = static_cast<int>(std::ceil(std::sqrt(cfg.B)));
  const auto build_start = Clock::now();
  const KnnGraph graph = KnnGraph::build(prior, k);
  const double build_seconds = seconds_since(build_start);

  SamplerConfig base;
  base.k = k;
  base.rho = 0.5;
  base.bandwidth = 0.04;
  base.iterations = cfg.iterations;
  base.burn_in = cfg.burn_in;
  base.step_sd = 0.02;

  std::vector<ChainOutput> graph_chains, metropolis_chains;
  for (int r = 0; r < cfg.replicates; ++r) {
    SamplerConfig c = base;
    c.seed = root.split(10 + r).seed();
    graph_chains.push_back(run_graph_mcmc(prior, graph, current_model, c));
    c.seed = root.split(20 + r).seed();
    metropolis_chains.push_back(run_metropolis_rw(prior, current_model, c));
  }

  Experiment2Result result;
  result.reference_samples = reference;
  result.graph_build_seconds = build_seconds;
  result.methods.push_back(evaluate_method("graph", std::move(graph_chains),
                                           reference, cfg.w2_subsample,
                                           root.split(40)));
  result.methods.push_back(
      evaluate_method("metropolis", std::move(metropolis_chains), reference,
                      cfg.w2_subsample, root.split(41)));
  result.parameters = {{"seed", cfg.seed},
                       {"d", cfg.d},
                       {"B", cfg.B},
                       {"m", cfg.m},
                       {"n", cfg.n},
                       {"iterations", cfg.iterations},
                       {"burn_in", cfg.burn_in},
                       {"replicates", cfg.replicates},
                       {"k", k},
                       {"rho", 0.5},
                       {"bandwidth", 0.04},
                       {"step_sd", 0.02},
                       {"w2_subsample", cfg.w2_subsample},
                       {"reference_step_sd", sigma_reference},
                       {"informative_step_sd", sigma_informative},
                       {"reference_iterations", reference_iterations}};

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_json(result.to_json(), cfg.out_dir / "report.json");
    write_matrix_csv(prior.rows(), cfg.out_dir / "prior_samples.csv");
    write_matrix_csv(reference, cfg.out_dir / "reference_samples.csv");
    for (const auto& m : result.methods) {
      write_method_files(cfg.out_dir, m, cfg.d == 2);
    }
  }
  return result;
}

json ScalingResult::to_json() const {
  json rows = json::array();
  for (const auto& p : points) {
    rows.push_back({{"B", p.B},
                    {"graph_build_seconds", p.graph_build_seconds},
                    {"graph_seconds_per_iteration",
                     p.graph_seconds_per_iteration},
                    {"metropolis_seconds_per_iteration",
                     p.metropolis_seconds_per_iteration}});
  }
  return {{"experiment", "scaling"}, {"parameters", parameters},
          {"points", rows}};
}

ScalingResult run_scaling_study(const ScalingConfig& cfg) {
  if (cfg.b_values.empty()) {
    throw std::invalid_argument("run_scaling_study: no B values");
  }
  if (!std::is_sorted(cfg.b_values.begin(), cfg.b_values.end())) {
    throw std::invalid_argument("run_scaling_study: B values must be ascending");
  }
  RngStream root(cfg.seed);
  const auto data = generate_experiment2(root.split(1).seed(), cfg.d);
  const LogisticModel reference_model(data.pop1.design, data.pop1.response);
  const LogisticModel current_model(data.pop2.design, data.pop2.response);

  const auto reference_study_target = [&](const Vector& beta) {
    return data.log_prior(beta) + reference_model.log_lik(beta);
  };
  RngStream tune_rng = root.split(2);
  const double sigma_reference = tune_step_sd(
      reference_study_target, Vector::Zero(cfg.d), 0.1, tune_rng);
  const int max_b = cfg.b_values.back();
  RngStream chain_rng = root.split(3);
  const Matrix all_draws = run_analytic_metropolis(
      reference_study_target, Vector::Zero(cfg.d), sigma_reference,
      30000 + max_b, 30000, chain_rng);

  ScalingResult result;
  result.parameters = {{"seed", cfg.seed},
                       {"d", cfg.d},
                       {"b_values", cfg.b_values},
                       {"timing_iterations", cfg.timing_iterations},
                       {"rho", 0.5},
                       {"bandwidth", 0.04},
                       {"step_sd", 0.02}};

  for (std::size_t idx = 0; idx < cfg.b_values.size(); ++idx) {
    const int b = cfg.b_values[idx];
    const PriorSampleSet prior =
        PriorSampleSet::from_rows(all_draws.topRows(b));
    const int k = static_cast<int>(std::ceil(std::sqrt(b)));

    ScalingPoint point;
    point.B = b;
    const auto build_start = Clock::now();
    const KnnGraph graph = KnnGraph::build(prior, k);
    point.graph_build_seconds = seconds_since(build_start);

    SamplerConfig c;
    c.k = k;
    c.rho = 0.5;
    c.bandwidth = 0.04;
    c.step_sd = 0.02;
    c.iterations = cfg.timing_iterations;
    c.burn_in = 0;
    c.seed = root.split(100 + idx).seed();
    point.graph_seconds_per_iteration =
        run_graph_mcmc(prior, graph, current_model, c).seconds_per_iteration;
    c.seed = root.split(200 + idx).seed();
    point.metropolis_seconds_per_iteration =
        run_metropolis_rw(prior, current_model, c).seconds_per_iteration;
    result.points.push_back(point);
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_json(result.to_json(), cfg.out_dir / "report.json");
    Matrix table(static_cast<std::int64_t>(result.points.size()), 4);
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      table(i, 0) = result.points[i].B;
      table(i, 1) = result.points[i].graph_build_seconds;
      table(i, 2) = result.points[i].graph_seconds_per_iteration;
      table(i, 3) = result.points[i].metropolis_seconds_per_iteration;
    }
    write_matrix_csv(table, cfg.out_dir / "timing.csv",
                     {"B", "graph_build_seconds", "graph_seconds_per_iteration",
                      "metropolis_seconds_per_iteration"});
  }
  return result;
}

json OverlapDemoResult::to_json() const {
  return {{"experiment", "overlap"},
          {"parameters", parameters},
          {"iqr_informative", to_std(iqr_informative)},
          {"iqr_uninformative", to_std(iqr_uninformative)},
          {"mean_informative", to_std(mean_informative)},
          {"mean_uninformative", to_std(mean_uninformative)},
          {"mean_reference", to_std(mean_reference)},
          {"acceptance_rate", acceptance_rate}};
}

OverlapDemoResult run_partial_overlap_demo(const OverlapDemoConfig& cfg) {
  RngStream root(cfg.seed);
  const auto data =
      generate_overlap_demo(root.split(1).seed(), cfg.reference_participants,
                            cfg.current_participants, cfg.rounds);
  const LogisticModel reference_model(data.reference_study.design,
                                      data.reference_study.response);
  const LogisticModel current_model(data.current_study.design,
                                    data.current_study.response);

  const auto reference_target = [&](const Vector& beta) {
    return data.log_prior(beta) + reference_model.log_lik(beta);
  };
  const auto uninformative_target = [&](const Vector& beta) {
    return data.log_prior(beta) + current_model.log_lik(beta);
  };

  RngStream tune_ref = root.split(2);
  const double sigma_ref =
      tune_step_sd(reference_target, Vector::Zero(4), 0.1, tune_ref);
  RngStream chain_ref = root.split(3);
  const Matrix reference_draws = run_analytic_metropolis(
      reference_target, Vector::Zero(4), sigma_ref, cfg.reference_iterations,
      cfg.reference_burn_in, chain_ref);

  RngStream tune_unin = root.split(4);
  const double sigma_unin =
      tune_step_sd(uninformative_target, Vector::Zero(4), 0.1, tune_unin);
  RngStream chain_unin = root.split(5);
  const Matrix uninformative = run_analytic_metropolis(
      uninformative_target, Vector::Zero(4), sigma_unin,
      cfg.reference_iterations, cfg.reference_burn_in, chain_unin);

  // Informative posterior: shared (b3, b4) anchored to the reference draws,
  // unique (b1, b2) under its own prior.
  const PriorSampleSet shared =
      PriorSampleSet::from_rows(reference_draws.rightCols(2));
  const int k = static_cast<int>(std::ceil(std::sqrt(shared.size())));
  const KnnGraph graph = KnnGraph::build(shared, k);

  const double s1 = data.prior_sd[0];
  const double s2 = data.prior_sd[1];
  PartialOverlapTarget target;
  target.shared_anchors = &shared;
  target.graph = &graph;
  target.model = &current_model;
  target.unique_dim = 2;
  target.log_prior_unique = [s1, s2](const Vector& u) {
    return -0.5 * (kLog2Pi + u[0] * u[0] / (s1 * s1)) - std::log(s1) -
           0.5 * (kLog2Pi + u[1] * u[1] / (s2 * s2)) - std::log(s2);
  };

  SamplerConfig c;
  c.k = k;
  c.rho = cfg.rho;
  c.bandwidth = cfg.bandwidth;
  c.walk_sd = cfg.walk_sd;
  c.iterations = cfg.iterations;
  c.burn_in = cfg.burn_in;
  c.seed = root.split(6).seed();
  const ChainOutput chain = run_partial_overlap(target, c);

  OverlapDemoResult result;
  result.reference_draws = reference_draws;
  result.uninformative_samples = uninformative;
  result.informative_samples = chain.post_burn_in();
  result.iqr_informative = per_coordinate_iqr(result.informative_samples);
  result.iqr_uninformative = per_coordinate_iqr(result.uninformative_samples);
  result.mean_informative =
      result.informative_samples.colwise().mean().transpose();
  result.mean_uninformative =
      result.uninformative_samples.colwise().mean().transpose();
  result.mean_reference = reference_draws.colwise().mean().transpose();
  result.acceptance_rate = chain.acceptance_rate;
  result.parameters = {{"seed", cfg.seed},
                       {"reference_participants", cfg.reference_participants},
                       {"current_participants", cfg.current_participants},
                       {"rounds", cfg.rounds},
                       {"B", reference_draws.rows()},
                       {"k", k},
                       {"rho", cfg.rho},
                       {"bandwidth", cfg.bandwidth},
                       {"walk_sd", cfg.walk_sd},
                       {"iterations", cfg.iterations},
                       {"burn_in", cfg.burn_in},
                       {"reference_step_sd", sigma_ref},
                       {"uninformative_step_sd", sigma_unin},
                       {"true_beta_reference", to_std(data.true_beta_reference)},
                       {"true_beta_current", to_std(data.true_beta_current)}};

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_json(result.to_json(), cfg.out_dir / "report.json");
    write_matrix_csv(reference_draws, cfg.out_dir / "reference_draws.csv");
    write_matrix_csv(uninformative, cfg.out_dir / "uninformative_samples.csv");
    write_matrix_csv(result.informative_samples,
                     cfg.out_dir / "informative_samples.csv");
    write_matrix_csv(kde_contour_grid(result.informative_samples.rightCols(2)),
                     cfg.out_dir / "contour_informative_shared.csv",
                     {"x", "y", "density"});
    write_matrix_csv(
        kde_contour_grid(result.uninformative_samples.rightCols(2)),
        cfg.out_dir / "contour_uninformative_shared.csv",
        {"x", "y", "density"});
    // quartile summary for boxplot-style comparison
    Matrix box(3, 12);
    const Matrix* sources[3] = {&reference_draws, &uninformative,
                                &result.informative_samples};
    for (int s = 0; s < 3; ++s) {
      for (int j = 0; j < 4; ++j) {
        box(s, 3 * j) = quantile(sources[s]->col(j), 0.25);
        box(s, 3 * j + 1) = quantile(sources[s]->col(j), 0.5);
        box(s, 3 * j + 2) = quantile(sources[s]->col(j), 0.75);
      }
    }
    std::vector<std::string> header;
    for (int j = 1; j <= 4; ++j) {
      header.push_back("b" + std::to_string(j) + "_q25");
      header.push_back("b" + std::to_string(j) + "_median");
      header.push_back("b" + std::to_string(j) + "_q75");
    }
    write_matrix_csv(box, cfg.out_dir / "boxplot_quartiles.csv", header);
  }
  return result;
}

}  // namespace gemcmc
