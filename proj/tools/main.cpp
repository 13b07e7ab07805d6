// Command-line front end: graph construction, the six samplers, diagnostics,
// mixing bounds, and the canned experiments, glued together by CSV/JSON
// files. Every run writes a manifest describing how to reproduce it.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gemcmc/diagnostics.hpp"
#include "gemcmc/experiments.hpp"
#include "gemcmc/io.hpp"
#include "gemcmc/kernel.hpp"
#include "gemcmc/knn_graph.hpp"
#include "gemcmc/model.hpp"
#include "gemcmc/samplers.hpp"
#include "gemcmc/types.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace gemcmc;

fs::path resolve_out_dir(const std::string& out_flag,
                         const std::string& default_name) {
  if (!out_flag.empty()) return fs::path(out_flag);
  if (const char* root = std::getenv("GEMCMC_OUT")) {
    return fs::path(root) / default_name;
  }
  return fs::path(default_name);
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::runtime_error(what + ": unknown key '" + key + "'");
    }
  }
}

Matrix matrix_from_json_or_csv(const json& j, const std::string& inline_key,
                               const std::string& csv_key,
                               const fs::path& base_dir) {
  if (j.contains(inline_key)) {
    const auto rows = j.at(inline_key).get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::runtime_error(inline_key + ": empty matrix");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) {
        throw std::runtime_error(inline_key + ": ragged rows");
      }
      for (std::size_t c = 0; c < rows[i].size(); ++c) m(i, c) = rows[i][c];
    }
    return m;
  }
  if (j.contains(csv_key)) {
    return read_matrix_csv(base_dir / j.at(csv_key).get<std::string>());
  }
  throw std::runtime_error("model config: need '" + inline_key + "' or '" +
                           csv_key + "'");
}

/// Model configs are JSON documents:
///   {"type": "gaussian_mean", "noise_sd": 2.0,
///    "observations": [[...], ...]  or  "observations_csv": "X.csv"}
///   {"type": "logistic",
///    "design": [[...], ...]        or  "design_csv": "X.csv",
///    "response": [0, 1, ...]       or  "response_csv": "y.csv",
///    "sup_log_lik": -12.3 (optional),
///    "likelihood_integrable": true (optional)}
/// Unknown keys are rejected.
std::unique_ptr<TargetModel> load_model(const fs::path& path) {
  const json j = read_json(path);
  const fs::path base = path.parent_path();
  const std::string type = j.at("type").get<std::string>();
  if (type == "gaussian_mean") {
    reject_unknown_keys(
        j, {"type", "noise_sd", "observations", "observations_csv"},
        path.string());
    return std::make_unique<GaussianMeanModel>(
        matrix_from_json_or_csv(j, "observations", "observations_csv", base),
        j.at("noise_sd").get<double>());
  }
  if (type == "logistic") {
    reject_unknown_keys(j,
                        {"type", "design", "design_csv", "response",
                         "response_csv", "sup_log_lik",
                         "likelihood_integrable"},
                        path.string());
    Matrix design = matrix_from_json_or_csv(j, "design", "design_csv", base);
    std::vector<int> response;
    if (j.contains("response")) {
      response = j.at("response").get<std::vector<int>>();
    } else if (j.contains("response_csv")) {
      const Matrix col =
          read_matrix_csv(base / j.at("response_csv").get<std::string>());
      for (Eigen::Index i = 0; i < col.rows(); ++i) {
        response.push_back(static_cast<int>(col(i, 0)));
      }
    } else {
      throw std::runtime_error(path.string() + ": logistic model needs a response");
    }
    auto model =
        std::make_unique<LogisticModel>(std::move(design), std::move(response));
    if (j.contains("sup_log_lik")) {
      model->set_sup_log_lik(j.at("sup_log_lik").get<double>());
    }
    if (j.contains("likelihood_integrable")) {
      model->declare_likelihood_integrable(
          j.at("likelihood_integrable").get<bool>());
    }
    return model;
  }
  throw std::runtime_error(path.string() + ": unknown model type '" + type + "'");
}

struct SampleFlags {
  std::string prior_path;
  std::string model_path;
  std::string graph_path;
  std::string overlap_path;
  std::string out;
  SamplerConfig cfg;
};

void add_sampler_flags(CLI::App* cmd, SampleFlags& flags, bool needs_model) {
  cmd->add_option("--prior", flags.prior_path, "prior samples CSV")->required();
  if (needs_model) {
    cmd->add_option("--model", flags.model_path, "model config JSON")->required();
  }
  cmd->add_option("--seed", flags.cfg.seed, "RNG seed");
  cmd->add_option("--iterations", flags.cfg.iterations, "chain length");
  cmd->add_option("--burn-in", flags.cfg.burn_in, "burn-in iterations");
  cmd->add_option("--k", flags.cfg.k, "number of nearest neighbors");
  cmd->add_option("--rho", flags.cfg.rho, "restart probability");
  cmd->add_option("--bandwidth", flags.cfg.bandwidth, "kernel bandwidth h");
  cmd->add_option("--step-sd", flags.cfg.step_sd,
                  "random-walk step standard deviation");
  cmd->add_option("--gamma", flags.cfg.gamma, "adaptive KDE mixture weight");
  cmd->add_option("--epsilon-mass", flags.cfg.epsilon_mass,
                  "adaptive flat-component density");
  cmd->add_option("--rho-prime", flags.cfg.rho_prime,
                  "adaptive branch probability");
  cmd->add_option("--out", flags.out, "output directory");
}

json sampler_config_json(const SamplerConfig& c) {
  json j = {{"k", c.k},
            {"rho", c.rho},
            {"bandwidth", c.bandwidth},
            {"iterations", c.iterations},
            {"burn_in", c.burn_in},
            {"seed", c.seed},
            {"step_sd", c.step_sd}};
  if (std::isfinite(c.walk_sd)) j["walk_sd"] = c.walk_sd;
  if (std::isfinite(c.gamma)) j["gamma"] = c.gamma;
  if (std::isfinite(c.epsilon_mass)) j["epsilon_mass"] = c.epsilon_mass;
  if (std::isfinite(c.rho_prime)) j["rho_prime"] = c.rho_prime;
  return j;
}

json chain_summary_json(const ChainOutput& out) {
  return {{"iterations", out.iterations()},
          {"burn_in", out.burn_in},
          {"acceptance_rate", out.acceptance_rate},
          {"seconds_per_iteration", out.seconds_per_iteration},
          {"total_seconds", out.total_seconds},
          {"likelihood_evals", out.likelihood_evals},
          {"kernel_evals", out.kernel_evals}};
}

int run_sample(const std::string& variant, SampleFlags& flags) {
  const fs::path out_dir = resolve_out_dir(flags.out, "sample_" + variant);
  fs::create_directories(out_dir);
  const PriorSampleSet prior = parse_prior_samples(flags.prior_path);

  json manifest = {{"command", "sample " + variant},
                   {"prior", flags.prior_path},
                   {"model", flags.model_path},
                   {"config", sampler_config_json(flags.cfg)}};

  ChainOutput chain;
  double graph_build_seconds = 0.0;

  // `metropolis` and `gaussian` take the Metropolis step-size meaning of
  // --step-sd; `overlap` and `adaptive` use it as their walk step sigma.
  if (variant == "overlap") {
    const json oj = read_json(flags.overlap_path);
    reject_unknown_keys(oj,
                        {"unique_dim", "shared_columns", "unique_prior_mean",
                         "unique_prior_sd", "unique_init"},
                        flags.overlap_path);
    const int unique_dim = oj.at("unique_dim").get<int>();
    const auto shared_cols = oj.at("shared_columns").get<std::vector<int>>();
    const auto prior_mean =
        oj.at("unique_prior_mean").get<std::vector<double>>();
    const auto prior_sd = oj.at("unique_prior_sd").get<std::vector<double>>();
    if (static_cast<int>(prior_mean.size()) != unique_dim ||
        static_cast<int>(prior_sd.size()) != unique_dim) {
      throw std::runtime_error("overlap config: prior size mismatch");
    }
    Matrix shared_rows(prior.size(), shared_cols.size());
    const Matrix full_rows = prior.rows();
    for (std::size_t c = 0; c < shared_cols.size(); ++c) {
      shared_rows.col(c) = full_rows.col(shared_cols[c]);
    }
    const PriorSampleSet shared = PriorSampleSet::from_rows(shared_rows);
    const auto model = load_model(flags.model_path);
    const KnnGraph graph = KnnGraph::build(shared, flags.cfg.k);
    flags.cfg.walk_sd = flags.cfg.step_sd;

    PartialOverlapTarget target;
    target.shared_anchors = &shared;
    target.graph = &graph;
    target.model = model.get();
    target.unique_dim = unique_dim;
    target.log_prior_unique = [prior_mean, prior_sd](const Vector& u) {
      double ll = 0.0;
      for (std::size_t i = 0; i < prior_mean.size(); ++i) {
        const double z = (u[static_cast<Eigen::Index>(i)] - prior_mean[i]) /
                         prior_sd[i];
        ll += -0.5 * (kLog2Pi + z * z) - std::log(prior_sd[i]);
      }
      return ll;
    };
    if (oj.contains("unique_init")) {
      const auto init = oj.at("unique_init").get<std::vector<double>>();
      target.unique_init =
          Eigen::Map<const Vector>(init.data(), init.size());
    }
    chain = run_partial_overlap(target, flags.cfg);
  } else {
    const auto model = load_model(flags.model_path);
    if (variant == "metropolis") {
      chain = run_metropolis_rw(prior, *model, flags.cfg);
    } else if (variant == "gaussian") {
      const GaussianFit fit = fit_gaussian(prior);
      chain = run_gaussian_mcmc(prior, fit, *model, flags.cfg);
    } else {
      KnnGraph graph = [&] {
        if (!flags.graph_path.empty()) return read_graph(flags.graph_path);
        const auto start = std::chrono::steady_clock::now();
        KnnGraph g = KnnGraph::build(prior, flags.cfg.k);
        graph_build_seconds = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
        return g;
      }();
      flags.cfg.k = graph.k();
      if (variant == "graph") {
        chain = run_graph_mcmc(prior, graph, *model, flags.cfg);
      } else if (variant == "discretized") {
        chain = run_discretized(prior, graph, *model, flags.cfg);
      } else if (variant == "adaptive") {
        flags.cfg.walk_sd = flags.cfg.step_sd;
        chain = run_adaptive(prior, graph, *model, flags.cfg);
      } else {
        throw std::runtime_error("unknown sample variant " + variant);
      }
    }
  }

  write_chain(chain, out_dir / "chain.csv");
  manifest["graph_build_seconds"] = graph_build_seconds;
  manifest["result"] = chain_summary_json(chain);
  if (!flags.overlap_path.empty()) manifest["overlap"] = flags.overlap_path;
  write_manifest(out_dir, manifest);
  std::cout << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-guided MCMC sampling for sample-based priors"};
  app.require_subcommand(1);

  // graph build
  auto* graph_cmd = app.add_subcommand("graph", "kNN graph operations");
  graph_cmd->require_subcommand(1);
  auto* graph_build = graph_cmd->add_subcommand("build", "construct the union-kNN graph");
  std::string gb_prior, gb_out, gb_backend = "auto";
  int gb_k = 10;
  graph_build->add_option("--prior", gb_prior, "prior samples CSV")->required();
  graph_build->add_option("--k", gb_k, "number of nearest neighbors");
  graph_build->add_option("--backend", gb_backend, "auto|brute|kdtree")
      ->check(CLI::IsMember({"auto", "brute", "kdtree"}));
  graph_build->add_option("--out", gb_out, "output directory");

  // sample <variant>
  auto* sample_cmd = app.add_subcommand("sample", "run one chain");
  sample_cmd->require_subcommand(1);
  const std::vector<std::string> variants = {"graph",    "discretized",
                                             "metropolis", "gaussian",
                                             "overlap",  "adaptive"};
  std::map<std::string, SampleFlags> sample_flags;
  for (const auto& v : variants) {
    auto* cmd = sample_cmd->add_subcommand(v, v + " sampler");
    auto& flags = sample_flags[v];
    add_sampler_flags(cmd, flags, true);
    if (v == "graph" || v == "discretized" || v == "adaptive") {
      cmd->add_option("--graph", flags.graph_path,
                      "prebuilt graph JSON (built on the fly when absent)");
    }
    if (v == "overlap") {
      cmd->add_option("--overlap", flags.overlap_path,
                      "overlap config JSON (unique block prior and layout)")
          ->required();
    }
  }

  // diagnose
  auto* diag_cmd = app.add_subcommand("diagnose", "chain diagnostics report");
  std::vector<std::string> diag_chains;
  std::string diag_reference, diag_out;
  int diag_max_lag = 50, diag_w2_m = 1000;
  std::uint64_t diag_seed = 0;
  diag_cmd->add_option("--chain", diag_chains, "chain file (repeatable)")
      ->required();
  diag_cmd->add_option("--reference", diag_reference,
                       "reference samples CSV for the W2 column");
  diag_cmd->add_option("--max-lag", diag_max_lag, "ACF maximum lag");
  diag_cmd->add_option("--w2-subsample", diag_w2_m, "W2 subsample size");
  diag_cmd->add_option("--seed", diag_seed, "W2 subsample seed");
  diag_cmd->add_option("--out", diag_out, "output directory");

  // wasserstein
  auto* w2_cmd = app.add_subcommand("wasserstein",
                                    "exact empirical 2-Wasserstein distance");
  std::string w2_a, w2_b, w2_out;
  int w2_m = 1000;
  std::uint64_t w2_seed = 0;
  w2_cmd->add_option("--a", w2_a, "first sample CSV")->required();
  w2_cmd->add_option("--b", w2_b, "second sample CSV")->required();
  w2_cmd->add_option("--subsample", w2_m, "points per side");
  w2_cmd->add_option("--seed", w2_seed, "subsample seed");
  w2_cmd->add_option("--out", w2_out, "output directory");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Doeblin mixing-time bounds");
  std::string bd_prior, bd_model, bd_kind = "discrete", bd_out;
  double bd_rho = 0.5, bd_eps = 0.01, bd_bandwidth = 1.0;
  std::int64_t bd_mc = 100000;
  std::uint64_t bd_seed = 0;
  bounds_cmd->add_option("--prior", bd_prior, "prior samples CSV")->required();
  bounds_cmd->add_option("--model", bd_model, "model config JSON")->required();
  bounds_cmd->add_option("--rho", bd_rho, "restart probability");
  bounds_cmd->add_option("--epsilon", bd_eps, "target TV level");
  bounds_cmd->add_option("--kind", bd_kind, "discrete|continuous")
      ->check(CLI::IsMember({"discrete", "continuous"}));
  bounds_cmd->add_option("--bandwidth", bd_bandwidth,
                         "kernel bandwidth (continuous bound)");
  bounds_cmd->add_option("--mc-samples", bd_mc,
                         "Monte Carlo draws for the overlap integral");
  bounds_cmd->add_option("--seed", bd_seed, "Monte Carlo seed");
  bounds_cmd->add_option("--out", bd_out, "output directory");

  // experiment <id>
  auto* exp_cmd = app.add_subcommand("experiment", "canned studies");
  exp_cmd->require_subcommand(1);
  auto* exp1 = exp_cmd->add_subcommand("1", "Gaussian-mixture-prior study");
  auto* exp2 = exp_cmd->add_subcommand("2", "two-population logistic study");
  auto* exps = exp_cmd->add_subcommand("scaling", "per-iteration timing vs B");
  auto* expo = exp_cmd->add_subcommand("overlap", "partial-overlap demo");
  std::uint64_t e_seed1 = Experiment1Config{}.seed,
                e_seed2 = Experiment2Config{}.seed,
                e_seeds = ScalingConfig{}.seed,
                e_seedo = OverlapDemoConfig{}.seed;
  std::string e_out1, e_out2, e_outs, e_outo;
  int e2_d = 2;
  std::vector<int> es_b = ScalingConfig{}.b_values;
  std::int64_t e1_iters = Experiment1Config{}.iterations;
  std::int64_t e2_iters = Experiment2Config{}.iterations;
  exp1->add_option("--seed", e_seed1, "experiment seed");
  exp1->add_option("--iterations", e1_iters, "chain length per method");
  exp1->add_option("--out", e_out1, "output directory");
  exp2->add_option("--seed", e_seed2, "experiment seed");
  exp2->add_option("--d", e2_d, "parameter dimension");
  exp2->add_option("--iterations", e2_iters, "chain length per method");
  exp2->add_option("--out", e_out2, "output directory");
  exps->add_option("--seed", e_seeds, "experiment seed");
  exps->add_option("--b-list", es_b, "ascending prior sample sizes");
  exps->add_option("--out", e_outs, "output directory");
  expo->add_option("--seed", e_seedo, "experiment seed");
  expo->add_option("--out", e_outo, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (graph_build->parsed()) {
      const fs::path out_dir = resolve_out_dir(gb_out, "graph");
      fs::create_directories(out_dir);
      const PriorSampleSet prior = parse_prior_samples(gb_prior);
      const KnnBackend backend = gb_backend == "brute"
                                     ? KnnBackend::kBruteForce
                                     : gb_backend == "kdtree"
                                           ? KnnBackend::kKdTree
                                           : KnnBackend::kAuto;
      const auto start = std::chrono::steady_clock::now();
      const KnnGraph graph = KnnGraph::build(prior, gb_k, backend);
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      write_graph(graph, out_dir / "graph.json");
      write_manifest(out_dir, {{"command", "graph build"},
                               {"prior", gb_prior},
                               {"k", gb_k},
                               {"backend", gb_backend},
                               {"build_seconds", seconds}});
      std::cout << out_dir.string() << "\n";
      return 0;
    }

    for (const auto& v : variants) {
      auto* cmd = sample_cmd->get_subcommand(v);
      if (cmd->parsed()) return run_sample(v, sample_flags[v]);
    }

    if (diag_cmd->parsed()) {
      const fs::path out_dir = resolve_out_dir(diag_out, "diagnostics");
      fs::create_directories(out_dir);
      std::vector<ChainOutput> chains;
      for (const auto& path : diag_chains) chains.push_back(read_chain(path));
      std::optional<Matrix> reference;
      if (!diag_reference.empty()) reference = read_matrix_csv(diag_reference);
      const DiagnosticsReport report =
          diagnose(chains, diag_max_lag, reference, diag_w2_m, diag_seed);

      json ess_rows = json::array();
      for (Eigen::Index r = 0; r < report.ess_per_chain.rows(); ++r) {
        std::vector<double> row(report.ess_per_chain.cols());
        for (Eigen::Index c = 0; c < report.ess_per_chain.cols(); ++c) {
          row[c] = report.ess_per_chain(r, c);
        }
        ess_rows.push_back(row);
      }
      json jr = {{"ess", report.ess},
                 {"ess_per_chain", ess_rows},
                 {"psrf", report.psrf_per_coord},
                 {"mpsrf", report.mpsrf},
                 {"acceptance_rate", report.acceptance_rate}};
      if (!diag_reference.empty()) {
        jr["w2"] = report.w2;
        jr["w2_subsample"] = report.w2_subsample;
        jr["w2_seed"] = report.w2_seed;
      }
      write_json(jr, out_dir / "diagnostics.json");
      Matrix acf_table(report.acf.rows(), report.acf.cols() + 1);
      for (Eigen::Index l = 0; l < report.acf.rows(); ++l) {
        acf_table(l, 0) = static_cast<double>(l);
        acf_table.row(l).tail(report.acf.cols()) = report.acf.row(l);
      }
      std::vector<std::string> header = {"lag"};
      for (Eigen::Index j = 0; j < report.acf.cols(); ++j) {
        header.push_back("x" + std::to_string(j));
      }
      write_matrix_csv(acf_table, out_dir / "acf.csv", header);
      write_manifest(out_dir, {{"command", "diagnose"},
                               {"chains", diag_chains},
                               {"reference", diag_reference},
                               {"max_lag", diag_max_lag},
                               {"w2_subsample", diag_w2_m},
                               {"seed", diag_seed}});
      std::cout << jr.dump(2) << "\n";
      return 0;
    }

    if (w2_cmd->parsed()) {
      const fs::path out_dir = resolve_out_dir(w2_out, "wasserstein");
      fs::create_directories(out_dir);
      const Matrix a = read_matrix_csv(w2_a);
      const Matrix b = read_matrix_csv(w2_b);
      const int m = std::min<int>(w2_m, static_cast<int>(std::min(a.rows(), b.rows())));
      const double w2 = wasserstein2(a, b, m, w2_seed);
      const json jr = {
          {"w2", w2}, {"subsample", m}, {"seed", w2_seed}};
      write_json(jr, out_dir / "wasserstein.json");
      write_manifest(out_dir, {{"command", "wasserstein"},
                               {"a", w2_a},
                               {"b", w2_b},
                               {"subsample", m},
                               {"seed", w2_seed}});
      std::cout << jr.dump(2) << "\n";
      return 0;
    }

    if (bounds_cmd->parsed()) {
      const fs::path out_dir = resolve_out_dir(bd_out, "bounds");
      fs::create_directories(out_dir);
      const PriorSampleSet prior = parse_prior_samples(bd_prior);
      const auto model = load_model(bd_model);
      MixingBound bound;
      if (bd_kind == "discrete") {
        bound = mixing_bound_discrete(prior, *model, bd_rho, bd_eps);
      } else {
        const KernelSpec spec(bd_bandwidth, prior.dim());
        bound = mixing_bound_continuous(prior, *model, spec, bd_rho, bd_eps,
                                        bd_mc, bd_seed);
      }
      json jr = {{"kind", bd_kind},
                 {"bound_iterations", bound.bound},
                 {"epsilon", bound.epsilon},
                 {"rho", bound.rho},
                 {"log_numerator", bound.log_numerator},
                 {"log_denominator", bound.log_denominator}};
      if (bd_kind == "continuous") {
        jr["mc_samples"] = bound.mc_samples;
        jr["mc_relative_se"] = bound.mc_relative_se;
        jr["bandwidth"] = bd_bandwidth;
      }
      write_json(jr, out_dir / "bounds.json");
      write_manifest(out_dir, {{"command", "bounds"},
                               {"prior", bd_prior},
                               {"model", bd_model},
                               {"kind", bd_kind},
                               {"rho", bd_rho},
                               {"epsilon", bd_eps},
                               {"bandwidth", bd_bandwidth},
                               {"mc_samples", bd_mc},
                               {"seed", bd_seed}});
      std::cout << jr.dump(2) << "\n";
      return 0;
    }

    if (exp1->parsed()) {
      Experiment1Config cfg;
      cfg.seed = e_seed1;
      cfg.iterations = e1_iters;
      cfg.burn_in = e1_iters / 2;
      cfg.out_dir = resolve_out_dir(e_out1, "experiment1");
      const auto result = run_experiment1(cfg);
      write_manifest(cfg.out_dir,
                     {{"command", "experiment 1"}, {"parameters", result.parameters}});
      std::cout << result.to_json().dump(2) << "\n";
      return 0;
    }
    if (exp2->parsed()) {
      Experiment2Config cfg;
      cfg.seed = e_seed2;
      cfg.d = e2_d;
      cfg.iterations = e2_iters;
      cfg.burn_in = e2_iters / 2;
      cfg.out_dir = resolve_out_dir(e_out2, "experiment2_d" + std::to_string(e2_d));
      const auto result = run_experiment2(cfg);
      write_manifest(cfg.out_dir,
                     {{"command", "experiment 2"}, {"parameters", result.parameters}});
      std::cout << result.to_json().dump(2) << "\n";
      return 0;
    }
    if (exps->parsed()) {
      ScalingConfig cfg;
      cfg.seed = e_seeds;
      cfg.b_values = es_b;
      cfg.out_dir = resolve_out_dir(e_outs, "scaling");
      const auto result = run_scaling_study(cfg);
      write_manifest(cfg.out_dir,
                     {{"command", "experiment scaling"},
                      {"parameters", result.parameters}});
      std::cout << result.to_json().dump(2) << "\n";
      return 0;
    }
    if (expo->parsed()) {
      OverlapDemoConfig cfg;
      cfg.seed = e_seedo;
      cfg.out_dir = resolve_out_dir(e_outo, "overlap_demo");
      const auto result = run_partial_overlap_demo(cfg);
      write_manifest(cfg.out_dir,
                     {{"command", "experiment overlap"},
                      {"parameters", result.parameters}});
      std::cout << result.to_json().dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand executed\n";
  return 1;
}
