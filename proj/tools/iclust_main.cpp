// Command-line front end: fit / cut / coef / simulate / bench.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "iclust/errors.hpp"
#include "iclust/factory.hpp"
#include "iclust/hierarchy.hpp"
#include "iclust/io.hpp"
#include "iclust/models/diag_gmm.hpp"
#include "iclust/models/sbm.hpp"
#include "iclust/optim.hpp"
#include "iclust/sim.hpp"

namespace {

using namespace iclust;

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("ICL_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::map<std::string, double> parse_overrides(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + kv);
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--set value is not a number: " + kv);
    }
  }
  return out;
}

nlohmann::json hierarchy_json(const HierarchyPath& path) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : path.steps) {
    steps.push_back({{"level", s.level},
                     {"left", s.left},
                     {"right", s.right},
                     {"delta_obs", s.delta_obs},
                     {"log_alpha", s.log_alpha},
                     {"icl_obs_after", s.icl_obs_after},
                     {"height", s.height}});
  }
  return nlohmann::json{{"steps", steps},
                        {"leaf_order", path.leaf_order},
                        {"dendrogram", dendrogram_json(path)},
                        {"newick", dendrogram_newick(path)}};
}

struct FitOptions {
  std::string input;
  std::string model = "auto";
  std::string alg = "hybrid";
  std::string orientation = "auto";
  double alpha = 1.0;
  int k_init = 20;
  std::uint64_t seed = 0;
  int threads = 0;
  int pop_size = 20;
  int nb_max_gen = 10;
  double prob_mutation = 0.25;
  int kmax = 100;
  int nb_start = 10;
  std::vector<std::string> sets;
  std::string out = "fit.json";
};

int run_fit(const FitOptions& opt) {
  std::optional<ModelKind> kind;
  if (opt.model != "auto") kind = model_kind_from_string(opt.model);
  std::optional<bool> directed;
  if (opt.orientation == "directed") directed = true;
  if (opt.orientation == "undirected") directed = false;

  Dataset ds = load_dataset(opt.input, kind, directed);
  auto overrides = parse_overrides(opt.sets);
  auto model = build_model(ds, overrides);

  const int threads = resolve_threads(opt.threads);
#ifdef _OPENMP
  omp_set_num_threads(threads);  // also caps the hierarchy's pair tables
#endif
  if (opt.alpha <= 0.0) throw ConfigError("alpha must be > 0");
  if (opt.k_init < 1) throw ConfigError("K must be >= 1");

  GaResult res;
  if (opt.alg == "hybrid" || opt.alg == "genetic") {
    GaParams params;
    params.pop_size = opt.pop_size;
    params.nb_max_gen = opt.nb_max_gen;
    params.prob_mutation = opt.prob_mutation;
    params.kmax = opt.kmax;
    params.seed = opt.seed;
    params.threads = threads;
    res = opt.alg == "hybrid" ? hybrid_ga(*model, params, opt.alpha, opt.k_init)
                              : genetic_ga(*model, params, opt.alpha, opt.k_init);
  } else if (opt.alg == "multistart") {
    MultistartParams params;
    params.nb_start = opt.nb_start;
    params.seed = opt.seed;
    params.threads = threads;
    res = multistart(*model, params, opt.alpha, opt.k_init);
  } else {
    throw ConfigError("unknown algorithm: " + opt.alg);
  }

  HierarchyPath path = build_path(*model, res.best);

  FitResult fit;
  fit.model = ds.views.size() > 1 ? "combined" : to_string(ds.views.front().kind);
  fit.algorithm = opt.alg;
  fit.alpha = opt.alpha;
  fit.seed = opt.seed;
  fit.n = res.best.part.n();
  fit.k = res.best.part.k();
  fit.labels = res.best.part.labels();
  fit.icl = res.best.icl;
  fit.prior = model->prior_json();
  fit.map_estimates = model->map_estimates(*res.best.stats);
  fit.map_estimates["pi"] = [&] {
    // MAP of the integrated proportions: mode of Dirichlet(alpha + n_k)
    // when defined, otherwise posterior mean.
    const auto& sizes = res.best.part.sizes();
    const int k = res.best.part.k();
    const int n = res.best.part.n();
    std::vector<double> pi(k);
    bool mode_ok = opt.alpha + *std::min_element(sizes.begin(), sizes.end()) > 1.0;
    for (int c = 0; c < k; ++c) {
      pi[c] = mode_ok ? (sizes[c] + opt.alpha - 1.0) / (n + k * opt.alpha - k)
                      : (sizes[c] + opt.alpha) / (n + k * opt.alpha);
    }
    return pi;
  }();
  fit.hierarchy = hierarchy_json(path);
  fit.history = res.history;
  fit.data_info = data_info_json(ds);
  fit.config = {{"input", opt.input},       {"K_init", opt.k_init},
                {"pop_size", opt.pop_size}, {"nb_max_gen", opt.nb_max_gen},
                {"prob_mutation", opt.prob_mutation}, {"Kmax", opt.kmax},
                {"nb_start", opt.nb_start}};
  save_fit_result(fit, opt.out);

  std::cout << "model: " << fit.model << "  algorithm: " << fit.algorithm << '\n';
  std::cout << "K: " << fit.k << '\n';
  std::cout << "ICL: " << fit.icl.total << "  (obs " << fit.icl.obs_term << ", partition "
            << fit.icl.partition_term << ")\n";
  std::cout << "sizes:";
  for (int s : res.best.part.sizes()) std::cout << ' ' << s;
  std::cout << '\n' << "written: " << opt.out << '\n';
  return 0;
}

int run_cut(const std::string& fit_path, int k, const std::string& out) {
  FitResult fit = load_fit_result(fit_path);
  if (k < 1 || k > fit.k) throw ConfigError("cut level must be in [1, K*]");
  Partition part = Partition::from_labels(fit.labels);
  for (const auto& step : fit.hierarchy.at("steps")) {
    if (part.k() <= k) break;
    part.merge(step.at("left").get<int>(), step.at("right").get<int>());
  }
  write_labels(part.labels(), out);
  std::cout << "K: " << part.k() << '\n' << "written: " << out << '\n';
  return 0;
}

int run_coef(const std::string& fit_path, const std::string& view, const std::string& out) {
  FitResult fit = load_fit_result(fit_path);
  nlohmann::json params = fit.map_estimates;
  if (!view.empty()) {
    if (fit.model != "combined") throw ConfigError("--view is only valid for combined fits");
    if (!params.contains(view)) throw ConfigError("unknown view: " + view);
    params = params[view];
  }
  std::ofstream os(out);
  if (!os) throw InputError("cannot write file: " + out);
  os << params.dump(2) << '\n';
  std::cout << "written: " << out << '\n';
  return 0;
}

int run_simulate(const std::string& spec_path, std::uint64_t seed, const std::string& prefix) {
  SimSpec spec = load_sim_spec(spec_path);
  Rng rng(seed);
  std::vector<int> labels;
  std::string data_path;
  if (spec.kind == ModelKind::sbm) {
    auto [graph, lab] = rsbm(spec.sbm, rng);
    labels = lab;
    data_path = prefix + "_edges.txt";
    write_edge_list(*graph, data_path);
  } else if (spec.kind == ModelKind::gmm) {
    auto [data, lab] = rgmm(spec.gmm, rng);
    labels = lab;
    data_path = prefix + "_data.csv";
    write_continuous_csv(*data, data_path);
  } else {
    auto [data, lab] = rlca(spec.lca, rng);
    labels = lab;
    data_path = prefix + "_data.csv";
    write_categorical_csv(*data, data_path);
  }
  write_labels(labels, prefix + "_labels.txt");
  std::cout << "written: " << data_path << ", " << prefix + "_labels.txt" << '\n';
  return 0;
}

// One swap epoch timed on generated instances; CSV (n, edges_or_cells, K,
// seconds). SBM grids vary the edge count at fixed expected degree; the
// diagonal GMM grid varies the number of rows.
int run_bench(const std::string& model, const std::vector<long long>& grid,
              std::uint64_t seed, int reps, const std::string& out) {
  std::ofstream os(out);
  if (!os) throw InputError("cannot write file: " + out);
  os << "n,edges_or_cells,K,seconds\n";
  os.precision(10);
  const int k_init = 10;

  for (std::size_t g = 0; g < grid.size(); ++g) {
    Rng rng(derive_seed(seed, g, 0));
    std::unique_ptr<SearchState> state;
    std::shared_ptr<const ObsModel> obs_model;
    long long n = 0, cells = 0;

    if (model == "sbm") {
      // Planted partition with 4 equiprobable clusters and average degree
      // ~25, so the node count scales with the edge target.
      const long long target_edges = grid[g];
      n = std::max<long long>(200, 2 * target_edges / 25);
      SbmSpec spec;
      spec.n = static_cast<int>(n);
      spec.pi.assign(4, 0.25);
      // Split the edge budget between diagonal and off-diagonal blocks.
      const double total_pairs = 0.5 * static_cast<double>(n) * (n - 1);
      const double diag_pairs = total_pairs / 4.0;
      const double p_in = 0.8 * target_edges / diag_pairs;
      const double p_out = 0.2 * target_edges / (total_pairs - diag_pairs);
      spec.theta = Eigen::MatrixXd::Constant(4, 4, std::min(1.0, p_out));
      for (int c = 0; c < 4; ++c) spec.theta(c, c) = std::min(1.0, p_in);
      auto [graph, lab] = rsbm(spec, rng);
      cells = graph->edge_count();
      obs_model = std::make_shared<SbmModel>(graph, SbmPrior{});
    } else if (model == "diaggmm") {
      n = grid[g];
      GmmSpec spec;
      spec.n = static_cast<int>(n);
      const int p = 10;
      spec.pi.assign(3, 1.0 / 3.0);
      for (int c = 0; c < 3; ++c) {
        spec.means.push_back(Eigen::VectorXd::Constant(p, 3.0 * c));
        spec.covs.push_back(Eigen::MatrixXd::Identity(p, p));
      }
      auto [data, lab] = rgmm(spec, rng);
      cells = static_cast<long long>(n) * p;
      obs_model = std::make_shared<DiagGmmModel>(data, DiagGmmPrior::from_data(*data));
    } else {
      throw ConfigError("bench model must be sbm or diaggmm");
    }

    PartitionTermCache ptc(static_cast<int>(n), 1.0);
    Rng init_rng(derive_seed(seed, g, 1));
    SearchState st = make_state(*obs_model, Partition::random(static_cast<int>(n), k_init,
                                                              init_rng), ptc);
    // Each rep times one epoch from the same freshly cloned state; the
    // median damps scheduler noise.
    std::vector<double> times(reps);
    for (int r = 0; r < reps; ++r) {
      SearchState run_state(st);
      Rng epoch_rng(derive_seed(seed, g, 2 + r));
      const auto t0 = std::chrono::steady_clock::now();
      swap_epoch(run_state, *obs_model, ptc, epoch_rng);
      const auto t1 = std::chrono::steady_clock::now();
      times[r] = std::chrono::duration<double>(t1 - t0).count();
    }
    std::sort(times.begin(), times.end());
    const double seconds = times[times.size() / 2];
    os << n << ',' << cells << ',' << k_init << ',' << seconds << '\n';
    std::cout << "n=" << n << " size=" << cells << " K=" << k_init << " epoch=" << seconds
              << "s\n";
  }
  std::cout << "written: " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-ICL model-based clustering with a hybrid genetic algorithm"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* cfit = app.add_subcommand("fit", "cluster a dataset and write a fit result");
  cfit->add_option("--input", fit.input, "dataset file (CSV, edge list, MatrixMarket, manifest)")
      ->required();
  cfit->add_option("--model", fit.model, "auto|sbm|gmm|diaggmm|lca|mom|combined");
  cfit->add_option("--alg", fit.alg, "hybrid|genetic|multistart");
  cfit->add_option("--orientation", fit.orientation, "auto|directed|undirected (graphs)");
  cfit->add_option("--alpha", fit.alpha, "Dirichlet concentration over proportions");
  cfit->add_option("--K", fit.k_init, "initial number of clusters");
  cfit->add_option("--seed", fit.seed, "random seed");
  cfit->add_option("--threads", fit.threads, "worker threads (ICL_THREADS fallback)");
  cfit->add_option("--pop-size", fit.pop_size, "GA population size");
  cfit->add_option("--gens", fit.nb_max_gen, "GA max generations");
  cfit->add_option("--prob-mutation", fit.prob_mutation, "GA mutation probability");
  cfit->add_option("--Kmax", fit.kmax, "maximum number of clusters");
  cfit->add_option("--nb-start", fit.nb_start, "multistart chains");
  cfit->add_option("--set", fit.sets, "hyperparameter override key=value (repeatable)");
  cfit->add_option("--out", fit.out, "output fit-result path");

  std::string cut_fit, cut_out = "labels.txt";
  int cut_k = 1;
  auto* ccut = app.add_subcommand("cut", "extract the partition at a coarser level");
  ccut->add_option("--fit", cut_fit, "fit-result path")->required();
  ccut->add_option("--K", cut_k, "target number of clusters")->required();
  ccut->add_option("--out", cut_out, "labels output path");

  std::string coef_fit, coef_view, coef_out = "coef.json";
  auto* ccoef = app.add_subcommand("coef", "extract MAP parameter estimates");
  ccoef->add_option("--fit", coef_fit, "fit-result path")->required();
  ccoef->add_option("--view", coef_view, "view name (combined fits)");
  ccoef->add_option("--out", coef_out, "parameters output path");

  std::string sim_spec, sim_prefix = "sim";
  std::uint64_t sim_seed = 0;
  auto* csim = app.add_subcommand("simulate", "draw a dataset from a generative spec");
  csim->add_option("--spec", sim_spec, "JSON spec path")->required();
  csim->add_option("--seed", sim_seed, "random seed");
  csim->add_option("--out", sim_prefix, "output file prefix");

  std::string bench_model = "sbm", bench_out = "bench.csv";
  std::vector<long long> bench_grid;
  std::uint64_t bench_seed = 0;
  int bench_reps = 1;
  auto* cbench = app.add_subcommand("bench", "time one swap epoch across instance sizes");
  cbench->add_option("--model", bench_model, "sbm|diaggmm");
  cbench->add_option("--grid", bench_grid, "instance sizes (edges for sbm, rows for diaggmm)")
      ->required();
  cbench->add_option("--seed", bench_seed, "random seed");
  cbench->add_option("--reps", bench_reps, "epochs averaged per grid point");
  cbench->add_option("--out", bench_out, "timing CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cfit) return run_fit(fit);
    if (*ccut) return run_cut(cut_fit, cut_k, cut_out);
    if (*ccoef) return run_coef(coef_fit, coef_view, coef_out);
    if (*csim) return run_simulate(sim_spec, sim_seed, sim_prefix);
    if (*cbench) return run_bench(bench_model, bench_grid, bench_seed, bench_reps, bench_out);
  } catch (const iclust::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const iclust::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const iclust::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 1;
}
