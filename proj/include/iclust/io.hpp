#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iclust/dataset.hpp"
#include "iclust/icl.hpp"
#include "iclust/sim.hpp"
#include "vendor_json.hpp"

namespace iclust {

// ---- dataset files ----------------------------------------------------
//
// continuous / counts: CSV with a header row, column order preserved.
// categorical:        CSV of strings; per column, modalities are encoded in
//                     first-appearance order (the encoding is recorded in
//                     the fit result so parameter columns stay
//                     interpretable).
// graphs:             whitespace edge list with 0-based node ids and an
//                     optional first line "directed"/"undirected"
//                     (undirected when absent), or MatrixMarket coordinate
//                     format.
// combined:           JSON manifest {"views": {name: {"model":..,
//                     "path":..}, ...}}; paths are resolved relative to the
//                     manifest's directory.

std::shared_ptr<ContinuousData> read_continuous_csv(const std::string& path);
void write_continuous_csv(const ContinuousData& data, const std::string& path);

std::shared_ptr<CategoricalData> read_categorical_csv(const std::string& path);
void write_categorical_csv(const CategoricalData& data, const std::string& path);

std::shared_ptr<CountData> read_count_csv(const std::string& path);
void write_count_csv(const CountData& data, const std::string& path);

std::shared_ptr<GraphData> read_graph_file(const std::string& path,
                                           std::optional<bool> force_directed = {});
void write_edge_list(const GraphData& graph, const std::string& path);

std::vector<int> read_labels(const std::string& path);
void write_labels(const std::vector<int>& labels, const std::string& path);

// Loads `path` as the dataset for `kind` (auto-detected when empty; the
// spec's rules: graph files and square symmetric 0/1 matrices map to sbm,
// all-categorical tables to lca, numeric matrices to gmm). A kind that is
// structurally incompatible with the file is a hard error.
Dataset load_dataset(const std::string& path, std::optional<ModelKind> kind,
                     std::optional<bool> force_directed = {});

// ---- fit results -------------------------------------------------------

struct FitResult {
  std::string version = "1";
  std::string model;
  std::string algorithm;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  int n = 0;
  int k = 0;
  std::vector<int> labels;
  IclValue icl;
  nlohmann::json prior;
  nlohmann::json map_estimates;
  nlohmann::json hierarchy;
  std::vector<double> history;
  nlohmann::json data_info;
  nlohmann::json config;
};

nlohmann::json fit_result_to_json(const FitResult& fit);
FitResult fit_result_from_json(const nlohmann::json& j);
void save_fit_result(const FitResult& fit, const std::string& path);
FitResult load_fit_result(const std::string& path);

// ---- simulation specs ----------------------------------------------------
//
// JSON: {"kind": "sbm"|"gmm"|"lca", ...} with the model block fields; see
// README for the exact schema.

struct SimSpec {
  ModelKind kind;
  SbmSpec sbm;
  GmmSpec gmm;
  LcaSpec lca;
};

SimSpec parse_sim_spec(const nlohmann::json& j);
SimSpec load_sim_spec(const std::string& path);

}  // namespace iclust
