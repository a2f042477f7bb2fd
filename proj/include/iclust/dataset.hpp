#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace iclust {

// n x p real matrix with named columns.
struct ContinuousData {
  Eigen::MatrixXd x;
  std::vector<std::string> columns;

  int n() const { return static_cast<int>(x.rows()); }
  int p() const { return static_cast<int>(x.cols()); }
};

// n x p table of integer modality codes; codes in column j lie in
// [0, arity[j]). levels[j] maps codes back to the input strings in order of
// first appearance.
struct CategoricalData {
  int rows = 0;
  std::vector<int> arity;                        // length p
  std::vector<std::vector<int>> codes;           // per column, length n
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> levels;  // per column

  int n() const { return rows; }
  int p() const { return static_cast<int>(arity.size()); }
};

// n x p matrix of non-negative integer counts (row = one composition).
struct CountData {
  int rows = 0;
  int cols = 0;
  std::vector<long long> values;  // row-major
  std::vector<std::string> columns;

  int n() const { return rows; }
  int p() const { return cols; }
  long long at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

// Simple graph in adjacency-list form. Undirected graphs store each edge
// once in `edges` but list neighbors in both directions; self-loops are
// dropped at construction.
class GraphData {
 public:
  // Builds from an edge list; dedupes, drops self-loops, and for undirected
  // graphs collapses (i,j)/(j,i) into one edge. dropped_self_loops() reports
  // how many were discarded.
  GraphData(int n, bool directed, std::vector<std::pair<int, int>> edge_list);

  int n() const { return n_; }
  bool directed() const { return directed_; }
  long long edge_count() const { return m_; }
  long long dropped_self_loops() const { return dropped_self_loops_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  // Out-neighbors (all neighbors when undirected).
  std::span<const int> neighbors_out(int i) const {
    return {out_adj_.data() + out_off_[i], out_adj_.data() + out_off_[i + 1]};
  }
  // In-neighbors; only meaningful for directed graphs.
  std::span<const int> neighbors_in(int i) const {
    return {in_adj_.data() + in_off_[i], in_adj_.data() + in_off_[i + 1]};
  }

 private:
  int n_ = 0;
  bool directed_ = false;
  long long m_ = 0;
  long long dropped_self_loops_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::size_t> out_off_, in_off_;
  std::vector<int> out_adj_, in_adj_;
};

enum class ModelKind { sbm, gmm, diag_gmm, lca, mom, combined };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

using ViewData =
    std::variant<std::shared_ptr<const ContinuousData>, std::shared_ptr<const CategoricalData>,
                 std::shared_ptr<const CountData>, std::shared_ptr<const GraphData>>;

// One named view of the objects being clustered. Single-view datasets use
// one unnamed entry; combined fits carry several.
struct DatasetView {
  std::string name;
  ModelKind kind;
  ViewData data;

  int n() const;
};

struct Dataset {
  std::vector<DatasetView> views;

  int n() const { return views.empty() ? 0 : views.front().n(); }
};

}  // namespace iclust
