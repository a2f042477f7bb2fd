#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "iclust/model.hpp"
#include "iclust/optim.hpp"

namespace iclust {

// One fusion of the merge path. `level` is the number of clusters after the
// merge; (left, right) is the merged pair in the labeling at level+1.
struct MergeStep {
  int level = 0;
  int left = 0;
  int right = 0;
  double delta_obs = 0.0;      // obs-term change of the merge
  double log_alpha = 0.0;      // threshold log alpha* enabling the fusion
  double icl_obs_after = 0.0;  // obs term of the partition at `level`
  double height = 0.0;         // monotone dendrogram height (-log alpha*, cummax)
};

// Binary merge tree node; leaves 0..K*-1 are the base clusters, internal
// nodes follow in merge order.
struct DendroNode {
  int left = -1;
  int right = -1;
  double height = 0.0;
  int size = 0;
};

// Nested partition path from the base solution (K* clusters) down to one
// cluster, with the alpha-regularization thresholds and an ordered
// dendrogram.
struct HierarchyPath {
  Partition base;
  double obs_base = 0.0;
  std::vector<MergeStep> steps;     // K*-1 of them
  std::vector<DendroNode> nodes;    // 2 K*-1 tree nodes
  std::vector<int> leaf_order;      // permutation of base clusters

  int k_star() const { return base.k(); }
};

// log alpha* below which fusing (g, h) improves the exact ICL, under the
// small-alpha log-linear expansion of the partition term:
//   delta_obs + log K - log(K-1) + lgamma(n_g + n_h) - lgamma(n_g) - lgamma(n_h)
double merge_threshold(double delta_obs, int n_g, int n_h, int k);

// Greedy merge path: at each level fuses the pair with the largest
// threshold (ties to the smallest pair). Cost matrices are recomputed per
// level. leaf_order is filled by order_leaves on the default cost matrix.
HierarchyPath build_path(const ObsModel& model, const SearchState& final_state);

// Partition after applying the first K*-K merges; cut(K*) is the base.
Partition cut(const HierarchyPath& path, int k);

// cost(g, h) = -merge_threshold(...) between base clusters: similar
// clusters have low cost. Diagonal is +infinity.
Eigen::MatrixXd leaf_cost_matrix(const ObsModel& model, const SearchState& final_state);

// Optimal leaf ordering (dynamic programming over subtree orientations):
// minimizes the summed cost of adjacent leaves over all 2^(K*-1) consistent
// orders. Ties resolved toward lexicographically smaller endpoints.
std::vector<int> order_leaves(const HierarchyPath& path, const Eigen::MatrixXd& cost);

// Total adjacent-pair cost of a leaf order (helper shared with tests).
double leaf_order_cost(const std::vector<int>& order, const Eigen::MatrixXd& cost);

nlohmann::json dendrogram_json(const HierarchyPath& path);
std::string dendrogram_newick(const HierarchyPath& path);

}  // namespace iclust
