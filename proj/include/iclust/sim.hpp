#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "iclust/dataset.hpp"
#include "iclust/rng.hpp"

namespace iclust {

struct SbmSpec {
  int n = 0;
  std::vector<double> pi;   // K-simplex
  Eigen::MatrixXd theta;    // K x K in [0,1]; symmetric when undirected
  bool directed = false;
};

struct GmmSpec {
  std::vector<double> pi;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  int n = 0;
};

struct LcaSpec {
  std::vector<double> pi;
  // probs[k][j] = modality distribution of variable j in cluster k.
  std::vector<std::vector<std::vector<double>>> probs;
  int n = 0;
};

// Sequential inverse-CDF draw on pi (documented so other implementations
// can match the sampling scheme given the same generator).
int sample_from(const std::vector<double>& pi, Rng& rng);

std::pair<std::shared_ptr<GraphData>, std::vector<int>> rsbm(const SbmSpec& spec, Rng& rng);
std::pair<std::shared_ptr<ContinuousData>, std::vector<int>> rgmm(const GmmSpec& spec, Rng& rng);
std::pair<std::shared_ptr<CategoricalData>, std::vector<int>> rlca(const LcaSpec& spec, Rng& rng);

// Three-level block structure used for the hierarchical recovery tests:
// 2 top blocks, each split into 3 mid blocks, each split into 2 base
// clusters (12 in total); connection probability depends on the deepest
// level at which the two clusters share a branch.
Eigen::MatrixXd hierarchical_sbm_theta(double p_base, double p_mid, double p_top,
                                       double p_cross);

}  // namespace iclust
