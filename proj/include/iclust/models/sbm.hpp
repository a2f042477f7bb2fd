#pragma once

#include <memory>
#include <vector>

#include "iclust/dataset.hpp"
#include "iclust/lgamma_table.hpp"
#include "iclust/model.hpp"

namespace iclust {

// Beta prior on block connection probabilities; a0 = b0 = 1 is the
// non-informative default.
struct SbmPrior {
  double a0 = 1.0;
  double b0 = 1.0;
};

class SbmStats final : public ObsStats {
 public:
  std::unique_ptr<ObsStats> clone() const override {
    return std::make_unique<SbmStats>(*this);
  }
  int k() const override { return kk; }

  int kk = 0;
  std::vector<long long> e;  // K*K block edge counts; see SbmModel for layout
  std::vector<int> sizes;
  std::vector<int> bd_out;  // n*K block degrees (all neighbors if undirected)
  std::vector<int> bd_in;   // n*K, directed only

  long long& edge(int g, int l) { return e[static_cast<std::size_t>(g) * kk + l]; }
  long long edge(int g, int l) const { return e[static_cast<std::size_t>(g) * kk + l]; }
};

// Binary stochastic block model with collapsed Beta-Bernoulli blocks.
// Undirected graphs count each unordered pair once (diagonal capacity
// n_k (n_k - 1) / 2); directed graphs use all ordered pairs. Self-loops are
// excluded from the likelihood.
class SbmModel final : public ObsModel {
 public:
  SbmModel(std::shared_ptr<const GraphData> graph, SbmPrior prior);

  std::string kind() const override { return "sbm"; }
  int n() const override { return graph_->n(); }
  const SbmPrior& prior() const { return prior_; }
  const GraphData& graph() const { return *graph_; }

  std::unique_ptr<ObsStats> init_stats(const Partition& z) const override;
  double log_marginal(const ObsStats& s) const override;
  double delta_swap(const ObsStats& s, int i, int g, int h) const override;
  void apply_swap(ObsStats& s, int i, int g, int h) const override;
  double delta_merge(const ObsStats& s, int g, int h) const override;
  void apply_merge(ObsStats& s, int g, int h) const override;
  void remove_empty(ObsStats& s, int k) const override;
  nlohmann::json map_estimates(const ObsStats& s) const override;
  nlohmann::json prior_json() const override;

 private:
  // lgamma(a0+e) + lgamma(b0+m-e) - lgamma(a0+b0+m); the per-block
  // -log B(a0, b0) constant is added separately where block counts matter.
  double block_term(long long e, long long m) const {
    return lg_a_(e) + lg_b_(m - e) - lg_ab_(m);
  }
  long long pair_capacity(long long nk, long long nl, bool diagonal) const;

  std::shared_ptr<const GraphData> graph_;
  SbmPrior prior_;
  double log_beta0_;  // log B(a0, b0)
  LgammaShiftTable lg_a_, lg_b_, lg_ab_;
};

}  // namespace iclust
