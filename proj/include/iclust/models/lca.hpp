#pragma once

#include <memory>
#include <vector>

#include "iclust/dataset.hpp"
#include "iclust/model.hpp"
#include "iclust/lgamma_table.hpp"

namespace iclust {

// Latent class analysis: per cluster k and variable j,
// theta_kj ~ Dirichlet_{d_j}(beta) and X_ij | Z_ik = 1 ~ M_{d_j}(1, theta_kj).
struct LcaPrior {
  double beta = 1.0;
};

class LcaStats final : public ObsStats {
 public:
  std::unique_ptr<ObsStats> clone() const override {
    return std::make_unique<LcaStats>(*this);
  }
  int k() const override { return kk; }

  int kk = 0;
  std::vector<int> sizes;
  // Modality counts n_kjc flattened as [k][offset_j + c]; width = sum_j d_j.
  std::vector<int> counts;
  std::vector<double> term;  // cached per-cluster obs term

  int width = 0;
  int* row(int k) { return counts.data() + static_cast<std::size_t>(k) * width; }
  const int* row(int k) const { return counts.data() + static_cast<std::size_t>(k) * width; }
};

class LcaModel final : public ObsModel {
 public:
  LcaModel(std::shared_ptr<const CategoricalData> data, LcaPrior prior);

  std::string kind() const override { return "lca"; }
  int n() const override { return data_->n(); }
  const LcaPrior& prior() const { return prior_; }

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
  double cluster_term(const LcaStats& s, int k) const;
  // Obs-term change from removing (sign = -1) or adding (sign = +1) row i
  // to cluster k, evaluated on the current counts.
  double row_delta(const LcaStats& s, int k, int i, int sign) const;

  std::shared_ptr<const CategoricalData> data_;
  LcaPrior prior_;
  std::vector<int> offsets_;          // per-variable offset into count rows
  int width_ = 0;
  LgammaShiftTable lg_beta_;          // lgamma(beta + t)
  std::vector<LgammaShiftTable> lg_dbeta_;  // per arity: lgamma(d_j beta + t)
  std::vector<int> arity_slot_;       // variable j -> index into lg_dbeta_
};

}  // namespace iclust
