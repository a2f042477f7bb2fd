#pragma once

#include <memory>
#include <vector>

#include "iclust/dataset.hpp"
#include "iclust/model.hpp"
#include "iclust/lgamma_table.hpp"

namespace iclust {

// Mixture of multinomials: row i is a count vector drawn from
// M(r_i, theta_k) with theta_k ~ Dirichlet_p(beta). The multinomial
// coefficients of the rows are partition-independent; they are included in
// log_marginal as an additive constant so absolute ICL values are
// comparable across runs.
struct MomPrior {
  double beta = 1.0;
};

class MomStats final : public ObsStats {
 public:
  std::unique_ptr<ObsStats> clone() const override {
    return std::make_unique<MomStats>(*this);
  }
  int k() const override { return kk; }

  int kk = 0;
  std::vector<int> sizes;
  std::vector<long long> col_sums;   // t_kj, K x p row-major
  std::vector<long long> totals;     // T_k
  std::vector<double> term;
};

class MomModel final : public ObsModel {
 public:
  MomModel(std::shared_ptr<const CountData> data, MomPrior prior);

  std::string kind() const override { return "mom"; }
  int n() const override { return data_->n(); }
  const MomPrior& prior() const { return prior_; }

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
  double cluster_term(const MomStats& s, int k) const;
  double row_delta(const MomStats& s, int k, int i, int sign) const;

  std::shared_ptr<const CountData> data_;
  MomPrior prior_;
  std::vector<long long> row_sums_;
  double coeff_const_ = 0.0;  // sum_i log multinomial coefficient of row i
  LgammaShiftTable lg_beta_;   // lgamma(beta + t)
  LgammaShiftTable lg_pbeta_;  // lgamma(p beta + t)
};

}  // namespace iclust
