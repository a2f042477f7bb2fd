#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "iclust/dataset.hpp"
#include "iclust/model.hpp"

namespace iclust {

// Diagonal-covariance Gaussian mixture: independent Normal-Gamma priors per
// dimension, precision lambda_kj ~ Gamma(kappa, beta_j),
// mu_kj | lambda_kj ~ N(mu_j, 1 / (tau lambda_kj)).
struct DiagGmmPrior {
  Eigen::VectorXd mu;
  double tau = 0.01;
  double kappa = 1.0;
  Eigen::VectorXd beta;

  // kappa = 1, beta_j = mean of the empirical column variances.
  static DiagGmmPrior from_data(const ContinuousData& data);
};

struct DiagGmmClusterStats {
  long long count = 0;
  Eigen::VectorXd sum;
  Eigen::VectorXd sumsq;
  double term = 0.0;
};

class DiagGmmStats final : public ObsStats {
 public:
  std::unique_ptr<ObsStats> clone() const override {
    return std::make_unique<DiagGmmStats>(*this);
  }
  int k() const override { return static_cast<int>(clusters.size()); }

  std::vector<DiagGmmClusterStats> clusters;
};

class DiagGmmModel final : public ObsModel {
 public:
  DiagGmmModel(std::shared_ptr<const ContinuousData> data, DiagGmmPrior prior);

  std::string kind() const override { return "diaggmm"; }
  int n() const override { return data_->n(); }
  int p() const { return static_cast<int>(prior_.mu.size()); }
  const DiagGmmPrior& prior() const { return prior_; }

  std::unique_ptr<ObsStats> init_stats(const Partition& z) const override;
  double log_marginal(const ObsStats& s) const override;
  double delta_swap(const ObsStats& s, int i, int g, int h) const override;
  void apply_swap(ObsStats& s, int i, int g, int h) const override;
  double delta_merge(const ObsStats& s, int g, int h) const override;
  void apply_merge(ObsStats& s, int g, int h) const override;
  void remove_empty(ObsStats& s, int k) const override;
  nlohmann::json map_estimates(const ObsStats& s) const override;
  nlohmann::json prior_json() const override;

  double cluster_term(long long count, const Eigen::VectorXd& sum,
                      const Eigen::VectorXd& sumsq) const;

 private:
  std::shared_ptr<const ContinuousData> data_;
  DiagGmmPrior prior_;
};

}  // namespace iclust
