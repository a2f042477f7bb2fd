#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <memory>
#include <vector>

#include "iclust/dataset.hpp"
#include "iclust/model.hpp"

namespace iclust {

// Normal-inverse-Wishart prior on (mu_k, Sigma_k):
//   Sigma_k^{-1} ~ Wishart(epsilon^{-1}, n0),  mu_k | Sigma_k ~ N(mu, Sigma_k / tau).
struct GmmPrior {
  Eigen::VectorXd mu;
  double tau = 0.01;
  double n0 = 0.0;  // >= p
  Eigen::MatrixXd epsilon;

  // Data-driven defaults: mu = column means, tau = 0.01, n0 = p,
  // epsilon = 0.1 * diag(empirical column variances), with zero-variance
  // columns floored at 1e-12 of the mean variance.
  static GmmPrior from_data(const ContinuousData& data);
};

struct GmmClusterStats {
  long long count = 0;
  Eigen::VectorXd sum;       // sum of points
  Eigen::MatrixXd outer;     // raw sum of x x^T
  double term = 0.0;         // cached collapsed marginal of this cluster
};

class GmmStats final : public ObsStats {
 public:
  std::unique_ptr<ObsStats> clone() const override {
    return std::make_unique<GmmStats>(*this);
  }
  int k() const override { return static_cast<int>(clusters.size()); }

  std::vector<GmmClusterStats> clusters;
};

class GmmModel final : public ObsModel {
 public:
  GmmModel(std::shared_ptr<const ContinuousData> data, GmmPrior prior);

  std::string kind() const override { return "gmm"; }
  int n() const override { return data_->n(); }
  int p() const { return static_cast<int>(prior_.mu.size()); }
  const GmmPrior& prior() const { return prior_; }

  std::unique_ptr<ObsStats> init_stats(const Partition& z) const override;
  double log_marginal(const ObsStats& s) const override;
  double delta_swap(const ObsStats& s, int i, int g, int h) const override;
  void apply_swap(ObsStats& s, int i, int g, int h) const override;
  double delta_merge(const ObsStats& s, int g, int h) const override;
  void apply_merge(ObsStats& s, int g, int h) const override;
  void remove_empty(ObsStats& s, int k) const override;
  nlohmann::json map_estimates(const ObsStats& s) const override;
  nlohmann::json prior_json() const override;

  // Collapsed marginal of one cluster given raw accumulators. `cluster`
  // only labels numerical-failure diagnostics.
  double cluster_term(long long count, const Eigen::VectorXd& sum,
                      const Eigen::MatrixXd& outer, int cluster = -1) const;

  long long jitter_events() const { return jitter_events_.load(); }

 private:
  double posterior_logdet(Eigen::MatrixXd a, int cluster) const;

  std::shared_ptr<const ContinuousData> data_;
  GmmPrior prior_;
  double logdet_eps_ = 0.0;
  double lmg_n0_ = 0.0;  // log multivariate gamma at n0 / 2
  mutable std::atomic<long long> jitter_events_{0};
};

// log of the multivariate gamma function Gamma_p(a).
double log_multivariate_gamma(int p, double a);

}  // namespace iclust
