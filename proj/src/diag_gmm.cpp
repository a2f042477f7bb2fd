#include "iclust/models/diag_gmm.hpp"

#include <cassert>
#include <cmath>

#include "iclust/errors.hpp"

namespace iclust {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

DiagGmmStats& down(ObsStats& s) { return static_cast<DiagGmmStats&>(s); }
const DiagGmmStats& down(const ObsStats& s) { return static_cast<const DiagGmmStats&>(s); }

}  // namespace

DiagGmmPrior DiagGmmPrior::from_data(const ContinuousData& data) {
  const int n = data.n();
  const int p = data.p();
  if (n < 2) throw ConfigError("diaggmm defaults need at least 2 rows");
  DiagGmmPrior prior;
  prior.mu = data.x.colwise().mean();
  prior.tau = 0.01;
  prior.kappa = 1.0;
  double mean_var = 0.0;
  for (int j = 0; j < p; ++j)
    mean_var += (data.x.col(j).array() - prior.mu[j]).square().sum() / (n - 1);
  mean_var /= p;
  if (mean_var <= 0.0) throw ConfigError("diaggmm defaults: all columns are constant");
  prior.beta = Eigen::VectorXd::Constant(p, mean_var);
  return prior;
}

DiagGmmModel::DiagGmmModel(std::shared_ptr<const ContinuousData> data, DiagGmmPrior prior)
    : data_(std::move(data)), prior_(std::move(prior)) {
  const int p = data_->p();
  if (prior_.mu.size() != p) throw ConfigError("diaggmm: prior mean dimension mismatch");
  if (prior_.tau <= 0.0 || prior_.kappa <= 0.0)
    throw ConfigError("diaggmm: tau and kappa must be > 0");
  if (prior_.beta.size() != p || (prior_.beta.array() <= 0.0).any())
    throw ConfigError("diaggmm: beta must be a positive p-vector");
}

double DiagGmmModel::cluster_term(long long count, const Eigen::VectorXd& sum,
                                  const Eigen::VectorXd& sumsq) const {
  if (count == 0) return 0.0;
  const int p = this->p();
  const double nk = static_cast<double>(count);
  const double tau = prior_.tau;
  const double kappa = prior_.kappa;
  const double tau_n = tau + nk;
  const double kappa_n = kappa + 0.5 * nk;
  double total = p * (-0.5 * nk * kLog2Pi + 0.5 * (std::log(tau) - std::log(tau_n)) +
                      std::lgamma(kappa_n) - std::lgamma(kappa));
  for (int j = 0; j < p; ++j) {
    const double xbar = sum[j] / nk;
    const double ss = sumsq[j] - sum[j] * xbar;  // within-cluster sum of squares
    const double dev = xbar - prior_.mu[j];
    const double beta_n = prior_.beta[j] + 0.5 * ss + 0.5 * (tau * nk / tau_n) * dev * dev;
    total += kappa * std::log(prior_.beta[j]) - kappa_n * std::log(beta_n);
  }
  return total;
}

std::unique_ptr<ObsStats> DiagGmmModel::init_stats(const Partition& z) const {
  if (z.n() != data_->n()) throw ConfigError("diaggmm: partition size mismatch");
  auto s = std::make_unique<DiagGmmStats>();
  const int p = this->p();
  s->clusters.resize(z.k());
  for (auto& c : s->clusters) {
    c.sum = Eigen::VectorXd::Zero(p);
    c.sumsq = Eigen::VectorXd::Zero(p);
  }
  for (int i = 0; i < z.n(); ++i) {
    auto& c = s->clusters[z.label(i)];
    auto x = data_->x.row(i);
    ++c.count;
    c.sum += x.transpose();
    c.sumsq += x.array().square().matrix().transpose();
  }
  for (auto& c : s->clusters) c.term = cluster_term(c.count, c.sum, c.sumsq);
  return s;
}

double DiagGmmModel::log_marginal(const ObsStats& stats) const {
  double total = 0.0;
  for (const auto& c : down(stats).clusters) total += c.term;
  return total;
}

double DiagGmmModel::delta_swap(const ObsStats& stats, int i, int g, int h) const {
  const DiagGmmStats& s = down(stats);
  assert(g != h);
  Eigen::VectorXd x = data_->x.row(i).transpose();
  Eigen::VectorXd x2 = x.array().square();
  const auto& cg = s.clusters[g];
  const auto& ch = s.clusters[h];
  return cluster_term(cg.count - 1, cg.sum - x, cg.sumsq - x2) +
         cluster_term(ch.count + 1, ch.sum + x, ch.sumsq + x2) - cg.term - ch.term;
}

void DiagGmmModel::apply_swap(ObsStats& stats, int i, int g, int h) const {
  DiagGmmStats& s = down(stats);
  Eigen::VectorXd x = data_->x.row(i).transpose();
  Eigen::VectorXd x2 = x.array().square();
  auto& cg = s.clusters[g];
  auto& ch = s.clusters[h];
  --cg.count;
  cg.sum -= x;
  cg.sumsq -= x2;
  cg.term = cluster_term(cg.count, cg.sum, cg.sumsq);
  ++ch.count;
  ch.sum += x;
  ch.sumsq += x2;
  ch.term = cluster_term(ch.count, ch.sum, ch.sumsq);
}

double DiagGmmModel::delta_merge(const ObsStats& stats, int g, int h) const {
  const DiagGmmStats& s = down(stats);
  assert(g != h);
  const auto& cg = s.clusters[g];
  const auto& ch = s.clusters[h];
  return cluster_term(cg.count + ch.count, cg.sum + ch.sum, cg.sumsq + ch.sumsq) -
         cg.term - ch.term;
}

void DiagGmmModel::apply_merge(ObsStats& stats, int g, int h) const {
  DiagGmmStats& s = down(stats);
  auto& cg = s.clusters[g];
  auto& ch = s.clusters[h];
  cg.count += ch.count;
  cg.sum += ch.sum;
  cg.sumsq += ch.sumsq;
  cg.term = cluster_term(cg.count, cg.sum, cg.sumsq);
  s.clusters.erase(s.clusters.begin() + h);
}

void DiagGmmModel::remove_empty(ObsStats& stats, int k) const {
  DiagGmmStats& s = down(stats);
  assert(s.clusters[k].count == 0);
  s.clusters.erase(s.clusters.begin() + k);
}

nlohmann::json DiagGmmModel::map_estimates(const ObsStats& stats) const {
  const DiagGmmStats& s = down(stats);
  const int p = this->p();
  const double tau = prior_.tau;
  nlohmann::json means = nlohmann::json::array();
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& c : s.clusters) {
    const double nk = static_cast<double>(c.count);
    const double tau_n = tau + nk;
    const double kappa_n = prior_.kappa + 0.5 * nk;
    std::vector<double> mu(p), var(p);
    for (int j = 0; j < p; ++j) {
      mu[j] = (tau * prior_.mu[j] + c.sum[j]) / tau_n;
      double beta_n = prior_.beta[j];
      if (c.count > 0) {
        double xbar = c.sum[j] / nk;
        double ss = c.sumsq[j] - c.sum[j] * xbar;
        double dev = xbar - prior_.mu[j];
        beta_n += 0.5 * ss + 0.5 * (tau * nk / tau_n) * dev * dev;
      }
      var[j] = beta_n / (kappa_n + 1.5);
    }
    means.push_back(mu);
    vars.push_back(var);
  }
  return nlohmann::json{{"mu", means},
                        {"sigma2", vars},
                        {"map_convention", "joint_posterior_mode"}};
}

nlohmann::json DiagGmmModel::prior_json() const {
  const int p = this->p();
  return nlohmann::json{{"mu", std::vector<double>(prior_.mu.data(), prior_.mu.data() + p)},
                        {"tau", prior_.tau},
                        {"kappa", prior_.kappa},
                        {"beta", std::vector<double>(prior_.beta.data(), prior_.beta.data() + p)}};
}

}  // namespace iclust
