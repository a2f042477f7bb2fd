#include "iclust/models/gmm.hpp"

#include <Eigen/Cholesky>
#include <cassert>
#include <cmath>

#include "iclust/errors.hpp"

namespace iclust {

namespace {

constexpr double kLogPi = 1.1447298858494001741434273513531;

GmmStats& down(ObsStats& s) { return static_cast<GmmStats&>(s); }
const GmmStats& down(const ObsStats& s) { return static_cast<const GmmStats&>(s); }

}  // namespace

double log_multivariate_gamma(int p, double a) {
  double v = 0.25 * p * (p - 1) * kLogPi;
  for (int j = 1; j <= p; ++j) v += std::lgamma(a + 0.5 * (1 - j));
  return v;
}

GmmPrior GmmPrior::from_data(const ContinuousData& data) {
  const int n = data.n();
  const int p = data.p();
  if (n < 2) throw ConfigError("gmm defaults need at least 2 rows");
  GmmPrior prior;
  prior.mu = data.x.colwise().mean();
  prior.tau = 0.01;
  prior.n0 = p;
  Eigen::VectorXd var(p);
  for (int j = 0; j < p; ++j) {
    double m = prior.mu[j];
    var[j] = (data.x.col(j).array() - m).square().sum() / (n - 1);
  }
  double mean_var = var.mean();
  if (mean_var <= 0.0) throw ConfigError("gmm defaults: all columns are constant");
  for (int j = 0; j < p; ++j) var[j] = std::max(var[j], 1e-12 * mean_var);
  prior.epsilon = (0.1 * var).asDiagonal();
  return prior;
}

GmmModel::GmmModel(std::shared_ptr<const ContinuousData> data, GmmPrior prior)
    : data_(std::move(data)), prior_(std::move(prior)) {
  const int p = data_->p();
  if (prior_.mu.size() != p) throw ConfigError("gmm: prior mean dimension mismatch");
  if (prior_.tau <= 0.0) throw ConfigError("gmm: tau must be > 0");
  if (prior_.n0 < p) throw ConfigError("gmm: n0 must be >= p");
  if (prior_.epsilon.rows() != p || prior_.epsilon.cols() != p)
    throw ConfigError("gmm: epsilon dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(prior_.epsilon);
  if (llt.info() != Eigen::Success) throw ConfigError("gmm: epsilon is not positive definite");
  logdet_eps_ = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  lmg_n0_ = log_multivariate_gamma(p, 0.5 * prior_.n0);
}

double GmmModel::posterior_logdet(Eigen::MatrixXd a, int cluster) const {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    // Rank-deficient scatter from near-duplicate points; retry with jitter.
    jitter_events_.fetch_add(1, std::memory_order_relaxed);
    double jitter = 1e-10 * a.trace() / a.rows();
    if (!(jitter > 0.0)) jitter = 1e-300;
    a.diagonal().array() += jitter;
    llt.compute(a);
    if (llt.info() != Eigen::Success)
      throw NumericalError("gmm: posterior scale matrix of cluster " +
                           std::to_string(cluster) + " is not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double GmmModel::cluster_term(long long count, const Eigen::VectorXd& sum,
                              const Eigen::MatrixXd& outer, int cluster) const {
  if (count == 0) return 0.0;
  const int p = this->p();
  const double nk = static_cast<double>(count);
  const double tau = prior_.tau;
  const double n0 = prior_.n0;
  Eigen::VectorXd xbar = sum / nk;
  Eigen::VectorXd dev = xbar - prior_.mu;
  Eigen::MatrixXd a = prior_.epsilon + (outer - sum * xbar.transpose()) +
                      (tau * nk / (tau + nk)) * (dev * dev.transpose());
  // Scatter rounding can leave the matrix slightly asymmetric.
  a = 0.5 * (a + a.transpose()).eval();
  return -0.5 * nk * p * kLogPi + log_multivariate_gamma(p, 0.5 * (n0 + nk)) - lmg_n0_ +
         0.5 * n0 * logdet_eps_ - 0.5 * (n0 + nk) * posterior_logdet(std::move(a), cluster) +
         0.5 * p * (std::log(tau) - std::log(tau + nk));
}

std::unique_ptr<ObsStats> GmmModel::init_stats(const Partition& z) const {
  if (z.n() != data_->n()) throw ConfigError("gmm: partition size mismatch");
  auto s = std::make_unique<GmmStats>();
  const int p = this->p();
  s->clusters.resize(z.k());
  for (auto& c : s->clusters) {
    c.sum = Eigen::VectorXd::Zero(p);
    c.outer = Eigen::MatrixXd::Zero(p, p);
  }
  for (int i = 0; i < z.n(); ++i) {
    auto& c = s->clusters[z.label(i)];
    Eigen::VectorXd x = data_->x.row(i).transpose();
    ++c.count;
    c.sum += x;
    c.outer += x * x.transpose();
  }
  for (int k = 0; k < z.k(); ++k) {
    auto& c = s->clusters[k];
    c.term = cluster_term(c.count, c.sum, c.outer, k);
  }
  return s;
}

double GmmModel::log_marginal(const ObsStats& stats) const {
  double total = 0.0;
  for (const auto& c : down(stats).clusters) total += c.term;
  return total;
}

double GmmModel::delta_swap(const ObsStats& stats, int i, int g, int h) const {
  const GmmStats& s = down(stats);
  assert(g != h);
  Eigen::VectorXd x = data_->x.row(i).transpose();
  const auto& cg = s.clusters[g];
  const auto& ch = s.clusters[h];
  double term_g = cluster_term(cg.count - 1, cg.sum - x, cg.outer - x * x.transpose(), g);
  double term_h = cluster_term(ch.count + 1, ch.sum + x, ch.outer + x * x.transpose(), h);
  return term_g + term_h - cg.term - ch.term;
}

void GmmModel::apply_swap(ObsStats& stats, int i, int g, int h) const {
  GmmStats& s = down(stats);
  Eigen::VectorXd x = data_->x.row(i).transpose();
  auto& cg = s.clusters[g];
  auto& ch = s.clusters[h];
  --cg.count;
  cg.sum -= x;
  cg.outer -= x * x.transpose();
  cg.term = cluster_term(cg.count, cg.sum, cg.outer, g);
  ++ch.count;
  ch.sum += x;
  ch.outer += x * x.transpose();
  ch.term = cluster_term(ch.count, ch.sum, ch.outer, h);
}

double GmmModel::delta_merge(const ObsStats& stats, int g, int h) const {
  const GmmStats& s = down(stats);
  assert(g != h);
  const auto& cg = s.clusters[g];
  const auto& ch = s.clusters[h];
  double fused = cluster_term(cg.count + ch.count, cg.sum + ch.sum, cg.outer + ch.outer, g);
  return fused - cg.term - ch.term;
}

void GmmModel::apply_merge(ObsStats& stats, int g, int h) const {
  GmmStats& s = down(stats);
  auto& cg = s.clusters[g];
  auto& ch = s.clusters[h];
  cg.count += ch.count;
  cg.sum += ch.sum;
  cg.outer += ch.outer;
  cg.term = cluster_term(cg.count, cg.sum, cg.outer, g);
  s.clusters.erase(s.clusters.begin() + h);
}

void GmmModel::remove_empty(ObsStats& stats, int k) const {
  GmmStats& s = down(stats);
  assert(s.clusters[k].count == 0);
  s.clusters.erase(s.clusters.begin() + k);
}

nlohmann::json GmmModel::map_estimates(const ObsStats& stats) const {
  const GmmStats& s = down(stats);
  const int p = this->p();
  const double tau = prior_.tau;
  nlohmann::json means = nlohmann::json::array();
  nlohmann::json covs = nlohmann::json::array();
  for (const auto& c : s.clusters) {
    const double nk = static_cast<double>(c.count);
    Eigen::VectorXd mu_n = (tau * prior_.mu + c.sum) / (tau + nk);
    Eigen::MatrixXd eps_n = prior_.epsilon;
    if (c.count > 0) {
      Eigen::VectorXd xbar = c.sum / nk;
      Eigen::VectorXd dev = xbar - prior_.mu;
      eps_n += (c.outer - c.sum * xbar.transpose()) +
               (tau * nk / (tau + nk)) * (dev * dev.transpose());
      eps_n = 0.5 * (eps_n + eps_n.transpose()).eval();
    }
    double nu_n = prior_.n0 + nk;
    Eigen::MatrixXd sigma = eps_n / (nu_n + p + 2);
    std::vector<double> mu_vec(mu_n.data(), mu_n.data() + p);
    std::vector<std::vector<double>> sig_vec(p, std::vector<double>(p));
    for (int r = 0; r < p; ++r)
      for (int cidx = 0; cidx < p; ++cidx) sig_vec[r][cidx] = sigma(r, cidx);
    means.push_back(mu_vec);
    covs.push_back(sig_vec);
  }
  return nlohmann::json{{"mu", means},
                        {"Sigma", covs},
                        {"map_convention", "joint_posterior_mode"}};
}

nlohmann::json GmmModel::prior_json() const {
  const int p = this->p();
  std::vector<double> mu(prior_.mu.data(), prior_.mu.data() + p);
  std::vector<std::vector<double>> eps(p, std::vector<double>(p));
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c) eps[r][c] = prior_.epsilon(r, c);
  return nlohmann::json{
      {"mu", mu}, {"tau", prior_.tau}, {"n0", prior_.n0}, {"epsilon", eps}};
}

}  // namespace iclust
