#include "iclust/sim.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "iclust/errors.hpp"

namespace iclust {

int sample_from(const std::vector<double>& pi, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    acc += pi[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(pi.size()) - 1;
}

namespace {

void check_simplex(const std::vector<double>& pi) {
  double total = 0.0;
  for (double v : pi) {
    if (v < 0.0) throw ConfigError("sim: negative mixture proportion");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-8) throw ConfigError("sim: proportions must sum to 1");
}

// Appends the Bernoulli(p) successes among the pairs enumerated by
// `pair_at(t)` for t in [0, count), using geometric skipping.
template <typename Emit>
void bernoulli_process(long long count, double p, Rng& rng, Emit&& emit) {
  if (count <= 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (long long t = 0; t < count; ++t) emit(t);
    return;
  }
  const double log1m = std::log1p(-p);
  long long t = -1;
  while (true) {
    // Skip a Geometric(p) number of failures.
    double u = 1.0 - rng.uniform01();
    long long jump = 1 + static_cast<long long>(std::floor(std::log(u) / log1m));
    if (jump < 1) jump = 1;
    t += jump;
    if (t >= count) break;
    emit(t);
  }
}

}  // namespace

std::pair<std::shared_ptr<GraphData>, std::vector<int>> rsbm(const SbmSpec& spec, Rng& rng) {
  const int k = static_cast<int>(spec.pi.size());
  if (spec.n <= 0) throw ConfigError("rsbm: n must be positive");
  check_simplex(spec.pi);
  if (spec.theta.rows() != k || spec.theta.cols() != k)
    throw ConfigError("rsbm: theta must be K x K");
  if ((spec.theta.array() < 0.0).any() || (spec.theta.array() > 1.0).any())
    throw ConfigError("rsbm: theta entries must lie in [0, 1]");
  if (!spec.directed && !spec.theta.isApprox(spec.theta.transpose(), 1e-12))
    throw ConfigError("rsbm: theta must be symmetric for undirected graphs");

  std::vector<int> labels(spec.n);
  for (int i = 0; i < spec.n; ++i) labels[i] = sample_from(spec.pi, rng);

  // Group members per cluster, preserving node order.
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < spec.n; ++i) members[labels[i]].push_back(i);

  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < k; ++a) {
    const auto& ma = members[a];
    const long long na = static_cast<long long>(ma.size());
    // Within-block pairs (i < j).
    {
      const long long count = na * (na - 1) / 2;
      bernoulli_process(count, spec.theta(a, a), rng, [&](long long t) {
        // Row-major enumeration of the strict upper triangle.
        long long i = 0;
        long long rem = t;
        long long row_len = na - 1;
        while (rem >= row_len) {
          rem -= row_len;
          ++i;
          --row_len;
        }
        edges.emplace_back(ma[i], ma[i + 1 + rem]);
      });
      if (spec.directed) {
        bernoulli_process(count, spec.theta(a, a), rng, [&](long long t) {
          long long i = 0;
          long long rem = t;
          long long row_len = na - 1;
          while (rem >= row_len) {
            rem -= row_len;
            ++i;
            --row_len;
          }
          edges.emplace_back(ma[i + 1 + rem], ma[i]);
        });
      }
    }
    // Cross-block pairs.
    for (int b = spec.directed ? 0 : a + 1; b < k; ++b) {
      if (b == a) continue;
      const auto& mb = members[b];
      const long long nb = static_cast<long long>(mb.size());
      bernoulli_process(na * nb, spec.theta(a, b), rng, [&](long long t) {
        edges.emplace_back(ma[t / nb], mb[t % nb]);
      });
    }
  }
  auto graph = std::make_shared<GraphData>(spec.n, spec.directed, std::move(edges));
  return {graph, labels};
}

std::pair<std::shared_ptr<ContinuousData>, std::vector<int>> rgmm(const GmmSpec& spec,
                                                                  Rng& rng) {
  const int k = static_cast<int>(spec.pi.size());
  if (spec.n <= 0 || k == 0) throw ConfigError("rgmm: empty spec");
  check_simplex(spec.pi);
  if (static_cast<int>(spec.means.size()) != k || static_cast<int>(spec.covs.size()) != k)
    throw ConfigError("rgmm: means/covs must have K entries");
  const int p = static_cast<int>(spec.means[0].size());

  std::vector<Eigen::MatrixXd> chol(k);
  for (int c = 0; c < k; ++c) {
    if (spec.means[c].size() != p || spec.covs[c].rows() != p || spec.covs[c].cols() != p)
      throw ConfigError("rgmm: dimension mismatch");
    if (spec.covs[c].isZero(0.0)) {
      chol[c] = Eigen::MatrixXd::Zero(p, p);
      continue;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(spec.covs[c]);
    if (llt.info() != Eigen::Success) throw ConfigError("rgmm: covariance not SPD");
    chol[c] = llt.matrixL();
  }

  auto data = std::make_shared<ContinuousData>();
  data->x.resize(spec.n, p);
  for (int j = 0; j < p; ++j) data->columns.push_back("x" + std::to_string(j + 1));
  std::vector<int> labels(spec.n);
  Eigen::VectorXd z(p);
  for (int i = 0; i < spec.n; ++i) {
    const int c = sample_from(spec.pi, rng);
    labels[i] = c;
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    data->x.row(i) = (spec.means[c] + chol[c] * z).transpose();
  }
  return {data, labels};
}

std::pair<std::shared_ptr<CategoricalData>, std::vector<int>> rlca(const LcaSpec& spec,
                                                                   Rng& rng) {
  const int k = static_cast<int>(spec.pi.size());
  if (spec.n <= 0 || k == 0) throw ConfigError("rlca: empty spec");
  check_simplex(spec.pi);
  if (static_cast<int>(spec.probs.size()) != k) throw ConfigError("rlca: probs must have K entries");
  const int p = static_cast<int>(spec.probs[0].size());

  auto data = std::make_shared<CategoricalData>();
  data->rows = spec.n;
  data->codes.assign(p, std::vector<int>(spec.n));
  for (int j = 0; j < p; ++j) {
    const int dj = static_cast<int>(spec.probs[0][j].size());
    data->arity.push_back(dj);
    data->columns.push_back("v" + std::to_string(j + 1));
    std::vector<std::string> lv(dj);
    for (int c = 0; c < dj; ++c) lv[c] = "m" + std::to_string(c + 1);
    data->levels.push_back(lv);
  }
  std::vector<int> labels(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const int c = sample_from(spec.pi, rng);
    labels[i] = c;
    for (int j = 0; j < p; ++j) data->codes[j][i] = sample_from(spec.probs[c][j], rng);
  }
  return {data, labels};
}

Eigen::MatrixXd hierarchical_sbm_theta(double p_base, double p_mid, double p_top,
                                       double p_cross) {
  Eigen::MatrixXd theta(12, 12);
  for (int a = 0; a < 12; ++a) {
    for (int b = 0; b < 12; ++b) {
      if (a == b) {
        theta(a, b) = p_base;
      } else if (a / 2 == b / 2) {
        theta(a, b) = p_mid;  // same mid-level block of 2 base clusters
      } else if (a / 6 == b / 6) {
        theta(a, b) = p_top;  // same top-level half
      } else {
        theta(a, b) = p_cross;
      }
    }
  }
  return theta;
}

}  // namespace iclust
