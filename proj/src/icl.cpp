#include "iclust/icl.hpp"

#include <cmath>
#include <numeric>

#include "iclust/errors.hpp"

namespace iclust {

double log_partition_term(std::span<const int> sizes, double alpha, int n) {
  if (alpha <= 0.0) throw ConfigError("log_partition_term: alpha must be > 0");
  const int k = static_cast<int>(sizes.size());
  long long total = 0;
  double sum_lg = 0.0;
  for (int s : sizes) {
    if (s < 1) throw ConfigError("log_partition_term: empty cluster size");
    total += s;
    sum_lg += std::lgamma(alpha + s);
  }
  if (total != n) throw ConfigError("log_partition_term: sizes do not sum to n");
  return std::lgamma(k * alpha) + sum_lg - k * std::lgamma(alpha) -
         std::lgamma(n + k * alpha);
}

IclValue assemble_icl(double obs_term, std::span<const int> sizes, double alpha) {
  IclValue v;
  v.obs_term = obs_term;
  int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  v.partition_term = log_partition_term(sizes, alpha, n);
  v.total = v.obs_term + v.partition_term;
  return v;
}

PartitionTermCache::PartitionTermCache(int n, double alpha) : n_(n), alpha_(alpha) {
  if (alpha <= 0.0) throw ConfigError("PartitionTermCache: alpha must be > 0");
  lg_alpha_plus_.resize(n + 2);
  for (int t = 0; t <= n + 1; ++t) lg_alpha_plus_[t] = std::lgamma(alpha + t);
  lg_k_alpha_.resize(n + 2);
  lg_n_k_alpha_.resize(n + 2);
  for (int k = 1; k <= n + 1; ++k) {
    lg_k_alpha_[k] = std::lgamma(k * alpha);
    lg_n_k_alpha_[k] = std::lgamma(n + k * alpha);
  }
}

double PartitionTermCache::value(std::span<const int> sizes) const {
  const int k = static_cast<int>(sizes.size());
  double sum_lg = 0.0;
  for (int s : sizes) sum_lg += lg_alpha_plus_[s];
  return lg_k_alpha_[k] + sum_lg - k * lg_alpha_plus_[0] - lg_n_k_alpha_[k];
}

double PartitionTermCache::swap_delta(const std::vector<int>& sizes, int g, int h) const {
  const int k = static_cast<int>(sizes.size());
  const int ng = sizes[g];
  const int nh = sizes[h];
  double d = lg_alpha_plus_[nh + 1] - lg_alpha_plus_[nh];
  if (ng > 1) {
    d += lg_alpha_plus_[ng - 1] - lg_alpha_plus_[ng];
  } else {
    // Cluster g empties and disappears: K -> K-1. Its size term
    // lgamma(alpha+1) is dropped, one -lgamma(alpha) is given back, and the
    // K-dependent terms shift.
    d += -lg_alpha_plus_[1] + lg_alpha_plus_[0] + lg_k_alpha_[k - 1] -
         lg_k_alpha_[k] - lg_n_k_alpha_[k - 1] + lg_n_k_alpha_[k];
  }
  return d;
}

double PartitionTermCache::merge_delta(const std::vector<int>& sizes, int g, int h) const {
  const int k = static_cast<int>(sizes.size());
  const int ng = sizes[g];
  const int nh = sizes[h];
  return lg_alpha_plus_[ng + nh] - lg_alpha_plus_[ng] - lg_alpha_plus_[nh] +
         lg_alpha_plus_[0] + lg_k_alpha_[k - 1] - lg_k_alpha_[k] -
         lg_n_k_alpha_[k - 1] + lg_n_k_alpha_[k];
}

}  // namespace iclust
