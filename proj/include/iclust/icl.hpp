#pragma once

#include <span>
#include <vector>

#include "iclust/partition.hpp"

namespace iclust {

// Symmetric Dirichlet concentration over cluster proportions; the
// proportions themselves are integrated out and never materialized.
struct SharedPrior {
  double alpha = 1.0;
};

// Exact ICL split into its two additive parts.
struct IclValue {
  double obs_term = 0.0;        // log p(X | Z, beta)
  double partition_term = 0.0;  // log p(Z | alpha)
  double total = 0.0;           // obs_term + partition_term
};

// log p(Z | alpha) for cluster sizes n_k summing to n:
//   log Gamma(K a) + sum_k log Gamma(a + n_k) - K log Gamma(a) - log Gamma(n + K a)
// computed entirely in log-gamma space. Throws ConfigError if any size is
// zero or alpha <= 0.
double log_partition_term(std::span<const int> sizes, double alpha, int n);

IclValue assemble_icl(double obs_term, std::span<const int> sizes, double alpha);

// Precomputed log-gamma tables for one (n, alpha), so the partition-term
// part of a move delta is O(1). Immutable after construction; safe to share
// across threads.
class PartitionTermCache {
 public:
  PartitionTermCache(int n, double alpha);

  double alpha() const { return alpha_; }
  int n() const { return n_; }

  double value(std::span<const int> sizes) const;

  // Change in log p(Z | alpha) when one object moves from cluster g to
  // existing cluster h. Accounts for the disappearance of g when it empties
  // (eager compaction, K -> K-1).
  double swap_delta(const std::vector<int>& sizes, int g, int h) const;

  // Change when clusters g and h fuse (K -> K-1).
  double merge_delta(const std::vector<int>& sizes, int g, int h) const;

 private:
  double lg_alpha_plus(int t) const { return lg_alpha_plus_[t]; }

  int n_;
  double alpha_;
  std::vector<double> lg_alpha_plus_;  // lgamma(alpha + t),  t = 0..n
  std::vector<double> lg_k_alpha_;     // lgamma(K alpha),    K = 1..n+1
  std::vector<double> lg_n_k_alpha_;   // lgamma(n + K alpha)
};

}  // namespace iclust
