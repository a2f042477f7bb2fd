#pragma once

#include <vector>

#include "iclust/rng.hpp"

namespace iclust {

// Hard assignment of n objects to K non-empty clusters with dense 0-based
// labels. sizes[k] is maintained alongside the labels; compaction keeps K
// equal to the number of non-empty clusters at all times.
class Partition {
 public:
  Partition() = default;

  // Builds from raw labels; relabels so that clusters are dense and ordered
  // by first appearance.
  static Partition from_labels(const std::vector<int>& labels);

  // All objects in one cluster.
  static Partition single_cluster(int n);

  // Uniform random labels over k_init clusters, then compacted (the result
  // may have fewer clusters if some label never occurs).
  static Partition random(int n, int k_init, Rng& rng);

  int n() const { return static_cast<int>(labels_.size()); }
  int k() const { return static_cast<int>(sizes_.size()); }
  int label(int i) const { return labels_[i]; }
  int size_of(int k) const { return sizes_[k]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& sizes() const { return sizes_; }

  // Moves object i from its cluster to cluster h. Does not compact; the
  // source cluster may become empty (caller must follow up with
  // remove_empty).
  void move(int i, int h);

  // Drops cluster slot k (which must be empty); labels above k shift down.
  void remove_empty(int k);

  // Fuses cluster h into cluster g and compacts (slot h removed).
  void merge(int g, int h);

  bool operator==(const Partition& other) const {
    return labels_ == other.labels_;  // sizes are derived
  }

 private:
  friend Partition compact(const std::vector<int>& labels);
  std::vector<int> labels_;
  std::vector<int> sizes_;
};

// Relabels to remove empty clusters, preserving order of first appearance.
// Accepts label vectors whose sizes may contain zeros; idempotent on
// already-compact input.
Partition compact(const std::vector<int>& labels);

// Standard adjusted Rand index in [-1, 1]; 1 iff equal up to relabeling.
// Throws ConfigError on length mismatch.
double adjusted_rand_index(const Partition& a, const Partition& b);

}  // namespace iclust
