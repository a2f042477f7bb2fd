#include "iclust/partition.hpp"

#include <algorithm>
#include <cassert>

#include "iclust/errors.hpp"

namespace iclust {

Partition Partition::from_labels(const std::vector<int>& labels) {
  return compact(labels);
}

Partition Partition::single_cluster(int n) {
  Partition p;
  p.labels_.assign(static_cast<std::size_t>(n), 0);
  p.sizes_.assign(1, n);
  return p;
}

Partition Partition::random(int n, int k_init, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[i] = rng.uniform_int(k_init);
  return compact(labels);
}

void Partition::move(int i, int h) {
  int g = labels_[i];
  if (g == h) return;
  labels_[i] = h;
  --sizes_[g];
  ++sizes_[h];
}

void Partition::remove_empty(int k) {
  assert(sizes_[k] == 0);
  for (auto& l : labels_) {
    if (l > k) --l;
  }
  sizes_.erase(sizes_.begin() + k);
}

void Partition::merge(int g, int h) {
  assert(g != h);
  for (auto& l : labels_) {
    if (l == h) l = g;
  }
  sizes_[g] += sizes_[h];
  sizes_[h] = 0;
  remove_empty(h);
}

Partition compact(const std::vector<int>& labels) {
  Partition p;
  p.labels_.resize(labels.size());
  int next = 0;
  std::vector<int> remap;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int l = labels[i];
    if (l < 0) throw ConfigError("negative cluster label");
    if (l >= static_cast<int>(remap.size())) remap.resize(l + 1, -1);
    if (remap[l] < 0) {
      remap[l] = next++;
      p.sizes_.push_back(0);
    }
    p.labels_[i] = remap[l];
    ++p.sizes_[remap[l]];
  }
  return p;
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  if (a.n() != b.n()) throw ConfigError("adjusted_rand_index: length mismatch");
  const int n = a.n();
  const int ka = a.k();
  const int kb = b.k();
  // Contingency table of pair counts.
  std::vector<long long> table(static_cast<std::size_t>(ka) * kb, 0);
  for (int i = 0; i < n; ++i) ++table[static_cast<std::size_t>(a.label(i)) * kb + b.label(i)];

  auto choose2 = [](long long m) { return m * (m - 1) / 2; };
  double sum_cells = 0.0;
  for (long long c : table) sum_cells += static_cast<double>(choose2(c));
  double sum_a = 0.0;
  for (int s : a.sizes()) sum_a += static_cast<double>(choose2(s));
  double sum_b = 0.0;
  for (int s : b.sizes()) sum_b += static_cast<double>(choose2(s));
  double pairs = static_cast<double>(choose2(n));
  if (pairs == 0.0) return 1.0;

  double expected = sum_a * sum_b / pairs;
  double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return 1.0;  // e.g. both all-singletons
  return (sum_cells - expected) / (maximum - expected);
}

}  // namespace iclust
