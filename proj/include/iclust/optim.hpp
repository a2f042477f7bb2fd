#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "iclust/icl.hpp"
#include "iclust/model.hpp"
#include "iclust/partition.hpp"
#include "iclust/rng.hpp"

namespace iclust {

// A partition bundled with its model statistics and current exact ICL.
struct SearchState {
  Partition part;
  std::unique_ptr<ObsStats> stats;
  IclValue icl;

  SearchState() = default;
  SearchState(SearchState&&) = default;
  SearchState& operator=(SearchState&&) = default;
  SearchState(const SearchState& o)
      : part(o.part), stats(o.stats ? o.stats->clone() : nullptr), icl(o.icl) {}
  SearchState& operator=(const SearchState& o) {
    if (this != &o) {
      part = o.part;
      stats = o.stats ? o.stats->clone() : nullptr;
      icl = o.icl;
    }
    return *this;
  }
};

struct GaParams {
  int pop_size = 20;
  int nb_max_gen = 10;
  double prob_mutation = 0.25;
  int kmax = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  int max_swap_epochs = 50;
};

struct MultistartParams {
  int nb_start = 10;
  std::uint64_t seed = 0;
  int threads = 1;
  int max_swap_epochs = 50;
};

struct GaResult {
  SearchState best;
  std::vector<double> history;  // best total ICL per generation
};

SearchState make_state(const ObsModel& model, Partition part, const PartitionTermCache& ptc);

// One pass over all objects in a seeded random order; for each object the
// best strictly-improving move to another existing cluster is applied
// (ties broken by lowest target index). Clusters that empty are compacted
// eagerly. Returns whether any move was applied.
bool swap_epoch(SearchState& st, const ObsModel& model, const PartitionTermCache& ptc, Rng& rng);

// Repeats swap_epoch until a fixed point or max_epochs; returns the number
// of epochs that applied at least one move.
int greedy_swap(SearchState& st, const ObsModel& model, const PartitionTermCache& ptc,
                Rng& rng, int max_epochs = 50);

// Applies the best strictly-improving merge until none remains, optionally
// restricted to the given candidate pairs (indices in the current
// labeling; the set is remapped as merges shrink the partition). Ties go to
// the lexicographically smallest pair. Returns the number of merges.
int greedy_merge(SearchState& st, const ObsModel& model, const PartitionTermCache& ptc,
                 const std::vector<std::pair<int, int>>* restricted = nullptr);

// Forces merges (best total-ICL pair, sign ignored) until k() <= kmax.
void force_merge_to_kmax(SearchState& st, const ObsModel& model,
                         const PartitionTermCache& ptc, int kmax);

// Cross partition (common refinement): clusters are the non-empty
// intersections of parent clusters, in first-appearance order.
Partition cross_partition(const Partition& p1, const Partition& p2);

// Candidate merge pairs for a crossover child: pairs of child clusters
// contained in the same cluster of either parent.
std::vector<std::pair<int, int>> shared_parent_pairs(const Partition& child,
                                                     const Partition& p1, const Partition& p2);

// Splits a uniformly chosen cluster of size >= 2 into two non-empty parts;
// returns the input unchanged when all clusters are singletons.
Partition mutate_split(const Partition& p, Rng& rng);

// Linear rank selection with replacement: worst rank has weight 1, best has
// weight pop_size; ties in fitness are broken by index.
std::vector<int> rank_select(const std::vector<double>& fitness, int count, Rng& rng);

GaResult hybrid_ga(const ObsModel& model, const GaParams& params, double alpha, int k_init);
GaResult genetic_ga(const ObsModel& model, const GaParams& params, double alpha, int k_init);
GaResult multistart(const ObsModel& model, const MultistartParams& params, double alpha,
                    int k_init);

}  // namespace iclust
