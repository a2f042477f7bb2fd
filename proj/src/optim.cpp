#include "iclust/optim.hpp"

#include <algorithm>
#include <cassert>
#include <exception>
#include <numeric>

#include "iclust/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace iclust {

namespace {

// Substream tags so the per-purpose seeds cannot collide with the
// per-individual (generation, index) streams.
constexpr std::uint64_t kSelectTag = 0xffffffff00000001ull;
constexpr std::uint64_t kPolishTag = 0xffffffff00000002ull;
constexpr std::uint64_t kChainTag = 0xffffffff00000003ull;

void shuffle(std::vector<int>& v, Rng& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    int j = rng.uniform_int(i + 1);
    std::swap(v[i], v[j]);
  }
}

struct Individual {
  Partition part;
  double icl = 0.0;
};

int best_index(const std::vector<Individual>& pop) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(pop.size()); ++j)
    if (pop[j].icl > pop[best].icl) best = j;
  return best;
}

// Runs fn(j) for j in [0, count) on up to `threads` threads, rethrowing the
// first captured exception. Each iteration must be independent.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  std::exception_ptr err;
#ifdef _OPENMP
  if (threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int j = 0; j < count; ++j) {
      try {
        fn(j);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#else
  (void)threads;
#endif
  for (int j = 0; j < count; ++j) fn(j);
  (void)err;
}

}  // namespace

SearchState make_state(const ObsModel& model, Partition part, const PartitionTermCache& ptc) {
  SearchState st;
  st.part = std::move(part);
  st.stats = model.init_stats(st.part);
  st.icl.obs_term = model.log_marginal(*st.stats);
  st.icl.partition_term = ptc.value(st.part.sizes());
  st.icl.total = st.icl.obs_term + st.icl.partition_term;
  return st;
}

bool swap_epoch(SearchState& st, const ObsModel& model, const PartitionTermCache& ptc,
                Rng& rng) {
  const int n = st.part.n();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  bool improved = false;
  for (int idx = 0; idx < n; ++idx) {
    const int i = order[idx];
    const int k = st.part.k();
    if (k <= 1) continue;
    const int g = st.part.label(i);
    double best_total = 0.0, best_obs = 0.0, best_part = 0.0;
    int best_h = -1;
    for (int h = 0; h < k; ++h) {
      if (h == g) continue;
      const double dobs = model.delta_swap(*st.stats, i, g, h);
      const double dpart = ptc.swap_delta(st.part.sizes(), g, h);
      const double total = dobs + dpart;
      if (total > best_total) {
        best_total = total;
        best_obs = dobs;
        best_part = dpart;
        best_h = h;
      }
    }
    if (best_h < 0) continue;
    model.apply_swap(*st.stats, i, g, best_h);
    st.part.move(i, best_h);
    st.icl.obs_term += best_obs;
    st.icl.partition_term += best_part;
    st.icl.total = st.icl.obs_term + st.icl.partition_term;
    if (st.part.size_of(g) == 0) {
      model.remove_empty(*st.stats, g);
      st.part.remove_empty(g);
    }
    improved = true;
  }
  return improved;
}

int greedy_swap(SearchState& st, const ObsModel& model, const PartitionTermCache& ptc,
                Rng& rng, int max_epochs) {
  int active = 0;
  for (int e = 0; e < max_epochs; ++e) {
    if (!swap_epoch(st, model, ptc, rng)) break;
    ++active;
  }
  return active;
}

namespace {

void remap_after_merge(std::vector<std::pair<int, int>>& pairs, int g, int h) {
  for (auto& pr : pairs) {
    auto fix = [&](int c) {
      if (c == h) return g;
      return c > h ? c - 1 : c;
    };
    pr.first = fix(pr.first);
    pr.second = fix(pr.second);
    if (pr.first > pr.second) std::swap(pr.first, pr.second);
  }
  std::erase_if(pairs, [](const auto& pr) { return pr.first == pr.second; });
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

void apply_merge_move(SearchState& st, const ObsModel& model, int g, int h, double dobs,
                      double dpart) {
  model.apply_merge(*st.stats, g, h);
  st.part.merge(g, h);
  st.icl.obs_term += dobs;
  st.icl.partition_term += dpart;
  st.icl.total = st.icl.obs_term + st.icl.partition_term;
}

}  // namespace

int greedy_merge(SearchState& st, const ObsModel& model, const PartitionTermCache& ptc,
                 const std::vector<std::pair<int, int>>* restricted) {
  std::vector<std::pair<int, int>> pool;
  const bool use_pool = restricted != nullptr;
  if (use_pool) {
    pool = *restricted;
    for (auto& pr : pool)
      if (pr.first > pr.second) std::swap(pr.first, pr.second);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }

  int merges = 0;
  while (st.part.k() >= 2) {
    double best_total = 0.0, best_obs = 0.0, best_part = 0.0;
    int bg = -1, bh = -1;
    auto consider = [&](int g, int h) {
      const double dobs = model.delta_merge(*st.stats, g, h);
      const double dpart = ptc.merge_delta(st.part.sizes(), g, h);
      const double total = dobs + dpart;
      if (total > best_total) {
        best_total = total;
        best_obs = dobs;
        best_part = dpart;
        bg = g;
        bh = h;
      }
    };
    if (use_pool) {
      for (const auto& [g, h] : pool) consider(g, h);
    } else {
      const int k = st.part.k();
      for (int g = 0; g < k; ++g)
        for (int h = g + 1; h < k; ++h) consider(g, h);
    }
    if (bg < 0) break;
    apply_merge_move(st, model, bg, bh, best_obs, best_part);
    if (use_pool) remap_after_merge(pool, bg, bh);
    ++merges;
  }
  return merges;
}

void force_merge_to_kmax(SearchState& st, const ObsModel& model, const PartitionTermCache& ptc,
                         int kmax) {
  while (st.part.k() > kmax) {
    const int k = st.part.k();
    double best_total = 0.0, best_obs = 0.0, best_part = 0.0;
    int bg = -1, bh = -1;
    for (int g = 0; g < k; ++g) {
      for (int h = g + 1; h < k; ++h) {
        const double dobs = model.delta_merge(*st.stats, g, h);
        const double dpart = ptc.merge_delta(st.part.sizes(), g, h);
        const double total = dobs + dpart;
        if (bg < 0 || total > best_total) {
          best_total = total;
          best_obs = dobs;
          best_part = dpart;
          bg = g;
          bh = h;
        }
      }
    }
    apply_merge_move(st, model, bg, bh, best_obs, best_part);
  }
}

Partition cross_partition(const Partition& p1, const Partition& p2) {
  if (p1.n() != p2.n()) throw ConfigError("cross_partition: length mismatch");
  const int n = p1.n();
  const long long k2 = p2.k();
  std::vector<int> pair_label(static_cast<std::size_t>(p1.k()) * k2, -1);
  std::vector<int> labels(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const std::size_t key = static_cast<std::size_t>(p1.label(i)) * k2 + p2.label(i);
    if (pair_label[key] < 0) pair_label[key] = next++;
    labels[i] = pair_label[key];
  }
  return compact(labels);
}

std::vector<std::pair<int, int>> shared_parent_pairs(const Partition& child,
                                                     const Partition& p1,
                                                     const Partition& p2) {
  const int kc = child.k();
  std::vector<int> par1(kc, -1), par2(kc, -1);
  for (int i = 0; i < child.n(); ++i) {
    par1[child.label(i)] = p1.label(i);
    par2[child.label(i)] = p2.label(i);
  }
  std::vector<std::pair<int, int>> pairs;
  for (int g = 0; g < kc; ++g)
    for (int h = g + 1; h < kc; ++h)
      if (par1[g] == par1[h] || par2[g] == par2[h]) pairs.emplace_back(g, h);
  return pairs;
}

Partition mutate_split(const Partition& p, Rng& rng) {
  std::vector<int> eligible;
  for (int k = 0; k < p.k(); ++k)
    if (p.size_of(k) >= 2) eligible.push_back(k);
  if (eligible.empty()) return p;
  const int target = eligible[rng.uniform_int(static_cast<int>(eligible.size()))];

  std::vector<int> members;
  for (int i = 0; i < p.n(); ++i)
    if (p.label(i) == target) members.push_back(i);

  std::vector<int> labels = p.labels();
  const int fresh = p.k();
  while (true) {
    int moved = 0;
    for (int i : members) {
      if (rng.bernoulli(0.5)) {
        labels[i] = fresh;
        ++moved;
      } else {
        labels[i] = target;
      }
    }
    if (moved > 0 && moved < static_cast<int>(members.size())) break;
  }
  return compact(labels);
}

std::vector<int> rank_select(const std::vector<double>& fitness, int count, Rng& rng) {
  const int m = static_cast<int>(fitness.size());
  if (m == 0) throw ConfigError("rank_select: empty population");
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fitness[a] < fitness[b]; });
  // order[0] is the worst (weight 1), order[m-1] the best (weight m).
  std::vector<double> cum(m);
  double acc = 0.0;
  std::vector<int> weight_owner(m);
  for (int r = 0; r < m; ++r) {
    acc += static_cast<double>(r + 1);
    cum[r] = acc;
    weight_owner[r] = order[r];
  }
  std::vector<int> picked(count);
  for (int t = 0; t < count; ++t) {
    const double u = rng.uniform01() * acc;
    const int r = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    picked[t] = weight_owner[std::min(r, m - 1)];
  }
  return picked;
}

namespace {

// Shared GA skeleton; `hybrid` toggles the greedy local-search steps.
GaResult run_ga(const ObsModel& model, const GaParams& params, double alpha, int k_init,
                bool hybrid) {
  if (params.pop_size < 1) throw ConfigError("ga: pop_size must be >= 1");
  if (params.kmax < 1) throw ConfigError("ga: Kmax must be >= 1");
  if (params.prob_mutation < 0.0 || params.prob_mutation > 1.0)
    throw ConfigError("ga: prob_mutation must be in [0, 1]");
  const int n = model.n();
  const PartitionTermCache ptc(n, alpha);
  const int pop_size = params.pop_size;

  std::vector<Individual> pop(pop_size);
  parallel_for(pop_size, params.threads, [&](int j) {
    Rng rng(derive_seed(params.seed, 0, static_cast<std::uint64_t>(j)));
    Partition part = Partition::random(n, k_init, rng);
    SearchState st = make_state(model, std::move(part), ptc);
    if (hybrid) greedy_swap(st, model, ptc, rng, params.max_swap_epochs);
    if (st.part.k() > params.kmax) force_merge_to_kmax(st, model, ptc, params.kmax);
    pop[j] = Individual{std::move(st.part), st.icl.total};
  });

  GaResult out;
  int best = best_index(pop);
  Individual elite = pop[best];
  out.history.push_back(elite.icl);
  int stagnant = 0;

  for (int gen = 1; gen <= params.nb_max_gen && stagnant < 2; ++gen) {
    const int n_children = pop_size - 1;
    std::vector<int> sel;
    {
      Rng sel_rng(derive_seed(params.seed, static_cast<std::uint64_t>(gen), kSelectTag));
      std::vector<double> fitness(pop_size);
      for (int j = 0; j < pop_size; ++j) fitness[j] = pop[j].icl;
      sel = rank_select(fitness, 2 * n_children, sel_rng);
    }

    std::vector<Individual> children(n_children);
    parallel_for(n_children, params.threads, [&](int t) {
      Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(gen),
                          static_cast<std::uint64_t>(t)));
      const Partition& pa = pop[sel[2 * t]].part;
      const Partition& pb = pop[sel[2 * t + 1]].part;
      Partition child = cross_partition(pa, pb);
      SearchState st = make_state(model, std::move(child), ptc);
      if (hybrid) {
        auto pairs = shared_parent_pairs(st.part, pa, pb);
        greedy_merge(st, model, ptc, &pairs);
      }
      if (st.part.k() > params.kmax) force_merge_to_kmax(st, model, ptc, params.kmax);
      if (rng.uniform01() < params.prob_mutation && st.part.k() < params.kmax) {
        Partition split = mutate_split(st.part, rng);
        st = make_state(model, std::move(split), ptc);
        if (hybrid) greedy_swap(st, model, ptc, rng, params.max_swap_epochs);
      }
      children[t] = Individual{std::move(st.part), st.icl.total};
    });

    children.push_back(elite);
    pop = std::move(children);
    best = best_index(pop);
    if (pop[best].icl > elite.icl) {
      elite = pop[best];
      stagnant = 0;
    } else {
      ++stagnant;
    }
    out.history.push_back(elite.icl);
  }

  SearchState final_state = make_state(model, elite.part, ptc);
  if (hybrid) {
    // Polish to a swap/merge fixed point so no single move improves the
    // returned solution.
    Rng rng(derive_seed(params.seed, kPolishTag, 0));
    for (int round = 0; round < 1000; ++round) {
      const int swaps = greedy_swap(final_state, model, ptc, rng, params.max_swap_epochs);
      const int merges = greedy_merge(final_state, model, ptc);
      if (swaps == 0 && merges == 0) break;
    }
  } else {
    greedy_merge(final_state, model, ptc);
  }
  if (final_state.icl.total > out.history.back()) out.history.push_back(final_state.icl.total);
  out.best = std::move(final_state);
  return out;
}

}  // namespace

GaResult hybrid_ga(const ObsModel& model, const GaParams& params, double alpha, int k_init) {
  return run_ga(model, params, alpha, k_init, true);
}

GaResult genetic_ga(const ObsModel& model, const GaParams& params, double alpha, int k_init) {
  return run_ga(model, params, alpha, k_init, false);
}

GaResult multistart(const ObsModel& model, const MultistartParams& params, double alpha,
                    int k_init) {
  if (params.nb_start < 1) throw ConfigError("multistart: nb_start must be >= 1");
  const int n = model.n();
  const PartitionTermCache ptc(n, alpha);

  std::vector<Individual> chains(params.nb_start);
  parallel_for(params.nb_start, params.threads, [&](int j) {
    Rng rng(derive_seed(params.seed, kChainTag, static_cast<std::uint64_t>(j)));
    SearchState st = make_state(model, Partition::random(n, k_init, rng), ptc);
    // Alternate swap and merge passes until a fixed point.
    for (int round = 0; round < 1000; ++round) {
      const int swaps = greedy_swap(st, model, ptc, rng, params.max_swap_epochs);
      const int merges = greedy_merge(st, model, ptc);
      if (swaps == 0 && merges == 0) break;
    }
    chains[j] = Individual{std::move(st.part), st.icl.total};
  });

  GaResult out;
  int best = 0;
  for (int j = 1; j < params.nb_start; ++j)
    if (chains[j].icl > chains[best].icl) best = j;
  for (const auto& c : chains) out.history.push_back(c.icl);
  out.best = make_state(model, chains[best].part, ptc);
  return out;
}

}  // namespace iclust
