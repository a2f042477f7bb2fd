#include "iclust/hierarchy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

#include "iclust/errors.hpp"

namespace iclust {

double merge_threshold(double delta_obs, int n_g, int n_h, int k) {
  return delta_obs + std::log(static_cast<double>(k)) - std::log(static_cast<double>(k - 1)) +
         std::lgamma(static_cast<double>(n_g + n_h)) - std::lgamma(static_cast<double>(n_g)) -
         std::lgamma(static_cast<double>(n_h));
}

HierarchyPath build_path(const ObsModel& model, const SearchState& final_state) {
  HierarchyPath path;
  path.base = final_state.part;
  path.obs_base = final_state.icl.obs_term;
  const int k_star = path.base.k();

  path.nodes.resize(k_star);
  for (int c = 0; c < k_star; ++c) {
    path.nodes[c].size = path.base.size_of(c);
  }
  std::vector<int> cur_node(k_star);
  for (int c = 0; c < k_star; ++c) cur_node[c] = c;

  SearchState st(final_state);
  double obs = final_state.icl.obs_term;
  double running_height = 0.0;
  bool first = true;

  while (st.part.k() >= 2) {
    const int k = st.part.k();
    // All-pairs thresholds for this level; the block structure couples
    // pairs, so caching across levels is not safe for every model.
    int bg = -1, bh = -1;
    double best_thr = 0.0, best_obs = 0.0;
    for (int g = 0; g < k; ++g) {
      for (int h = g + 1; h < k; ++h) {
        const double dobs = model.delta_merge(*st.stats, g, h);
        const double thr = merge_threshold(dobs, st.part.size_of(g), st.part.size_of(h), k);
        if (bg < 0 || thr > best_thr) {
          best_thr = thr;
          best_obs = dobs;
          bg = g;
          bh = h;
        }
      }
    }

    MergeStep step;
    step.level = k - 1;
    step.left = bg;
    step.right = bh;
    step.delta_obs = best_obs;
    step.log_alpha = best_thr;
    obs += best_obs;
    step.icl_obs_after = obs;
    const double raw_height = -best_thr;
    running_height = first ? raw_height : std::max(running_height, raw_height);
    first = false;
    step.height = running_height;

    DendroNode node;
    node.left = cur_node[bg];
    node.right = cur_node[bh];
    node.height = running_height;
    node.size = st.part.size_of(bg) + st.part.size_of(bh);
    cur_node[bg] = static_cast<int>(path.nodes.size());
    cur_node.erase(cur_node.begin() + bh);
    path.nodes.push_back(node);
    path.steps.push_back(step);

    model.apply_merge(*st.stats, bg, bh);
    st.part.merge(bg, bh);
  }

  // Thresholds above log(1) give negative merge heights; keep branch
  // lengths non-negative by dropping the leaf baseline below them.
  if (!path.steps.empty() && path.steps.front().height < 0.0) {
    for (int c = 0; c < k_star; ++c) path.nodes[c].height = path.steps.front().height;
  }

  if (k_star >= 2) {
    path.leaf_order = order_leaves(path, leaf_cost_matrix(model, final_state));
  } else {
    path.leaf_order = {0};
  }
  return path;
}

Partition cut(const HierarchyPath& path, int k) {
  const int k_star = path.k_star();
  if (k < 1 || k > k_star) throw ConfigError("cut: level out of range");
  Partition part = path.base;
  for (int s = 0; s < k_star - k; ++s) part.merge(path.steps[s].left, path.steps[s].right);
  return part;
}

Eigen::MatrixXd leaf_cost_matrix(const ObsModel& model, const SearchState& final_state) {
  const int k = final_state.part.k();
  if (k < 2) throw ConfigError("leaf_cost_matrix: needs K >= 2");
  Eigen::MatrixXd cost(k, k);
  cost.setConstant(std::numeric_limits<double>::infinity());
  std::vector<std::pair<int, int>> pairs;
  for (int g = 0; g < k; ++g)
    for (int h = g + 1; h < k; ++h) pairs.emplace_back(g, h);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long idx = 0; idx < static_cast<long long>(pairs.size()); ++idx) {
    auto [g, h] = pairs[idx];
    const double dobs = model.delta_merge(*final_state.stats, g, h);
    const double thr =
        merge_threshold(dobs, final_state.part.size_of(g), final_state.part.size_of(h), k);
    cost(g, h) = -thr;
    cost(h, g) = -thr;
  }
  return cost;
}

double leaf_order_cost(const std::vector<int>& order, const Eigen::MatrixXd& cost) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) total += cost(order[i], order[i + 1]);
  return total;
}

namespace {

struct SubtreeTable {
  std::vector<int> leaves;                 // ascending leaf ids
  Eigen::MatrixXd cost;                    // cost[l][r]: best order l ... r
  std::vector<std::vector<std::pair<int, int>>> back;  // chosen (a, b) junction
};

int leaf_pos(const SubtreeTable& t, int leaf) {
  return static_cast<int>(std::lower_bound(t.leaves.begin(), t.leaves.end(), leaf) -
                          t.leaves.begin());
}

void reconstruct(const std::vector<SubtreeTable>& tables,
                 const std::vector<DendroNode>& nodes, int v, int l, int r,
                 std::vector<int>& out);

// Appends the optimal order of node v starting at leaf l and ending at r.
void reconstruct(const std::vector<SubtreeTable>& tables,
                 const std::vector<DendroNode>& nodes, int v, int l, int r,
                 std::vector<int>& out) {
  const auto& t = tables[v];
  if (t.leaves.size() == 1) {
    out.push_back(t.leaves[0]);
    return;
  }
  const auto [a, b] = t.back[leaf_pos(t, l)][leaf_pos(t, r)];
  const int left_child = nodes[v].left;
  const int right_child = nodes[v].right;
  // l sits in whichever child contains it.
  const auto& lt = tables[left_child];
  const bool l_in_left = std::binary_search(lt.leaves.begin(), lt.leaves.end(), l);
  const int first = l_in_left ? left_child : right_child;
  const int second = l_in_left ? right_child : left_child;
  reconstruct(tables, nodes, first, l, a, out);
  reconstruct(tables, nodes, second, b, r, out);
}

}  // namespace

std::vector<int> order_leaves(const HierarchyPath& path, const Eigen::MatrixXd& cost) {
  const int k_star = path.k_star();
  if (k_star == 1) return {0};
  if (!cost.allFinite()) {
    // Diagonal may be +inf (unused); anything else must be finite.
    for (int g = 0; g < k_star; ++g)
      for (int h = 0; h < k_star; ++h)
        if (g != h && !std::isfinite(cost(g, h)))
          throw ConfigError("order_leaves: non-finite cost");
  }

  const int n_nodes = static_cast<int>(path.nodes.size());
  std::vector<SubtreeTable> tables(n_nodes);
  for (int v = 0; v < n_nodes; ++v) {
    const auto& node = path.nodes[v];
    auto& t = tables[v];
    if (node.left < 0) {
      t.leaves = {v};
      t.cost = Eigen::MatrixXd::Zero(1, 1);
      t.back = {{{v, v}}};
      continue;
    }
    const auto& ta = tables[node.left];
    const auto& tb = tables[node.right];
    t.leaves.resize(ta.leaves.size() + tb.leaves.size());
    std::merge(ta.leaves.begin(), ta.leaves.end(), tb.leaves.begin(), tb.leaves.end(),
               t.leaves.begin());
    const int m = static_cast<int>(t.leaves.size());
    t.cost = Eigen::MatrixXd::Constant(m, m, std::numeric_limits<double>::infinity());
    t.back.assign(m, std::vector<std::pair<int, int>>(m, {-1, -1}));

    auto combine = [&](const SubtreeTable& first, const SubtreeTable& second) {
      for (int li = 0; li < static_cast<int>(first.leaves.size()); ++li) {
        for (int ri = 0; ri < static_cast<int>(second.leaves.size()); ++ri) {
          const int l = first.leaves[li];
          const int r = second.leaves[ri];
          double best = std::numeric_limits<double>::infinity();
          std::pair<int, int> arg{-1, -1};
          for (int ai = 0; ai < static_cast<int>(first.leaves.size()); ++ai) {
            for (int bi = 0; bi < static_cast<int>(second.leaves.size()); ++bi) {
              const int a = first.leaves[ai];
              const int b = second.leaves[bi];
              const double c = first.cost(li, ai) + cost(a, b) + second.cost(bi, ri);
              if (c < best) {
                best = c;
                arg = {a, b};
              }
            }
          }
          const int lp = leaf_pos(t, l);
          const int rp = leaf_pos(t, r);
          if (best < t.cost(lp, rp)) {
            t.cost(lp, rp) = best;
            t.back[lp][rp] = arg;
          }
        }
      }
    };
    combine(ta, tb);
    combine(tb, ta);
  }

  const auto& root = tables[n_nodes - 1];
  const int m = static_cast<int>(root.leaves.size());
  int bl = -1, br = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int li = 0; li < m; ++li) {
    for (int ri = 0; ri < m; ++ri) {
      if (li == ri) continue;
      if (root.cost(li, ri) < best) {
        best = root.cost(li, ri);
        bl = root.leaves[li];
        br = root.leaves[ri];
      }
    }
  }
  std::vector<int> order;
  order.reserve(k_star);
  reconstruct(tables, path.nodes, n_nodes - 1, bl, br, order);
  assert(static_cast<int>(order.size()) == k_star);
  return order;
}

namespace {

nlohmann::json node_json(const HierarchyPath& path, int v) {
  const auto& node = path.nodes[v];
  nlohmann::json j;
  j["id"] = v;
  j["size"] = node.size;
  j["height"] = node.height;
  if (node.left >= 0) {
    j["children"] = nlohmann::json::array({node_json(path, node.left),
                                           node_json(path, node.right)});
  } else {
    j["cluster"] = v;
  }
  return j;
}

void newick_node(const HierarchyPath& path, int v, double parent_height, std::ostream& os) {
  const auto& node = path.nodes[v];
  if (node.left >= 0) {
    os << '(';
    newick_node(path, node.left, node.height, os);
    os << ',';
    newick_node(path, node.right, node.height, os);
    os << ')';
  } else {
    os << 'c' << v;
  }
  os << ':' << (parent_height - node.height);
}

}  // namespace

nlohmann::json dendrogram_json(const HierarchyPath& path) {
  nlohmann::json j;
  j["leaf_order"] = path.leaf_order;
  j["root"] = node_json(path, static_cast<int>(path.nodes.size()) - 1);
  return j;
}

std::string dendrogram_newick(const HierarchyPath& path) {
  std::ostringstream os;
  const int root = static_cast<int>(path.nodes.size()) - 1;
  const auto& node = path.nodes[root];
  if (node.left < 0) {
    os << "c0:0;";
    return os.str();
  }
  os << '(';
  newick_node(path, node.left, node.height, os);
  os << ',';
  newick_node(path, node.right, node.height, os);
  os << ");";
  return os.str();
}

}  // namespace iclust
