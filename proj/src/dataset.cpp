#include "iclust/dataset.hpp"

#include <algorithm>
#include <set>

#include "iclust/errors.hpp"

namespace iclust {

GraphData::GraphData(int n, bool directed, std::vector<std::pair<int, int>> edge_list)
    : n_(n), directed_(directed) {
  std::set<std::pair<int, int>> uniq;
  for (auto [a, b] : edge_list) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("edge endpoint out of range");
    if (a == b) {
      ++dropped_self_loops_;
      continue;
    }
    if (!directed_ && a > b) std::swap(a, b);
    uniq.emplace(a, b);
  }
  edges_.assign(uniq.begin(), uniq.end());
  m_ = static_cast<long long>(edges_.size());

  std::vector<std::size_t> out_deg(n_ + 1, 0), in_deg(n_ + 1, 0);
  for (auto [a, b] : edges_) {
    ++out_deg[a + 1];
    if (directed_) {
      ++in_deg[b + 1];
    } else {
      ++out_deg[b + 1];
    }
  }
  out_off_.assign(n_ + 1, 0);
  in_off_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) out_off_[i + 1] = out_off_[i] + out_deg[i + 1];
  for (int i = 0; i < n_; ++i) in_off_[i + 1] = in_off_[i] + in_deg[i + 1];
  out_adj_.resize(out_off_[n_]);
  in_adj_.resize(in_off_[n_]);
  std::vector<std::size_t> op(out_off_.begin(), out_off_.end() - 1);
  std::vector<std::size_t> ip(in_off_.begin(), in_off_.end() - 1);
  for (auto [a, b] : edges_) {
    out_adj_[op[a]++] = b;
    if (directed_) {
      in_adj_[ip[b]++] = a;
    } else {
      out_adj_[op[b]++] = a;
    }
  }
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sbm: return "sbm";
    case ModelKind::gmm: return "gmm";
    case ModelKind::diag_gmm: return "diaggmm";
    case ModelKind::lca: return "lca";
    case ModelKind::mom: return "mom";
    case ModelKind::combined: return "combined";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "sbm") return ModelKind::sbm;
  if (s == "gmm") return ModelKind::gmm;
  if (s == "diaggmm" || s == "diag_gmm") return ModelKind::diag_gmm;
  if (s == "lca") return ModelKind::lca;
  if (s == "mom") return ModelKind::mom;
  if (s == "combined") return ModelKind::combined;
  throw ConfigError("unknown model kind: " + s);
}

int DatasetView::n() const {
  return std::visit([](const auto& d) { return d->n(); }, data);
}

}  // namespace iclust
