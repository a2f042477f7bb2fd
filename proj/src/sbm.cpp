#include "iclust/models/sbm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "iclust/errors.hpp"

namespace iclust {

namespace {

constexpr std::size_t kMaxTableLen = std::size_t{1} << 21;

SbmStats& down(ObsStats& s) { return static_cast<SbmStats&>(s); }
const SbmStats& down(const ObsStats& s) { return static_cast<const SbmStats&>(s); }

}  // namespace

SbmModel::SbmModel(std::shared_ptr<const GraphData> graph, SbmPrior prior)
    : graph_(std::move(graph)), prior_(prior) {
  if (prior_.a0 <= 0.0 || prior_.b0 <= 0.0) throw ConfigError("sbm: a0 and b0 must be > 0");
  const long long n = graph_->n();
  const long long max_m = graph_->directed() ? n * (n - 1) : n * (n - 1) / 2;
  // Either the tables cover every possible block capacity or they are not
  // used at all: a partial table would make move costs depend on cluster
  // sizes, skewing scaling measurements.
  const std::size_t len =
      max_m + 2 <= static_cast<long long>(kMaxTableLen) ? static_cast<std::size_t>(max_m + 2)
                                                        : 2;
  lg_a_.init(prior_.a0, len);
  lg_b_.init(prior_.b0, len);
  lg_ab_.init(prior_.a0 + prior_.b0, len);
  log_beta0_ = std::lgamma(prior_.a0) + std::lgamma(prior_.b0) -
               std::lgamma(prior_.a0 + prior_.b0);
}

long long SbmModel::pair_capacity(long long nk, long long nl, bool diagonal) const {
  if (!diagonal) return nk * nl;
  return graph_->directed() ? nk * (nk - 1) : nk * (nk - 1) / 2;
}

std::unique_ptr<ObsStats> SbmModel::init_stats(const Partition& z) const {
  if (z.n() != graph_->n()) throw ConfigError("sbm: partition size mismatch");
  auto s = std::make_unique<SbmStats>();
  const int k = z.k();
  const int n = graph_->n();
  s->kk = k;
  s->sizes = z.sizes();
  s->e.assign(static_cast<std::size_t>(k) * k, 0);
  s->bd_out.assign(static_cast<std::size_t>(n) * k, 0);
  if (graph_->directed()) s->bd_in.assign(static_cast<std::size_t>(n) * k, 0);

  for (auto [a, b] : graph_->edges()) {
    const int za = z.label(a);
    const int zb = z.label(b);
    if (graph_->directed()) {
      ++s->edge(za, zb);
      ++s->bd_out[static_cast<std::size_t>(a) * k + zb];
      ++s->bd_in[static_cast<std::size_t>(b) * k + za];
    } else {
      if (za == zb) {
        ++s->edge(za, zb);
      } else {
        ++s->edge(za, zb);
        ++s->edge(zb, za);
      }
      ++s->bd_out[static_cast<std::size_t>(a) * k + zb];
      ++s->bd_out[static_cast<std::size_t>(b) * k + za];
    }
  }
  return s;
}

double SbmModel::log_marginal(const ObsStats& stats) const {
  const SbmStats& s = down(stats);
  const int k = s.kk;
  double total = 0.0;
  if (graph_->directed()) {
    for (int g = 0; g < k; ++g)
      for (int l = 0; l < k; ++l)
        total += block_term(s.edge(g, l), pair_capacity(s.sizes[g], s.sizes[l], g == l)) -
                 log_beta0_;
  } else {
    for (int g = 0; g < k; ++g)
      for (int l = g; l < k; ++l)
        total += block_term(s.edge(g, l), pair_capacity(s.sizes[g], s.sizes[l], g == l)) -
                 log_beta0_;
  }
  return total;
}

double SbmModel::delta_swap(const ObsStats& stats, int i, int g, int h) const {
  const SbmStats& s = down(stats);
  const int k = s.kk;
  assert(g != h && g >= 0 && g < k && h >= 0 && h < k);
  const long long ng = s.sizes[g], nh = s.sizes[h];
  const long long ng2 = ng - 1, nh2 = nh + 1;
  double delta = 0.0;

  if (!graph_->directed()) {
    const int* d = s.bd_out.data() + static_cast<std::size_t>(i) * k;
    for (int l = 0; l < k; ++l) {
      if (l == g || l == h) continue;
      const long long nl = s.sizes[l];
      delta += block_term(s.edge(g, l) - d[l], ng2 * nl) - block_term(s.edge(g, l), ng * nl);
      delta += block_term(s.edge(h, l) + d[l], nh2 * nl) - block_term(s.edge(h, l), nh * nl);
    }
    delta += block_term(s.edge(g, g) - d[g], ng2 * (ng2 - 1) / 2) -
             block_term(s.edge(g, g), ng * (ng - 1) / 2);
    delta += block_term(s.edge(h, h) + d[h], nh2 * (nh2 - 1) / 2) -
             block_term(s.edge(h, h), nh * (nh - 1) / 2);
    delta += block_term(s.edge(g, h) - d[h] + d[g], ng2 * nh2) -
             block_term(s.edge(g, h), ng * nh);
    return delta;
  }

  const int* dout = s.bd_out.data() + static_cast<std::size_t>(i) * k;
  const int* din = s.bd_in.data() + static_cast<std::size_t>(i) * k;
  for (int l = 0; l < k; ++l) {
    if (l == g || l == h) continue;
    const long long nl = s.sizes[l];
    delta += block_term(s.edge(g, l) - dout[l], ng2 * nl) - block_term(s.edge(g, l), ng * nl);
    delta += block_term(s.edge(h, l) + dout[l], nh2 * nl) - block_term(s.edge(h, l), nh * nl);
    delta += block_term(s.edge(l, g) - din[l], nl * ng2) - block_term(s.edge(l, g), nl * ng);
    delta += block_term(s.edge(l, h) + din[l], nl * nh2) - block_term(s.edge(l, h), nl * nh);
  }
  delta += block_term(s.edge(g, g) - dout[g] - din[g], ng2 * (ng2 - 1)) -
           block_term(s.edge(g, g), ng * (ng - 1));
  delta += block_term(s.edge(h, h) + dout[h] + din[h], nh2 * (nh2 - 1)) -
           block_term(s.edge(h, h), nh * (nh - 1));
  delta += block_term(s.edge(g, h) - dout[h] + din[g], ng2 * nh2) -
           block_term(s.edge(g, h), ng * nh);
  delta += block_term(s.edge(h, g) - din[h] + dout[g], nh2 * ng2) -
           block_term(s.edge(h, g), nh * ng);
  return delta;
}

void SbmModel::apply_swap(ObsStats& stats, int i, int g, int h) const {
  SbmStats& s = down(stats);
  const int k = s.kk;
  assert(g != h);

  if (!graph_->directed()) {
    int* d = s.bd_out.data() + static_cast<std::size_t>(i) * k;
    for (int l = 0; l < k; ++l) {
      if (l == g || l == h) continue;
      s.edge(g, l) -= d[l];
      s.edge(l, g) -= d[l];
      s.edge(h, l) += d[l];
      s.edge(l, h) += d[l];
    }
    s.edge(g, g) -= d[g];
    s.edge(h, h) += d[h];
    const long long cross = s.edge(g, h) - d[h] + d[g];
    s.edge(g, h) = cross;
    s.edge(h, g) = cross;
    for (int j : graph_->neighbors_out(i)) {
      int* dj = s.bd_out.data() + static_cast<std::size_t>(j) * k;
      --dj[g];
      ++dj[h];
    }
  } else {
    int* dout = s.bd_out.data() + static_cast<std::size_t>(i) * k;
    int* din = s.bd_in.data() + static_cast<std::size_t>(i) * k;
    for (int l = 0; l < k; ++l) {
      if (l == g || l == h) continue;
      s.edge(g, l) -= dout[l];
      s.edge(h, l) += dout[l];
      s.edge(l, g) -= din[l];
      s.edge(l, h) += din[l];
    }
    s.edge(g, g) -= dout[g] + din[g];
    s.edge(h, h) += dout[h] + din[h];
    const long long gh = s.edge(g, h) - dout[h] + din[g];
    const long long hg = s.edge(h, g) - din[h] + dout[g];
    s.edge(g, h) = gh;
    s.edge(h, g) = hg;
    for (int j : graph_->neighbors_out(i)) {
      int* dj = s.bd_in.data() + static_cast<std::size_t>(j) * k;
      --dj[g];
      ++dj[h];
    }
    for (int j : graph_->neighbors_in(i)) {
      int* dj = s.bd_out.data() + static_cast<std::size_t>(j) * k;
      --dj[g];
      ++dj[h];
    }
  }
  --s.sizes[g];
  ++s.sizes[h];
}

double SbmModel::delta_merge(const ObsStats& stats, int g, int h) const {
  const SbmStats& s = down(stats);
  const int k = s.kk;
  assert(g != h);
  const long long ng = s.sizes[g], nh = s.sizes[h];
  const long long nf = ng + nh;
  double delta = 0.0;

  if (!graph_->directed()) {
    for (int l = 0; l < k; ++l) {
      if (l == g || l == h) continue;
      const long long nl = s.sizes[l];
      delta += block_term(s.edge(g, l) + s.edge(h, l), nf * nl);
      delta -= block_term(s.edge(g, l), ng * nl);
      delta -= block_term(s.edge(h, l), nh * nl);
    }
    delta += block_term(s.edge(g, g) + s.edge(h, h) + s.edge(g, h), nf * (nf - 1) / 2);
    delta -= block_term(s.edge(g, g), ng * (ng - 1) / 2);
    delta -= block_term(s.edge(h, h), nh * (nh - 1) / 2);
    delta -= block_term(s.edge(g, h), ng * nh);
    // K blocks disappear; each carried a -log B(a0, b0) constant.
    delta += k * log_beta0_;
    return delta;
  }

  for (int l = 0; l < k; ++l) {
    if (l == g || l == h) continue;
    const long long nl = s.sizes[l];
    delta += block_term(s.edge(g, l) + s.edge(h, l), nf * nl);
    delta -= block_term(s.edge(g, l), ng * nl);
    delta -= block_term(s.edge(h, l), nh * nl);
    delta += block_term(s.edge(l, g) + s.edge(l, h), nl * nf);
    delta -= block_term(s.edge(l, g), nl * ng);
    delta -= block_term(s.edge(l, h), nl * nh);
  }
  delta += block_term(s.edge(g, g) + s.edge(h, h) + s.edge(g, h) + s.edge(h, g),
                      nf * (nf - 1));
  delta -= block_term(s.edge(g, g), ng * (ng - 1));
  delta -= block_term(s.edge(h, h), nh * (nh - 1));
  delta -= block_term(s.edge(g, h), ng * nh);
  delta -= block_term(s.edge(h, g), nh * ng);
  delta += (2 * k - 1) * log_beta0_;
  return delta;
}

void SbmModel::apply_merge(ObsStats& stats, int g, int h) const {
  SbmStats& s = down(stats);
  const int k = s.kk;
  assert(g != h);
  // Fold h into g in the full K x K matrix, then drop slot h.
  for (int l = 0; l < k; ++l) {
    if (l == g || l == h) continue;
    s.edge(g, l) += s.edge(h, l);
    s.edge(l, g) += s.edge(l, h);
  }
  if (graph_->directed()) {
    s.edge(g, g) += s.edge(h, h) + s.edge(g, h) + s.edge(h, g);
  } else {
    // Cross edges are stored in both (g,h) and (h,g); count them once.
    s.edge(g, g) += s.edge(h, h) + s.edge(g, h);
  }
  // Fold the block-degree columns of the vanished cluster.
  const int n = graph_->n();
  auto fold = [&](std::vector<int>& bd) {
    if (bd.empty()) return;
    for (int i = 0; i < n; ++i) {
      int* row = bd.data() + static_cast<std::size_t>(i) * k;
      row[g] += row[h];
      row[h] = 0;
    }
  };
  fold(s.bd_out);
  fold(s.bd_in);
  s.sizes[g] += s.sizes[h];
  s.sizes[h] = 0;
  remove_empty(stats, h);
}

void SbmModel::remove_empty(ObsStats& stats, int kdrop) const {
  SbmStats& s = down(stats);
  const int k = s.kk;
  const int n = graph_->n();
  const int k2 = k - 1;
  std::vector<long long> e2(static_cast<std::size_t>(k2) * k2);
  for (int g = 0, g2 = 0; g < k; ++g) {
    if (g == kdrop) continue;
    for (int l = 0, l2 = 0; l < k; ++l) {
      if (l == kdrop) continue;
      e2[static_cast<std::size_t>(g2) * k2 + l2] = s.edge(g, l);
      ++l2;
    }
    ++g2;
  }
  s.e = std::move(e2);
  s.sizes.erase(s.sizes.begin() + kdrop);

  auto shrink = [&](std::vector<int>& bd) {
    if (bd.empty()) return;
    std::vector<int> bd2(static_cast<std::size_t>(n) * k2);
    for (int i = 0; i < n; ++i) {
      const int* src = bd.data() + static_cast<std::size_t>(i) * k;
      int* dst = bd2.data() + static_cast<std::size_t>(i) * k2;
      for (int l = 0, l2 = 0; l < k; ++l) {
        if (l == kdrop) continue;
        dst[l2++] = src[l];
      }
    }
    bd = std::move(bd2);
  };
  shrink(s.bd_out);
  shrink(s.bd_in);
  s.kk = k2;
}

nlohmann::json SbmModel::map_estimates(const ObsStats& stats) const {
  const SbmStats& s = down(stats);
  const int k = s.kk;
  std::vector<std::vector<double>> theta(k, std::vector<double>(k, 0.0));
  for (int g = 0; g < k; ++g) {
    for (int l = 0; l < k; ++l) {
      long long e = s.edge(g, l);
      long long m = pair_capacity(s.sizes[g], s.sizes[l], g == l);
      double a = prior_.a0 + static_cast<double>(e);
      double b = prior_.b0 + static_cast<double>(m - e);
      theta[g][l] = (a > 1.0 && b > 1.0) ? (a - 1.0) / (a + b - 2.0) : a / (a + b);
    }
  }
  return nlohmann::json{{"theta", theta},
                        {"map_convention", "mode_if_defined_else_mean"}};
}

nlohmann::json SbmModel::prior_json() const {
  return nlohmann::json{{"a0", prior_.a0},
                        {"b0", prior_.b0},
                        {"orientation", graph_->directed() ? "directed" : "undirected"}};
}

}  // namespace iclust
