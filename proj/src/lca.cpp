#include "iclust/models/lca.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>

#include "iclust/errors.hpp"

namespace iclust {

namespace {
LcaStats& down(ObsStats& s) { return static_cast<LcaStats&>(s); }
const LcaStats& down(const ObsStats& s) { return static_cast<const LcaStats&>(s); }
}  // namespace

LcaModel::LcaModel(std::shared_ptr<const CategoricalData> data, LcaPrior prior)
    : data_(std::move(data)), prior_(prior) {
  if (prior_.beta <= 0.0) throw ConfigError("lca: beta must be > 0");
  const int p = data_->p();
  offsets_.resize(p);
  for (int j = 0; j < p; ++j) {
    offsets_[j] = width_;
    width_ += data_->arity[j];
  }
  const std::size_t len = static_cast<std::size_t>(data_->n()) + 2;
  lg_beta_.init(prior_.beta, len);
  std::map<int, int> slot_of_arity;
  arity_slot_.resize(p);
  for (int j = 0; j < p; ++j) {
    auto [it, inserted] = slot_of_arity.emplace(data_->arity[j], static_cast<int>(lg_dbeta_.size()));
    if (inserted) {
      lg_dbeta_.emplace_back();
      lg_dbeta_.back().init(data_->arity[j] * prior_.beta, len);
    }
    arity_slot_[j] = it->second;
  }
}

double LcaModel::cluster_term(const LcaStats& s, int k) const {
  const int p = data_->p();
  const int* row = s.row(k);
  const int nk = s.sizes[k];
  double total = 0.0;
  for (int j = 0; j < p; ++j) {
    const auto& lgd = lg_dbeta_[arity_slot_[j]];
    total += lgd(0) - lgd(nk);
    const int dj = data_->arity[j];
    for (int c = 0; c < dj; ++c) total += lg_beta_(row[offsets_[j] + c]) - lg_beta_(0);
  }
  return total;
}

double LcaModel::row_delta(const LcaStats& s, int k, int i, int sign) const {
  const int p = data_->p();
  const int* row = s.row(k);
  const int nk = s.sizes[k];
  double d = 0.0;
  for (int j = 0; j < p; ++j) {
    const auto& lgd = lg_dbeta_[arity_slot_[j]];
    const int c = data_->codes[j][i];
    const int cnt = row[offsets_[j] + c];
    if (sign > 0) {
      d += lg_beta_(cnt + 1) - lg_beta_(cnt) + lgd(nk) - lgd(nk + 1);
    } else {
      d += lg_beta_(cnt - 1) - lg_beta_(cnt) + lgd(nk) - lgd(nk - 1);
    }
  }
  return d;
}

std::unique_ptr<ObsStats> LcaModel::init_stats(const Partition& z) const {
  if (z.n() != data_->n()) throw ConfigError("lca: partition size mismatch");
  auto s = std::make_unique<LcaStats>();
  const int k = z.k();
  s->kk = k;
  s->width = width_;
  s->sizes = z.sizes();
  s->counts.assign(static_cast<std::size_t>(k) * width_, 0);
  const int p = data_->p();
  for (int j = 0; j < p; ++j) {
    const auto& col = data_->codes[j];
    for (int i = 0; i < z.n(); ++i) ++s->row(z.label(i))[offsets_[j] + col[i]];
  }
  s->term.resize(k);
  for (int c = 0; c < k; ++c) s->term[c] = cluster_term(*s, c);
  return s;
}

double LcaModel::log_marginal(const ObsStats& stats) const {
  const LcaStats& s = down(stats);
  double total = 0.0;
  for (double t : s.term) total += t;
  return total;
}

double LcaModel::delta_swap(const ObsStats& stats, int i, int g, int h) const {
  const LcaStats& s = down(stats);
  assert(g != h);
  return row_delta(s, g, i, -1) + row_delta(s, h, i, +1);
}

void LcaModel::apply_swap(ObsStats& stats, int i, int g, int h) const {
  LcaStats& s = down(stats);
  s.term[g] += row_delta(s, g, i, -1);
  s.term[h] += row_delta(s, h, i, +1);
  const int p = data_->p();
  for (int j = 0; j < p; ++j) {
    const int c = data_->codes[j][i];
    --s.row(g)[offsets_[j] + c];
    ++s.row(h)[offsets_[j] + c];
  }
  --s.sizes[g];
  ++s.sizes[h];
}

double LcaModel::delta_merge(const ObsStats& stats, int g, int h) const {
  const LcaStats& s = down(stats);
  assert(g != h);
  // Fused cluster term computed directly from summed counts.
  const int p = data_->p();
  const int nf = s.sizes[g] + s.sizes[h];
  const int* rg = s.row(g);
  const int* rh = s.row(h);
  double fused = 0.0;
  for (int j = 0; j < p; ++j) {
    const auto& lgd = lg_dbeta_[arity_slot_[j]];
    fused += lgd(0) - lgd(nf);
    const int dj = data_->arity[j];
    for (int c = 0; c < dj; ++c)
      fused += lg_beta_(rg[offsets_[j] + c] + rh[offsets_[j] + c]) - lg_beta_(0);
  }
  return fused - s.term[g] - s.term[h];
}

void LcaModel::apply_merge(ObsStats& stats, int g, int h) const {
  LcaStats& s = down(stats);
  double fused = delta_merge(stats, g, h) + s.term[g] + s.term[h];
  for (int c = 0; c < width_; ++c) s.row(g)[c] += s.row(h)[c];
  s.sizes[g] += s.sizes[h];
  s.term[g] = fused;
  s.sizes[h] = 0;
  remove_empty(stats, h);
}

void LcaModel::remove_empty(ObsStats& stats, int k) const {
  LcaStats& s = down(stats);
  assert(s.sizes[k] == 0);
  s.counts.erase(s.counts.begin() + static_cast<std::size_t>(k) * width_,
                 s.counts.begin() + static_cast<std::size_t>(k + 1) * width_);
  s.sizes.erase(s.sizes.begin() + k);
  s.term.erase(s.term.begin() + k);
  --s.kk;
}

nlohmann::json LcaModel::map_estimates(const ObsStats& stats) const {
  const LcaStats& s = down(stats);
  const int p = data_->p();
  const double beta = prior_.beta;
  // theta[k][j] = modality probability vector for cluster k, variable j.
  nlohmann::json theta = nlohmann::json::array();
  for (int k = 0; k < s.kk; ++k) {
    nlohmann::json per_var = nlohmann::json::array();
    for (int j = 0; j < p; ++j) {
      const int dj = data_->arity[j];
      const int nk = s.sizes[k];
      std::vector<double> v(dj);
      bool mode_ok = true;
      for (int c = 0; c < dj; ++c)
        mode_ok = mode_ok && (beta + s.row(k)[offsets_[j] + c] > 1.0);
      for (int c = 0; c < dj; ++c) {
        double a = beta + s.row(k)[offsets_[j] + c];
        v[c] = mode_ok ? (a - 1.0) / (nk + dj * beta - dj) : a / (nk + dj * beta);
      }
      per_var.push_back(v);
    }
    theta.push_back(per_var);
  }
  return nlohmann::json{{"theta", theta},
                        {"map_convention", "mode_if_defined_else_mean"}};
}

nlohmann::json LcaModel::prior_json() const {
  return nlohmann::json{{"beta", prior_.beta}, {"arity", data_->arity}};
}

}  // namespace iclust
