#include "iclust/models/mom.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "iclust/errors.hpp"

namespace iclust {

namespace {
constexpr std::size_t kMaxTableLen = std::size_t{1} << 21;
MomStats& down(ObsStats& s) { return static_cast<MomStats&>(s); }
const MomStats& down(const ObsStats& s) { return static_cast<const MomStats&>(s); }
}  // namespace

MomModel::MomModel(std::shared_ptr<const CountData> data, MomPrior prior)
    : data_(std::move(data)), prior_(prior) {
  if (prior_.beta <= 0.0) throw ConfigError("mom: beta must be > 0");
  const int n = data_->n();
  const int p = data_->p();
  row_sums_.resize(n);
  long long grand = 0;
  for (int i = 0; i < n; ++i) {
    long long r = 0;
    for (int j = 0; j < p; ++j) {
      long long v = data_->at(i, j);
      if (v < 0) throw InputError("mom: negative count");
      r += v;
    }
    row_sums_[i] = r;
    grand += r;
    coeff_const_ += std::lgamma(static_cast<double>(r) + 1.0);
    for (int j = 0; j < p; ++j)
      coeff_const_ -= std::lgamma(static_cast<double>(data_->at(i, j)) + 1.0);
  }
  const std::size_t len = static_cast<std::size_t>(std::min<long long>(grand + 2, kMaxTableLen));
  lg_beta_.init(prior_.beta, len);
  lg_pbeta_.init(p * prior_.beta, len);
}

double MomModel::cluster_term(const MomStats& s, int k) const {
  const int p = data_->p();
  double total = lg_pbeta_(0) - lg_pbeta_(s.totals[k]);
  const long long* row = s.col_sums.data() + static_cast<std::size_t>(k) * p;
  for (int j = 0; j < p; ++j) total += lg_beta_(row[j]) - lg_beta_(0);
  return total;
}

double MomModel::row_delta(const MomStats& s, int k, int i, int sign) const {
  const int p = data_->p();
  const long long* row = s.col_sums.data() + static_cast<std::size_t>(k) * p;
  const long long r = row_sums_[i];
  double d;
  if (sign > 0) {
    d = lg_pbeta_(s.totals[k]) - lg_pbeta_(s.totals[k] + r);
  } else {
    d = lg_pbeta_(s.totals[k]) - lg_pbeta_(s.totals[k] - r);
  }
  for (int j = 0; j < p; ++j) {
    const long long x = data_->at(i, j);
    if (x == 0) continue;
    d += lg_beta_(row[j] + sign * x) - lg_beta_(row[j]);
  }
  return d;
}

std::unique_ptr<ObsStats> MomModel::init_stats(const Partition& z) const {
  if (z.n() != data_->n()) throw ConfigError("mom: partition size mismatch");
  auto s = std::make_unique<MomStats>();
  const int k = z.k();
  const int p = data_->p();
  s->kk = k;
  s->sizes = z.sizes();
  s->col_sums.assign(static_cast<std::size_t>(k) * p, 0);
  s->totals.assign(k, 0);
  for (int i = 0; i < z.n(); ++i) {
    long long* row = s->col_sums.data() + static_cast<std::size_t>(z.label(i)) * p;
    for (int j = 0; j < p; ++j) row[j] += data_->at(i, j);
    s->totals[z.label(i)] += row_sums_[i];
  }
  s->term.resize(k);
  for (int c = 0; c < k; ++c) s->term[c] = cluster_term(*s, c);
  return s;
}

double MomModel::log_marginal(const ObsStats& stats) const {
  const MomStats& s = down(stats);
  double total = coeff_const_;
  for (double t : s.term) total += t;
  return total;
}

double MomModel::delta_swap(const ObsStats& stats, int i, int g, int h) const {
  const MomStats& s = down(stats);
  assert(g != h);
  return row_delta(s, g, i, -1) + row_delta(s, h, i, +1);
}

void MomModel::apply_swap(ObsStats& stats, int i, int g, int h) const {
  MomStats& s = down(stats);
  const int p = data_->p();
  s.term[g] += row_delta(s, g, i, -1);
  s.term[h] += row_delta(s, h, i, +1);
  long long* rg = s.col_sums.data() + static_cast<std::size_t>(g) * p;
  long long* rh = s.col_sums.data() + static_cast<std::size_t>(h) * p;
  for (int j = 0; j < p; ++j) {
    const long long x = data_->at(i, j);
    rg[j] -= x;
    rh[j] += x;
  }
  s.totals[g] -= row_sums_[i];
  s.totals[h] += row_sums_[i];
  --s.sizes[g];
  ++s.sizes[h];
}

double MomModel::delta_merge(const ObsStats& stats, int g, int h) const {
  const MomStats& s = down(stats);
  assert(g != h);
  const int p = data_->p();
  const long long* rg = s.col_sums.data() + static_cast<std::size_t>(g) * p;
  const long long* rh = s.col_sums.data() + static_cast<std::size_t>(h) * p;
  double fused = lg_pbeta_(0) - lg_pbeta_(s.totals[g] + s.totals[h]);
  for (int j = 0; j < p; ++j) fused += lg_beta_(rg[j] + rh[j]) - lg_beta_(0);
  return fused - s.term[g] - s.term[h];
}

void MomModel::apply_merge(ObsStats& stats, int g, int h) const {
  MomStats& s = down(stats);
  const int p = data_->p();
  double fused = delta_merge(stats, g, h) + s.term[g] + s.term[h];
  long long* rg = s.col_sums.data() + static_cast<std::size_t>(g) * p;
  const long long* rh = s.col_sums.data() + static_cast<std::size_t>(h) * p;
  for (int j = 0; j < p; ++j) rg[j] += rh[j];
  s.totals[g] += s.totals[h];
  s.sizes[g] += s.sizes[h];
  s.term[g] = fused;
  s.sizes[h] = 0;
  remove_empty(stats, h);
}

void MomModel::remove_empty(ObsStats& stats, int k) const {
  MomStats& s = down(stats);
  assert(s.sizes[k] == 0);
  const int p = data_->p();
  s.col_sums.erase(s.col_sums.begin() + static_cast<std::size_t>(k) * p,
                   s.col_sums.begin() + static_cast<std::size_t>(k + 1) * p);
  s.totals.erase(s.totals.begin() + k);
  s.sizes.erase(s.sizes.begin() + k);
  s.term.erase(s.term.begin() + k);
  --s.kk;
}

nlohmann::json MomModel::map_estimates(const ObsStats& stats) const {
  const MomStats& s = down(stats);
  const int p = data_->p();
  const double beta = prior_.beta;
  nlohmann::json theta = nlohmann::json::array();
  for (int k = 0; k < s.kk; ++k) {
    const long long* row = s.col_sums.data() + static_cast<std::size_t>(k) * p;
    bool mode_ok = true;
    for (int j = 0; j < p; ++j) mode_ok = mode_ok && (beta + row[j] > 1.0);
    std::vector<double> v(p);
    for (int j = 0; j < p; ++j) {
      double a = beta + static_cast<double>(row[j]);
      v[j] = mode_ok ? (a - 1.0) / (static_cast<double>(s.totals[k]) + p * beta - p)
                     : a / (static_cast<double>(s.totals[k]) + p * beta);
    }
    theta.push_back(v);
  }
  return nlohmann::json{{"theta", theta},
                        {"map_convention", "mode_if_defined_else_mean"}};
}

nlohmann::json MomModel::prior_json() const {
  return nlohmann::json{{"beta", prior_.beta}};
}

}  // namespace iclust
