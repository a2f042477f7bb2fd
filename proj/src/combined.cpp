#include "iclust/models/combined.hpp"

#include <set>

#include "iclust/errors.hpp"

namespace iclust {

namespace {
CombinedStats& down(ObsStats& s) { return static_cast<CombinedStats&>(s); }
const CombinedStats& down(const ObsStats& s) { return static_cast<const CombinedStats&>(s); }
}  // namespace

CombinedModel::CombinedModel(std::vector<std::string> names,
                             std::vector<std::shared_ptr<const ObsModel>> views)
    : names_(std::move(names)), views_(std::move(views)) {
  if (views_.empty()) throw ConfigError("combined: needs at least one view");
  if (names_.size() != views_.size()) throw ConfigError("combined: name/view count mismatch");
  std::set<std::string> uniq(names_.begin(), names_.end());
  if (uniq.size() != names_.size()) throw ConfigError("combined: view names must be unique");
  for (const auto& v : views_) {
    if (v->n() != views_.front()->n())
      throw ConfigError("combined: views must describe the same objects");
  }
}

int CombinedModel::view_index(const std::string& name) const {
  for (std::size_t v = 0; v < names_.size(); ++v)
    if (names_[v] == name) return static_cast<int>(v);
  return -1;
}

std::unique_ptr<ObsStats> CombinedModel::init_stats(const Partition& z) const {
  auto s = std::make_unique<CombinedStats>();
  for (const auto& v : views_) s->parts.push_back(v->init_stats(z));
  return s;
}

double CombinedModel::log_marginal(const ObsStats& stats) const {
  const CombinedStats& s = down(stats);
  double total = 0.0;
  for (std::size_t v = 0; v < views_.size(); ++v)
    total += views_[v]->log_marginal(*s.parts[v]);
  return total;
}

double CombinedModel::delta_swap(const ObsStats& stats, int i, int g, int h) const {
  const CombinedStats& s = down(stats);
  double total = 0.0;
  for (std::size_t v = 0; v < views_.size(); ++v)
    total += views_[v]->delta_swap(*s.parts[v], i, g, h);
  return total;
}

void CombinedModel::apply_swap(ObsStats& stats, int i, int g, int h) const {
  CombinedStats& s = down(stats);
  for (std::size_t v = 0; v < views_.size(); ++v)
    views_[v]->apply_swap(*s.parts[v], i, g, h);
}

double CombinedModel::delta_merge(const ObsStats& stats, int g, int h) const {
  const CombinedStats& s = down(stats);
  double total = 0.0;
  for (std::size_t v = 0; v < views_.size(); ++v)
    total += views_[v]->delta_merge(*s.parts[v], g, h);
  return total;
}

void CombinedModel::apply_merge(ObsStats& stats, int g, int h) const {
  CombinedStats& s = down(stats);
  for (std::size_t v = 0; v < views_.size(); ++v)
    views_[v]->apply_merge(*s.parts[v], g, h);
}

void CombinedModel::remove_empty(ObsStats& stats, int k) const {
  CombinedStats& s = down(stats);
  for (std::size_t v = 0; v < views_.size(); ++v)
    views_[v]->remove_empty(*s.parts[v], k);
}

nlohmann::json CombinedModel::map_estimates(const ObsStats& stats) const {
  const CombinedStats& s = down(stats);
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t v = 0; v < views_.size(); ++v)
    out[names_[v]] = views_[v]->map_estimates(*s.parts[v]);
  return out;
}

nlohmann::json CombinedModel::prior_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t v = 0; v < views_.size(); ++v) {
    nlohmann::json entry = views_[v]->prior_json();
    entry["model"] = views_[v]->kind();
    out[names_[v]] = entry;
  }
  return out;
}

}  // namespace iclust
