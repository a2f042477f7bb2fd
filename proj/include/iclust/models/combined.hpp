#pragma once

#include <memory>
#include <string>
#include <vector>

#include "iclust/model.hpp"

namespace iclust {

class CombinedStats final : public ObsStats {
 public:
  CombinedStats() = default;
  CombinedStats(const CombinedStats& other) {
    parts.reserve(other.parts.size());
    for (const auto& p : other.parts) parts.push_back(p->clone());
  }
  std::unique_ptr<ObsStats> clone() const override {
    return std::make_unique<CombinedStats>(*this);
  }
  int k() const override { return parts.empty() ? 0 : parts.front()->k(); }

  std::vector<std::unique_ptr<ObsStats>> parts;
};

// Several observational models stacked on the same objects, one per named
// view, sharing a single partition. The exact ICL obs term is the sum of
// the per-view terms.
class CombinedModel final : public ObsModel {
 public:
  CombinedModel(std::vector<std::string> names,
                std::vector<std::shared_ptr<const ObsModel>> views);

  std::string kind() const override { return "combined"; }
  int n() const override { return views_.front()->n(); }

  int view_count() const { return static_cast<int>(views_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const ObsModel& view(int v) const { return *views_[v]; }
  int view_index(const std::string& name) const;  // -1 when absent

  std::unique_ptr<ObsStats> init_stats(const Partition& z) const override;
  double log_marginal(const ObsStats& s) const override;
  double delta_swap(const ObsStats& s, int i, int g, int h) const override;
  void apply_swap(ObsStats& s, int i, int g, int h) const override;
  double delta_merge(const ObsStats& s, int g, int h) const override;
  void apply_merge(ObsStats& s, int g, int h) const override;
  void remove_empty(ObsStats& s, int k) const override;
  nlohmann::json map_estimates(const ObsStats& s) const override;
  nlohmann::json prior_json() const override;

 private:
  std::vector<std::string> names_;
  std::vector<std::shared_ptr<const ObsModel>> views_;
};

}  // namespace iclust
