#pragma once

#include <memory>
#include <string>

#include "iclust/partition.hpp"
#include "vendor_json.hpp"

namespace iclust {

// Sufficient statistics of one observational model under one partition.
// Single-writer: an optimizer chain owns its instance; concurrent chains
// clone their own copies.
class ObsStats {
 public:
  virtual ~ObsStats() = default;
  virtual std::unique_ptr<ObsStats> clone() const = 0;
  virtual int k() const = 0;
};

// Collapsed observational model: prior hyperparameters bound to one data
// view, exposing the exact log-marginal log p(X | Z, beta) and the
// obs-term differences induced by elementary moves. Partition-term changes
// (Dirichlet-multinomial side) are assembled by the caller.
class ObsModel {
 public:
  virtual ~ObsModel() = default;

  virtual std::string kind() const = 0;
  virtual int n() const = 0;

  virtual std::unique_ptr<ObsStats> init_stats(const Partition& z) const = 0;
  virtual double log_marginal(const ObsStats& s) const = 0;

  // Obs-term difference of moving object i from cluster g to existing
  // cluster h (g != h). Read-only; callable concurrently on shared stats.
  virtual double delta_swap(const ObsStats& s, int i, int g, int h) const = 0;
  virtual void apply_swap(ObsStats& s, int i, int g, int h) const = 0;

  // Obs-term difference of fusing h into g; symmetric in (g, h).
  virtual double delta_merge(const ObsStats& s, int g, int h) const = 0;
  // Fuses h into g and compacts (slot h removed, higher slots shift down).
  virtual void apply_merge(ObsStats& s, int g, int h) const = 0;

  // Drops empty cluster slot `k` after a swap emptied it.
  virtual void remove_empty(ObsStats& s, int k) const = 0;

  // MAP estimates of the integrated parameters given the partition the
  // stats were built from. Mode when the posterior mode is well defined,
  // otherwise posterior mean; the convention used is recorded in the output.
  virtual nlohmann::json map_estimates(const ObsStats& s) const = 0;

  // Prior hyperparameters with data-driven defaults materialized.
  virtual nlohmann::json prior_json() const = 0;
};

}  // namespace iclust
