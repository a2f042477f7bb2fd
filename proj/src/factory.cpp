#include "iclust/factory.hpp"

#include <set>

#include "iclust/errors.hpp"
#include "iclust/models/combined.hpp"
#include "iclust/models/diag_gmm.hpp"
#include "iclust/models/gmm.hpp"
#include "iclust/models/lca.hpp"
#include "iclust/models/mom.hpp"
#include "iclust/models/sbm.hpp"

namespace iclust {

namespace {

using Overrides = std::map<std::string, double>;

double take(Overrides& ov, const std::string& key, double fallback) {
  auto it = ov.find(key);
  if (it == ov.end()) return fallback;
  double v = it->second;
  ov.erase(it);
  return v;
}

std::shared_ptr<const ObsModel> build_view(const DatasetView& view, Overrides& ov) {
  switch (view.kind) {
    case ModelKind::sbm: {
      auto graph = std::get<std::shared_ptr<const GraphData>>(view.data);
      SbmPrior prior;
      prior.a0 = take(ov, "a0", prior.a0);
      prior.b0 = take(ov, "b0", prior.b0);
      return std::make_shared<SbmModel>(graph, prior);
    }
    case ModelKind::gmm: {
      auto data = std::get<std::shared_ptr<const ContinuousData>>(view.data);
      GmmPrior prior = GmmPrior::from_data(*data);
      prior.tau = take(ov, "tau", prior.tau);
      prior.n0 = take(ov, "n0", prior.n0);
      const double scale = take(ov, "epsilon_scale", 1.0);
      if (scale != 1.0) prior.epsilon *= scale;
      return std::make_shared<GmmModel>(data, std::move(prior));
    }
    case ModelKind::diag_gmm: {
      auto data = std::get<std::shared_ptr<const ContinuousData>>(view.data);
      DiagGmmPrior prior = DiagGmmPrior::from_data(*data);
      prior.tau = take(ov, "tau", prior.tau);
      prior.kappa = take(ov, "kappa", prior.kappa);
      auto it = ov.find("beta");
      if (it != ov.end()) {
        prior.beta.setConstant(it->second);
        ov.erase(it);
      }
      return std::make_shared<DiagGmmModel>(data, std::move(prior));
    }
    case ModelKind::lca: {
      auto data = std::get<std::shared_ptr<const CategoricalData>>(view.data);
      LcaPrior prior;
      prior.beta = take(ov, "beta", prior.beta);
      return std::make_shared<LcaModel>(data, prior);
    }
    case ModelKind::mom: {
      auto data = std::get<std::shared_ptr<const CountData>>(view.data);
      MomPrior prior;
      prior.beta = take(ov, "beta", prior.beta);
      return std::make_shared<MomModel>(data, prior);
    }
    case ModelKind::combined:
      break;
  }
  throw ConfigError("cannot build model for view '" + view.name + "'");
}

}  // namespace

std::shared_ptr<const ObsModel> build_model(const Dataset& ds, const Overrides& overrides) {
  if (ds.views.empty()) throw ConfigError("empty dataset");

  if (ds.views.size() == 1) {
    Overrides ov = overrides;
    auto model = build_view(ds.views.front(), ov);
    if (!ov.empty()) throw ConfigError("unknown hyperparameter: " + ov.begin()->first);
    return model;
  }

  std::vector<std::string> names;
  std::vector<std::shared_ptr<const ObsModel>> views;
  for (const auto& view : ds.views) {
    Overrides ov;
    const std::string prefix = view.name + ".";
    for (const auto& [key, value] : overrides) {
      if (key.rfind(prefix, 0) == 0) ov[key.substr(prefix.size())] = value;
    }
    names.push_back(view.name);
    views.push_back(build_view(view, ov));
    if (!ov.empty())
      throw ConfigError("unknown hyperparameter for view " + view.name + ": " +
                        ov.begin()->first);
  }
  // Reject overrides that matched no view.
  for (const auto& [key, value] : overrides) {
    const auto dot = key.find('.');
    if (dot == std::string::npos)
      throw ConfigError("combined fits need view-qualified overrides, got: " + key);
    const std::string view_name = key.substr(0, dot);
    bool known = false;
    for (const auto& n : names) known = known || (n == view_name);
    if (!known) throw ConfigError("override references unknown view: " + key);
  }
  return std::make_shared<CombinedModel>(std::move(names), std::move(views));
}

nlohmann::json data_info_json(const Dataset& ds) {
  nlohmann::json views = nlohmann::json::array();
  for (const auto& view : ds.views) {
    nlohmann::json v;
    v["name"] = view.name;
    v["model"] = to_string(view.kind);
    std::visit(
        [&](const auto& ptr) {
          using T = std::decay_t<decltype(*ptr)>;
          if constexpr (std::is_same_v<T, ContinuousData>) {
            v["columns"] = ptr->columns;
          } else if constexpr (std::is_same_v<T, CategoricalData>) {
            v["columns"] = ptr->columns;
            v["levels"] = ptr->levels;
          } else if constexpr (std::is_same_v<T, CountData>) {
            v["columns"] = ptr->columns;
          } else {
            v["nodes"] = ptr->n();
            v["edges"] = ptr->edge_count();
            v["orientation"] = ptr->directed() ? "directed" : "undirected";
          }
        },
        view.data);
    views.push_back(v);
  }
  return nlohmann::json{{"views", views}};
}

}  // namespace iclust
