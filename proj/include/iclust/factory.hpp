#pragma once

#include <map>
#include <memory>
#include <string>

#include "iclust/dataset.hpp"
#include "iclust/model.hpp"

namespace iclust {

// Builds the observational model for a dataset, with data-driven default
// priors and optional hyperparameter overrides ("key" for single-view
// datasets, "view.key" for combined). Unknown keys are a hard error.
std::shared_ptr<const ObsModel> build_model(const Dataset& ds,
                                            const std::map<std::string, double>& overrides);

// Column names, categorical encodings and view structure, recorded in fit
// results so parameter estimates stay interpretable.
nlohmann::json data_info_json(const Dataset& ds);

}  // namespace iclust
