#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vsuq/fe_model.hpp"
#include "vsuq/mcs.hpp"
#include "vsuq/surrogate.hpp"

namespace vsuq {

/// A case study parsed from its JSON description (see configs/).
struct CaseConfig {
  std::string name;
  std::unique_ptr<LaminateModel> model;
  McsConfig mcs;
  TrainConfig train;
  /// Reanalysis-labeled samples generated for training.
  std::size_t train_samples = 10000;
  /// Hidden widths of the sweep run by `vsuq train --sweep`.
  std::vector<int> sweep = {4, 8, 16, 34, 64};
};

/// Parses a case. Throws ConfigError/ParseError with the offending key.
CaseConfig parse_case(const std::string& json_text);

/// Builds the laminate only (no vine or MCS sections needed).
std::unique_ptr<LaminateModel> parse_model(const std::string& json_text);

/// Vine and deviation sections only, for standalone sampling.
McsConfig parse_sampling(const std::string& json_text);

/// Path-function coefficients of the shipped cases.
std::vector<std::vector<double>> hole_plate_coefficients();
std::vector<std::vector<double>> beam_coefficients();

}  // namespace vsuq
