#pragma once

#include <map>
#include <optional>
#include <string>

#include "oscchain/field_grid.hpp"
#include "oscchain/model_params.hpp"
#include "oscchain/states.hpp"

namespace oscchain {

// Flat key = value config with [model], [grid], [states], [experiment]
// sections. Unknown sections or keys are errors; '#' starts a comment line.
struct RunConfig {
  // [model]
  double epsilon = 0.0;
  double mu2 = 0.0;
  double lambda = 0.0;
  double z = 1.0;
  int n_sites = 0;  // interior sites

  // [grid]
  std::optional<double> phi_max;
  std::optional<int> n_points;

  // [states]
  std::string bra = "ground";
  std::string ket = "ground";

  // [experiment]: validated by each runner.
  std::map<std::string, std::string> experiment;

  ModelParams make_params() const;
  FieldGrid make_grid(const ModelParams& params) const;
  StateVector make_state(const std::string& spec, StateVector::Side side,
                         const ModelParams& params, const FieldGrid& grid) const;

  // Consumes one experiment key; throws ConfigError for keys left over
  // after all takes (call finish_experiment()).
  std::optional<std::string> take_experiment(const std::string& key);
  void finish_experiment() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace oscchain
