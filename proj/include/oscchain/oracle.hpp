#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oscchain/observable.hpp"

namespace oscchain {

// Positive weight tables standing for the integrated-out exterior
// distributions at the two edges of a window.
struct ExteriorWeights {
  Eigen::VectorXd lower;  // multiplies the first window site
  Eigen::VectorXd upper;  // multiplies the last window site

  void validate(const FieldGrid& grid) const;
};

// Exact configuration sum of <A> over the window [first_site, last_site]:
// sum_configs A * exp(-window_action) * measure * ext_lo * ext_hi divided
// by the same sum without A. Enumeration order is fixed and summation is
// compensated, so results are bit-reproducible; blocks (grouped by the
// first site's index) may be evaluated in any execution order without
// changing a single bit. Refuses with BudgetError when
// n_points^window_size exceeds 1e8.
double brute_expectation(const ObservableExpr& expr, const ModelParams& params,
                         const FieldGrid& grid, int first_site, int last_site,
                         const ExteriorWeights& ext,
                         const std::vector<int>& block_execution_order = {});

// Integrates an exterior chain into a boundary weight: starting from a
// positive table at outer_site, folds the model's own step kernels link by
// link until boundary_site. Works for exteriors on either side.
Eigen::VectorXd induced_boundary_weight(const ModelParams& params,
                                        const FieldGrid& grid,
                                        const Eigen::VectorXd& outer_table,
                                        int outer_site, int boundary_site);

struct IrrelevanceRow {
  std::string label;
  double value1;
  double value2;
  double abs_discrepancy;
};

struct IrrelevanceReport {
  bool fixture_valid;      // the two exteriors induce the same states
  double state_mismatch;   // max deviation of the normalized state tables
  double max_discrepancy;  // over the observable battery
  std::vector<IrrelevanceRow> rows;
};

// Runs a battery of local observables under two exterior specifications.
// The fixture is valid when both exteriors induce identical normalized
// boundary states; in that case every discrepancy must vanish (<= 1e-12).
IrrelevanceReport exterior_irrelevance_check(
    const std::vector<std::pair<std::string, ObservableExpr>>& battery,
    const ModelParams& params, const FieldGrid& grid, int first_site,
    int last_site, const ExteriorWeights& ext1, const ExteriorWeights& ext2);

// Throws InvalidFixtureError when the report's fixture is invalid.
void require_valid_fixture(const IrrelevanceReport& report);

}  // namespace oscchain
