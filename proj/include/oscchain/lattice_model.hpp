#pragma once

#include <vector>

#include "oscchain/field_grid.hpp"
#include "oscchain/model_params.hpp"

namespace oscchain {

// One configuration of a contiguous window of sites. Values are grid
// indices; the field value of window slot k is grid.point(indices[k]).
struct LatticeConfiguration {
  int first_site = 0;
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  int last_site() const { return first_site + size() - 1; }
  bool contains(int site) const { return site >= first_site && site <= last_site(); }
  int index_at(int site) const { return indices[site - first_site]; }

  void validate(const FieldGrid& grid) const;
};

// L_n = V_n(phi_n) + Z_n/(4 eps^2) [(phi_{n+1}-phi_n)^2 + (phi_n-phi_{n-1})^2].
// Requires both neighbors of `site` inside the configuration.
double local_lagrangian(const LatticeConfiguration& config, int site,
                        const ModelParams& params, const FieldGrid& grid);

// Discrete action of the window spanned by the configuration: interior
// sites enter with full weight eps * L_n, the two edge sites with
// half-weight potentials and quarter-weight kinetic terms on their single
// interior link.
double window_action(const LatticeConfiguration& config,
                     const ModelParams& params, const FieldGrid& grid);

// exp(-window_action) with one measure factor sqrt(Z_link / 2 pi eps) per
// link. Computed in log space; use log_config_weight when products of many
// weights are needed.
double config_weight(const LatticeConfiguration& config,
                     const ModelParams& params, const FieldGrid& grid);
double log_config_weight(const LatticeConfiguration& config,
                         const ModelParams& params, const FieldGrid& grid);

}  // namespace oscchain
