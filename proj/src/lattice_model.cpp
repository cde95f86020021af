#include "oscchain/lattice_model.hpp"

#include <cmath>

namespace oscchain {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double site_potential(const ModelParams& params, const FieldGrid& grid,
                      int site, int grid_index) {
  if (params.has_table(site))
    return params.potential_on_grid(site, grid)[grid_index];
  return params.potential(site, grid.point(grid_index));
}
}  // namespace

void LatticeConfiguration::validate(const FieldGrid& grid) const {
  for (int idx : indices)
    if (idx < 0 || idx >= grid.n_points())
      throw DomainError("LatticeConfiguration: grid index out of range");
}

double local_lagrangian(const LatticeConfiguration& config, int site,
                        const ModelParams& params, const FieldGrid& grid) {
  if (!config.contains(site - 1) || !config.contains(site + 1))
    throw DomainError("local_lagrangian: site needs both neighbors inside the window");
  const double eps = params.epsilon();
  const double phi_m = grid.point(config.index_at(site - 1));
  const double phi_0 = grid.point(config.index_at(site));
  const double phi_p = grid.point(config.index_at(site + 1));
  const double dp = phi_p - phi_0;
  const double dm = phi_0 - phi_m;
  return site_potential(params, grid, site, config.index_at(site)) +
         params.z_site(site) / (4.0 * eps * eps) * (dp * dp + dm * dm);
}

double window_action(const LatticeConfiguration& config,
                     const ModelParams& params, const FieldGrid& grid) {
  if (config.size() < 2)
    throw DomainError("window_action: window must span at least 2 sites");
  const double eps = params.epsilon();
  const int n1 = config.first_site;
  const int n2 = config.last_site();

  double action = 0.0;
  for (int n = n1 + 1; n <= n2 - 1; ++n)
    action += eps * local_lagrangian(config, n, params, grid);

  const double phi1 = grid.point(config.index_at(n1));
  const double phi2 = grid.point(config.index_at(n2));
  action += 0.5 * eps * (site_potential(params, grid, n1, config.index_at(n1)) +
                         site_potential(params, grid, n2, config.index_at(n2)));

  // Edge kinetic quarter-terms, each on the edge site's single interior link,
  // with the edge site's own Z.
  const double d_lo = grid.point(config.index_at(n1 + 1)) - phi1;
  const double d_hi = phi2 - grid.point(config.index_at(n2 - 1));
  action += 0.25 / eps * (params.z_site(n1) * d_lo * d_lo +
                          params.z_site(n2) * d_hi * d_hi);
  return action;
}

double log_config_weight(const LatticeConfiguration& config,
                         const ModelParams& params, const FieldGrid& grid) {
  double log_measure = 0.0;
  for (int s = config.first_site; s < config.last_site(); ++s)
    log_measure += 0.5 * std::log(params.z_link(s) / (kTwoPi * params.epsilon()));
  return log_measure - window_action(config, params, grid);
}

double config_weight(const LatticeConfiguration& config,
                     const ModelParams& params, const FieldGrid& grid) {
  return std::exp(log_config_weight(config, params, grid));
}

}  // namespace oscchain
