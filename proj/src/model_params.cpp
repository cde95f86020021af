#include "oscchain/model_params.hpp"

#include <algorithm>
#include <cmath>

namespace oscchain {

ModelParams::ModelParams(double epsilon, int n_interior, QuarticPotential v,
                         double z)
    : epsilon_(epsilon), n_interior_(n_interior) {
  if (!(epsilon > 0.0)) throw DomainError("ModelParams: epsilon must be > 0");
  if (n_interior < 0) throw DomainError("ModelParams: n_interior must be >= 0");
  if (!(z > 0.0)) throw DomainError("ModelParams: Z must be > 0");
  if (v.lambda < 0.0) throw DomainError("ModelParams: lambda must be >= 0");
  v_.assign(total_sites(), v);
  z_.assign(total_sites(), z);
  tables_.assign(total_sites(), std::nullopt);
}

ModelParams::ModelParams(double epsilon, std::vector<QuarticPotential> v_sites,
                         std::vector<double> z_sites)
    : epsilon_(epsilon),
      n_interior_(static_cast<int>(v_sites.size()) - 2),
      v_(std::move(v_sites)),
      z_(std::move(z_sites)) {
  if (!(epsilon > 0.0)) throw DomainError("ModelParams: epsilon must be > 0");
  if (v_.size() < 2 || v_.size() != z_.size())
    throw DomainError("ModelParams: need one potential and one Z per site");
  for (double z : z_)
    if (!(z > 0.0)) throw DomainError("ModelParams: every Z must be > 0");
  for (const auto& v : v_)
    if (v.lambda < 0.0) throw DomainError("ModelParams: lambda must be >= 0");
  tables_.assign(total_sites(), std::nullopt);
}

void ModelParams::set_site_potential_table(int site, Eigen::VectorXd values) {
  check_site(site);
  tables_[site] = std::move(values);
}

void ModelParams::check_site(int site) const {
  if (site < 0 || site >= total_sites())
    throw DomainError("ModelParams: site index outside chain");
}

double ModelParams::z_site(int site) const {
  check_site(site);
  return z_[site];
}

std::optional<double> ModelParams::uniform_z() const {
  for (double z : z_)
    if (z != z_.front()) return std::nullopt;
  return z_.front();
}

bool ModelParams::has_table(int site) const {
  check_site(site);
  return tables_[site].has_value();
}

double ModelParams::potential(int site, double phi) const {
  check_site(site);
  if (tables_[site])
    throw DomainError("ModelParams: site potential is tabulated; use potential_on_grid");
  return v_[site].value(phi);
}

Eigen::VectorXd ModelParams::potential_on_grid(int site, const FieldGrid& grid) const {
  check_site(site);
  if (tables_[site]) {
    if (tables_[site]->size() != grid.n_points())
      throw DomainError("ModelParams: potential table does not match grid");
    return *tables_[site];
  }
  Eigen::VectorXd out(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i) out[i] = v_[site].value(grid.point(i));
  return out;
}

bool ModelParams::site_independent() const {
  for (const auto& t : tables_)
    if (t) return false;
  for (const auto& v : v_)
    if (v.mu2 != v_.front().mu2 || v.lambda != v_.front().lambda) return false;
  return uniform_z().has_value();
}

double auto_phi_max(const ModelParams& params) {
  // Want eps * V(phi) > -ln(1e-12) at the truncation edge for every site.
  const double target = -std::log(1e-12) / params.epsilon();
  double phi = 0.0;
  for (int s = 0; s < params.total_sites(); ++s) {
    if (params.has_table(s))
      throw DomainError("auto_phi_max: tabulated potentials need an explicit grid");
    const double v1 = params.potential(s, 1.0);
    if (!(v1 > 0.0))
      throw DomainError("auto_phi_max: potential is not confining; specify phi_max");
    double lo = 0.0, hi = 1.0;
    while (params.potential(s, hi) <= target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (params.potential(s, mid) > target ? hi : lo) = mid;
    }
    phi = std::max(phi, hi);
  }
  return phi;
}

double grid_coupling_quality(const FieldGrid& grid, const ModelParams& params) {
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s + 1 < params.total_sites(); ++s) {
    const double sigma = std::sqrt(params.epsilon() / params.z_link(s));
    worst = std::min(worst, sigma / grid.spacing());
  }
  return worst;
}

CouplingTier grid_coupling_tier(const FieldGrid& grid, const ModelParams& params) {
  const double q = grid_coupling_quality(grid, params);
  if (q >= 5.0) return CouplingTier::ok;
  if (q >= 3.0) return CouplingTier::marginal;
  return CouplingTier::violated;
}

}  // namespace oscchain
