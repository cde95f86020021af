#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "oscchain/errors.hpp"
#include "oscchain/field_grid.hpp"

namespace oscchain {

// Closed-form site potential V(phi) = 1/2 mu2 phi^2 + 1/8 lambda phi^4.
struct QuarticPotential {
  double mu2 = 0.0;
  double lambda = 0.0;

  double value(double phi) const {
    const double p2 = phi * phi;
    return 0.5 * mu2 * p2 + 0.125 * lambda * p2 * p2;
  }
};

// Chain parameters. Sites are indexed 0 .. n_interior + 1; sites 0 and
// n_interior + 1 are the boundary sites carrying the states. Kinetic
// coefficients are attached to sites (the paper's Z_n == M_n); the
// coefficient of a link is the mean of the two adjacent site values.
class ModelParams {
 public:
  ModelParams(double epsilon, int n_interior, QuarticPotential v, double z);

  // Site-dependent variant: one potential and one Z per site.
  ModelParams(double epsilon, std::vector<QuarticPotential> v_sites,
              std::vector<double> z_sites);

  // Replaces the potential of one site by values tabulated on a grid.
  void set_site_potential_table(int site, Eigen::VectorXd values_on_grid);

  // Same chain with a different Euclidean step.
  ModelParams with_epsilon(double new_epsilon) const {
    if (!(new_epsilon > 0.0)) throw DomainError("with_epsilon: epsilon must be > 0");
    ModelParams p = *this;
    p.epsilon_ = new_epsilon;
    return p;
  }

  double epsilon() const { return epsilon_; }
  int n_interior() const { return n_interior_; }
  int total_sites() const { return n_interior_ + 2; }
  int first_site() const { return 0; }
  int last_site() const { return n_interior_ + 1; }

  double z_site(int site) const;
  // Z(tau + eps/2) = (Z(tau) + Z(tau+eps)) / 2 for the link site -> site+1.
  double z_link(int site) const { return 0.5 * (z_site(site) + z_site(site + 1)); }

  // Z when it is site-independent; empty otherwise.
  std::optional<double> uniform_z() const;

  bool has_table(int site) const;
  // V_site(phi) for closed-form sites; throws for tabulated sites.
  double potential(int site, double phi) const;
  // V_site sampled on the grid (works for both forms).
  Eigen::VectorXd potential_on_grid(int site, const FieldGrid& grid) const;

  bool site_independent() const;

 private:
  void check_site(int site) const;

  double epsilon_;
  int n_interior_;
  std::vector<QuarticPotential> v_;             // per site
  std::vector<double> z_;                       // per site
  std::vector<std::optional<Eigen::VectorXd>> tables_;  // per site, optional
};

// Smallest phi_max with exp(-epsilon V(phi_max)) < 1e-12 for every site
// potential. Requires a closed-form confining potential.
double auto_phi_max(const ModelParams& params);

// sqrt(eps/Z_link) / spacing for the coarsest link; the one-step Gaussian
// is resolved when this is >= 3.
enum class CouplingTier { ok, marginal, violated };
CouplingTier grid_coupling_tier(const FieldGrid& grid, const ModelParams& params);
double grid_coupling_quality(const FieldGrid& grid, const ModelParams& params);

}  // namespace oscchain
