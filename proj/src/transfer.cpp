#include "oscchain/transfer.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace oscchain {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

OperatorMatrix step_kernel(const ModelParams& params, int link_site,
                           const FieldGrid& grid) {
  if (link_site < 0 || link_site + 1 >= params.total_sites())
    throw DomainError("step_kernel: link outside chain");
  const double eps = params.epsilon();
  const double z = params.z_link(link_site);
  const double norm = std::sqrt(z / (kTwoPi * eps));
  const Eigen::VectorXd v_lo = params.potential_on_grid(link_site, grid);
  const Eigen::VectorXd v_hi = params.potential_on_grid(link_site + 1, grid);

  const int n = grid.n_points();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = grid.point(i) - grid.point(j);
      m(i, j) = norm * std::exp(-0.5 * eps * (v_hi[i] + v_lo[j]) -
                                0.5 * z / eps * d * d);
    }
  }
  return {std::move(m), grid};
}

OperatorMatrix evolve(int from_site, int to_site, const ModelParams& params,
                      const FieldGrid& grid) {
  if (from_site < params.first_site() || from_site > params.last_site() ||
      to_site < params.first_site() || to_site > params.last_site())
    throw DomainError("evolve: sites outside window");
  if (to_site == from_site) return identity_op(grid);
  if (to_site < from_site)
    return invert_evolution(evolve(to_site, from_site, params, grid)).inverse;

  OperatorMatrix u = step_kernel(params, from_site, grid);
  for (int s = from_site + 1; s < to_site; ++s)
    u = compose(step_kernel(params, s, grid), u);
  return u;
}

EvolutionInverse invert_evolution(const OperatorMatrix& u, double max_residual) {
  const double h = u.grid.spacing();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(u.entries);
  // compose(u, w) = identity requires w = inverse(entries) / spacing^2.
  OperatorMatrix w{lu.inverse() / (h * h), u.grid};
  const OperatorMatrix id = identity_op(u.grid);
  const double residual =
      frobenius_norm(subtract(compose(u, w), id)) / frobenius_norm(id);
  if (!(residual <= max_residual))
    throw IllConditionedError("invert_evolution: inverse unreliable", residual);
  return {std::move(w), residual};
}

ConsistencyReport hamiltonian_consistency(const ModelParams& params,
                                          const FieldGrid& grid,
                                          const std::vector<double>& eps_sequence,
                                          int subspace_dim) {
  if (eps_sequence.size() < 2)
    throw DomainError("hamiltonian_consistency: need at least two eps values");
  for (size_t i = 1; i < eps_sequence.size(); ++i)
    if (!(eps_sequence[i] < eps_sequence[i - 1]))
      throw DomainError("hamiltonian_consistency: eps_sequence must decrease");

  // The grid has to resolve the narrowest kernel in the sequence.
  const ModelParams finest = params.with_epsilon(eps_sequence.back());
  if (grid_coupling_tier(grid, finest) == CouplingTier::violated)
    throw CouplingError(
        "hamiltonian_consistency: grid spacing exceeds sqrt(eps/Z)/3 for the "
        "smallest eps; refine the grid");

  const OperatorMatrix h_op = build_H(params, 0, grid);
  const SpectralDecomposition modes = spectral(h_op);

  ConsistencyReport report;
  report.subspace_dim = subspace_dim;
  for (double eps : eps_sequence) {
    const ModelParams p = params.with_epsilon(eps);
    const OperatorMatrix k = step_kernel(p, 0, grid);
    OperatorMatrix gen = subtract(identity_op(grid), k);
    gen = scale(gen, 1.0 / eps);
    const Eigen::MatrixXd m =
        subspace_matrix(subtract(gen, h_op), modes, subspace_dim);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    report.eps.push_back(eps);
    report.deviation.push_back(svd.singularValues()[0]);
  }
  for (size_t i = 0; i + 1 < report.deviation.size(); ++i)
    report.ratio.push_back(report.deviation[i] / report.deviation[i + 1]);
  return report;
}

double ground_energy_from_kernel(const ModelParams& params, const FieldGrid& grid) {
  const SpectralDecomposition modes = spectral(step_kernel(params, 0, grid));
  const double kappa0 = modes.eigenvalues[modes.eigenvalues.size() - 1];
  if (!(kappa0 > 0.0))
    throw DomainError("ground_energy_from_kernel: kernel has no positive dominant eigenvalue");
  return -std::log(kappa0) / params.epsilon();
}

}  // namespace oscchain
