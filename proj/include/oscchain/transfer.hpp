#pragma once

#include <vector>

#include "oscchain/operator_matrix.hpp"

namespace oscchain {

// One-step transfer kernel for the link site -> site + 1:
//   K(phi_2, phi_1) = sqrt(Z/2 pi eps)
//                     * exp[-eps/2 (V_{s+1}(phi_2) + V_s(phi_1))
//                           - Z/(2 eps) (phi_2 - phi_1)^2]
// with Z the link coefficient. Symmetric for site-independent parameters.
OperatorMatrix step_kernel(const ModelParams& params, int link_site,
                           const FieldGrid& grid);

// U(to, from): ordered product of step kernels. evolve(s, s) is the
// identity (discrete delta). For to_site < from_site this is the inverse
// of the forward evolution, per the extended composition rule; the inverse
// is residual-guarded.
OperatorMatrix evolve(int from_site, int to_site, const ModelParams& params,
                      const FieldGrid& grid);

struct EvolutionInverse {
  OperatorMatrix inverse;
  double residual;  // ||U U^{-1} - 1||_F / ||1||_F
};

// Dense inverse with residual report. Throws IllConditionedError when the
// residual exceeds max_residual.
EvolutionInverse invert_evolution(const OperatorMatrix& u,
                                  double max_residual = 1e-6);

struct ConsistencyReport {
  std::vector<double> eps;
  std::vector<double> deviation;  // ||(1 - K)/eps - H|| on the low subspace
  std::vector<double> ratio;      // deviation[i] / deviation[i+1]
  int subspace_dim;
};

// Checks that (1 - step_kernel)/eps converges to H linearly in eps on the
// span of the lowest subspace_dim eigenvectors of H. eps_sequence must be
// strictly decreasing and the grid must resolve the kernel of the smallest
// eps (coupling rule), otherwise the check refuses with CouplingError.
ConsistencyReport hamiltonian_consistency(const ModelParams& params,
                                          const FieldGrid& grid,
                                          const std::vector<double>& eps_sequence,
                                          int subspace_dim = 3);

// -ln(dominant eigenvalue of the step kernel)/eps; the ground energy of the
// effective Hamiltonian of one step.
double ground_energy_from_kernel(const ModelParams& params, const FieldGrid& grid);

}  // namespace oscchain
