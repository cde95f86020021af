#pragma once

#include "oscchain/operator_matrix.hpp"
#include "oscchain/transfer.hpp"

namespace oscchain {

// A boundary state: the positive grid function obtained by integrating out
// everything on one side of a site. Kets enter expectation values from the
// right (lower tau side), bras from the left (upper tau side).
struct StateVector {
  enum class Side { ket, bra };

  Eigen::VectorXd values;
  int tau_site = 0;
  Side side = Side::ket;
  FieldGrid grid;
};

// All-ones state.
StateVector uniform_state(const FieldGrid& grid, int tau_site, StateVector::Side side);

// exp(-phi^2 / (2 width^2)).
StateVector gaussian_state(const FieldGrid& grid, double width, int tau_site,
                           StateVector::Side side);

// Dominant eigenvector of the step kernel of the link at tau_site (clamped
// to the last link), found by power iteration until the eigen-residual
// drops below 1e-12.
StateVector ground_state(const ModelParams& params, const FieldGrid& grid,
                         int tau_site, StateVector::Side side);

// User-supplied state; must be non-negative and not identically zero.
StateVector custom_state(Eigen::VectorXd values, const FieldGrid& grid,
                         int tau_site, StateVector::Side side);

// Moves a state to another site. Kets move to larger tau with forward
// kernels and require an inverse for smaller tau; bras the other way
// around. Inverse moves are residual-guarded.
StateVector evolve_state(const StateVector& s, int to_site,
                         const ModelParams& params, const FieldGrid& grid);

// Same movement through the eigensystem of one step kernel (mode sums);
// only valid for site-independent parameters.
StateVector evolve_state_spectral(const StateVector& s, int to_site,
                                  const SpectralDecomposition& step_modes,
                                  const ModelParams& params);

// Measure-weighted pairing {bra|ket} at a common site.
double inner(const StateVector& bra, const StateVector& ket);

// {bra| op |ket} / {bra|ket}; invariant under rescaling of either state.
double expect_operator(const StateVector& bra, const OperatorMatrix& op,
                       const StateVector& ket);

// Rank-1 density matrix |ket}{bra| normalized to unit trace.
struct DensityMatrix {
  OperatorMatrix op;
  int tau_site;
};

DensityMatrix density_matrix(const StateVector& bra, const StateVector& ket);
double expect_density(const DensityMatrix& rho, const OperatorMatrix& op);

// rho(to) = U rho U^{-1}.
DensityMatrix evolve_density(const DensityMatrix& rho, int to_site,
                             const ModelParams& params, const FieldGrid& grid);

}  // namespace oscchain
