#pragma once

#include <Eigen/Core>

#include "oscchain/field_grid.hpp"
#include "oscchain/model_params.hpp"

namespace oscchain {

// A real kernel K(phi_2, phi_1) sampled on the grid. All compositions carry
// the rectangle-rule measure:
//
//   (K psi)_i      = spacing * sum_j K_ij psi_j
//   (K L)_ij       = spacing * sum_k K_ik L_kj
//   identity       = delta_ij / spacing        (the discrete delta)
//
// With this convention diagonal multiplication operators have entries
// f(phi_i)/spacing, so e.g. build_Q on a spacing-1 grid is diag(phi_i).
struct OperatorMatrix {
  Eigen::MatrixXd entries;
  FieldGrid grid;

  int dim() const { return static_cast<int>(entries.rows()); }
};

OperatorMatrix identity_op(const FieldGrid& grid);
OperatorMatrix diagonal_op(const FieldGrid& grid, const Eigen::VectorXd& values);

Eigen::VectorXd apply(const OperatorMatrix& op, const Eigen::VectorXd& psi);
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix add(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix subtract(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix scale(const OperatorMatrix& a, double factor);
OperatorMatrix transpose_op(const OperatorMatrix& a);

// Measure-weighted trace: Tr K = spacing * sum_i K_ii.
double trace_op(const OperatorMatrix& a);

// AB - BA under measure-consistent multiplication.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

// Position operator: kernel phi_1 delta(phi_2 - phi_1).
OperatorMatrix build_Q(const FieldGrid& grid);
// f(Q): kernel f(phi_1) delta(phi_2 - phi_1).
OperatorMatrix build_diag_function(const FieldGrid& grid, const Eigen::VectorXd& f);

// Squared momentum: -(second difference)/spacing^2, Dirichlet closure.
OperatorMatrix build_P2(const FieldGrid& grid);

// Derivative generator: central difference, antisymmetric, Dirichlet closure.
OperatorMatrix build_R(const FieldGrid& grid);

// H = V(Q) + P^2 / (2 Z) for the potential of `site`.
OperatorMatrix build_H(const ModelParams& params, int site, const FieldGrid& grid);

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, measure-orthonormal:
                                 // spacing * v_a . v_b = delta_ab
  FieldGrid grid;

  // Kernel of sum_n E_n v_n v_n^T.
  OperatorMatrix reconstruct() const;
};

// Full eigensystem of a symmetric operator. Throws DomainError when the
// input is asymmetric beyond 1e-10 relative.
SpectralDecomposition spectral(const OperatorMatrix& a);

// u_inv * a * u_fwd, after checking u_inv u_fwd = 1 within 1e-8.
OperatorMatrix heisenberg_transport(const OperatorMatrix& a,
                                    const OperatorMatrix& u_fwd,
                                    const OperatorMatrix& u_inv);

// || P (a - b) P || (spectral norm) on the span of the lowest
// `subspace_dim` eigenvectors of h.
double subspace_distance(const OperatorMatrix& a, const OperatorMatrix& b,
                         const SpectralDecomposition& h_modes, int subspace_dim);

// Matrix of {v_a| op |v_b} on the lowest subspace_dim modes.
Eigen::MatrixXd subspace_matrix(const OperatorMatrix& op,
                                const SpectralDecomposition& h_modes,
                                int subspace_dim);

double frobenius_norm(const OperatorMatrix& a);

}  // namespace oscchain
