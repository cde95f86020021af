#include "oscchain/operator_matrix.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace oscchain {

namespace {
void check_same_grid(const OperatorMatrix& a, const OperatorMatrix& b,
                     const char* who) {
  if (a.grid != b.grid)
    throw DomainError(std::string(who) + ": operators act on different grids");
}
}  // namespace

OperatorMatrix identity_op(const FieldGrid& grid) {
  const int n = grid.n_points();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal().setConstant(1.0 / grid.spacing());
  return {std::move(m), grid};
}

OperatorMatrix diagonal_op(const FieldGrid& grid, const Eigen::VectorXd& values) {
  const int n = grid.n_points();
  if (values.size() != n) throw DomainError("diagonal_op: size mismatch");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = values / grid.spacing();
  return {std::move(m), grid};
}

Eigen::VectorXd apply(const OperatorMatrix& op, const Eigen::VectorXd& psi) {
  if (psi.size() != op.dim()) throw DomainError("apply: vector size mismatch");
  return op.grid.spacing() * (op.entries * psi);
}

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_grid(a, b, "compose");
  return {a.grid.spacing() * (a.entries * b.entries), a.grid};
}

OperatorMatrix add(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_grid(a, b, "add");
  return {a.entries + b.entries, a.grid};
}

OperatorMatrix subtract(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_grid(a, b, "subtract");
  return {a.entries - b.entries, a.grid};
}

OperatorMatrix scale(const OperatorMatrix& a, double factor) {
  return {factor * a.entries, a.grid};
}

OperatorMatrix transpose_op(const OperatorMatrix& a) {
  return {a.entries.transpose(), a.grid};
}

double trace_op(const OperatorMatrix& a) {
  return a.grid.spacing() * a.entries.trace();
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return subtract(compose(a, b), compose(b, a));
}

OperatorMatrix build_Q(const FieldGrid& grid) {
  return diagonal_op(grid, grid.points());
}

OperatorMatrix build_diag_function(const FieldGrid& grid, const Eigen::VectorXd& f) {
  return diagonal_op(grid, f);
}

OperatorMatrix build_P2(const FieldGrid& grid) {
  const int n = grid.n_points();
  const double h = grid.spacing();
  // -(psi_{i+1} - 2 psi_i + psi_{i-1})/h^2 with psi = 0 beyond the edges;
  // kernel entries carry an extra 1/h (discrete delta).
  const double c = 1.0 / (h * h * h);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * c;
    if (i > 0) m(i, i - 1) = -c;
    if (i + 1 < n) m(i, i + 1) = -c;
  }
  return {std::move(m), grid};
}

OperatorMatrix build_R(const FieldGrid& grid) {
  const int n = grid.n_points();
  const double h = grid.spacing();
  // (psi_{i+1} - psi_{i-1}) / (2h) with Dirichlet closure.
  const double c = 1.0 / (2.0 * h * h);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) m(i, i + 1) = c;
    if (i > 0) m(i, i - 1) = -c;
  }
  return {std::move(m), grid};
}

OperatorMatrix build_H(const ModelParams& params, int site, const FieldGrid& grid) {
  const double z = params.z_site(site);
  if (!(z > 0.0)) throw DomainError("build_H: Z must be > 0");
  OperatorMatrix h = build_P2(grid);
  h.entries *= 1.0 / (2.0 * z);
  h.entries.diagonal() += params.potential_on_grid(site, grid) / grid.spacing();
  return h;
}

OperatorMatrix SpectralDecomposition::reconstruct() const {
  Eigen::MatrixXd m = eigenvectors *
                      eigenvalues.asDiagonal() *
                      eigenvectors.transpose();
  return {std::move(m), grid};
}

SpectralDecomposition spectral(const OperatorMatrix& a) {
  const double scale = a.entries.cwiseAbs().maxCoeff();
  const double asym = (a.entries - a.entries.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-10 * scale)
    throw DomainError("spectral: operator is not symmetric");

  // Eigenproblem of the operator: spacing * entries * v = E v.
  const double h = a.grid.spacing();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * h * (a.entries + a.entries.transpose()));
  if (solver.info() != Eigen::Success)
    throw DomainError("spectral: eigensolver failed");

  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors(), a.grid};
  // Eigen returns unit 2-norm columns; rescale to measure-orthonormal.
  out.eigenvectors *= 1.0 / std::sqrt(h);
  return out;
}

OperatorMatrix heisenberg_transport(const OperatorMatrix& a,
                                    const OperatorMatrix& u_fwd,
                                    const OperatorMatrix& u_inv) {
  check_same_grid(a, u_fwd, "heisenberg_transport");
  check_same_grid(a, u_inv, "heisenberg_transport");
  const OperatorMatrix round_trip = compose(u_inv, u_fwd);
  const OperatorMatrix id = identity_op(a.grid);
  const double residual =
      frobenius_norm(subtract(round_trip, id)) / frobenius_norm(id);
  if (!(residual <= 1e-8))
    throw IllConditionedError("heisenberg_transport: u_inv u_fwd deviates from 1",
                              residual);
  return compose(u_inv, compose(a, u_fwd));
}

Eigen::MatrixXd subspace_matrix(const OperatorMatrix& op,
                                const SpectralDecomposition& h_modes,
                                int subspace_dim) {
  if (op.grid != h_modes.grid)
    throw DomainError("subspace_matrix: grid mismatch");
  const int m = std::min<int>(subspace_dim, h_modes.eigenvectors.cols());
  const double h = op.grid.spacing();
  const Eigen::MatrixXd v = h_modes.eigenvectors.leftCols(m);
  return h * h * (v.transpose() * op.entries * v);
}

double subspace_distance(const OperatorMatrix& a, const OperatorMatrix& b,
                         const SpectralDecomposition& h_modes, int subspace_dim) {
  const Eigen::MatrixXd m =
      subspace_matrix(subtract(a, b), h_modes, subspace_dim);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double frobenius_norm(const OperatorMatrix& a) { return a.entries.norm(); }

}  // namespace oscchain
