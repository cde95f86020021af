#include "oscchain/states.hpp"

#include <cmath>

namespace oscchain {

namespace {
double measure_norm(const Eigen::VectorXd& v, double h) {
  return std::sqrt(h) * v.norm();
}

void check_colocated(const StateVector& bra, const StateVector& ket,
                     const char* who) {
  if (bra.grid != ket.grid)
    throw DomainError(std::string(who) + ": states on different grids");
  if (bra.tau_site != ket.tau_site)
    throw DomainError(std::string(who) + ": states at different sites");
}
}  // namespace

StateVector uniform_state(const FieldGrid& grid, int tau_site,
                          StateVector::Side side) {
  return {Eigen::VectorXd::Ones(grid.n_points()), tau_site, side, grid};
}

StateVector gaussian_state(const FieldGrid& grid, double width, int tau_site,
                           StateVector::Side side) {
  if (!(width > 0.0)) throw DomainError("gaussian_state: width must be > 0");
  Eigen::VectorXd v(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i) {
    const double phi = grid.point(i);
    v[i] = std::exp(-phi * phi / (2.0 * width * width));
  }
  return {std::move(v), tau_site, side, grid};
}

StateVector ground_state(const ModelParams& params, const FieldGrid& grid,
                         int tau_site, StateVector::Side side) {
  const int link = std::min(std::max(tau_site, 0), params.total_sites() - 2);
  const OperatorMatrix k = step_kernel(params, link, grid);
  const double h = grid.spacing();

  Eigen::VectorXd v = gaussian_state(grid, 1.0, tau_site, side).values;
  v /= measure_norm(v, h);
  double kappa = 0.0;
  const int max_iter = 200000;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = apply(k, v);
    kappa = h * v.dot(w);
    const double res = measure_norm(w - kappa * v, h);
    v = w / measure_norm(w, h);
    if (res <= 1e-12 * std::abs(kappa)) break;
  }
  // The dominant eigenvector of a strictly positive kernel is positive.
  if (v[grid.n_points() / 2] < 0.0) v = -v;
  return {std::move(v), tau_site, side, grid};
}

StateVector custom_state(Eigen::VectorXd values, const FieldGrid& grid,
                         int tau_site, StateVector::Side side) {
  if (values.size() != grid.n_points())
    throw DomainError("custom_state: size mismatch");
  if (values.minCoeff() < 0.0)
    throw DomainError("custom_state: boundary states must be non-negative");
  if (values.maxCoeff() == 0.0)
    throw DomainError("custom_state: state is identically zero");
  return {std::move(values), tau_site, side, grid};
}

StateVector evolve_state(const StateVector& s, int to_site,
                         const ModelParams& params, const FieldGrid& grid) {
  if (s.grid != grid) throw DomainError("evolve_state: grid mismatch");
  if (to_site < params.first_site() || to_site > params.last_site())
    throw DomainError("evolve_state: target outside window");
  if (to_site == s.tau_site) return s;

  StateVector out = s;
  const int lo = std::min(s.tau_site, to_site);
  const int hi = std::max(s.tau_site, to_site);
  const bool ket = (s.side == StateVector::Side::ket);
  const bool forward_kernels = ket ? (to_site > s.tau_site) : (to_site < s.tau_site);
  if (forward_kernels) {
    // Kets climb with U(hi, lo); bras descend with U(hi, lo) from the left,
    // i.e. with the transposed kernels in reverse link order.
    for (int i = 0; i < hi - lo; ++i) {
      const int link = ket ? lo + i : hi - 1 - i;
      const OperatorMatrix k = step_kernel(params, link, grid);
      out.values = ket ? apply(k, out.values)
                       : apply(transpose_op(k), out.values);
    }
  } else {
    // Moving against the natural direction requires the inverse evolution.
    const OperatorMatrix u_inv =
        invert_evolution(evolve(lo, hi, params, grid)).inverse;
    out.values = ket ? apply(u_inv, out.values)
                     : apply(transpose_op(u_inv), out.values);
  }
  out.tau_site = to_site;
  return out;
}

StateVector evolve_state_spectral(const StateVector& s, int to_site,
                                  const SpectralDecomposition& step_modes,
                                  const ModelParams& params) {
  if (s.grid != step_modes.grid)
    throw DomainError("evolve_state_spectral: grid mismatch");
  if (!params.site_independent())
    throw DomainError("evolve_state_spectral: needs site-independent parameters");
  const double h = s.grid.spacing();
  const int steps = (s.side == StateVector::Side::ket) ? (to_site - s.tau_site)
                                                       : (s.tau_site - to_site);
  const Eigen::VectorXd coeff =
      h * (step_modes.eigenvectors.transpose() * s.values);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.values.size());
  for (int n = 0; n < step_modes.eigenvalues.size(); ++n) {
    const double kappa = step_modes.eigenvalues[n];
    double factor;
    if (steps >= 0) {
      factor = std::pow(kappa, steps);
    } else {
      if (kappa == 0.0)
        throw IllConditionedError("evolve_state_spectral: singular mode", 1.0);
      factor = std::pow(kappa, steps);
    }
    out += factor * coeff[n] * step_modes.eigenvectors.col(n);
  }
  StateVector res = s;
  res.values = std::move(out);
  res.tau_site = to_site;
  return res;
}

double inner(const StateVector& bra, const StateVector& ket) {
  check_colocated(bra, ket, "inner");
  return bra.grid.spacing() * bra.values.dot(ket.values);
}

double expect_operator(const StateVector& bra, const OperatorMatrix& op,
                       const StateVector& ket) {
  check_colocated(bra, ket, "expect_operator");
  if (op.grid != ket.grid) throw DomainError("expect_operator: grid mismatch");
  const double norm = inner(bra, ket);
  if (norm == 0.0) throw DomainError("expect_operator: states are orthogonal");
  return bra.grid.spacing() * bra.values.dot(apply(op, ket.values)) / norm;
}

DensityMatrix density_matrix(const StateVector& bra, const StateVector& ket) {
  check_colocated(bra, ket, "density_matrix");
  const double norm = inner(bra, ket);
  if (norm == 0.0) throw DomainError("density_matrix: zero inner product");
  Eigen::MatrixXd rho = (ket.values * bra.values.transpose()) / norm;
  return {OperatorMatrix{std::move(rho), ket.grid}, ket.tau_site};
}

double expect_density(const DensityMatrix& rho, const OperatorMatrix& op) {
  return trace_op(compose(rho.op, op));
}

DensityMatrix evolve_density(const DensityMatrix& rho, int to_site,
                             const ModelParams& params, const FieldGrid& grid) {
  if (to_site == rho.tau_site) return rho;
  const int lo = std::min(rho.tau_site, to_site);
  const int hi = std::max(rho.tau_site, to_site);
  const OperatorMatrix u_fwd = evolve(lo, hi, params, grid);
  const OperatorMatrix u_inv = invert_evolution(u_fwd).inverse;
  const bool up = to_site > rho.tau_site;
  const OperatorMatrix& u = up ? u_fwd : u_inv;
  const OperatorMatrix& ui = up ? u_inv : u_fwd;
  return {compose(u, compose(rho.op, ui)), to_site};
}

}  // namespace oscchain
