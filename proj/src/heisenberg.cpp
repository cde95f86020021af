#include "oscchain/heisenberg.hpp"

#include <cmath>
#include <map>

namespace oscchain {

namespace {
double ipow(double base, int n) {
  if (n < 0) return 1.0 / ipow(base, -n);
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

double coeff_value(const SymCoeff& c, const ModelParams& params) {
  double z = 1.0;
  if (c.z_pow != 0) {
    const auto uz = params.uniform_z();
    if (!uz)
      throw DomainError("observable carries Z powers but Z is site-dependent");
    z = *uz;
  }
  return c.evaluate(params.epsilon(), z);
}

// site -> phi-power map of one expanded (field-only) term.
std::map<int, int> term_powers(const ObsTerm& t) {
  std::map<int, int> out;
  for (const auto& f : t.factors) {
    if (f.kind != ObsFactor::Kind::field)
      throw DomainError("term_powers: expression not expanded to fields");
    out[f.site] += f.power;
  }
  return out;
}

Eigen::VectorXd power_values(const FieldGrid& grid, int power) {
  Eigen::VectorXd v(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i) v[i] = ipow(grid.point(i), power);
  return v;
}
}  // namespace

OperatorMatrix observable_window_kernel(const ObservableExpr& expr,
                                        const ModelParams& params,
                                        const FieldGrid& grid, int window_lo,
                                        int window_hi) {
  if (window_hi <= window_lo)
    throw DomainError("observable_window_kernel: empty window");
  const ObservableExpr fields = expr.expand_fields();

  std::vector<OperatorMatrix> kernels;
  for (int s = window_lo; s < window_hi; ++s)
    kernels.push_back(step_kernel(params, s, grid));

  OperatorMatrix total{Eigen::MatrixXd::Zero(grid.n_points(), grid.n_points()),
                       grid};
  for (const auto& t : fields.terms()) {
    const auto powers = term_powers(t);
    if (!powers.empty() &&
        (powers.begin()->first < window_lo || powers.rbegin()->first > window_hi))
      throw DomainError("observable_window_kernel: support outside the window");

    auto insert = [&](OperatorMatrix m, int site) {
      const auto it = powers.find(site);
      if (it == powers.end()) return m;
      return compose(diagonal_op(grid, power_values(grid, it->second)), m);
    };

    OperatorMatrix m = insert(identity_op(grid), window_lo);
    for (int s = window_lo; s < window_hi; ++s)
      m = insert(compose(kernels[s - window_lo], m), s + 1);
    total = add(total, scale(m, coeff_value(t.coeff, params)));
  }
  return total;
}

double expect_observable(const ObservableExpr& expr, const ModelParams& params,
                         const FieldGrid& grid, const StateVector& bra,
                         const StateVector& ket) {
  if (ket.tau_site != params.first_site() || bra.tau_site != params.last_site())
    throw DomainError(
        "expect_observable: ket must sit at the first site and bra at the last");
  if (bra.grid != grid || ket.grid != grid)
    throw DomainError("expect_observable: grid mismatch");
  expr.check_support(params.first_site(), params.last_site());

  const ObservableExpr fields = expr.expand_fields();
  const double h = grid.spacing();
  const int lo = params.first_site();
  const int hi = params.last_site();

  std::vector<OperatorMatrix> kernels;
  for (int s = lo; s < hi; ++s) kernels.push_back(step_kernel(params, s, grid));

  auto chain = [&](const std::map<int, int>& powers) {
    Eigen::VectorXd v = ket.values;
    auto insert = [&](int site) {
      const auto it = powers.find(site);
      if (it == powers.end()) return;
      const int p = it->second;
      for (int i = 0; i < grid.n_points(); ++i) v[i] *= ipow(grid.point(i), p);
    };
    insert(lo);
    for (int s = lo; s < hi; ++s) {
      v = apply(kernels[s - lo], v);
      insert(s + 1);
    }
    return h * bra.values.dot(v);
  };

  const double denominator = chain({});
  if (denominator == 0.0)
    throw DomainError("expect_observable: vanishing normalization");

  double numerator = 0.0;
  for (const auto& t : fields.terms())
    numerator += coeff_value(t.coeff, params) * chain(term_powers(t));
  return numerator / denominator;
}

OperatorMatrix to_heisenberg(const ObservableExpr& expr,
                             const ModelParams& params, const FieldGrid& grid,
                             int ref_site) {
  if (ref_site < params.first_site() || ref_site > params.last_site())
    throw DomainError("to_heisenberg: reference site outside window");
  expr.check_support(params.first_site(), params.last_site());
  const ObservableExpr fields = expr.expand_fields();

  OperatorMatrix total{Eigen::MatrixXd::Zero(grid.n_points(), grid.n_points()),
                       grid};
  for (const auto& t : fields.terms()) {
    const double c = coeff_value(t.coeff, params);
    const auto powers = term_powers(t);
    if (powers.empty()) {
      total = add(total, scale(identity_op(grid), c));
      continue;
    }
    // Sites ascending: U(ref->s1), insert f(Q), step to the next site, ...
    const int s_first = powers.begin()->first;
    const int s_last = powers.rbegin()->first;

    OperatorMatrix m = evolve(ref_site, s_first, params, grid);
    int prev = s_first;
    for (const auto& [site, power] : powers) {
      if (site != prev) m = compose(evolve(prev, site, params, grid), m);
      m = compose(diagonal_op(grid, power_values(grid, power)), m);
      prev = site;
    }
    // Left transport back to the reference point: U(s_last, ref)^{-1}.
    const OperatorMatrix back =
        (s_last >= ref_site)
            ? invert_evolution(evolve(ref_site, s_last, params, grid)).inverse
            : evolve(s_last, ref_site, params, grid);
    m = compose(back, m);
    total = add(total, scale(m, c));
  }
  return total;
}

EquivalenceWitness equivalence_witness(const ObservableExpr& expr,
                                       const ModelParams& params,
                                       const FieldGrid& grid, int ref_site) {
  return {to_heisenberg(expr, params, grid, ref_site), expr.support_min(),
          expr.support_max()};
}

double witness_distance(const EquivalenceWitness& a, const EquivalenceWitness& b,
                        const SpectralDecomposition& h_modes, int subspace_dim) {
  return subspace_distance(a.op, b.op, h_modes, subspace_dim);
}

OperatorMatrix time_ordered_product(const OperatorMatrix& a, int tau_a,
                                    const OperatorMatrix& b, int tau_b) {
  return tau_a >= tau_b ? compose(a, b) : compose(b, a);
}

double ground_two_point(const ModelParams& params, const FieldGrid& grid,
                        int delta_steps, PairOrdering ordering,
                        int subspace_dim) {
  if (!params.site_independent())
    throw DomainError("ground_two_point: needs site-independent parameters");
  if (delta_steps < 0) throw DomainError("ground_two_point: delta_steps < 0");

  const SpectralDecomposition modes = spectral(step_kernel(params, 0, grid));
  const int n = static_cast<int>(modes.eigenvalues.size());
  const int top = n - 1;
  const double kappa0 = modes.eigenvalues[top];
  if (!(kappa0 > 0.0))
    throw DomainError("ground_two_point: kernel not positive");

  const double h = grid.spacing();
  const Eigen::VectorXd qv0 =
      grid.points().cwiseProduct(modes.eigenvectors.col(top));

  double sum = 0.0;
  const int lowest = (ordering == PairOrdering::antiordered)
                         ? std::max(0, n - subspace_dim)
                         : 0;
  for (int idx = top; idx >= lowest; --idx) {
    const double kappa = modes.eigenvalues[idx];
    if (!(kappa > 0.0)) continue;
    const double q = h * qv0.dot(modes.eigenvectors.col(idx));
    const double ratio = (ordering == PairOrdering::ordered) ? kappa / kappa0
                                                             : kappa0 / kappa;
    sum += q * q * std::pow(ratio, delta_steps);
  }
  return sum;
}

double antiordered_two_point(const ModelParams& params, const FieldGrid& grid,
                             const StateVector& bra, const StateVector& ket,
                             int s1, int s2) {
  if (!(s1 < s2)) throw DomainError("antiordered_two_point: need s1 < s2");
  const StateVector bra_lo = evolve_state(bra, s1, params, grid);
  const StateVector ket_hi = evolve_state(ket, s2, params, grid);
  const StateVector ket_lo = evolve_state(ket, s1, params, grid);

  const OperatorMatrix backward =
      invert_evolution(evolve(s1, s2, params, grid)).inverse;
  const OperatorMatrix q = build_Q(grid);

  Eigen::VectorXd w = apply(q, ket_hi.values);
  w = apply(backward, w);
  w = apply(q, w);
  const double numerator = grid.spacing() * bra_lo.values.dot(w);
  const double norm = inner(bra_lo, ket_lo);
  if (norm == 0.0) throw DomainError("antiordered_two_point: zero normalization");
  return numerator / norm;
}

}  // namespace oscchain
