#pragma once

#include "oscchain/observable_algebra.hpp"
#include "oscchain/states.hpp"

namespace oscchain {

// A_delta of the observable on the window [window_lo, window_hi]: the
// transfer-matrix chain over the window with the expanded field monomials
// inserted as diagonal factors. {psi(hi)| A_delta |psi(lo)} is the
// unnormalized expectation; it involves no matrix inversion.
OperatorMatrix observable_window_kernel(const ObservableExpr& expr,
                                        const ModelParams& params,
                                        const FieldGrid& grid, int window_lo,
                                        int window_hi);

// <A> = {bra| A_delta |ket} / {bra| U |ket} over the full chain, with the
// bra given at the last site and the ket at the first site. Exact
// rearrangement of the configuration sum; no inverses.
double expect_observable(const ObservableExpr& expr, const ModelParams& params,
                         const FieldGrid& grid, const StateVector& bra,
                         const StateVector& ket);

// Heisenberg operator of the observable relative to ref_site:
// sum over expanded monomials of f_n(Q(tau_n)) ... f_1(Q(tau_1)) with
// Q(tau) = U^{-1}(tau, ref) Q U(tau, ref). Uses at most two guarded
// inversions per monomial (at the outer ends of the chain).
OperatorMatrix to_heisenberg(const ObservableExpr& expr,
                             const ModelParams& params, const FieldGrid& grid,
                             int ref_site);

// The Heisenberg operator together with the window it was built on; two
// observables are equivalent when their witnesses coincide.
struct EquivalenceWitness {
  OperatorMatrix op;
  int window_lo;
  int window_hi;
};

EquivalenceWitness equivalence_witness(const ObservableExpr& expr,
                                       const ModelParams& params,
                                       const FieldGrid& grid, int ref_site);

// Distance of two witnesses on the span of the lowest subspace_dim
// eigenvectors of H.
double witness_distance(const EquivalenceWitness& a, const EquivalenceWitness& b,
                        const SpectralDecomposition& h_modes,
                        int subspace_dim = 10);

// T(A_H B_H): the product with the later observable on the left. For
// non-overlapping tau-ordered supports this is the operator of the
// classical product.
OperatorMatrix time_ordered_product(const OperatorMatrix& a, int tau_a,
                                    const OperatorMatrix& b, int tau_b);

enum class PairOrdering { ordered, antiordered };

// Ground-state two-point function <phi o phi> over delta_steps links via
// the eigensystem of the step kernel:
//   ordered:      sum_n q_n^2 (kappa_n / kappa_0)^{delta}
//   anti-ordered: sum_n q_n^2 (kappa_0 / kappa_n)^{delta}, lowest m modes.
// The anti-ordered direction amplifies high modes exponentially, so it is
// restricted to the low-energy subspace; m = 10 matches the witness
// convention. Requires site-independent parameters.
double ground_two_point(const ModelParams& params, const FieldGrid& grid,
                        int delta_steps, PairOrdering ordering,
                        int subspace_dim = 10);

// <phi(s1) o phi(s2)> for s1 < s2 (anti-ordered) with arbitrary boundary
// states, through one guarded dense inversion over the gap.
double antiordered_two_point(const ModelParams& params, const FieldGrid& grid,
                             const StateVector& bra, const StateVector& ket,
                             int s1, int s2);

}  // namespace oscchain
