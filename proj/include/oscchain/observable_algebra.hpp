#pragma once

#include "oscchain/observable.hpp"

namespace oscchain {

// One factor of a formal operator monomial: Q(site)^power or R(site)^power.
struct OpFactor {
  enum class Kind { q, r };
  Kind kind = Kind::q;
  int site = 0;
  int power = 1;

  friend auto operator<=>(const OpFactor&, const OpFactor&) = default;
};

struct OpTerm {
  SymCoeff coeff;
  std::vector<OpFactor> factors;  // left-to-right = tau descending
};

// A formal linear combination of products of the transported generators
// Q(tau) and R(tau). Normal form: factors ordered by site descending with R
// left of Q at equal sites. Reordering uses the lattice relations
//   [Q(s+1), Q(s)] = -eps/Z         (adjacent sites)
//   [Q(s), R(s)]   = -1             (equal site)
// and refuses (UnsupportedBasisError) whenever a swap across a gap of two
// or more sites, or any other unlisted commutator, would be required.
class OperatorExpr {
 public:
  OperatorExpr() = default;

  static OperatorExpr identity();
  static OperatorExpr q(int site, int power = 1);
  static OperatorExpr r(int site, int power = 1);
  static OperatorExpr from_terms(std::vector<OpTerm> terms);

  const std::vector<OpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  OperatorExpr operator+(const OperatorExpr& o) const;
  OperatorExpr operator-(const OperatorExpr& o) const;
  OperatorExpr operator*(const OperatorExpr& o) const;  // ordered product
  OperatorExpr scaled(const SymCoeff& c) const;

  bool operator==(const OperatorExpr& o) const;

 private:
  void normal_order();
  std::vector<OpTerm> terms_;
};

// The tau-ordered operator monomial of an observable: derivatives are
// expanded into field differences and each field monomial becomes the
// corresponding descending product of Q(site) factors.
OperatorExpr to_operator_expr(const ObservableExpr& a);

// The standard representative F. Defined on: ordered monomials in Q(tau);
// R(tau); R(tau) Q(tau) at an equal site; R(tau_2) R(tau_1) for tau_2 >
// tau_1 + eps; R^2(tau); the identity; and linear combinations. Anything
// else raises UnsupportedBasisError.
ObservableExpr standard_representative(const OperatorExpr& op);

// F[A_H B_H]: transport both factors to formal monomials, multiply, commute
// into normal form, map back. Associative; non-commutative.
ObservableExpr quantum_product(const ObservableExpr& a, const ObservableExpr& b);

// a o b - b o a = F[[A_H, B_H]].
ObservableExpr commutator_observable(const ObservableExpr& a,
                                     const ObservableExpr& b);

// Prefix mini-grammar: phi(n), phi2(n), dfwd(n), dsym(n), mul(a,b), qmul(a,b).
ObservableExpr parse_observable(const std::string& text);

}  // namespace oscchain
