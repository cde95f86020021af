#pragma once

#include <string>
#include <vector>

#include "oscchain/lattice_model.hpp"

namespace oscchain {

// Coefficient atom value * eps^eps_pow * Z^z_pow. The eps and Z powers are
// kept exact so that divergent constants such as 1/(2 eps Z) survive
// symbolic manipulation without rounding.
struct SymCoeff {
  double value = 0.0;
  int eps_pow = 0;
  int z_pow = 0;

  SymCoeff operator*(const SymCoeff& o) const {
    return {value * o.value, eps_pow + o.eps_pow, z_pow + o.z_pow};
  }
  double evaluate(double eps, double z) const;
};

// One primitive factor of a local observable:
//   field: phi(site)^power
//   dfwd:  ((phi(site+1) - phi(site))/eps)^power
//   dsym:  ((phi(site+1) - phi(site-1))/(2 eps))^power
struct ObsFactor {
  enum class Kind { field, dfwd, dsym };
  Kind kind = Kind::field;
  int site = 0;
  int power = 1;

  int reach_min() const { return kind == Kind::dsym ? site - 1 : site; }
  int reach_max() const { return kind == Kind::field ? site : site + 1; }

  friend auto operator<=>(const ObsFactor&, const ObsFactor&) = default;
};

struct ObsTerm {
  SymCoeff coeff;
  std::vector<ObsFactor> factors;  // canonical: site descending
};

// A sum of tau-ordered monomials in field values and discrete derivatives.
// Canonical form: within each term factors are sorted by site descending
// (larger tau on the left) and like factors are merged; terms with equal
// factor lists and equal (eps_pow, z_pow) are combined; zero terms dropped.
class ObservableExpr {
 public:
  ObservableExpr() = default;

  static ObservableExpr zero() { return {}; }
  static ObservableExpr constant(double value, int eps_pow = 0, int z_pow = 0);
  static ObservableExpr field(int site, int power = 1);
  static ObservableExpr forward_diff(int site);   // dfwd
  static ObservableExpr symmetric_diff(int site); // dsym
  static ObservableExpr from_terms(std::vector<ObsTerm> terms);

  const std::vector<ObsTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ObservableExpr operator+(const ObservableExpr& o) const;
  ObservableExpr operator-(const ObservableExpr& o) const;
  ObservableExpr scaled(const SymCoeff& c) const;
  ObservableExpr scaled(double c) const { return scaled(SymCoeff{c, 0, 0}); }

  // Structural equality of canonical forms.
  bool operator==(const ObservableExpr& o) const;

  // Smallest / largest site the expression can touch, derivative stencils
  // included. Throws on the zero expression.
  int support_min() const;
  int support_max() const;

  // The support must sit strictly inside (first_site, last_site).
  void check_support(int first_site, int last_site) const;

  // Pointwise evaluation of the functional on one configuration.
  double eval_on_config(const LatticeConfiguration& config,
                        const FieldGrid& grid, const ModelParams& params) const;

  // Rewrites every derivative factor as a polynomial in field values; the
  // result contains only field factors.
  ObservableExpr expand_fields() const;

  std::string to_string() const;

 private:
  void canonicalize();
  std::vector<ObsTerm> terms_;
};

// Pointwise (commutative) product of the functionals.
ObservableExpr classical_product(const ObservableExpr& a, const ObservableExpr& b);

}  // namespace oscchain
