#include "oscchain/observable.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

namespace oscchain {

namespace {
double ipow(double base, int n) {
  if (n < 0) return 1.0 / ipow(base, -n);
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

// Order used inside a term: site descending, then kind, then power.
bool factor_before(const ObsFactor& a, const ObsFactor& b) {
  if (a.site != b.site) return a.site > b.site;
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.power < b.power;
}

bool term_key_before(const ObsTerm& a, const ObsTerm& b) {
  if (a.factors != b.factors)
    return std::lexicographical_compare(a.factors.begin(), a.factors.end(),
                                        b.factors.begin(), b.factors.end(),
                                        factor_before);
  if (a.coeff.eps_pow != b.coeff.eps_pow) return a.coeff.eps_pow < b.coeff.eps_pow;
  return a.coeff.z_pow < b.coeff.z_pow;
}

bool same_term_key(const ObsTerm& a, const ObsTerm& b) {
  return a.factors == b.factors && a.coeff.eps_pow == b.coeff.eps_pow &&
         a.coeff.z_pow == b.coeff.z_pow;
}
}  // namespace

double SymCoeff::evaluate(double eps, double z) const {
  return value * ipow(eps, eps_pow) * ipow(z, z_pow);
}

ObservableExpr ObservableExpr::constant(double value, int eps_pow, int z_pow) {
  return from_terms({ObsTerm{{value, eps_pow, z_pow}, {}}});
}

ObservableExpr ObservableExpr::field(int site, int power) {
  if (power < 1) throw DomainError("ObservableExpr::field: power must be >= 1");
  return from_terms({ObsTerm{{1.0, 0, 0}, {{ObsFactor::Kind::field, site, power}}}});
}

ObservableExpr ObservableExpr::forward_diff(int site) {
  return from_terms({ObsTerm{{1.0, 0, 0}, {{ObsFactor::Kind::dfwd, site, 1}}}});
}

ObservableExpr ObservableExpr::symmetric_diff(int site) {
  return from_terms({ObsTerm{{1.0, 0, 0}, {{ObsFactor::Kind::dsym, site, 1}}}});
}

ObservableExpr ObservableExpr::from_terms(std::vector<ObsTerm> terms) {
  ObservableExpr e;
  e.terms_ = std::move(terms);
  e.canonicalize();
  return e;
}

void ObservableExpr::canonicalize() {
  for (auto& term : terms_) {
    std::sort(term.factors.begin(), term.factors.end(), factor_before);
    // Merge factors of the same kind at the same site.
    std::vector<ObsFactor> merged;
    for (const auto& f : term.factors) {
      if (!merged.empty() && merged.back().kind == f.kind &&
          merged.back().site == f.site)
        merged.back().power += f.power;
      else
        merged.push_back(f);
    }
    term.factors = std::move(merged);
  }
  std::sort(terms_.begin(), terms_.end(), term_key_before);
  std::vector<ObsTerm> out;
  for (const auto& t : terms_) {
    if (!out.empty() && same_term_key(out.back(), t))
      out.back().coeff.value += t.coeff.value;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const ObsTerm& t) { return t.coeff.value == 0.0; });
  terms_ = std::move(out);
}

ObservableExpr ObservableExpr::operator+(const ObservableExpr& o) const {
  std::vector<ObsTerm> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(all));
}

ObservableExpr ObservableExpr::operator-(const ObservableExpr& o) const {
  return *this + o.scaled(-1.0);
}

ObservableExpr ObservableExpr::scaled(const SymCoeff& c) const {
  std::vector<ObsTerm> all = terms_;
  for (auto& t : all) t.coeff = t.coeff * c;
  return from_terms(std::move(all));
}

bool ObservableExpr::operator==(const ObservableExpr& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (!same_term_key(terms_[i], o.terms_[i])) return false;
    if (terms_[i].coeff.value != o.terms_[i].coeff.value) return false;
  }
  return true;
}

int ObservableExpr::support_min() const {
  if (terms_.empty()) throw DomainError("support_min: zero expression");
  int m = INT_MAX;
  for (const auto& t : terms_)
    for (const auto& f : t.factors) m = std::min(m, f.reach_min());
  if (m == INT_MAX) throw DomainError("support_min: constant expression has no support");
  return m;
}

int ObservableExpr::support_max() const {
  if (terms_.empty()) throw DomainError("support_max: zero expression");
  int m = INT_MIN;
  for (const auto& t : terms_)
    for (const auto& f : t.factors) m = std::max(m, f.reach_max());
  if (m == INT_MIN) throw DomainError("support_max: constant expression has no support");
  return m;
}

void ObservableExpr::check_support(int first_site, int last_site) const {
  bool any = false;
  for (const auto& t : terms_) any = any || !t.factors.empty();
  if (!any) return;  // constants are supported everywhere
  if (!(support_min() > first_site && support_max() < last_site))
    throw DomainError("ObservableExpr: support must lie strictly inside the window");
}

double ObservableExpr::eval_on_config(const LatticeConfiguration& config,
                                      const FieldGrid& grid,
                                      const ModelParams& params) const {
  const double eps = params.epsilon();
  double z = 1.0;
  bool need_z = false;
  for (const auto& t : terms_)
    if (t.coeff.z_pow != 0) need_z = true;
  if (need_z) {
    const auto uz = params.uniform_z();
    if (!uz)
      throw DomainError("eval_on_config: expression carries Z powers but Z is site-dependent");
    z = *uz;
  }

  auto phi = [&](int site) {
    if (!config.contains(site))
      throw DomainError("eval_on_config: observable support outside configuration");
    return grid.point(config.index_at(site));
  };

  double total = 0.0;
  for (const auto& t : terms_) {
    double prod = t.coeff.evaluate(eps, z);
    for (const auto& f : t.factors) {
      double base = 0.0;
      switch (f.kind) {
        case ObsFactor::Kind::field: base = phi(f.site); break;
        case ObsFactor::Kind::dfwd:
          base = (phi(f.site + 1) - phi(f.site)) / eps;
          break;
        case ObsFactor::Kind::dsym:
          base = (phi(f.site + 1) - phi(f.site - 1)) / (2.0 * eps);
          break;
      }
      prod *= ipow(base, f.power);
    }
    total += prod;
  }
  return total;
}

ObservableExpr ObservableExpr::expand_fields() const {
  auto base_of = [](const ObsFactor& f) {
    switch (f.kind) {
      case ObsFactor::Kind::field:
        return ObservableExpr::field(f.site, 1);
      case ObsFactor::Kind::dfwd:
        return ObservableExpr::from_terms(
            {ObsTerm{{1.0, -1, 0}, {{ObsFactor::Kind::field, f.site + 1, 1}}},
             ObsTerm{{-1.0, -1, 0}, {{ObsFactor::Kind::field, f.site, 1}}}});
      case ObsFactor::Kind::dsym:
        return ObservableExpr::from_terms(
            {ObsTerm{{0.5, -1, 0}, {{ObsFactor::Kind::field, f.site + 1, 1}}},
             ObsTerm{{-0.5, -1, 0}, {{ObsFactor::Kind::field, f.site - 1, 1}}}});
    }
    throw DomainError("expand_fields: unknown factor kind");
  };

  ObservableExpr total;
  for (const auto& t : terms_) {
    ObservableExpr prod = ObservableExpr::from_terms({ObsTerm{t.coeff, {}}});
    for (const auto& f : t.factors) {
      const ObservableExpr base = base_of(f);
      for (int p = 0; p < f.power; ++p) prod = classical_product(prod, base);
    }
    total = total + prod;
  }
  return total;
}

std::string ObservableExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff.value;
    if (t.coeff.eps_pow != 0) os << "*eps^" << t.coeff.eps_pow;
    if (t.coeff.z_pow != 0) os << "*Z^" << t.coeff.z_pow;
    for (const auto& f : t.factors) {
      switch (f.kind) {
        case ObsFactor::Kind::field: os << "*phi(" << f.site << ")"; break;
        case ObsFactor::Kind::dfwd: os << "*dfwd(" << f.site << ")"; break;
        case ObsFactor::Kind::dsym: os << "*dsym(" << f.site << ")"; break;
      }
      if (f.power != 1) os << "^" << f.power;
    }
  }
  return os.str();
}

ObservableExpr classical_product(const ObservableExpr& a, const ObservableExpr& b) {
  std::vector<ObsTerm> out;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      ObsTerm t;
      t.coeff = ta.coeff * tb.coeff;
      t.factors = ta.factors;
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.push_back(std::move(t));
    }
  }
  return ObservableExpr::from_terms(std::move(out));
}

}  // namespace oscchain
