#include "oscchain/observable_algebra.hpp"

#include <algorithm>
#include <cctype>

namespace oscchain {

namespace {
bool op_factor_before(const OpFactor& a, const OpFactor& b) {
  if (a.site != b.site) return a.site > b.site;
  // R left of Q at an equal site.
  if (a.kind != b.kind) return a.kind == OpFactor::Kind::r;
  return a.power < b.power;
}

bool op_term_key_before(const OpTerm& a, const OpTerm& b) {
  if (a.factors != b.factors)
    return std::lexicographical_compare(a.factors.begin(), a.factors.end(),
                                        b.factors.begin(), b.factors.end(),
                                        op_factor_before);
  if (a.coeff.eps_pow != b.coeff.eps_pow) return a.coeff.eps_pow < b.coeff.eps_pow;
  return a.coeff.z_pow < b.coeff.z_pow;
}

bool op_same_term_key(const OpTerm& a, const OpTerm& b) {
  return a.factors == b.factors && a.coeff.eps_pow == b.coeff.eps_pow &&
         a.coeff.z_pow == b.coeff.z_pow;
}

// True when `left` may not stand immediately left of `right`.
bool out_of_order(const OpFactor& left, const OpFactor& right) {
  if (left.site < right.site) return true;
  if (left.site > right.site) return false;
  return left.kind == OpFactor::Kind::q && right.kind == OpFactor::Kind::r;
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

// X^m Y^n -> sum_k k! C(m,k) C(n,k) c^k Y^{n-k} X^{m-k} for central
// c = [X, Y].
struct SwapRule {
  SymCoeff c;
};

SwapRule swap_rule(const OpFactor& left, const OpFactor& right) {
  const bool both_q = left.kind == OpFactor::Kind::q &&
                      right.kind == OpFactor::Kind::q;
  if (both_q && right.site == left.site + 1) {
    // [Q(s), Q(s+1)] = +eps/Z.
    return {SymCoeff{1.0, 1, -1}};
  }
  if (left.kind == OpFactor::Kind::q && right.kind == OpFactor::Kind::r &&
      left.site == right.site) {
    // [Q(s), R(s)] = -1.
    return {SymCoeff{-1.0, 0, 0}};
  }
  throw UnsupportedBasisError(
      "OperatorExpr: reordering needs a commutator outside the listed basis "
      "(sites " + std::to_string(left.site) + " and " +
      std::to_string(right.site) + ")");
}
}  // namespace

OperatorExpr OperatorExpr::identity() {
  return from_terms({OpTerm{{1.0, 0, 0}, {}}});
}

OperatorExpr OperatorExpr::q(int site, int power) {
  return from_terms({OpTerm{{1.0, 0, 0}, {{OpFactor::Kind::q, site, power}}}});
}

OperatorExpr OperatorExpr::r(int site, int power) {
  return from_terms({OpTerm{{1.0, 0, 0}, {{OpFactor::Kind::r, site, power}}}});
}

OperatorExpr OperatorExpr::from_terms(std::vector<OpTerm> terms) {
  OperatorExpr e;
  e.terms_ = std::move(terms);
  e.normal_order();
  return e;
}

void OperatorExpr::normal_order() {
  std::vector<OpTerm> work = std::move(terms_);
  std::vector<OpTerm> done;

  while (!work.empty()) {
    OpTerm t = std::move(work.back());
    work.pop_back();

    // Merge adjacent equal factors first.
    std::vector<OpFactor> merged;
    for (const auto& f : t.factors) {
      if (f.power == 0) continue;
      if (!merged.empty() && merged.back().kind == f.kind &&
          merged.back().site == f.site)
        merged.back().power += f.power;
      else
        merged.push_back(f);
    }
    t.factors = std::move(merged);

    size_t pos = 0;
    bool swapped = false;
    for (; pos + 1 < t.factors.size(); ++pos) {
      if (out_of_order(t.factors[pos], t.factors[pos + 1])) {
        swapped = true;
        break;
      }
    }
    if (!swapped) {
      done.push_back(std::move(t));
      continue;
    }

    const OpFactor x = t.factors[pos];      // left, belongs right
    const OpFactor y = t.factors[pos + 1];  // right, belongs left
    const SwapRule rule = swap_rule(x, y);
    const int m = x.power, n = y.power;
    for (int k = 0; k <= std::min(m, n); ++k) {
      OpTerm nt;
      nt.coeff = t.coeff;
      const double comb = factorial(k) * binomial(m, k) * binomial(n, k);
      SymCoeff ck{comb, 0, 0};
      for (int i = 0; i < k; ++i) ck = ck * rule.c;
      nt.coeff = nt.coeff * ck;
      nt.factors.assign(t.factors.begin(), t.factors.begin() + pos);
      if (n - k > 0) nt.factors.push_back({y.kind, y.site, n - k});
      if (m - k > 0) nt.factors.push_back({x.kind, x.site, m - k});
      nt.factors.insert(nt.factors.end(), t.factors.begin() + pos + 2,
                        t.factors.end());
      work.push_back(std::move(nt));
    }
  }

  std::sort(done.begin(), done.end(), op_term_key_before);
  std::vector<OpTerm> out;
  for (const auto& t : done) {
    if (!out.empty() && op_same_term_key(out.back(), t))
      out.back().coeff.value += t.coeff.value;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const OpTerm& t) { return t.coeff.value == 0.0; });
  terms_ = std::move(out);
}

OperatorExpr OperatorExpr::operator+(const OperatorExpr& o) const {
  std::vector<OpTerm> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(all));
}

OperatorExpr OperatorExpr::operator-(const OperatorExpr& o) const {
  return *this + o.scaled(SymCoeff{-1.0, 0, 0});
}

OperatorExpr OperatorExpr::operator*(const OperatorExpr& o) const {
  std::vector<OpTerm> all;
  for (const auto& ta : terms_) {
    for (const auto& tb : o.terms_) {
      OpTerm t;
      t.coeff = ta.coeff * tb.coeff;
      t.factors = ta.factors;
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      all.push_back(std::move(t));
    }
  }
  return from_terms(std::move(all));
}

OperatorExpr OperatorExpr::scaled(const SymCoeff& c) const {
  std::vector<OpTerm> all = terms_;
  for (auto& t : all) t.coeff = t.coeff * c;
  return from_terms(std::move(all));
}

bool OperatorExpr::operator==(const OperatorExpr& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (!op_same_term_key(terms_[i], o.terms_[i])) return false;
    if (terms_[i].coeff.value != o.terms_[i].coeff.value) return false;
  }
  return true;
}

OperatorExpr to_operator_expr(const ObservableExpr& a) {
  const ObservableExpr fields = a.expand_fields();
  std::vector<OpTerm> terms;
  for (const auto& t : fields.terms()) {
    OpTerm ot;
    ot.coeff = t.coeff;
    // Canonical observable factors are already site-descending, which is
    // exactly the tau ordering of the operator monomial.
    for (const auto& f : t.factors)
      ot.factors.push_back({OpFactor::Kind::q, f.site, f.power});
    terms.push_back(std::move(ot));
  }
  return OperatorExpr::from_terms(std::move(terms));
}

ObservableExpr standard_representative(const OperatorExpr& op) {
  ObservableExpr out;
  for (const auto& t : op.terms()) {
    bool all_q = true;
    int r_count = 0;
    for (const auto& f : t.factors) {
      if (f.kind == OpFactor::Kind::r) {
        all_q = false;
        r_count += f.power;
      }
    }

    if (all_q) {
      // F[f_n(Q(tau_n)) ... f_1(Q(tau_1))] = field monomial.
      std::vector<ObsFactor> factors;
      for (const auto& f : t.factors)
        factors.push_back({ObsFactor::Kind::field, f.site, f.power});
      out = out + ObservableExpr::from_terms({ObsTerm{t.coeff, std::move(factors)}});
      continue;
    }

    const auto& fs = t.factors;
    if (fs.size() == 1 && fs[0].kind == OpFactor::Kind::r && fs[0].power == 1) {
      // F[R(tau)] = -Z dfwd(tau).
      out = out + ObservableExpr::forward_diff(fs[0].site)
                      .scaled(t.coeff * SymCoeff{-1.0, 0, 1});
      continue;
    }
    if (fs.size() == 1 && fs[0].kind == OpFactor::Kind::r && fs[0].power == 2) {
      // F[R^2(tau)] = Z^2 dfwd(tau)^2 - Z/eps.
      ObservableExpr sq = ObservableExpr::from_terms(
          {ObsTerm{{1.0, 0, 2}, {{ObsFactor::Kind::dfwd, fs[0].site, 2}}},
           ObsTerm{{-1.0, -1, 1}, {}}});
      out = out + sq.scaled(t.coeff);
      continue;
    }
    if (fs.size() == 2 && fs[0].kind == OpFactor::Kind::r &&
        fs[1].kind == OpFactor::Kind::q && fs[0].site == fs[1].site &&
        fs[0].power == 1 && fs[1].power == 1) {
      // F[R(tau) Q(tau)] = -Z phi(tau) dfwd(tau).
      out = out + ObservableExpr::from_terms(
                      {ObsTerm{t.coeff * SymCoeff{-1.0, 0, 1},
                               {{ObsFactor::Kind::field, fs[0].site, 1},
                                {ObsFactor::Kind::dfwd, fs[0].site, 1}}}});
      continue;
    }
    if (fs.size() == 2 && fs[0].kind == OpFactor::Kind::r &&
        fs[1].kind == OpFactor::Kind::r && fs[0].site > fs[1].site &&
        fs[0].power == 1 && fs[1].power == 1) {
      // F[R(tau_2) R(tau_1)] = Z^2 dfwd(tau_2) dfwd(tau_1), tau_2 >= tau_1+eps.
      out = out + ObservableExpr::from_terms(
                      {ObsTerm{t.coeff * SymCoeff{1.0, 0, 2},
                               {{ObsFactor::Kind::dfwd, fs[0].site, 1},
                                {ObsFactor::Kind::dfwd, fs[1].site, 1}}}});
      continue;
    }
    throw UnsupportedBasisError(
        "standard_representative: monomial with " + std::to_string(r_count) +
        " R factor(s) is outside the listed basis");
  }
  return out;
}

ObservableExpr quantum_product(const ObservableExpr& a, const ObservableExpr& b) {
  return standard_representative(to_operator_expr(a) * to_operator_expr(b));
}

ObservableExpr commutator_observable(const ObservableExpr& a,
                                     const ObservableExpr& b) {
  return quantum_product(a, b) - quantum_product(b, a);
}

namespace {
struct Parser {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("observable parse error at offset " + std::to_string(pos) +
                      ": " + what);
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  int parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) fail("expected integer");
    return std::stoi(text.substr(start, pos - start));
  }

  std::string parse_name() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) fail("expected observable name");
    return text.substr(start, pos - start);
  }

  ObservableExpr parse_expr() {
    const std::string name = parse_name();
    expect('(');
    ObservableExpr result;
    if (name == "phi" || name == "phi2" || name == "dfwd" || name == "dsym") {
      const int site = parse_int();
      if (name == "phi") result = ObservableExpr::field(site, 1);
      else if (name == "phi2") result = ObservableExpr::field(site, 2);
      else if (name == "dfwd") result = ObservableExpr::forward_diff(site);
      else result = ObservableExpr::symmetric_diff(site);
    } else if (name == "mul" || name == "qmul") {
      ObservableExpr lhs = parse_expr();
      expect(',');
      ObservableExpr rhs = parse_expr();
      result = (name == "mul") ? classical_product(lhs, rhs)
                               : quantum_product(lhs, rhs);
    } else {
      fail("unknown observable '" + name + "'");
    }
    expect(')');
    return result;
  }
};
}  // namespace

ObservableExpr parse_observable(const std::string& text) {
  Parser p{text};
  ObservableExpr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters");
  return e;
}

}  // namespace oscchain
