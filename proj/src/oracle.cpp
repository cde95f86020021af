#include "oscchain/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "oscchain/transfer.hpp"

namespace oscchain {

namespace {
constexpr double kBudget = 1e8;
constexpr double kTwoPi = 6.283185307179586476925286766559;

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};
}  // namespace

void ExteriorWeights::validate(const FieldGrid& grid) const {
  if (lower.size() != grid.n_points() || upper.size() != grid.n_points())
    throw DomainError("ExteriorWeights: table size does not match grid");
  for (const auto& t : {lower, upper}) {
    if (!(t.minCoeff() > 0.0))
      throw DomainError("ExteriorWeights: tables must be strictly positive");
    if (!t.allFinite())
      throw DomainError("ExteriorWeights: tables must be finite");
  }
}

double brute_expectation(const ObservableExpr& expr, const ModelParams& params,
                         const FieldGrid& grid, int first_site, int last_site,
                         const ExteriorWeights& ext,
                         const std::vector<int>& block_execution_order) {
  if (first_site < params.first_site() || last_site > params.last_site() ||
      last_site < first_site)
    throw DomainError("brute_expectation: window outside chain");
  ext.validate(grid);

  const int size = last_site - first_site + 1;
  const int n = grid.n_points();
  const double count = std::pow(static_cast<double>(n), size);
  if (count > kBudget)
    throw BudgetError("brute_expectation: " + std::to_string(count) +
                          " configurations exceed the 1e8 budget",
                      count);

  // Per-site potential weights (eps on interior sites, eps/2 at the edges)
  // and per-link kinetic coefficients Z_link / (2 eps); together these
  // reproduce the window action exactly.
  const double eps = params.epsilon();
  std::vector<Eigen::VectorXd> pot(size);
  for (int k = 0; k < size; ++k) {
    const int site = first_site + k;
    const double weight = (k == 0 || k == size - 1) && size > 1 ? 0.5 * eps : eps;
    pot[k] = weight * params.potential_on_grid(site, grid);
  }
  std::vector<double> link_coeff(std::max(size - 1, 0));
  double log_measure = 0.0;
  for (int k = 0; k + 1 < size; ++k) {
    const double z = params.z_link(first_site + k);
    link_coeff[k] = 0.5 * z / eps;
    log_measure += 0.5 * std::log(z / (kTwoPi * eps));
  }
  Eigen::VectorXd log_lo = ext.lower.array().log();
  Eigen::VectorXd log_hi = ext.upper.array().log();

  // Stabilizing shift: the log weight of the all-midpoint configuration.
  double shift = log_measure + log_lo[n / 2] + log_hi[n / 2];
  for (int k = 0; k < size; ++k) shift -= pot[k][n / 2];

  LatticeConfiguration config;
  config.first_site = first_site;
  config.indices.assign(size, 0);

  std::vector<int> order(block_execution_order);
  if (order.empty()) {
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
  }
  if (static_cast<int>(order.size()) != n)
    throw DomainError("brute_expectation: block order must list every first index");

  // One block per value of the first site's index; blocks are reduced in
  // ascending block index regardless of execution order.
  std::vector<double> block_num(n, 0.0), block_den(n, 0.0);
  for (int block : order) {
    KahanSum num, den;
    config.indices.assign(size, 0);
    config.indices[0] = block;
    while (true) {
      double logw = log_measure + log_lo[config.indices[0]] +
                    log_hi[config.indices[size - 1]] - shift;
      for (int k = 0; k < size; ++k) logw -= pot[k][config.indices[k]];
      for (int k = 0; k + 1 < size; ++k) {
        const double d =
            grid.point(config.indices[k + 1]) - grid.point(config.indices[k]);
        logw -= link_coeff[k] * d * d;
      }
      const double w = std::exp(logw);
      den.add(w);
      num.add(w * expr.eval_on_config(config, grid, params));

      // Odometer over the trailing sites; the first site is the block label.
      int k = size - 1;
      while (k >= 1) {
        if (++config.indices[k] < n) break;
        config.indices[k] = 0;
        --k;
      }
      if (k < 1) break;
    }
    block_num[block] = num.sum;
    block_den[block] = den.sum;
  }

  KahanSum num, den;
  for (int b = 0; b < n; ++b) {
    num.add(block_num[b]);
    den.add(block_den[b]);
  }
  if (den.sum == 0.0) throw DomainError("brute_expectation: zero partition sum");
  return num.sum / den.sum;
}

Eigen::VectorXd induced_boundary_weight(const ModelParams& params,
                                        const FieldGrid& grid,
                                        const Eigen::VectorXd& outer_table,
                                        int outer_site, int boundary_site) {
  if (outer_table.size() != grid.n_points())
    throw DomainError("induced_boundary_weight: table size mismatch");
  Eigen::VectorXd t = outer_table;
  if (outer_site < boundary_site) {
    // Lower exterior: t_{s+1}(phi2) = h sum_phi1 K(phi2, phi1) t_s(phi1).
    for (int s = outer_site; s < boundary_site; ++s)
      t = apply(step_kernel(params, s, grid), t);
  } else {
    // Upper exterior folds in from the other side of the kernel.
    for (int s = outer_site; s > boundary_site; --s)
      t = apply(transpose_op(step_kernel(params, s - 1, grid)), t);
  }
  return t;
}

IrrelevanceReport exterior_irrelevance_check(
    const std::vector<std::pair<std::string, ObservableExpr>>& battery,
    const ModelParams& params, const FieldGrid& grid, int first_site,
    int last_site, const ExteriorWeights& ext1, const ExteriorWeights& ext2) {
  ext1.validate(grid);
  ext2.validate(grid);

  auto normalized = [&](const Eigen::VectorXd& t) {
    return Eigen::VectorXd(t / (std::sqrt(grid.spacing()) * t.norm()));
  };
  double mismatch = 0.0;
  mismatch = std::max(mismatch, (normalized(ext1.lower) - normalized(ext2.lower))
                                    .cwiseAbs()
                                    .maxCoeff());
  mismatch = std::max(mismatch, (normalized(ext1.upper) - normalized(ext2.upper))
                                    .cwiseAbs()
                                    .maxCoeff());

  IrrelevanceReport report;
  report.fixture_valid = mismatch <= 1e-10;
  report.state_mismatch = mismatch;
  report.max_discrepancy = 0.0;
  for (const auto& [label, expr] : battery) {
    const double v1 =
        brute_expectation(expr, params, grid, first_site, last_site, ext1);
    const double v2 =
        brute_expectation(expr, params, grid, first_site, last_site, ext2);
    const double d = std::abs(v1 - v2);
    report.rows.push_back({label, v1, v2, d});
    report.max_discrepancy = std::max(report.max_discrepancy, d);
  }
  return report;
}

void require_valid_fixture(const IrrelevanceReport& report) {
  if (!report.fixture_valid)
    throw InvalidFixtureError(
        "exterior fixture invalid: induced boundary states differ by " +
        std::to_string(report.state_mismatch));
}

}  // namespace oscchain
