#include "oscchain/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <sstream>

#include "oscchain/heisenberg.hpp"
#include "oscchain/oracle.hpp"

namespace oscchain {

namespace {
// Evaluates jobs[i] -> results[i] with up to `threads` workers; results are
// collected in input order, so scheduling cannot change the output.
template <typename T>
std::vector<T> ordered_parallel(const std::vector<std::function<T()>>& jobs,
                                int threads) {
  std::vector<T> results(jobs.size());
  if (threads <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    return results;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      results[i] = jobs[i]();
    }
  };
  std::vector<std::future<void>> pool;
  const int n = std::min<int>(threads, static_cast<int>(jobs.size()));
  for (int t = 0; t < n; ++t)
    pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return results;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

ObservableExpr squared(const ObservableExpr& a) { return classical_product(a, a); }
}  // namespace

std::string format_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentResult run_spectrum(RunConfig config, int threads) {
  (void)threads;
  const auto levels_raw = config.take_experiment("levels");
  const int levels = levels_raw ? std::stoi(*levels_raw) : 8;
  config.finish_experiment();
  if (levels < 1) throw ConfigError("spectrum: levels must be >= 1");

  const ModelParams params = config.make_params();
  const FieldGrid grid = config.make_grid(params);
  if (levels > grid.n_points())
    throw ConfigError("spectrum: more levels than grid points");

  const SpectralDecomposition h_modes = spectral(build_H(params, 1, grid));
  const SpectralDecomposition k_modes = spectral(step_kernel(params, 0, grid));

  std::ostringstream csv;
  csv << "n,energy_h,gap_h,energy_kernel,gap_kernel\n";
  const int top = grid.n_points() - 1;
  const double e0_h = h_modes.eigenvalues[0];
  const double e0_k = -std::log(k_modes.eigenvalues[top]) / params.epsilon();
  for (int n = 0; n < levels; ++n) {
    const double eh = h_modes.eigenvalues[n];
    const double kappa = k_modes.eigenvalues[top - n];
    const double ek = (kappa > 0.0)
                          ? -std::log(kappa) / params.epsilon()
                          : std::numeric_limits<double>::infinity();
    csv << n << ',' << format_csv_double(eh) << ','
        << format_csv_double(eh - e0_h) << ',' << format_csv_double(ek) << ','
        << format_csv_double(ek - e0_k) << '\n';
  }
  return {csv.str(), true};
}

ExperimentResult run_ambiguity(RunConfig config, int threads) {
  const auto eps_raw = config.take_experiment("eps_list");
  if (!eps_raw) throw ConfigError("ambiguity: missing eps_list");
  const auto site_raw = config.take_experiment("site");
  config.finish_experiment();

  std::vector<double> eps_list;
  for (const auto& tok : split(*eps_raw, ','))
    eps_list.push_back(std::stod(tok));
  if (eps_list.size() < 1) throw ConfigError("ambiguity: empty eps_list");
  for (size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw ConfigError("ambiguity: eps_list must be strictly decreasing");

  const ModelParams base = config.make_params();
  const int site = site_raw ? std::stoi(*site_raw)
                            : (base.first_site() + base.last_site()) / 2;
  if (site - 1 <= base.first_site() || site + 1 >= base.last_site())
    throw ConfigError("ambiguity: site too close to the window edge");

  std::vector<std::function<std::array<double, 5>()>> jobs;
  for (double eps : eps_list) {
    jobs.push_back([&, eps] {
      const ModelParams params = base.with_epsilon(eps);
      const FieldGrid grid = config.make_grid(params);
      if (grid_coupling_tier(grid, params) == CouplingTier::violated)
        throw CouplingError("ambiguity: grid too coarse for eps = " +
                            std::to_string(eps));
      const StateVector ket =
          config.make_state(config.ket, StateVector::Side::ket, params, grid);
      const StateVector bra =
          config.make_state(config.bra, StateVector::Side::bra, params, grid);
      const double fwd2 = expect_observable(
          squared(ObservableExpr::forward_diff(site)), params, grid, bra, ket);
      const double sym2 = expect_observable(
          squared(ObservableExpr::symmetric_diff(site)), params, grid, bra, ket);
      const double gap = fwd2 - sym2;
      const double z = params.z_site(site);
      return std::array<double, 5>{eps, fwd2, sym2, gap, gap * 2.0 * eps * z};
    });
  }
  const auto rows = ordered_parallel(jobs, threads);

  std::ostringstream csv;
  csv << "eps,dfwd_sq,dsym_sq,gap,gap_times_2epsz\n";
  for (const auto& r : rows) {
    csv << format_csv_double(r[0]);
    for (int i = 1; i < 5; ++i) csv << ',' << format_csv_double(r[i]);
    csv << '\n';
  }
  return {csv.str(), true};
}

ExperimentResult run_correlate(RunConfig config, int threads) {
  const auto pairs_raw = config.take_experiment("pairs");
  if (!pairs_raw) throw ConfigError("correlate: missing pairs");
  const std::string product =
      config.take_experiment("product").value_or("classical");
  config.finish_experiment();
  if (product != "classical" && product != "quantum" &&
      product != "quantum-antiordered")
    throw ConfigError("correlate: product must be classical|quantum|quantum-antiordered");

  const ModelParams params = config.make_params();
  const FieldGrid grid = config.make_grid(params);

  std::vector<std::pair<int, int>> pairs;
  for (const auto& tok : split(*pairs_raw, ',')) {
    const auto parts = split(tok, ':');
    if (parts.size() != 2) throw ConfigError("correlate: bad pair '" + tok + "'");
    int s1 = std::stoi(parts[0]);
    int s2 = std::stoi(parts[1]);
    if (s1 > s2) std::swap(s1, s2);
    if (s1 <= params.first_site() || s2 >= params.last_site())
      throw ConfigError("correlate: pair sites must lie strictly inside the window");
    pairs.emplace_back(s1, s2);
  }

  const StateVector ket =
      config.make_state(config.ket, StateVector::Side::ket, params, grid);
  const StateVector bra =
      config.make_state(config.bra, StateVector::Side::bra, params, grid);
  const bool ground_pair = config.ket == "ground" && config.bra == "ground";

  struct Row {
    int s1, s2;
    double value;
    int numeric_only;
  };
  std::vector<std::function<Row()>> jobs;
  for (const auto& [s1, s2] : pairs) {
    jobs.push_back([&, s1 = s1, s2 = s2]() -> Row {
      if (product == "classical") {
        const ObservableExpr expr =
            classical_product(ObservableExpr::field(s1), ObservableExpr::field(s2));
        return {s1, s2, expect_observable(expr, params, grid, bra, ket), 0};
      }
      if (product == "quantum") {
        // tau-ordered quantum product: larger tau on the left; coincides
        // with the classical product, and the symbolic image always exists.
        const ObservableExpr expr =
            quantum_product(ObservableExpr::field(s2), ObservableExpr::field(s1));
        return {s1, s2, expect_observable(expr, params, grid, bra, ket), 0};
      }
      // Anti-ordered: phi(s1) o phi(s2) with s1 < s2.
      if (s1 == s2 || s2 - s1 <= 1) {
        const ObservableExpr expr =
            quantum_product(ObservableExpr::field(s1), ObservableExpr::field(s2));
        return {s1, s2, expect_observable(expr, params, grid, bra, ket), 0};
      }
      // The symbolic image needs the wide-separation commutator, which is
      // outside the listed basis; evaluate numerically instead.
      double value;
      if (ground_pair && params.site_independent()) {
        value = ground_two_point(params, grid, s2 - s1, PairOrdering::antiordered);
      } else {
        value = antiordered_two_point(params, grid, bra, ket, s1, s2);
      }
      return {s1, s2, value, 1};
    });
  }
  const auto rows = ordered_parallel(jobs, threads);

  std::ostringstream csv;
  csv << "site1,site2,tau1,tau2,value,numeric_only\n";
  for (const auto& r : rows) {
    csv << r.s1 << ',' << r.s2 << ','
        << format_csv_double(r.s1 * params.epsilon()) << ','
        << format_csv_double(r.s2 * params.epsilon()) << ','
        << format_csv_double(r.value) << ',' << r.numeric_only << '\n';
  }
  return {csv.str(), true};
}

ExperimentResult run_oracle_check(RunConfig config, int threads) {
  (void)threads;
  const auto window_raw = config.take_experiment("window");
  const int window = window_raw ? std::stoi(*window_raw) : 4;
  config.finish_experiment();
  if (window < 4) throw ConfigError("oracle-check: window must be >= 4");

  // The check runs on a reduced chain of `window` sites with the
  // configured physics.
  RunConfig reduced = config;
  reduced.n_sites = window - 2;
  const ModelParams params = reduced.make_params();
  const FieldGrid grid = reduced.make_grid(params);

  const double budget =
      std::pow(static_cast<double>(grid.n_points()), window + 2);
  if (budget > 1e8)
    throw BudgetError("oracle-check: configuration count " +
                          std::to_string(budget) + " exceeds the 1e8 budget",
                      budget);

  const StateVector ket =
      reduced.make_state(reduced.ket, StateVector::Side::ket, params, grid);
  const StateVector bra =
      reduced.make_state(reduced.bra, StateVector::Side::bra, params, grid);
  const ExteriorWeights ext{ket.values.cwiseMax(1e-300),
                            bra.values.cwiseMax(1e-300)};

  const int c = params.first_site() + 1;
  std::vector<std::pair<std::string, ObservableExpr>> battery = {
      {"phi", ObservableExpr::field(c)},
      {"phi_sq", ObservableExpr::field(c, 2)},
      {"phi_pair", classical_product(ObservableExpr::field(c),
                                     ObservableExpr::field(c + 1))},
      {"dfwd_sq", squared(ObservableExpr::forward_diff(c))},
      {"dsym_sq", squared(ObservableExpr::symmetric_diff(c))},
  };
  for (auto& [label, expr] : battery)
    expr.check_support(params.first_site(), params.last_site());

  std::ostringstream csv;
  csv << "check,value_brute,value_operator,abs_discrepancy,rel_discrepancy,pass\n";
  bool all_pass = true;

  for (const auto& [label, expr] : battery) {
    const double brute = brute_expectation(expr, params, grid,
                                           params.first_site(),
                                           params.last_site(), ext);
    const double op = expect_observable(expr, params, grid, bra, ket);
    const double diff = std::abs(brute - op);
    const double scale = std::max({std::abs(brute), std::abs(op), 1.0});
    const bool pass = diff <= 1e-10 * scale;
    all_pass = all_pass && pass;
    csv << label << ',' << format_csv_double(brute) << ','
        << format_csv_double(op) << ',' << format_csv_double(diff) << ','
        << format_csv_double(diff / scale) << ',' << (pass ? 1 : 0) << '\n';
  }

  // Exterior irrelevance: a two-site exterior chain below the window,
  // integrated out explicitly, must reproduce the direct boundary table.
  {
    ModelParams extended(params.epsilon(),
                         std::vector<QuarticPotential>(params.total_sites() + 2,
                                                       QuarticPotential{config.mu2,
                                                                        config.lambda}),
                         std::vector<double>(params.total_sites() + 2, config.z));
    const int inner_lo = 2;
    const int inner_hi = extended.last_site();
    const Eigen::VectorXd outer = gaussian_state(grid, 1.3, 0,
                                                 StateVector::Side::ket).values;
    const Eigen::VectorXd induced =
        induced_boundary_weight(extended, grid, outer, 0, inner_lo);

    const ObservableExpr probe = ObservableExpr::field(inner_lo + 1, 2);
    const double via_table =
        brute_expectation(probe, extended, grid, inner_lo, inner_hi,
                          ExteriorWeights{induced, ext.upper});
    const double via_chain =
        brute_expectation(probe, extended, grid, 0, inner_hi,
                          ExteriorWeights{outer, ext.upper});
    const double diff = std::abs(via_table - via_chain);
    const bool pass = diff <= 1e-12 * std::max({std::abs(via_table), 1.0});
    all_pass = all_pass && pass;
    csv << "exterior_irrelevance," << format_csv_double(via_table) << ','
        << format_csv_double(via_chain) << ',' << format_csv_double(diff)
        << ',' << format_csv_double(diff / std::max(std::abs(via_table), 1.0))
        << ',' << (pass ? 1 : 0) << '\n';

    // Negative control: a genuinely different exterior must be detected.
    const Eigen::VectorXd other =
        gaussian_state(grid, 0.7, 0, StateVector::Side::ket).values;
    const IrrelevanceReport neg = exterior_irrelevance_check(
        {{"phi_sq", probe}}, extended, grid, inner_lo, inner_hi,
        ExteriorWeights{induced, ext.upper},
        ExteriorWeights{induced_boundary_weight(extended, grid, other, 0, inner_lo),
                        ext.upper});
    const bool detected = !neg.fixture_valid && neg.max_discrepancy > 0.0;
    all_pass = all_pass && detected;
    csv << "exterior_negative_control," << format_csv_double(neg.state_mismatch)
        << ',' << format_csv_double(neg.max_discrepancy) << ','
        << format_csv_double(neg.max_discrepancy) << ',' << 0 << ','
        << (detected ? 1 : 0) << '\n';
  }

  return {csv.str(), all_pass};
}

}  // namespace oscchain
