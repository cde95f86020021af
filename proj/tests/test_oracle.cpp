#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oscchain/heisenberg.hpp"
#include "oscchain/oracle.hpp"

using namespace oscchain;

namespace {
ExteriorWeights uniform_ext(const FieldGrid& grid) {
  return {Eigen::VectorXd::Ones(grid.n_points()),
          Eigen::VectorXd::Ones(grid.n_points())};
}
}  // namespace

TEST_CASE("brute_expectation basics") {
  SUBCASE("decoupled single site: uniform average of phi^2 on {-1,0,1}") {
    const FieldGrid grid(3, 1.0);
    const ModelParams p(1.0, 0, QuarticPotential{0.0, 0.0}, 1.0);
    const double v = brute_expectation(ObservableExpr::field(0, 2), p, grid, 0,
                                       0, uniform_ext(grid));
    CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("odd observables vanish for even weights") {
    const FieldGrid grid(5, 1.5);
    const ModelParams p(0.4, 2, QuarticPotential{1.0, 0.5}, 1.0);
    const double v = brute_expectation(ObservableExpr::field(1), p, grid, 0, 3,
                                       uniform_ext(grid));
    CHECK(std::abs(v) < 1e-14);
  }
  SUBCASE("budget refusal carries the configuration count") {
    const FieldGrid grid(100, 2.0);
    const ModelParams p(0.4, 4, QuarticPotential{1.0, 0.0}, 1.0);
    try {
      brute_expectation(ObservableExpr::field(2), p, grid, 0, 5, uniform_ext(grid));
      FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
      CHECK(e.configuration_count == doctest::Approx(1e12));
    }
  }
  SUBCASE("bit reproducibility across block execution orders") {
    const FieldGrid grid(7, 2.0);
    const ModelParams p(0.3, 2, QuarticPotential{1.0, 0.7}, 1.4);
    const ObservableExpr expr = classical_product(ObservableExpr::field(1),
                                                  ObservableExpr::field(2));
    const double a = brute_expectation(expr, p, grid, 0, 3, uniform_ext(grid));
    const double b = brute_expectation(expr, p, grid, 0, 3, uniform_ext(grid));
    std::vector<int> reversed(7);
    for (int i = 0; i < 7; ++i) reversed[i] = 6 - i;
    const double c =
        brute_expectation(expr, p, grid, 0, 3, uniform_ext(grid), reversed);
    std::vector<int> shuffled = {3, 0, 6, 2, 5, 1, 4};
    const double d =
        brute_expectation(expr, p, grid, 0, 3, uniform_ext(grid), shuffled);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a == d);
  }
}

TEST_CASE("oracle agrees with the operator formalism") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> mu2(0.3, 1.8);
  std::uniform_real_distribution<double> lam(0.0, 1.2);
  std::uniform_real_distribution<double> zz(0.5, 2.0);
  std::uniform_real_distribution<double> eps_pick(0.0, 1.0);

  for (int trial = 0; trial < 5; ++trial) {
    const double eps = eps_pick(rng) < 0.5 ? 0.2 : 0.5;
    const ModelParams p(eps, 2, QuarticPotential{mu2(rng), lam(rng)}, zz(rng));
    const FieldGrid grid(9, 2.0);

    // Random positive boundary weights double as the states.
    std::uniform_real_distribution<double> w(0.2, 1.5);
    Eigen::VectorXd lo(9), hi(9);
    for (int i = 0; i < 9; ++i) {
      lo[i] = w(rng);
      hi[i] = w(rng);
    }
    const ExteriorWeights ext{lo, hi};
    const StateVector ket = custom_state(lo, grid, 0, StateVector::Side::ket);
    const StateVector bra = custom_state(hi, grid, 3, StateVector::Side::bra);

    const std::vector<ObservableExpr> battery = {
        ObservableExpr::field(1),
        ObservableExpr::field(2, 2),
        classical_product(ObservableExpr::field(1), ObservableExpr::field(2)),
        classical_product(ObservableExpr::forward_diff(1),
                          ObservableExpr::forward_diff(1)),
        classical_product(ObservableExpr::symmetric_diff(1),
                          ObservableExpr::symmetric_diff(1)),
    };
    for (const auto& expr : battery) {
      const double brute = brute_expectation(expr, p, grid, 0, 3, ext);
      const double op = expect_observable(expr, p, grid, bra, ket);
      CHECK(std::abs(brute - op) <=
            1e-10 * std::max({1.0, std::abs(brute), std::abs(op)}));
    }
  }
}

TEST_CASE("oracle agrees with to_heisenberg expectations on a 4-site window") {
  const FieldGrid grid(9, 2.0);
  const ModelParams p(0.3, 2, QuarticPotential{1.1, 0.4}, 1.2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.2, 1.5);
  Eigen::VectorXd lo(9), hi(9);
  for (int i = 0; i < 9; ++i) {
    lo[i] = w(rng);
    hi[i] = w(rng);
  }
  const ExteriorWeights ext{lo, hi};

  // Tr rho A_H with rho built from the boundary states at the reference.
  const int ref = 1;
  const StateVector bra_ref = evolve_state(
      custom_state(hi, grid, 3, StateVector::Side::bra), ref, p, grid);
  const StateVector ket_ref = evolve_state(
      custom_state(lo, grid, 0, StateVector::Side::ket), ref, p, grid);
  const DensityMatrix rho = density_matrix(bra_ref, ket_ref);

  const ObservableExpr expr =
      classical_product(ObservableExpr::field(2), ObservableExpr::field(1));
  const double brute = brute_expectation(expr, p, grid, 0, 3, ext);
  const double heis = expect_density(rho, to_heisenberg(expr, p, grid, ref));
  CHECK(std::abs(brute - heis) <= 1e-10 * std::max(1.0, std::abs(brute)));
}

TEST_CASE("exterior irrelevance") {
  const FieldGrid grid(9, 2.2);

  SUBCASE("dyadic rescaling changes nothing, bit for bit") {
    const ModelParams p(0.4, 2, QuarticPotential{1.0, 0.3}, 1.0);
    Eigen::VectorXd lo(9), hi(9);
    for (int i = 0; i < 9; ++i) {
      lo[i] = 0.5 + 0.25 * (i % 3);  // dyadic values: 3x stays exact
      hi[i] = 1.0 + 0.5 * (i % 2);
    }
    const ExteriorWeights e1{lo, hi};
    const ExteriorWeights e2{3.0 * lo, 3.0 * hi};
    const auto report = exterior_irrelevance_check(
        {{"phi2", ObservableExpr::field(1, 2)},
         {"pair", classical_product(ObservableExpr::field(1),
                                    ObservableExpr::field(2))}},
        p, grid, 0, 3, e1, e2);
    CHECK(report.fixture_valid);
    CHECK(report.max_discrepancy == 0.0);
    CHECK_NOTHROW(require_valid_fixture(report));
  }

  SUBCASE("explicitly integrated exterior chain matches the induced table") {
    // Chain of 6 sites; the two lowest are exterior to the window [2, 5].
    const ModelParams p(0.4, 4, QuarticPotential{1.0, 0.3}, 1.0);
    const StateVector outer = gaussian_state(grid, 1.1, 0, StateVector::Side::ket);
    const Eigen::VectorXd induced =
        induced_boundary_weight(p, grid, outer.values, 0, 2);
    const Eigen::VectorXd upper = Eigen::VectorXd::Ones(9);

    const ObservableExpr probe = ObservableExpr::field(3, 2);
    const double via_table = brute_expectation(probe, p, grid, 2, 5,
                                               ExteriorWeights{induced, upper});
    const double via_chain = brute_expectation(probe, p, grid, 0, 5,
                                               ExteriorWeights{outer.values, upper});
    CHECK(std::abs(via_table - via_chain) <= 1e-12 * std::max(1.0, std::abs(via_chain)));
  }

  SUBCASE("negative control: different induced states are detected") {
    const ModelParams p(0.4, 2, QuarticPotential{1.0, 0.3}, 1.0);
    const Eigen::VectorXd wide =
        (gaussian_state(grid, 1.0, 0, StateVector::Side::ket).values.array() + 0.01)
            .matrix();
    const Eigen::VectorXd narrow =
        (gaussian_state(grid, 0.6, 0, StateVector::Side::ket).values.array() + 0.01)
            .matrix();
    const ExteriorWeights e1{wide, Eigen::VectorXd::Ones(9)};
    const ExteriorWeights e2{narrow, Eigen::VectorXd::Ones(9)};
    const auto report = exterior_irrelevance_check(
        {{"phi2", ObservableExpr::field(1, 2)}}, p, grid, 0, 3, e1, e2);
    CHECK_FALSE(report.fixture_valid);
    CHECK(report.max_discrepancy > 0.0);
    CHECK_THROWS_AS(require_valid_fixture(report), InvalidFixtureError);
  }
}

TEST_CASE("exterior weights validation") {
  const FieldGrid grid(5, 1.0);
  ExteriorWeights bad{Eigen::VectorXd::Ones(5), Eigen::VectorXd::Ones(5)};
  bad.lower[2] = 0.0;
  CHECK_THROWS_AS(bad.validate(grid), DomainError);
  ExteriorWeights wrong_size{Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(5)};
  CHECK_THROWS_AS(wrong_size.validate(grid), DomainError);
}
