#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "oscchain/states.hpp"

using namespace oscchain;

TEST_CASE("boundary_state kinds") {
  const FieldGrid grid(161, 6.0);
  const ModelParams p(0.05, 6, QuarticPotential{1.0, 0.0}, 1.0);

  SUBCASE("uniform is all ones") {
    const StateVector s = uniform_state(grid, 0, StateVector::Side::ket);
    CHECK(s.values.minCoeff() == 1.0);
    CHECK(s.values.maxCoeff() == 1.0);
  }
  SUBCASE("ground state of the harmonic kernel is the analytic Gaussian") {
    // width (Z mu^2)^{-1/4} = 1; compare pointwise away from the edges.
    const StateVector s = ground_state(p, grid, 0, StateVector::Side::ket);
    const int mid = grid.n_points() / 2;
    for (int i = 0; i < grid.n_points(); ++i) {
      const double phi = grid.point(i);
      if (std::abs(phi) > 3.0) continue;
      const double expected =
          s.values[mid] * std::exp(-0.5 * phi * phi);
      CHECK(s.values[i] == doctest::Approx(expected).epsilon(0.01));
    }
  }
  SUBCASE("very wide gaussian approaches uniform") {
    const StateVector s =
        gaussian_state(grid, 1e8, 0, StateVector::Side::ket);
    CHECK(s.values.minCoeff() == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("non-positive user state is rejected") {
    Eigen::VectorXd bad = Eigen::VectorXd::Ones(grid.n_points());
    bad[3] = -0.1;
    CHECK_THROWS_AS(custom_state(bad, grid, 0, StateVector::Side::ket),
                    DomainError);
    CHECK_THROWS_AS(custom_state(Eigen::VectorXd::Zero(grid.n_points()), grid, 0,
                                 StateVector::Side::ket),
                    DomainError);
  }
}

TEST_CASE("evolve_state") {
  const FieldGrid grid(81, 4.0);
  const ModelParams p(0.1, 6, QuarticPotential{1.0, 0.0}, 1.0);

  SUBCASE("zero-step evolution is the identity") {
    const StateVector s = uniform_state(grid, 2, StateVector::Side::ket);
    const StateVector t = evolve_state(s, 2, p, grid);
    CHECK((t.values - s.values).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("ground ket is a fixed point up to scale") {
    const StateVector g = ground_state(p, grid, 0, StateVector::Side::ket);
    const StateVector g2 = evolve_state(g, 3, p, grid);
    const double scale = g2.values[40] / g.values[40];
    CHECK((g2.values - scale * g.values).cwiseAbs().maxCoeff() <=
          1e-10 * g2.values.cwiseAbs().maxCoeff());
  }
  SUBCASE("kernel route equals the spectral mode-sum route") {
    const SpectralDecomposition modes = spectral(step_kernel(p, 0, grid));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Eigen::VectorXd v(grid.n_points());
    for (int i = 0; i < grid.n_points(); ++i) v[i] = u(rng);
    const StateVector s = custom_state(v, grid, 1, StateVector::Side::ket);

    const StateVector a = evolve_state(s, 5, p, grid);
    const StateVector b = evolve_state_spectral(s, 5, modes, p);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() <=
          1e-10 * a.values.cwiseAbs().maxCoeff());
  }
  SUBCASE("positivity is preserved by forward evolution") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd v(grid.n_points());
    for (int i = 0; i < grid.n_points(); ++i) v[i] = u(rng) + 1e-6;
    StateVector s = custom_state(v, grid, 0, StateVector::Side::ket);
    for (int site = 1; site <= 4; ++site) {
      s = evolve_state(s, site, p, grid);
      CHECK(s.values.minCoeff() >= -1e-14);
    }
  }
  SUBCASE("bras move with the transposed kernels") {
    // {psi(tau1)| = {psi(tau2)| U(tau2, tau1): pairing with any ket is
    // preserved when bra and ket are moved across the same links.
    const StateVector bra = gaussian_state(grid, 2.0, 4, StateVector::Side::bra);
    const StateVector ket = gaussian_state(grid, 1.5, 1, StateVector::Side::ket);
    const double direct = inner(evolve_state(bra, 1, p, grid), ket);
    const double other = inner(bra, evolve_state(ket, 4, p, grid));
    CHECK(direct == doctest::Approx(other).epsilon(1e-12));
  }
}

TEST_CASE("inner") {
  const FieldGrid grid(11, 2.0);

  SUBCASE("uniform pairing is n * spacing") {
    const StateVector bra = uniform_state(grid, 0, StateVector::Side::bra);
    const StateVector ket = uniform_state(grid, 0, StateVector::Side::ket);
    CHECK(inner(bra, ket) == doctest::Approx(11 * grid.spacing()).epsilon(1e-14));
  }
  SUBCASE("positive for positive states") {
    const StateVector bra = gaussian_state(grid, 0.7, 0, StateVector::Side::bra);
    const StateVector ket = gaussian_state(grid, 1.3, 0, StateVector::Side::ket);
    CHECK(inner(bra, ket) > 0.0);
  }
  SUBCASE("site mismatch is an error") {
    const StateVector bra = uniform_state(grid, 1, StateVector::Side::bra);
    const StateVector ket = uniform_state(grid, 0, StateVector::Side::ket);
    CHECK_THROWS_AS(inner(bra, ket), DomainError);
  }
  SUBCASE("pairing of co-evolved states is tau-independent") {
    const FieldGrid g(61, 3.5);
    const ModelParams p(0.2, 5, QuarticPotential{1.0, 0.4}, 1.1);
    StateVector bra = gaussian_state(g, 1.8, p.last_site(), StateVector::Side::bra);
    StateVector ket = gaussian_state(g, 1.2, p.first_site(), StateVector::Side::ket);
    std::vector<double> pairings;
    for (int site = p.first_site(); site <= p.last_site(); ++site) {
      const StateVector b = evolve_state(bra, site, p, g);
      const StateVector k = evolve_state(ket, site, p, g);
      pairings.push_back(inner(b, k));
    }
    for (double v : pairings)
      CHECK(v == doctest::Approx(pairings.front()).epsilon(1e-10));
  }
}

TEST_CASE("expect_operator") {
  const FieldGrid grid(161, 6.0);
  const ModelParams p(0.05, 4, QuarticPotential{1.0, 0.0}, 1.0);
  const StateVector bra = ground_state(p, grid, 2, StateVector::Side::bra);
  const StateVector ket = ground_state(p, grid, 2, StateVector::Side::ket);

  SUBCASE("identity gives 1") {
    CHECK(expect_operator(bra, identity_op(grid), ket) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("Q vanishes in the even ground state") {
    CHECK(std::abs(expect_operator(bra, build_Q(grid), ket)) < 1e-12);
  }
  SUBCASE("Q^2 in the harmonic ground state is 1/(2 Z omega)") {
    const OperatorMatrix q2 = compose(build_Q(grid), build_Q(grid));
    CHECK(expect_operator(bra, q2, ket) == doctest::Approx(0.5).epsilon(0.01));
  }
  SUBCASE("rescaling either state changes nothing") {
    StateVector bra2 = bra;
    bra2.values *= 123.456;
    StateVector ket2 = ket;
    ket2.values *= 1e-7;
    const OperatorMatrix q2 = compose(build_Q(grid), build_Q(grid));
    CHECK(expect_operator(bra2, q2, ket2) ==
          doctest::Approx(expect_operator(bra, q2, ket)).epsilon(1e-14));
  }
}

TEST_CASE("density matrix") {
  const FieldGrid grid(61, 3.5);
  const ModelParams p(0.05, 6, QuarticPotential{1.0, 0.2}, 1.3);
  const StateVector bra = gaussian_state(grid, 1.4, 3, StateVector::Side::bra);
  const StateVector ket = gaussian_state(grid, 0.9, 3, StateVector::Side::ket);
  const DensityMatrix rho = density_matrix(bra, ket);

  SUBCASE("unit trace") {
    CHECK(trace_op(rho.op) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Tr rho Q equals the sandwich") {
    const OperatorMatrix q = build_Q(grid);
    CHECK(expect_density(rho, q) ==
          doctest::Approx(expect_operator(bra, q, ket)).epsilon(1e-12));
  }
  SUBCASE("rank 1") {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rho.op.entries);
    CHECK(svd.singularValues()[1] <= 1e-12 * svd.singularValues()[0]);
  }
  SUBCASE("Schroedinger and Heisenberg pictures agree") {
    // rho(tau) = U rho U^{-1}: expectations of the static Q at the moved
    // site equal expectations of the moved states.
    const DensityMatrix rho_up = evolve_density(rho, 5, p, grid);
    const OperatorMatrix q = build_Q(grid);
    const StateVector bra_up = evolve_state(bra, 5, p, grid);
    const StateVector ket_up = evolve_state(ket, 5, p, grid);
    CHECK(expect_density(rho_up, q) ==
          doctest::Approx(expect_operator(bra_up, q, ket_up)).epsilon(1e-8));
  }
}
