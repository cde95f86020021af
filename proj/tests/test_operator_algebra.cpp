#include <cmath>
#include <random>

#include "doctest.h"
#include "oscchain/operator_matrix.hpp"

using namespace oscchain;

namespace {
double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Interior-row comparison: rows touched by the Dirichlet closure excluded.
double interior_max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b,
                             int margin = 1) {
  const int n = a.dim();
  return max_abs(a.entries.block(margin, 0, n - 2 * margin, n) -
                 b.entries.block(margin, 0, n - 2 * margin, n));
}
}  // namespace

TEST_CASE("build_Q") {
  SUBCASE("spacing-1 grid gives diag of the points") {
    const FieldGrid grid(3, 1.0);  // {-1, 0, 1}
    const OperatorMatrix q = build_Q(grid);
    CHECK(q.entries(0, 0) == -1.0);
    CHECK(q.entries(1, 1) == 0.0);
    CHECK(q.entries(2, 2) == 1.0);
    CHECK(max_abs(q.entries - Eigen::MatrixXd(q.entries.diagonal().asDiagonal())) == 0.0);
  }
  SUBCASE("Q on the constant function samples phi") {
    const FieldGrid grid(17, 2.5);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(17);
    const Eigen::VectorXd qv = apply(build_Q(grid), ones);
    for (int i = 0; i < 17; ++i) CHECK(qv[i] == doctest::Approx(grid.point(i)));
  }
  SUBCASE("<psi|Q|psi> vanishes for even psi on a symmetric grid") {
    const FieldGrid grid(21, 3.0);
    Eigen::VectorXd psi(21);
    for (int i = 0; i < 21; ++i) psi[i] = std::exp(-grid.point(i) * grid.point(i));
    const double val = grid.spacing() * psi.dot(apply(build_Q(grid), psi));
    CHECK(std::abs(val) < 1e-14);
  }
}

TEST_CASE("build_P2") {
  SUBCASE("interior row is (-1, 2, -1) at spacing 1") {
    const FieldGrid grid(5, 2.0);
    const OperatorMatrix p2 = build_P2(grid);
    CHECK(p2.entries(2, 1) == -1.0);
    CHECK(p2.entries(2, 2) == 2.0);
    CHECK(p2.entries(2, 3) == -1.0);
    CHECK(p2.entries(2, 0) == 0.0);
  }
  SUBCASE("all eigenvalues positive with Dirichlet closure") {
    for (int n : {5, 9, 16}) {
      const FieldGrid grid(n, 1.5);
      const SpectralDecomposition s = spectral(build_P2(grid));
      CHECK(s.eigenvalues.minCoeff() > 0.0);
    }
  }
  SUBCASE("<psi|P2|psi> >= 0 for random psi") {
    const FieldGrid grid(31, 2.0);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd psi(31);
      for (auto& x : psi.reshaped()) x = gauss(rng);
      CHECK(grid.spacing() * psi.dot(apply(build_P2(grid), psi)) >= 0.0);
    }
  }
}

TEST_CASE("build_R") {
  SUBCASE("interior row is (-1/2, 0, 1/2) at spacing 1") {
    const FieldGrid grid(5, 2.0);
    const OperatorMatrix r = build_R(grid);
    CHECK(r.entries(2, 1) == -0.5);
    CHECK(r.entries(2, 2) == 0.0);
    CHECK(r.entries(2, 3) == 0.5);
  }
  SUBCASE("R annihilates constants on interior rows") {
    const FieldGrid grid(15, 2.0);
    const Eigen::VectorXd rv =
        apply(build_R(grid), Eigen::VectorXd::Ones(15));
    for (int i = 1; i < 14; ++i) CHECK(std::abs(rv[i]) < 1e-15);
  }
  SUBCASE("R^2 = -P2 in the continuum limit (O(h^2) check)") {
    // On a smooth test function the defect of the compact stencils falls
    // off like spacing^2; assert the convergence rate between two grids.
    auto defect = [](int n) {
      const FieldGrid grid(n, 4.0);
      Eigen::VectorXd psi(n);
      for (int i = 0; i < n; ++i) {
        const double x = grid.point(i);
        psi[i] = std::exp(-x * x);
      }
      const OperatorMatrix r = build_R(grid);
      const Eigen::VectorXd lhs = apply(r, apply(r, psi));
      const Eigen::VectorXd rhs = -apply(build_P2(grid), psi);
      double worst = 0.0;
      for (int i = n / 4; i < 3 * n / 4; ++i)
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
      return worst;
    };
    const double d1 = defect(101);
    const double d2 = defect(201);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.2));
  }
}

TEST_CASE("build_H") {
  SUBCASE("V = 0 reduces to P2 / 2Z") {
    const FieldGrid grid(9, 2.0);
    const ModelParams p(0.2, 1, QuarticPotential{0.0, 0.0}, 2.5);
    const OperatorMatrix h = build_H(p, 0, grid);
    const OperatorMatrix ref = scale(build_P2(grid), 1.0 / 5.0);
    CHECK(max_abs(h.entries - ref.entries) == 0.0);
  }
  SUBCASE("harmonic ground energy") {
    const FieldGrid grid(240, 6.0);
    const ModelParams p(0.02, 1, QuarticPotential{1.0, 0.0}, 1.0);
    const SpectralDecomposition s = spectral(build_H(p, 0, grid));
    CHECK(s.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("H is symmetric") {
    const FieldGrid grid(41, 3.0);
    const ModelParams p(0.1, 1, QuarticPotential{1.3, 0.8}, 1.7);
    const OperatorMatrix h = build_H(p, 0, grid);
    CHECK(max_abs(h.entries - h.entries.transpose()) <=
          1e-14 * max_abs(h.entries));
  }
}

TEST_CASE("commutator identities") {
  const FieldGrid grid(25, 2.5);
  const OperatorMatrix q = build_Q(grid);
  const OperatorMatrix p2 = build_P2(grid);
  const OperatorMatrix r = build_R(grid);

  SUBCASE("[Q, Q^2] = 0 exactly") {
    const OperatorMatrix q2 = compose(q, q);
    CHECK(max_abs(commutator(q, q2).entries) == 0.0);
  }
  SUBCASE("[P2, Q] = -2R on interior rows, machine precision") {
    const OperatorMatrix lhs = commutator(p2, q);
    const OperatorMatrix rhs = scale(r, -2.0);
    const double scale_ref = max_abs(rhs.entries);
    CHECK(interior_max_abs_diff(lhs, rhs) <= 1e-15 * scale_ref);
  }
  SUBCASE("[H, Q] = -R/Z on interior rows") {
    const ModelParams p(0.1, 1, QuarticPotential{1.1, 0.3}, 1.9);
    const OperatorMatrix h = build_H(p, 0, grid);
    const OperatorMatrix lhs = commutator(h, q);
    const OperatorMatrix rhs = scale(r, -1.0 / 1.9);
    CHECK(interior_max_abs_diff(lhs, rhs) <= 1e-14 * max_abs(rhs.entries));
  }
  SUBCASE("property: [P2, Q] + 2R vanishes on interior rows for every grid") {
    for (int n : {7, 12, 33}) {
      for (double pm : {0.7, 2.0, 5.5}) {
        const FieldGrid g(n, pm);
        const OperatorMatrix lhs = commutator(build_P2(g), build_Q(g));
        const OperatorMatrix rhs = scale(build_R(g), -2.0);
        CHECK(interior_max_abs_diff(lhs, rhs) <= 1e-13 * max_abs(rhs.entries));
      }
    }
  }
  SUBCASE("grid mismatch is an error") {
    const FieldGrid other(25, 3.0);
    CHECK_THROWS_AS(commutator(q, build_Q(other)), DomainError);
  }
}

TEST_CASE("spectral decomposition") {
  SUBCASE("diagonal operator") {
    const FieldGrid grid(3, 1.0);
    Eigen::VectorXd d(3);
    d << -1.0, 0.0, 1.0;
    const SpectralDecomposition s = spectral(diagonal_op(grid, d));
    CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(0.0));
    CHECK(s.eigenvalues[2] == doctest::Approx(1.0));
  }
  SUBCASE("harmonic level spacing is omega = 1 within 1%") {
    const FieldGrid grid(240, 6.0);
    const ModelParams p(0.02, 1, QuarticPotential{1.0, 0.0}, 1.0);
    const SpectralDecomposition s = spectral(build_H(p, 0, grid));
    for (int n = 0; n < 4; ++n)
      CHECK(s.eigenvalues[n + 1] - s.eigenvalues[n] ==
            doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("reconstruction error and residuals") {
    const FieldGrid grid(61, 4.0);
    const ModelParams p(0.1, 1, QuarticPotential{1.0, 0.5}, 1.2);
    const OperatorMatrix h = build_H(p, 0, grid);
    const SpectralDecomposition s = spectral(h);
    CHECK(frobenius_norm(subtract(s.reconstruct(), h)) <=
          1e-10 * frobenius_norm(h));
    for (int n = 0; n < 61; n += 10) {
      const Eigen::VectorXd v = s.eigenvectors.col(n);
      const Eigen::VectorXd res = apply(h, v) - s.eigenvalues[n] * v;
      CHECK(std::sqrt(grid.spacing()) * res.norm() <=
            1e-10 * std::max(1.0, std::abs(s.eigenvalues[n])));
    }
  }
  SUBCASE("asymmetric input refused") {
    const FieldGrid grid(9, 2.0);
    CHECK_THROWS_AS(spectral(build_R(grid)), DomainError);
  }
}

TEST_CASE("heisenberg_transport") {
  const FieldGrid grid(25, 2.5);
  const ModelParams p(0.1, 4, QuarticPotential{1.0, 0.0}, 1.0);

  SUBCASE("identity transport leaves the operator unchanged") {
    const OperatorMatrix id = identity_op(grid);
    const OperatorMatrix q = build_Q(grid);
    const OperatorMatrix out = heisenberg_transport(q, id, id);
    CHECK(max_abs(out.entries - q.entries) <= 1e-12 * max_abs(q.entries));
  }
  SUBCASE("failed inverse check throws with the residual") {
    const OperatorMatrix id = identity_op(grid);
    const OperatorMatrix bad = scale(id, 2.0);
    CHECK_THROWS_AS(heisenberg_transport(build_Q(grid), id, bad),
                    IllConditionedError);
  }
}
