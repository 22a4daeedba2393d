#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "oscent/closedform.hpp"
#include "oscent/error.hpp"
#include "oscent/oracle.hpp"

using namespace oscent;

namespace {

TruncatedBasisConfig with_dim(int d) {
  TruncatedBasisConfig c;
  c.basis_dim = d;
  return c;
}

Eigen::VectorXd dense_spectrum(const SparseMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(TruncatedBasisConfig{}.validate());
  CHECK_THROWS_AS(with_dim(1).validate(), InvalidArgument);
  auto c = with_dim(10);
  c.tolerance = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = with_dim(10);
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = with_dim(10);
  c.basis_scale = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK_THROWS_AS(build_hamiltonian_matrix(EnsembleSpec(4, 1.0), with_dim(12)), InvalidArgument);
  CHECK_NOTHROW(build_hamiltonian_matrix(EnsembleSpec(4, 1.0), with_dim(11)));
  CHECK_THROWS_AS(alternating_separability_solver(EnsembleSpec(5, 1.0), Partition::trivial(5), with_dim(8)),
                  InvalidArgument);
  CHECK_THROWS_AS(alternating_separability_solver(EnsembleSpec(3, 1.0), Partition::trivial(2), with_dim(8)),
                  InvalidArgument);
}

TEST_CASE("quadratic form") {
  const auto form = QuadraticForm::for_ensemble(EnsembleSpec(4, 0.5));
  CHECK(form.coefficients(0, 0) == 2.5);
  CHECK(form.coefficients(1, 2) == -0.5);
  const auto k = form.stiffnesses();
  CHECK(k[0] == doctest::Approx(1.0));
  for (int i = 1; i < 4; ++i) CHECK(k[i] == doctest::Approx(3.0));
}

TEST_CASE("small matrices in the unit-scale basis") {
  auto unit = [](int d) {
    auto c = with_dim(d);
    c.basis_scale = 1.0;
    return c;
  };
  const auto one = build_hamiltonian_matrix(EnsembleSpec(1, 3.0), unit(2));
  CHECK(Eigen::MatrixXd(one).isApprox(Eigen::Vector2d(0.5, 1.5).asDiagonal().toDenseMatrix()));

  const auto free_pair = dense_spectrum(build_hamiltonian_matrix(EnsembleSpec(2, 0.0), unit(5)));
  const std::vector<double> expected{1, 2, 2, 3, 3, 3};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(free_pair[static_cast<Eigen::Index>(i)] == doctest::Approx(expected[i]));

  const auto h = build_hamiltonian_matrix(EnsembleSpec(3, 0.7), with_dim(6));
  CHECK((Eigen::MatrixXd(h) - Eigen::MatrixXd(h).transpose()).norm() == 0.0);
}

TEST_CASE("Lanczos against dense diagonalization") {
  CHECK(smallest_eigenvalue(Eigen::MatrixXd::Identity(7, 7)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(smallest_eigenvalue(Eigen::MatrixXd(Eigen::Vector3d(3, 1, 2).asDiagonal())) ==
        doctest::Approx(1.0).epsilon(1e-14));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (int n : {1, 5, 40, 200}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    }
    a = 0.5 * (a + a.transpose()).eval();
    const double exact = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues()[0];
    const auto pair = smallest_eigenpair(a, 1e-10);
    CHECK(pair.value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(pair.residual < 1e-10);
    CHECK((a * pair.vector - pair.value * pair.vector).norm() < 1e-9);
  }
  const auto h = build_hamiltonian_matrix(EnsembleSpec(3, 1.0), with_dim(7));
  CHECK(smallest_eigenvalue(h) == doctest::Approx(dense_spectrum(h)[0]).epsilon(1e-12));
}

TEST_CASE("ground energies from the truncated basis") {
  CHECK(std::abs(smallest_eigenvalue(build_hamiltonian_matrix(EnsembleSpec(2, 1.5), with_dim(40))) - 1.5) < 1e-8);
  CHECK(std::abs(smallest_eigenvalue(build_hamiltonian_matrix(EnsembleSpec(3, 1.0), with_dim(12))) - 2.5) < 1e-6);
  auto unit = with_dim(12);
  unit.basis_scale = 1.0;
  CHECK(std::abs(smallest_eigenvalue(build_hamiltonian_matrix(EnsembleSpec(3, 1.0), unit)) - 2.5) < 1e-6);
}

TEST_CASE("convergence in the basis size") {
  for (double r : {0.5, 1.5, 10.0}) {
    const EnsembleSpec spec(2, r);
    double previous = INFINITY;
    for (int d : {10, 20, 40}) {
      const double error = smallest_eigenvalue(build_hamiltonian_matrix(spec, with_dim(d)), 1e-11) - ground_energy(spec);
      CHECK(error > -1e-10);
      CHECK(std::abs(error) <= previous + 1e-14);
      previous = std::abs(error);
    }
    CHECK(previous < 1e-6);
    // Same statement in the unit-scale basis, where truncation error is larger.
    previous = INFINITY;
    for (int d : {10, 20, 40}) {
      auto c = with_dim(d);
      c.basis_scale = 1.0;
      const double error = smallest_eigenvalue(build_hamiltonian_matrix(spec, c), 1e-11) - ground_energy(spec);
      CHECK(error > -1e-10);
      CHECK(error < previous);
      previous = error;
    }
  }
}

TEST_CASE("alternating separability solver") {
  const auto full2 = Partition::full(2);
  CHECK(alternating_separability_solver(EnsembleSpec(2, 0.0), full2, with_dim(10)).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(alternating_separability_solver(EnsembleSpec(2, 1.5), full2, with_dim(30)).value - std::sqrt(2.5)) < 1e-6);
  CHECK(std::abs(alternating_separability_solver(EnsembleSpec(3, 1.0), Partition::full(3), with_dim(20)).value -
                 1.5 * std::sqrt(3.0)) < 1e-5);

  for (std::int64_t n : {2, 3, 4}) {
    const int d = n == 4 ? 10 : 14;
    for (double r : {0.5, 1.0, 10.0}) {
      const EnsembleSpec spec(n, r);
      const auto config = with_dim(d);
      const double ground = smallest_eigenvalue(build_hamiltonian_matrix(spec, config), 1e-10);
      std::vector<Partition> partitions{Partition::full(n), Partition::trivial(n)};
      if (n == 4) partitions.push_back(Partition::equal_blocks(4, 2));
      if (n == 3) partitions.push_back(Partition::make(3, {{0, 2}, {1}}));
      for (const auto& p : partitions) {
        const auto estimate = alternating_separability_solver(spec, p, config);
        CHECK(estimate.value >= ground - 1e-9);
        CHECK(estimate.value == doctest::Approx(partition_min_energy(spec, p).value).epsilon(1e-4));
        if (p.is_trivial()) CHECK(estimate.value == doctest::Approx(ground).epsilon(1e-9));
        REQUIRE(estimate.fixed_point_residuals.size() == static_cast<std::size_t>(p.block_count()));
        for (double res : estimate.fixed_point_residuals) CHECK(res < 10.0 * config.tolerance);
        for (double mean : estimate.parallel_means) CHECK(std::abs(mean) < 1e-6);
        CHECK(estimate.restarts.size() == static_cast<std::size_t>(config.restarts));
        for (const auto& restart : estimate.restarts) {
          if (restart.converged) CHECK(restart.value >= estimate.value);
        }
        for (std::size_t j = 0; j < estimate.block_states.size(); ++j) {
          CHECK(estimate.block_states[j].norm() == doctest::Approx(1.0));
        }
      }
    }
  }
}

TEST_CASE("brute-force distribution search") {
  std::vector<double> affine(51);
  for (std::size_t n = 0; n < affine.size(); ++n) affine[n] = 2.0 + 0.5 * static_cast<double>(n);
  CHECK(brute_force_distribution_min(affine, 1.5).value == doctest::Approx(2.75).epsilon(1e-14));

  std::vector<double> f(51);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = 0.5 * static_cast<double>(n) * std::sqrt(1.0 + static_cast<double>(n) - 1.0);
  const auto best = brute_force_distribution_min(f, 2.5);
  CHECK(best.value == doctest::Approx(0.5 * (0.5 * 2 * std::sqrt(2.0) + 0.5 * 3 * std::sqrt(3.0))).epsilon(1e-14));
  REQUIRE(best.distribution.support.size() == 2);
  CHECK(best.distribution.support[0].first == 2);
  CHECK(best.distribution.support[1].first == 3);

  std::vector<double> strict(30);
  for (std::size_t n = 0; n < strict.size(); ++n) strict[n] = std::pow(static_cast<double>(n), 1.7);
  for (double m : {0.3, 4.6, 17.2, 28.9}) {
    const auto s = brute_force_distribution_min(strict, m);
    REQUIRE(s.distribution.support.size() == 2);
    CHECK(s.distribution.support[0].first == static_cast<std::int64_t>(std::floor(m)));
    CHECK(s.distribution.support[1].first == static_cast<std::int64_t>(std::floor(m)) + 1);
  }

  // A concave bump makes three points no better than the outer two.
  const std::vector<double> nonconvex{0.0, 5.0, 5.0, 0.0};
  CHECK(brute_force_distribution_min(nonconvex, 1.5).value == doctest::Approx(0.0));
  CHECK_THROWS_AS(brute_force_distribution_min(f, 60.0), InvalidArgument);
  CHECK_THROWS_AS(brute_force_distribution_min(f, -1.0), InvalidArgument);
}
