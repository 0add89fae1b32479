#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "slly/errors.hpp"
#include "slly/lattice.hpp"

using namespace slly::lattice;

namespace {

// Dirichlet -d^2/dx^2 on [0, L] with m interior points.
SparseMatrix laplacian_1d(int m, double length) {
  const double h = length / (m + 1);
  SparseMatrix a(m, m);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < m; ++i) {
    t.emplace_back(i, i, 2.0 / (h * h));
    if (i + 1 < m) {
      t.emplace_back(i, i + 1, -1.0 / (h * h));
      t.emplace_back(i + 1, i, -1.0 / (h * h));
    }
  }
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

double discrete_mode(int j, int m, double length) {
  const double h = length / (m + 1);
  const double s = std::sin(j * M_PI / (2.0 * (m + 1)));
  return 4.0 * s * s / (h * h);
}

}  // namespace

TEST_CASE("one-dimensional Dirichlet ground state") {
  const auto eig = lowest_eigenvalues(laplacian_1d(199, 1.0), 3);
  CHECK(std::abs(eig.eigenvalues[0] / (M_PI * M_PI) - 1.0) < 1e-3);
  for (int j = 1; j <= 3; ++j) CHECK(std::abs(eig.eigenvalues[j - 1] - discrete_mode(j, 199, 1.0)) < 1e-7);
  for (double r : eig.residuals) CHECK(r < 1e-8 * eig.eigenvalues.back());
  CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
}

TEST_CASE("sector matrices are symmetric") {
  for (int grade = 0; grade <= 2; ++grade) {
    const SparseMatrix a = build_sector_matrix(grade, Grid(2, 6.0, 20), 1.5);
    CHECK(a.rows() == (grade == 1 ? 2 : 1) * 400);
    CHECK((a - SparseMatrix(a.transpose())).norm() == 0.0);
  }
  for (int grade = 0; grade <= 3; ++grade) {
    const SparseMatrix a = build_sector_matrix(grade, Grid(3, 6.0, 16), 0.8);
    CHECK((a - SparseMatrix(a.transpose())).norm() == 0.0);
  }
}

TEST_CASE("free spectrum at zero coupling") {
  const int m = 30;
  const double length = 5.0;
  const auto eig = lowest_eigenvalues(build_sector_matrix(0, Grid(2, length, m), 0.0), 4);
  std::vector<double> expect;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) expect.push_back(discrete_mode(a, m, length) + discrete_mode(b, m, length));
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 4; ++i) CHECK(std::abs(eig.eigenvalues[i] - expect[i]) < 1e-7);
  // The fermionic sector at c = 0 is two copies of the same operator.
  const auto one = lowest_eigenvalues(build_sector_matrix(1, Grid(2, length, m), 0.0), 2);
  CHECK(std::abs(one.eigenvalues[0] - expect[0]) < 1e-7);
  CHECK(std::abs(one.eigenvalues[1] - expect[0]) < 1e-7);
}

TEST_CASE("eigensolver is deterministic and bounded below by Gershgorin") {
  const SparseMatrix a = build_sector_matrix(1, Grid(2, 8.0, 24), 2.0);
  const auto x = lowest_eigenvalues(a, 4);
  const auto y = lowest_eigenvalues(a, 4);
  CHECK(x.eigenvalues == y.eigenvalues);
  CHECK(x.basis_size == y.basis_size);
  CHECK(gershgorin_lower(a) <= x.eigenvalues.front());
  SolverOptions other;
  other.seed = 99;
  const auto z = lowest_eigenvalues(a, 4, other);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(z.eigenvalues[i] - x.eigenvalues[i]) < 1e-7);
  const auto j = to_json(x);
  CHECK(j["eigenvalues"].size() == 4);
}

TEST_CASE("input guards") {
  const SparseMatrix small = laplacian_1d(16, 1.0);
  CHECK_THROWS_AS(lowest_eigenvalues(small, 17), slly::ArgumentError);
  CHECK_THROWS_AS(lowest_eigenvalues(small, 0), slly::ArgumentError);
  CHECK_THROWS_AS(Grid(2, 1.0, 15), slly::ArgumentError);
  CHECK_THROWS_AS(Grid(2, 0.0, 20), slly::ArgumentError);
  CHECK_THROWS_AS(build_sector_matrix(0, Grid(4, 1.0, 16), 1.0), slly::ArgumentError);
  CHECK_THROWS_AS(build_sector_matrix(0, Grid(3, 1.0, 49), 1.0), slly::SizeError);
  CHECK_THROWS_AS(build_sector_matrix(3, Grid(2, 1.0, 16), 1.0), slly::ArgumentError);
  CHECK_THROWS_AS(build_sector_matrix(0, Grid(2, 1.0, 16), -1.0), slly::DomainError);
  CHECK_THROWS_AS(build_sector_matrix(1, Grid(2, 1.0, 100, 10000), 1.0), slly::BudgetError);
  SolverOptions starved;
  starved.max_basis = 6;
  CHECK_THROWS_AS(lowest_eigenvalues(build_sector_matrix(0, Grid(2, 4.0, 40), 1.0), 4, starved),
                  slly::ConvergenceError);
}

TEST_CASE("supersymmetric spectrum on a small box") {
  const auto rep = susy_spectrum_check(Grid(2, 10.0, 59), 2.0, 3);
  CHECK(rep.nonnegative);
  CHECK(rep.zero_modes_near_zero);
  CHECK(rep.scattering_floor);
  CHECK(rep.pass);
  REQUIRE(rep.sectors.size() == 3);
  CHECK(rep.sectors[2].eigenvalues.front() < rep.sectors[0].eigenvalues.front());
}

TEST_CASE("lattice supercharge") {
  const auto free = lattice_q_diagnostic(Grid(2, 4.0, 20), 0.0);
  const double h = 4.0 / 21;
  CHECK(free.q_squared_norm < 1e-10 / (h * h));
  CHECK(free.min_eigenvalue > -1e-8);
  CHECK(free.symmetry_defect < 1e-10);

  const auto d = lattice_q_diagnostic(Grid(2, 4.0, 20), 1.5);
  CHECK(d.min_eigenvalue > -1e-8);
  CHECK(d.symmetry_defect < 1e-10);
  CHECK(d.q_squared_nonzeros > 0);
  CHECK(d.max_diagonal_distance <= 1);
}

TEST_CASE("convergence study does not depend on the thread count") {
  ::setenv("SLLY_THREADS", "1", 1);
  const auto serial = convergence_study(2, 2.0, 6.0, {19, 39, 79}, 1);
  ::setenv("SLLY_THREADS", "3", 1);
  const auto threaded = convergence_study(2, 2.0, 6.0, {19, 39, 79}, 1);
  ::unsetenv("SLLY_THREADS");
  REQUIRE(serial.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(serial.rows[i].points == threaded.rows[i].points);
    CHECK(serial.rows[i].eigenvalues == threaded.rows[i].eigenvalues);
  }
  CHECK(serial.observed_order == threaded.observed_order);
  CHECK(serial.decreasing);
  CHECK(serial.observed_order.size() == 1);
}
