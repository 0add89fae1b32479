#pragma once

// Finite-difference sector Hamiltonians on the Dirichlet box [0, L]^N and a
// shift-invert block Krylov eigensolver for their lowest eigenvalues.

#include <cstdint>
#include <vector>

#include <Eigen/Sparse>
#include <json.hpp>

#include "slly/susy.hpp"

namespace slly::lattice {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr std::size_t kDefaultBudget = 4'000'000;

/// M interior points per axis, spacing h = L / (M + 1).
struct Grid {
  Grid(int n, double length, int points, std::size_t budget = kDefaultBudget);

  int n;
  double length;
  int points;
  std::size_t budget;

  double h() const { return length / (points + 1); }
  std::size_t sites() const;
  double coordinate(int i) const { return (i + 1) * h(); }
};

/// Unknowns are component-major: index = component * M^N + site, and the
/// site index runs fastest in x_1.
/// c = 0 gives the free Laplacian plus zero shift.
SparseMatrix build_sector_matrix(int grade, const Grid& g, double c);
SparseMatrix build_sector_matrix(int grade, const Grid& g, const susy::Superpotential& sp);

struct SolverOptions {
  std::uint64_t seed = 1;
  double shift = -1.0;
  double tolerance = 1e-8;
  int block = 3;
  int max_basis = 240;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  std::vector<Eigen::VectorXd> vectors;
  int basis_size = 0;
  double shift = 0.0;
};

/// k smallest eigenvalues of a symmetric matrix. Throws ConvergenceError when
/// the Krylov basis cap is reached first.
SpectrumReport lowest_eigenvalues(const SparseMatrix& a, int k, const SolverOptions& opt = {});

/// Lower edge of the spectrum guaranteed by Gershgorin discs.
double gershgorin_lower(const SparseMatrix& a);

struct SectorSpectrum {
  int grade;
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
};

struct SusyCheckReport {
  double h;
  double length;
  double tol_h;
  std::vector<SectorSpectrum> sectors;
  bool nonnegative;
  bool zero_modes_near_zero;
  bool scattering_floor;
  bool pass;
};

/// Lowest `k` eigenvalues of grades 0..N for N = 2, with the sign,
/// near-zero and floor checks. tol_h = c^2 h + 1/L.
SusyCheckReport susy_spectrum_check(const Grid& g, double c, int k = 6, const SolverOptions& opt = {});

struct ConvergenceRow {
  double h;
  double length;
  int points;
  int grade;
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// log2 of successive ground-energy difference ratios; needs three rows
  /// with h halving.
  std::vector<double> observed_order;
  bool decreasing;
};

ConvergenceReport convergence_study(int grade, double c, double length,
                                    const std::vector<int>& points, int k = 1,
                                    const SolverOptions& opt = {});

struct QDiagnostic {
  double min_eigenvalue;
  double q_squared_norm;
  /// Largest |i_1 - i_2| over grid sites touched by a nonzero of Q^2.
  int max_diagonal_distance;
  std::size_t q_squared_nonzeros;
  double symmetry_defect;
};

/// Forward-difference Q on the full 4-component Fock space for N = 2, with
/// sign(0) = 0 on the diagonal.
QDiagnostic lattice_q_diagnostic(const Grid& g, double c, const SolverOptions& opt = {});

nlohmann::json to_json(const SpectrumReport& r);

}  // namespace slly::lattice
