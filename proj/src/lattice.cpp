#include "slly/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/SparseCholesky>

#include "slly/errors.hpp"
#include "slly/fock.hpp"
#include "slly/report.hpp"

namespace slly::lattice {

namespace {

using Triplet = Eigen::Triplet<double>;

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Per-axis grid index of a site.
std::vector<int> site_indices(std::size_t s, int n, int m) {
  std::vector<int> idx(n);
  for (int a = 0; a < n; ++a) {
    idx[a] = static_cast<int>(s % static_cast<std::size_t>(m));
    s /= static_cast<std::size_t>(m);
  }
  return idx;
}

double shift_for(int n, double c) { return c * c * n * (static_cast<double>(n) * n - 1.0) / 12.0; }

void check_grid_size(std::size_t unknowns, const Grid& g) {
  if (unknowns > g.budget)
    throw BudgetError("lattice problem has " + std::to_string(unknowns) + " unknowns, budget is " +
                      std::to_string(g.budget));
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

Grid::Grid(int n_, double length_, int points_, std::size_t budget_)
    : n(n_), length(length_), points(points_), budget(budget_) {
  if (n < 1) throw ArgumentError("grid dimension must be positive");
  if (points < 16) throw ArgumentError("grid needs at least 16 points per axis");
  if (!(length > 0.0)) throw ArgumentError("box length must be positive");
  check_grid_size(sites(), *this);
}

std::size_t Grid::sites() const { return ipow(points, n); }

SparseMatrix build_sector_matrix(int grade, const Grid& g, double c) {
  const int n = g.n;
  if (n != 2 && n != 3) throw ArgumentError("lattice sectors are implemented for N = 2 and N = 3");
  if (n == 3 && g.points > 48) throw SizeError("N = 3 lattices are limited to 48 points per axis");
  if (grade < 0 || grade > n) throw ArgumentError("grade out of range");
  if (c < 0.0) throw DomainError("coupling must be non-negative");

  const fock::FockBasis basis(n);
  const auto d = static_cast<int>(basis.grade_size(grade));
  const std::size_t sites = g.sites();
  const std::size_t unknowns = sites * static_cast<std::size_t>(d);
  check_grid_size(unknowns, g);

  const double h = g.h();
  const double inv_h2 = 1.0 / (h * h);
  const double diag = 2.0 * n * inv_h2 + shift_for(n, c);

  struct PairBlock {
    int a, b;
    Eigen::MatrixXd pattern;
  };
  std::vector<PairBlock> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      pairs.push_back({a, b, fock::grade_project(fock::delta_pattern(a, b, n), grade).real()});

  std::vector<Triplet> trip;
  trip.reserve(unknowns * (2 * n + 2));
  std::vector<std::size_t> stride(n);
  for (int a = 0; a < n; ++a) stride[a] = ipow(g.points, a);

  for (std::size_t s = 0; s < sites; ++s) {
    const auto idx = site_indices(s, n, g.points);
    for (int r = 0; r < d; ++r) {
      const auto row = static_cast<Eigen::Index>(r * sites + s);
      trip.emplace_back(row, row, diag);
      for (int a = 0; a < n; ++a) {
        if (idx[a] > 0) trip.emplace_back(row, row - static_cast<Eigen::Index>(stride[a]), -inv_h2);
        if (idx[a] + 1 < g.points) trip.emplace_back(row, row + static_cast<Eigen::Index>(stride[a]), -inv_h2);
      }
    }
    if (c == 0.0) continue;
    for (const auto& p : pairs) {
      if (idx[p.a] != idx[p.b]) continue;
      for (int r = 0; r < d; ++r)
        for (int q = 0; q < d; ++q) {
          const double v = p.pattern(r, q);
          if (v == 0.0) continue;
          trip.emplace_back(static_cast<Eigen::Index>(r * sites + s), static_cast<Eigen::Index>(q * sites + s),
                            2.0 * c * v / h);
        }
    }
  }
  SparseMatrix a(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

SparseMatrix build_sector_matrix(int grade, const Grid& g, const susy::Superpotential& sp) {
  if (sp.n != g.n) throw ArgumentError("grid and superpotential disagree on N");
  return build_sector_matrix(grade, g, sp.c);
}

double gershgorin_lower(const SparseMatrix& a) {
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(a.rows());
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index col = 0; col < a.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      if (it.row() == it.col())
        centre[it.row()] += it.value();
      else
        radius[it.row()] += std::abs(it.value());
    }
  return (centre - radius).minCoeff();
}

SpectrumReport lowest_eigenvalues(const SparseMatrix& a, int k, const SolverOptions& opt) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ArgumentError("matrix must be square");
  if (k < 1 || k > n) throw ArgumentError("requested eigenvalue count outside [1, dim]");
  if (opt.block < 1) throw ArgumentError("block size must be positive");

  // Factor A - sigma I, pushing sigma down until the factorization succeeds.
  double sigma = opt.shift;
  SparseMatrix id(n, n);
  id.setIdentity();
  Eigen::SimplicialLLT<SparseMatrix> llt;
  bool factored = false;
  for (int attempt = 0; attempt < 64; ++attempt) {
    llt.compute(a - sigma * id);
    if (llt.info() == Eigen::Success) {
      factored = true;
      break;
    }
    sigma = 2.0 * sigma - 1.0;
  }
  if (!factored) throw ConvergenceError("could not factor the shifted matrix");

  const Eigen::Index cap = std::min<Eigen::Index>(n, std::max<Eigen::Index>(opt.max_basis, k + opt.block));
  const Eigen::Index block = std::min<Eigen::Index>(opt.block, cap);
  Eigen::MatrixXd v(n, cap);
  Eigen::MatrixXd hmat = Eigen::MatrixXd::Zero(cap, cap);
  std::mt19937_64 rng(opt.seed);

  Eigen::Index filled = 0;
  // Orthonormalize w against columns [0, filled) and append it; returns false
  // if it is numerically dependent.
  const auto append = [&](Eigen::VectorXd w, Eigen::VectorXd* coeffs) {
    const double before = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      if (filled == 0) break;
      const Eigen::VectorXd h = v.leftCols(filled).transpose() * w;
      w.noalias() -= v.leftCols(filled) * h;
      if (coeffs) coeffs->head(filled) += h;
    }
    const double after = w.norm();
    if (!(after > 1e-10 * std::max(before, 1e-300))) return false;
    if (filled == cap) return false;
    v.col(filled) = w / after;
    ++filled;
    return true;
  };

  for (Eigen::Index b = 0; b < block; ++b)
    while (!append(random_vector(n, rng), nullptr)) {
    }

  SpectrumReport rep;
  Eigen::Index processed = 0;
  int next_check = static_cast<int>(std::max<Eigen::Index>(k + block, 2 * block));
  while (true) {
    if (processed < filled) {
      const Eigen::VectorXd tv = llt.solve(v.col(processed));
      Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(cap);
      const bool grew = append(tv, &coeffs);
      // Upper triangle of V^T T V, column `processed`.
      for (Eigen::Index i = 0; i <= processed; ++i) hmat(i, processed) = coeffs[i];
      if (!grew && filled < cap) {
        for (int tries = 0; tries < 8 && !append(random_vector(n, rng), nullptr); ++tries) {
        }
      }
      ++processed;
    }

    const bool exhausted = processed == filled;
    if (processed < next_check && !exhausted) continue;
    next_check = static_cast<int>(processed) + 10;

    const Eigen::Index p = processed;
    Eigen::MatrixXd hp = hmat.topLeftCorner(p, p).selfadjointView<Eigen::Upper>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hp);
    // Largest theta of (A - sigma)^{-1} are the lowest eigenvalues of A.
    const Eigen::Index want = std::min<Eigen::Index>(k, p);
    std::vector<double> lambda;
    std::vector<double> res;
    std::vector<Eigen::VectorXd> vecs;
    bool ok = want == k;
    for (Eigen::Index i = 0; i < want; ++i) {
      const Eigen::Index col = p - 1 - i;
      const double theta = es.eigenvalues()[col];
      Eigen::VectorXd x = v.leftCols(p) * es.eigenvectors().col(col);
      x.normalize();
      const double lam = sigma + 1.0 / theta;
      const double r = (a * x - lam * x).norm();
      ok = ok && theta > 0.0 && r < opt.tolerance;
      lambda.push_back(lam);
      res.push_back(r);
      vecs.push_back(std::move(x));
    }
    if (ok) {
      std::vector<std::size_t> order(lambda.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto x, auto y) { return lambda[x] < lambda[y]; });
      for (auto i : order) {
        rep.eigenvalues.push_back(lambda[i]);
        rep.residuals.push_back(res[i]);
        rep.vectors.push_back(std::move(vecs[i]));
      }
      rep.basis_size = static_cast<int>(p);
      rep.shift = sigma;
      return rep;
    }
    if (exhausted) {
      double worst = 0.0;
      for (double r : res) worst = std::max(worst, r);
      throw ConvergenceError("eigensolver stopped at basis size " + std::to_string(p) +
                             " with residual " + std::to_string(worst));
    }
  }
}

SusyCheckReport susy_spectrum_check(const Grid& g, double c, int k, const SolverOptions& opt) {
  if (g.n != 2) throw ArgumentError("spectrum check is implemented for N = 2");
  SusyCheckReport rep;
  rep.h = g.h();
  rep.length = g.length;
  rep.tol_h = c * c * g.h() + 1.0 / g.length;
  for (int grade = 0; grade <= 2; ++grade) {
    const auto eig = lowest_eigenvalues(build_sector_matrix(grade, g, c), k, opt);
    rep.sectors.push_back({grade, eig.eigenvalues, eig.residuals});
  }
  const double pi2 = M_PI * M_PI / (g.length * g.length);
  const double shift = shift_for(2, c);
  rep.nonnegative = true;
  for (const auto& s : rep.sectors)
    for (double e : s.eigenvalues) rep.nonnegative = rep.nonnegative && e >= -rep.tol_h;
  // A dimer in the box carries at least the centre-of-mass energy 2 (pi/L)^2.
  const double zero_band = 2.0 * pi2 + rep.tol_h;
  rep.zero_modes_near_zero = c > 0.0 && rep.sectors[1].eigenvalues.front() <= zero_band &&
                             rep.sectors[2].eigenvalues.front() <= zero_band &&
                             rep.sectors[2].eigenvalues.front() < rep.sectors[0].eigenvalues.front();
  // Two repulsive bosons sit between the free floor and the hard-core value.
  const double g0 = rep.sectors[0].eigenvalues.front();
  rep.scattering_floor = g0 >= shift + 2.0 * pi2 - rep.tol_h && g0 <= shift + 5.0 * pi2 + rep.tol_h;
  rep.pass = rep.nonnegative && rep.scattering_floor && (c == 0.0 || rep.zero_modes_near_zero);
  return rep;
}

ConvergenceReport convergence_study(int grade, double c, double length, const std::vector<int>& points, int k,
                                    const SolverOptions& opt) {
  ConvergenceReport rep;
  rep.rows.resize(points.size());
  report::parallel_for(points.size(), [&](std::size_t i) {
    const Grid g(2, length, points[i]);
    const auto eig = lowest_eigenvalues(build_sector_matrix(grade, g, c), k, opt);
    rep.rows[i] = {g.h(), length, points[i], grade, eig.eigenvalues, eig.residuals};
  });
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    rep.decreasing = rep.decreasing && rep.rows[i].eigenvalues.front() < rep.rows[i - 1].eigenvalues.front();
  for (std::size_t i = 2; i < rep.rows.size(); ++i) {
    const double d1 = rep.rows[i - 2].eigenvalues.front() - rep.rows[i - 1].eigenvalues.front();
    const double d2 = rep.rows[i - 1].eigenvalues.front() - rep.rows[i].eigenvalues.front();
    const double ratio = rep.rows[i - 2].h / rep.rows[i - 1].h;
    rep.observed_order.push_back(std::log(std::abs(d1 / d2)) / std::log(ratio));
  }
  return rep;
}

QDiagnostic lattice_q_diagnostic(const Grid& g, double c, const SolverOptions& opt) {
  if (g.n != 2) throw ArgumentError("lattice Q is implemented for N = 2");
  const int m = g.points;
  const std::size_t sites = g.sites();
  check_grid_size(4 * sites, g);
  const double h = g.h();
  const double rt2 = std::sqrt(2.0);
  const fock::FockBasis basis(2);

  const auto sgn = [](int d) { return (d > 0) - (d < 0); };
  // R with Q = i R; R = sqrt2 sum_j b_j (D_j + w_j), D_j forward differences.
  std::vector<Triplet> trip;
  for (int j = 0; j < 2; ++j) {
    const fock::FockOperator b = fock::annihilation(j, 2);
    const std::size_t stride = j == 0 ? 1 : static_cast<std::size_t>(m);
    for (std::size_t row = 0; row < basis.dim(); ++row)
      for (const auto& [col, val] : b.row(row)) {
        const double s = rt2 * static_cast<double>(val.re);
        for (std::size_t site = 0; site < sites; ++site) {
          const auto idx = site_indices(site, 2, m);
          const auto r = static_cast<Eigen::Index>(row * sites + site);
          const auto q = static_cast<Eigen::Index>(col * sites + site);
          const double w = 0.5 * c * sgn(idx[j] - idx[1 - j]);
          trip.emplace_back(r, q, s * (w - 1.0 / h));
          if (idx[j] + 1 < m) trip.emplace_back(r, q + static_cast<Eigen::Index>(stride), s / h);
        }
      }
  }
  const auto dim = static_cast<Eigen::Index>(4 * sites);
  SparseMatrix rmat(dim, dim);
  rmat.setFromTriplets(trip.begin(), trip.end());
  const SparseMatrix rt = rmat.transpose();
  SparseMatrix hmat = 0.5 * (SparseMatrix(rmat * rt) + SparseMatrix(rt * rmat));
  const SparseMatrix q2 = rmat * rmat;

  QDiagnostic d{};
  d.symmetry_defect = (hmat - SparseMatrix(hmat.transpose())).norm();
  for (Eigen::Index col = 0; col < q2.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(q2, col); it; ++it) {
      if (it.value() == 0.0) continue;
      ++d.q_squared_nonzeros;
      d.q_squared_norm = std::max(d.q_squared_norm, std::abs(it.value()));
      for (auto u : {it.row(), it.col()}) {
        const auto idx = site_indices(static_cast<std::size_t>(u) % sites, 2, m);
        d.max_diagonal_distance = std::max(d.max_diagonal_distance, std::abs(idx[0] - idx[1]));
      }
    }
  d.min_eigenvalue = lowest_eigenvalues(hmat, 1, opt).eigenvalues.front();
  return d;
}

nlohmann::json to_json(const SpectrumReport& r) {
  return {{"eigenvalues", r.eigenvalues}, {"residuals", r.residuals}, {"basis_size", r.basis_size},
          {"shift", r.shift}};
}

}  // namespace slly::lattice
