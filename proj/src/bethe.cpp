#include "slly/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "slly/errors.hpp"

namespace slly::bethe {

using piecewise::ExpTerm;
using piecewise::Region;

namespace {

constexpr cplx kI{0.0, 1.0};

void require_attractive(double c) {
  if (!(c < 0.0)) throw DomainError("bound states need an attractive coupling (c < 0)");
}

BoundState closed_form(int n, double p, double c, MomentumSet k) {
  require_attractive(c);
  RegionFunction psi = nmer_ground(n, c);
  RegionFunction out(n);
  for (std::size_t r = 0; r < psi.region_count(); ++r) {
    for (auto t : psi.terms(r)) {
      for (auto& kj : t.kappa) kj += kI * p;
      out.add_term(r, std::move(t));
    }
  }
  out.canonicalize();
  const double e = energy(k);
  return {std::move(out), std::move(k), e};
}

}  // namespace

cplx s_matrix(cplx ki, cplx kj, double c) {
  const cplx d = kI * (kj - ki);
  const cplx den = d + c;
  if (std::abs(den) <= kPoleTol) throw SingularityError("S-matrix pole: use a bound-state constructor");
  return (d - c) / den;
}

double phase_shift(double k, double c) {
  if (c == 0.0) throw ArgumentError("phase shift needs c != 0");
  return M_PI - 2.0 * std::atan(k / c);
}

cplx BetheCoefficients::at(const std::vector<int>& perm) const {
  return alpha.at(Region(perm).index());
}

BetheCoefficients bethe_coefficients(std::span<const cplx> k, double c) {
  const int n = static_cast<int>(k.size());
  // S for every label pair a < b, computed once so poles surface up front.
  std::vector<cplx> s(static_cast<std::size_t>(n * n), 1.0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) s[a * n + b] = s_matrix(k[a], k[b], c);

  BetheCoefficients out;
  out.n = n;
  for (const auto& p : piecewise::enumerate_regions(n)) {
    cplx alpha = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p.particle_at(i) > p.particle_at(j)) alpha *= s[p.particle_at(j) * n + p.particle_at(i)];
    out.alpha.push_back(alpha);
  }
  return out;
}

PathResult coefficient_along_path(std::span<const cplx> k, double c, std::span<const int> swaps) {
  const int n = static_cast<int>(k.size());
  PathResult r{std::vector<int>(n), 1.0};
  std::iota(r.perm.begin(), r.perm.end(), 0);
  for (int i : swaps) {
    if (i < 0 || i + 1 >= n) throw ArgumentError("swap position out of range");
    r.alpha *= s_matrix(k[r.perm[i]], k[r.perm[i + 1]], c);
    std::swap(r.perm[i], r.perm[i + 1]);
  }
  return r;
}

double yang_baxter_residual(cplx ka, cplx kb, cplx kc, double c) {
  const cplx s12 = s_matrix(ka, kb, c);
  const cplx s13 = s_matrix(ka, kc, c);
  const cplx s23 = s_matrix(kb, kc, c);
  return std::abs(s12 * s13 * s23 - s23 * s13 * s12);
}

RegionFunction bethe_state(std::span<const cplx> k, double c) {
  const int n = static_cast<int>(k.size());
  const BetheCoefficients coeffs = bethe_coefficients(k, c);
  const auto perms = piecewise::enumerate_regions(n);
  RegionFunction psi(n);
  for (std::size_t q = 0; q < psi.region_count(); ++q) {
    const Region region = Region::from_index(n, q);
    for (std::size_t pi = 0; pi < perms.size(); ++pi) {
      const cplx alpha = coeffs.alpha[pi];
      if (std::abs(alpha) <= piecewise::kDropTol) continue;
      ExpTerm t{alpha, std::vector<cplx>(n)};
      for (int pos = 0; pos < n; ++pos) t.kappa[region.particle_at(pos)] = kI * k[perms[pi].particle_at(pos)];
      psi.add_term(q, std::move(t));
    }
  }
  return psi.canonicalize();
}

RegionFunction collision_state(std::span<const double> k, double c) {
  if (c == 0.0) throw ArgumentError("collision states need c != 0");
  for (std::size_t j = 0; j + 1 < k.size(); ++j)
    if (!(k[j] > k[j + 1])) throw ArgumentError("momenta must be strictly decreasing");
  const MomentumSet kc(k.begin(), k.end());
  return bethe_state(kc, c);
}

BoundState dimer_state(double p, double c) {
  return closed_form(2, p, c, {cplx(p, c / 2), cplx(p, -c / 2)});
}

BoundState trimer_state(double p, double c) {
  return closed_form(3, p, c, {cplx(p, c), cplx(p, 0.0), cplx(p, -c)});
}

BoundState monomer_dimer_state(double p, double q, double c) {
  require_attractive(c);
  if (std::abs(p - q) <= 1e-12) throw DomainError("degenerate string: monomer-dimer needs P != Q");
  MomentumSet k{cplx(p, c / 2), cplx(p, -c / 2), cplx(q, 0.0)};
  RegionFunction psi = bethe_state(k, c);
  const double e = energy(k);
  return {std::move(psi), std::move(k), e};
}

RegionFunction nmer_ground(int n, double c) {
  RegionFunction psi(n);
  const double half = std::abs(c) / 2.0;
  for (std::size_t r = 0; r < psi.region_count(); ++r) {
    const Region region = Region::from_index(n, r);
    ExpTerm t{1.0, std::vector<cplx>(n)};
    for (int j = 0; j < n; ++j) t.kappa[j] = -half * (2.0 * (region.rank(j) + 1) - n - 1);
    psi.add_term(r, std::move(t));
  }
  return psi.canonicalize();
}

double energy(std::span<const cplx> k) {
  const cplx e = conserved_charge(2, k);
  if (std::abs(e.imag()) > 1e-12) throw DomainError("momentum set is not conjugation-closed: complex energy");
  return e.real();
}

cplx conserved_charge(int power, std::span<const cplx> k) {
  cplx sum = 0.0;
  for (const auto& kj : k) sum += std::pow(kj, power);
  return sum;
}

double bulk_energy_residual(const RegionFunction& f, double e) {
  double worst = 0.0;
  for (std::size_t r = 0; r < f.region_count(); ++r) {
    for (const auto& t : f.terms(r)) {
      cplx lap = 0.0;
      for (const auto& kj : t.kappa) lap += kj * kj;
      worst = std::max(worst, std::abs(-lap - e));
    }
  }
  return worst;
}

double bulk_charge_residual(const RegionFunction& f, int power, cplx value) {
  double worst = 0.0;
  for (std::size_t r = 0; r < f.region_count(); ++r) {
    for (const auto& t : f.terms(r)) {
      cplx sum = 0.0;
      for (const auto& kj : t.kappa) sum += std::pow(-kI * kj, power);
      worst = std::max(worst, std::abs(sum - value));
    }
  }
  return worst;
}

InterfaceReport check_interfaces(const RegionFunction& f, double c) {
  InterfaceReport rep;
  Eigen::MatrixXcd coupling(1, 1);
  coupling(0, 0) = 2.0 * c;
  for (const auto& iface : piecewise::enumerate_interfaces(f.dimension())) {
    const double cont = piecewise::continuity_residual(f, iface);
    rep.continuity = std::max(rep.continuity, cont);
    if (cont > 1e-10) {
      rep.jump = std::numeric_limits<double>::infinity();
    } else {
      rep.jump = std::max(rep.jump, piecewise::jump_residual(std::span(&f, 1), iface, coupling));
    }
    ++rep.interfaces;
  }
  return rep;
}

}  // namespace slly::bethe
