#include "slly/susy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "slly/bethe.hpp"
#include "slly/errors.hpp"

namespace slly::susy {

using fock::jw_sign;
using piecewise::ExpSum;

namespace {

const cplx kISqrt2{0.0, std::sqrt(2.0)};

// factor * (d_j + sign * w_j) f, per region.
RegionFunction dress(const RegionFunction& f, int j, double sign, cplx factor, const Superpotential& sp) {
  RegionFunction out(f.dimension());
  for (std::size_t r = 0; r < f.region_count(); ++r) {
    const auto& terms = f.terms(r);
    if (terms.empty()) continue;
    const double w = grad_w(Region::from_index(f.dimension(), r), j, sp);
    ExpSum next = terms;
    for (auto& t : next) t.coef *= factor * (t.kappa[j] + sign * w);
    out.set_terms(r, std::move(next));
  }
  return out.canonicalize();
}

// (-Laplacian + shift) applied per region.
RegionFunction bulk_operator(const RegionFunction& f, double shift) {
  return piecewise::apply_symbol(f, [shift](std::span<const cplx> kappa) {
    cplx lap = 0.0;
    for (const auto& k : kappa) lap += k * k;
    return -lap + shift;
  });
}

std::vector<RegionFunction> grade_components(const SpinorFunction& s, const std::vector<Mask>& basis) {
  std::vector<RegionFunction> out;
  out.reserve(basis.size());
  for (Mask m : basis) out.push_back(s.component(m));
  return out;
}

}  // namespace

Superpotential::Superpotential(int n_, double c_) : n(n_), c(c_) {
  if (n < 1 || n > piecewise::kMaxParticles) throw SizeError("particle count outside [1, 10]");
  if (!(c > 0.0)) throw DomainError("superpotential coupling must be positive");
}

double grad_w(const Region& r, int j, const Superpotential& sp) {
  return 0.5 * sp.c * (2.0 * (r.rank(j) + 1) - sp.n - 1);
}

double shift_constant(const Superpotential& sp) {
  const double n = sp.n;
  return sp.c * sp.c * n * (n * n - 1.0) / 12.0;
}

SpinorFunction::SpinorFunction(int n) : n_(n) {
  if (n < 1 || n > fock::kMaxModes) throw SizeError("mode count out of range");
}

RegionFunction SpinorFunction::component(Mask m) const {
  auto it = comps_.find(m);
  return it == comps_.end() ? RegionFunction(n_) : it->second;
}

void SpinorFunction::set(Mask m, RegionFunction f) {
  if (f.dimension() != n_) throw ArgumentError("component dimension mismatch");
  if (m >> n_) throw ArgumentError("Fock state out of range");
  f.canonicalize();
  if (f.is_zero())
    comps_.erase(m);
  else
    comps_.insert_or_assign(m, std::move(f));
}

void SpinorFunction::add(Mask m, const RegionFunction& f) {
  auto it = comps_.find(m);
  if (it == comps_.end()) {
    set(m, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) comps_.erase(it);
}

double SpinorFunction::max_coefficient() const {
  double worst = 0.0;
  for (const auto& [m, f] : comps_) worst = std::max(worst, f.max_coefficient());
  return worst;
}

std::vector<int> SpinorFunction::grades() const {
  std::set<int> g;
  for (const auto& [m, f] : comps_) g.insert(fock::grade_of(m));
  return {g.begin(), g.end()};
}

SpinorFunction& SpinorFunction::operator+=(const SpinorFunction& rhs) {
  if (rhs.n_ != n_) throw ArgumentError("spinor dimension mismatch");
  for (const auto& [m, f] : rhs.comps_) add(m, f);
  return *this;
}

SpinorFunction& SpinorFunction::operator-=(const SpinorFunction& rhs) {
  if (rhs.n_ != n_) throw ArgumentError("spinor dimension mismatch");
  for (const auto& [m, f] : rhs.comps_) add(m, f * cplx(-1.0));
  return *this;
}

SpinorFunction& SpinorFunction::operator*=(cplx s) {
  std::map<Mask, RegionFunction> next;
  for (auto& [m, f] : comps_) {
    f *= s;
    if (!f.is_zero()) next.emplace(m, std::move(f));
  }
  comps_ = std::move(next);
  return *this;
}

SpinorFunction pure(Mask m, RegionFunction f) {
  SpinorFunction s(f.dimension());
  s.set(m, std::move(f));
  return s;
}

SpinorFunction apply_q(const SpinorFunction& s, const Superpotential& sp) {
  if (s.dimension() != sp.n) throw ArgumentError("spinor and superpotential disagree on N");
  SpinorFunction out(s.dimension());
  for (const auto& [m, f] : s.components()) {
    for (int j = 0; j < s.dimension(); ++j) {
      const Mask bit = Mask{1} << j;
      if (!(m & bit)) continue;
      out.add(m ^ bit, dress(f, j, +1.0, kISqrt2 * static_cast<double>(jw_sign(m, j)), sp));
    }
  }
  return out;
}

SpinorFunction apply_q_dagger(const SpinorFunction& s, const Superpotential& sp) {
  if (s.dimension() != sp.n) throw ArgumentError("spinor and superpotential disagree on N");
  SpinorFunction out(s.dimension());
  for (const auto& [m, f] : s.components()) {
    for (int j = 0; j < s.dimension(); ++j) {
      const Mask bit = Mask{1} << j;
      if (m & bit) continue;
      out.add(m | bit, dress(f, j, -1.0, kISqrt2 * static_cast<double>(jw_sign(m, j)), sp));
    }
  }
  return out;
}

const Eigen::MatrixXcd& SectorHamiltonian::block(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (const auto& cp : couplings)
    if (cp.a == a && cp.b == b) return cp.block;
  throw ArgumentError("no coupling for this pair");
}

SectorHamiltonian sector_hamiltonian(int grade, const Superpotential& sp) {
  if (grade < 0 || grade > sp.n) throw ArgumentError("grade out of range");
  SectorHamiltonian h{sp.n, grade, shift_constant(sp), fock::FockBasis(sp.n).grade_states(grade), {}};
  for (int a = 0; a < sp.n; ++a)
    for (int b = a + 1; b < sp.n; ++b) h.couplings.push_back({a, b, fock::delta_coupling(a, b, sp.c, sp.n).block(grade)});
  return h;
}

EigenReport verify_eigenstate(const SpinorFunction& s, double e, const Superpotential& sp) {
  const auto grades = s.grades();
  if (grades.size() != 1) throw ArgumentError("eigenstate check needs a nonzero pure-grade spinor");
  const SectorHamiltonian h = sector_hamiltonian(grades.front(), sp);
  EigenReport rep;
  rep.grade = h.grade;
  rep.energy = e;

  for (const auto& [m, f] : s.components())
    for (std::size_t r = 0; r < f.region_count(); ++r)
      for (const auto& t : f.terms(r)) {
        cplx lap = 0.0;
        for (const auto& k : t.kappa) lap += k * k;
        rep.bulk = std::max(rep.bulk, std::abs(-lap + h.shift - e));
      }

  const auto comps = grade_components(s, h.basis);
  for (const auto& iface : piecewise::enumerate_interfaces(sp.n)) {
    for (const auto& f : comps) rep.continuity = std::max(rep.continuity, piecewise::continuity_residual(f, iface));
    if (rep.continuity > kEigenTol) throw DiscontinuityError("spinor component is discontinuous");
    rep.jump = std::max(rep.jump, piecewise::jump_residual(comps, iface, h.block(iface.a, iface.b)));
  }
  rep.accepted = rep.bulk < kEigenTol && rep.jump < kEigenTol;
  return rep;
}

SpinorFunction zero_mode_top(const Superpotential& sp) {
  if (sp.n < 2) throw SizeError("zero modes need N >= 2");
  return pure((Mask{1} << sp.n) - 1, bethe::nmer_ground(sp.n, sp.c));
}

std::vector<int> alternating_signs(int n) {
  const fock::FockBasis basis(n);
  const Mask full = (Mask{1} << n) - 1;
  std::vector<int> v;
  for (Mask m : basis.grade_states(n - 1)) {
    const int missing = std::countr_zero(full ^ m);
    v.push_back(jw_sign(m, missing));
  }
  return v;
}

SpinorFunction zero_mode_alternating(const Superpotential& sp) {
  if (sp.n < 2) throw SizeError("zero modes need N >= 2");
  const RegionFunction ground = bethe::nmer_ground(sp.n, sp.c);
  const auto states = fock::FockBasis(sp.n).grade_states(sp.n - 1);
  const auto v = alternating_signs(sp.n);
  SpinorFunction s(sp.n);
  for (std::size_t i = 0; i < states.size(); ++i) s.set(states[i], ground * cplx(v[i]));
  return s;
}

WittenCensus witten_census(const Superpotential& sp) {
  WittenCensus census;
  for (const auto& mode : {zero_mode_alternating(sp), zero_mode_top(sp)}) {
    ZeroMode z;
    z.grade = mode.grades().front();
    z.q_residual = apply_q(mode, sp).max_coefficient();
    z.q_dagger_residual = apply_q_dagger(mode, sp).max_coefficient();
    z.check = verify_eigenstate(mode, 0.0, sp);
    z.parity = z.grade % 2 == 0 ? 1 : -1;
    (z.parity > 0 ? census.n_b : census.n_f) += 1;
    census.modes.push_back(z);
  }
  census.index = census.n_b - census.n_f;
  return census;
}

PartnerResult susy_partner(const SpinorFunction& s, Direction d, double e, const Superpotential& sp) {
  if (e <= 1e-10) throw SingletError("zero-energy state has no superpartner");
  const EigenReport in = verify_eigenstate(s, e, sp);
  if (!in.accepted) throw ArgumentError("input is not an eigenstate at the given energy");
  PartnerResult out{d == Direction::raise ? apply_q_dagger(s, sp) : apply_q(s, sp), false, {}};
  if (out.partner.is_zero()) {
    out.singlet = true;
    return out;
  }
  out.check = verify_eigenstate(out.partner, e, sp);
  return out;
}

double q_nilpotency_check(const SpinorFunction& s, const Superpotential& sp) {
  return std::max(apply_q(apply_q(s, sp), sp).max_coefficient(),
                  apply_q_dagger(apply_q_dagger(s, sp), sp).max_coefficient());
}

double anticommutator_bulk_check(const SpinorFunction& s, const Superpotential& sp) {
  SpinorFunction lhs = apply_q(apply_q_dagger(s, sp), sp) + apply_q_dagger(apply_q(s, sp), sp);
  lhs *= 0.5;
  const double shift = shift_constant(sp);
  SpinorFunction rhs(s.dimension());
  for (const auto& [m, f] : s.components()) rhs.set(m, bulk_operator(f, shift));
  return (lhs - rhs).max_coefficient();
}

SpinorFunction random_spinor(int n, std::mt19937_64& rng, int grade, int terms) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, std::max(1, terms));
  const fock::FockBasis basis(n);
  SpinorFunction s(n);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const Mask m = basis.state(i);
    if (grade >= 0 && fock::grade_of(m) != grade) continue;
    RegionFunction f(n);
    for (std::size_t r = 0; r < f.region_count(); ++r) {
      const int k = count(rng);
      for (int t = 0; t < k; ++t) {
        piecewise::ExpTerm term{{unit(rng), unit(rng)}, std::vector<cplx>(n)};
        for (auto& kj : term.kappa) kj = {unit(rng), 2.0 * unit(rng)};
        f.add_term(r, std::move(term));
      }
    }
    s.set(m, std::move(f));
  }
  return s;
}

SigmaCheck exchange_sigma_check(int n, double c) {
  Eigen::MatrixXcd sigma;
  std::vector<Mask> basis;
  if (n == 2) {
    sigma.resize(4, 4);
    sigma << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
    const fock::FockBasis fb(2);
    for (std::size_t i = 0; i < fb.dim(); ++i) basis.push_back(fb.state(i));
  } else if (n == 3) {
    sigma.resize(3, 3);
    sigma << 0, 1, -1, 1, 0, 1, -1, 1, 0;
    sigma *= 0.5;
    basis = fock::FockBasis(3).grade_states(2);
  } else {
    throw ArgumentError("exchange matrix is only available for N = 2 and N = 3");
  }
  const Superpotential sp(n, c);
  const SpinorFunction mode = zero_mode_alternating(sp);
  const auto comps = grade_components(mode, basis);
  double worst = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    RegionFunction r = comps[i];
    for (std::size_t j = 0; j < comps.size(); ++j) {
      const cplx sij = sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (sij != cplx(0.0)) r += comps[j] * sij;
    }
    worst = std::max(worst, r.max_coefficient());
  }
  return {n, worst, worst < 1e-12};
}

nlohmann::json to_json(const SpinorFunction& s) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [m, f] : s.components()) {
    nlohmann::json occ = nlohmann::json::array();
    for (int j = 0; j < s.dimension(); ++j)
      if (m & (Mask{1} << j)) occ.push_back(j + 1);
    comps.push_back({{"occupied", occ}, {"grade", fock::grade_of(m)}, {"function", piecewise::to_json(f)}});
  }
  return {{"n", s.dimension()}, {"components", comps}};
}

nlohmann::json to_json(const EigenReport& r) {
  return {{"grade", r.grade},         {"energy", r.energy}, {"bulk_residual", r.bulk},
          {"continuity_residual", r.continuity}, {"jump_residual", r.jump}, {"accepted", r.accepted}};
}

}  // namespace slly::susy
