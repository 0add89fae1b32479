// Acceptance runner: `acceptance` runs every criterion, `acceptance <i>` runs one.
// Each criterion prints a single PASS/FAIL line; the exit code is non-zero if
// any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slly/bethe.hpp"
#include "slly/fock.hpp"
#include "slly/lattice.hpp"
#include "slly/susy.hpp"

namespace {

using cplx = std::complex<double>;
using slly::piecewise::Region;
using slly::piecewise::RegionFunction;
constexpr cplx I{0.0, 1.0};

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  const char* title;
  double time_limit;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

cplx coefficient(const RegionFunction& f, const std::vector<int>& order, const std::vector<cplx>& kappa) {
  for (const auto& t : f.terms(Region(order)))
    if (slly::piecewise::kappa_close(t.kappa, kappa)) return t.coef;
  return 0.0;
}

std::vector<double> random_decreasing(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> k(n);
  for (auto& x : k) x = u(rng);
  std::sort(k.rbegin(), k.rend());
  return k;
}

double random_coupling(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

Verdict s_matrix_contract() {
  using namespace slly::bethe;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double unit = 0, inverse = 0, phase = 0, diag = 0;
  for (int i = 0; i < 10000; ++i) {
    const double ki = u(rng), kj = u(rng);
    double c = u(rng);
    if (std::abs(c) < 1e-3) c = 1.0;
    const cplx s = s_matrix(ki, kj, c);
    unit = std::max(unit, std::abs(std::abs(s) - 1.0));
    inverse = std::max(inverse, std::abs(s * s_matrix(kj, ki, c) - 1.0));
    phase = std::max(phase, std::abs(std::exp(I * phase_shift(kj - ki, c)) - s));
    diag = std::max(diag, std::abs(s_matrix(ki, ki, c) + 1.0));
  }
  return {unit < 1e-13 && inverse < 1e-13 && phase < 1e-12 && diag == 0.0,
          fmt("||S|-1| %.1e, |S S'-1| %.1e, |e^{i theta}-S| %.1e, |S(k,k)+1| %.1e", unit, inverse, phase, diag)};
}

// A reduced word reaching `target` from the identity, choosing a random
// descent at every step.
std::vector<int> random_reduced_word(std::vector<int> target, std::mt19937_64& rng) {
  std::vector<int> word;
  for (;;) {
    std::vector<int> descents;
    for (std::size_t i = 0; i + 1 < target.size(); ++i)
      if (target[i] > target[i + 1]) descents.push_back(static_cast<int>(i));
    if (descents.empty()) break;
    const int i = descents[std::uniform_int_distribution<std::size_t>(0, descents.size() - 1)(rng)];
    std::swap(target[i], target[i + 1]);
    word.push_back(i);
  }
  std::reverse(word.begin(), word.end());
  return word;
}

Verdict path_independence() {
  using namespace slly::bethe;
  std::mt19937_64 rng(202);
  double worst = 0;
  long paths = 0;
  for (int n = 3; n <= 5; ++n) {
    const auto perms = oracle::all_permutations(n);
    for (int set = 0; set < 100; ++set) {
      const auto kr = random_decreasing(n, rng);
      const MomentumSet k(kr.begin(), kr.end());
      const double c = random_coupling(rng, 0.2, 4.0) * (set % 2 ? -1.0 : 1.0);
      const auto direct = bethe_coefficients(k, c);
      for (const auto& p : perms) {
        const auto a = coefficient_along_path(k, c, random_reduced_word(p, rng));
        auto wb = random_reduced_word(p, rng);
        // A detour s_i s_i in the middle must not change anything.
        const int i = static_cast<int>(rng() % (n - 1));
        wb.insert(wb.begin() + static_cast<long>(rng() % (wb.size() + 1)), {i, i});
        const auto b = coefficient_along_path(k, c, wb);
        if (a.perm != p || b.perm != p) return {false, "path did not reach its target"};
        worst = std::max({worst, std::abs(a.alpha - b.alpha), std::abs(a.alpha - direct.at(p))});
        paths += 2;
      }
    }
  }
  return {worst < 1e-12, fmt("%.0f path pairs, max disagreement %.1e", paths / 2.0, worst)};
}

Verdict matching_conditions() {
  using namespace slly::bethe;
  std::mt19937_64 rng(303);
  double cont = 0, jump = 0;
  for (int n = 2; n <= 4; ++n)
    for (int set = 0; set < 20; ++set) {
      const auto k = random_decreasing(n, rng);
      const double c = random_coupling(rng, 0.2, 4.0) * (set % 2 ? -1.0 : 1.0);
      const auto rep = check_interfaces(collision_state(k, c), c);
      cont = std::max(cont, rep.continuity);
      jump = std::max(jump, rep.jump);
    }
  // Two-body state against its closed form, up to one global phase.
  double form = 0;
  for (int set = 0; set < 20; ++set) {
    const auto k = random_decreasing(2, rng);
    const double c = random_coupling(rng, 0.2, 4.0);
    const double k1 = k[0], k2 = k[1];
    const auto psi = collision_state(k, c);
    const cplx g = std::exp(I * 0.5 * phase_shift(k1 - k2, c));
    const cplx ex = std::exp(I * phase_shift(k2 - k1, c));
    const std::vector<cplx> direct{I * k1, I * k2}, swapped{I * k2, I * k1};
    const std::vector<std::pair<cplx, cplx>> pairs{
        {coefficient(psi, {0, 1}, direct), g},      {coefficient(psi, {0, 1}, swapped), g * ex},
        {coefficient(psi, {1, 0}, swapped), g},     {coefficient(psi, {1, 0}, direct), g * ex}};
    const cplx phase = pairs[0].second / pairs[0].first;
    form = std::max(form, std::abs(std::abs(phase) - 1.0));
    for (const auto& [ours, theirs] : pairs) form = std::max(form, std::abs(ours * phase - theirs));
    for (std::size_t r = 0; r < 2; ++r)
      if (psi.terms(r).size() != 2) form = 1.0;
  }
  return {cont < 1e-10 && jump < 1e-10 && form < 1e-12,
          fmt("continuity %.1e, jump %.1e, two-body closed form %.1e", cont, jump, form)};
}

Verdict bound_state_energies() {
  using namespace slly::bethe;
  double energy_gap = 0, residual = 0;
  const auto account = [&](const BoundState& s, double expect, double c) {
    energy_gap = std::max({energy_gap, std::abs(s.energy - expect), std::abs(energy(s.k) - expect)});
    const auto rep = check_interfaces(s.psi, c);
    residual = std::max({residual, bulk_energy_residual(s.psi, expect), rep.continuity, rep.jump});
  };
  for (double c : {-0.5, -1.0, -2.0, -3.7}) {
    account(dimer_state(0.0, c), -c * c / 2, c);
    account(trimer_state(0.0, c), -2 * c * c, c);
    for (double p : {-1.2, 0.3, 2.0}) {
      account(dimer_state(p, c), 2 * p * p - c * c / 2, c);
      account(trimer_state(p, c), 3 * p * p - 2 * c * c, c);
      for (double q : {-0.7, 1.9}) account(monomer_dimer_state(p, q, c), q * q + 2 * p * p - c * c / 2, c);
    }
  }
  return {energy_gap < 1e-12 && residual < 1e-10,
          fmt("max energy mismatch %.1e, max bulk/matching residual %.1e", energy_gap, residual)};
}

Verdict fock_algebra() {
  using namespace slly::fock;
  int failures = 0;
  for (int n = 1; n <= 8; ++n) {
    const auto id = FockOperator::identity(n);
    std::vector<FockOperator> b, bd;
    for (int j = 0; j < n; ++j) {
      b.push_back(annihilation(j, n));
      bd.push_back(creation(j, n));
    }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        failures += !anticommutator(b[j], b[k]).is_zero();
        failures += !(anticommutator(b[j], bd[k]) == (j == k ? id : FockOperator(n)));
      }
    const auto g = gamma_matrices(n);
    const auto two = GaussInt{2, 0} * id;
    for (std::size_t a = 0; a < g.size(); ++a) {
      failures += !g[a].is_hermitian();
      for (std::size_t c = a; c < g.size(); ++c)
        failures += !(anticommutator(g[a], g[c]) == (a == c ? two : FockOperator(n)));
    }
    const auto gen = [n](int a, int c) { return a == c ? FockOperator(n) : spin_operator(a, c, n); };
    const auto delta = [](int a, int c) { return GaussInt{a == c ? 1 : 0, 0}; };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k + 1; l < n; ++l) {
            const auto rhs = delta(j, k) * gen(i, l) + delta(i, l) * gen(j, k) - delta(j, l) * gen(i, k) -
                             delta(i, k) * gen(j, l);
            failures += !(commutator(gen(i, j), gen(k, l)) == GaussInt{0, -1} * rhs);
          }
    for (int a = 0; a < n; ++a)
      for (int c = a + 1; c < n; ++c) {
        const auto p = delta_pattern(a, c, n);
        // Hermitian involution with zero trace: eigenvalues +1 and -1 in equal number.
        failures += !(p * p == id) + !p.is_hermitian() + !(p.trace() == GaussInt{});
      }
  }
  return {failures == 0, "N = 1..8, " + std::to_string(failures) + " failed identities"};
}

Eigen::MatrixXcd square(int n, std::initializer_list<double> v) {
  Eigen::MatrixXcd m(n, n);
  auto it = v.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

Verdict sector_blocks() {
  using namespace slly::susy;
  int failures = 0;
  for (double c : {0.5, 1.0, 2.3}) {
    const auto h21 = sector_hamiltonian(1, Superpotential(2, c));
    failures += !(h21.block(0, 1) == 2 * c * square(2, {0, 1, 1, 0}));
    failures += std::abs(h21.shift - c * c / 2) > 1e-15;
    const Superpotential s3(3, c);
    const auto h31 = sector_hamiltonian(1, s3);
    failures += !(h31.block(0, 1) == 2 * c * square(3, {0, 1, 0, 1, 0, 0, 0, 0, 1}));
    failures += !(h31.block(0, 2) == 2 * c * square(3, {0, 0, 1, 0, 1, 0, 1, 0, 0}));
    failures += !(h31.block(1, 2) == 2 * c * square(3, {1, 0, 0, 0, 0, 1, 0, 1, 0}));
    const auto h32 = sector_hamiltonian(2, s3);
    failures += !(h32.block(0, 1) == 2 * c * square(3, {-1, 0, 0, 0, 0, 1, 0, 1, 0}));
    failures += !(h32.block(0, 2) == 2 * c * square(3, {0, 0, -1, 0, -1, 0, -1, 0, 0}));
    failures += !(h32.block(1, 2) == 2 * c * square(3, {0, 1, 0, 1, 0, 0, 0, 0, -1}));
    for (int n = 2; n <= 6; ++n) {
      const Superpotential sp(n, c);
      const double shift = c * c * n * (n * n - 1.0) / 12.0;
      for (int grade : {0, n}) {
        const auto h = sector_hamiltonian(grade, sp);
        failures += std::abs(h.shift - shift) > 1e-12 * shift;
        for (const auto& cp : h.couplings)
          failures += !(cp.block == Eigen::MatrixXcd::Constant(1, 1, grade == 0 ? 2 * c : -2 * c));
      }
      for (const auto& r : slly::piecewise::enumerate_regions(n)) {
        double sum = 0;
        for (int j = 0; j < n; ++j) sum += grad_w(r, j, sp) * grad_w(r, j, sp);
        failures += std::abs(sum - shift) > 1e-12 * shift;
      }
    }
  }
  return {failures == 0, std::to_string(failures) + " mismatched blocks or shifts"};
}

Verdict susy_algebra() {
  using namespace slly::susy;
  std::mt19937_64 rng(707);
  double nil = 0, anti = 0;
  for (int n = 2; n <= 4; ++n) {
    const Superpotential sp(n, 0.5 + n * 0.3);
    for (int t = 0; t < 100; ++t) {
      const auto s = random_spinor(n, rng);
      nil = std::max(nil, q_nilpotency_check(s, sp));
      anti = std::max(anti, anticommutator_bulk_check(s, sp));
    }
  }
  return {nil < 1e-12 && anti < 1e-12, fmt("Q^2 residual %.1e, anticommutator residual %.1e", nil, anti)};
}

Verdict zero_modes() {
  using namespace slly::susy;
  double worst = 0;
  bool ok = true;
  for (int n = 2; n <= 5; ++n) {
    const auto census = witten_census(Superpotential(n, 1.0));
    ok = ok && census.index == 0 && census.n_b == 1 && census.n_f == 1 && census.modes.size() == 2;
    for (const auto& m : census.modes) {
      worst = std::max({worst, m.q_residual, m.q_dagger_residual});
      ok = ok && m.check.accepted;
    }
  }
  return {ok && worst < 1e-12, fmt("N = 2..5, max supercharge residual %.1e, census index 0", worst)};
}

Verdict partners() {
  using namespace slly::susy;
  const double sq2 = std::sqrt(2.0);
  // Closed-form components of Q^dag acting on the two-body state.
  double form = 0;
  std::mt19937_64 rng(909);
  for (int set = 0; set < 20; ++set) {
    const auto k = random_decreasing(2, rng);
    const double c = random_coupling(rng, 0.2, 4.0);
    const Superpotential sp(2, c);
    const double k1 = k[0], k2 = k[1];
    const double e = shift_constant(sp) + k1 * k1 + k2 * k2;
    const auto up = susy_partner(pure(0, slly::bethe::collision_state(k, c)), Direction::raise, e, sp);
    const cplx g = std::exp(I * 0.5 * slly::bethe::phase_shift(k1 - k2, c));
    const cplx ex = std::exp(I * slly::bethe::phase_shift(k2 - k1, c));
    const std::vector<cplx> d{I * k1, I * k2}, s{I * k2, I * k1};
    const auto c1 = up.partner.component(0b01);
    const auto c2 = up.partner.component(0b10);
    const cplx h = I * c / 2.0;
    const std::vector<std::pair<cplx, cplx>> pairs{
        {coefficient(c1, {0, 1}, d), -sq2 * g * (k1 - h)},      {coefficient(c1, {0, 1}, s), -sq2 * g * (k2 - h) * ex},
        {coefficient(c2, {0, 1}, d), -sq2 * g * (k2 + h)},      {coefficient(c2, {0, 1}, s), -sq2 * g * (k1 + h) * ex},
        {coefficient(c1, {1, 0}, s), -sq2 * g * (k2 + h)},      {coefficient(c1, {1, 0}, d), -sq2 * g * (k1 + h) * ex},
        {coefficient(c2, {1, 0}, s), -sq2 * g * (k1 - h)},      {coefficient(c2, {1, 0}, d), -sq2 * g * (k2 - h) * ex}};
    // The collision state is normalized with alpha(identity) = 1, which is the
    // symmetric-phase state times exp(-i theta(k1 - k2) / 2).
    for (const auto& [ours, theirs] : pairs) form = std::max(form, std::abs(ours * g - theirs));
  }
  double energy = 0;
  bool accepted = true;
  for (int n = 2; n <= 3; ++n)
    for (int set = 0; set < 50; ++set) {
      const auto k = random_decreasing(n, rng);
      const double c = random_coupling(rng, 0.2, 3.0);
      const Superpotential sp(n, c);
      double e = shift_constant(sp);
      for (double x : k) e += x * x;
      const bool raise = set % 2 == 0;
      const Mask m = raise ? 0 : (Mask{1} << n) - 1;
      const auto in = pure(m, slly::bethe::collision_state(k, raise ? c : -c));
      const auto out = susy_partner(in, raise ? Direction::raise : Direction::lower, e, sp);
      accepted = accepted && !out.singlet && out.check.accepted;
      energy = std::max({energy, out.check.bulk, out.check.jump});
    }
  return {form < 1e-12 && accepted && energy < 1e-10,
          fmt("component formulas %.1e, partner bulk/jump residual %.1e", form, energy)};
}

Verdict lattice_oracle() {
  using namespace slly::lattice;
  const double c = 2.0;
  const double length = 24.0;
  const auto check = susy_spectrum_check(Grid(2, length, 119), c, 4);
  double lowest = 1e300;
  for (const auto& s : check.sectors) lowest = std::min(lowest, s.eigenvalues.front());
  const auto conv = convergence_study(2, c, length, {59, 119, 239, 479}, 1);
  bool order_ok = !conv.observed_order.empty();
  std::string orders;
  for (double p : conv.observed_order) {
    order_ok = order_ok && std::abs(p - 1.0) <= 0.3;
    orders += fmt(" %.3f", p);
  }
  const auto q = lattice_q_diagnostic(Grid(2, length, 60), c);
  const bool pass = check.nonnegative && conv.decreasing && order_ok && q.min_eigenvalue >= -1e-10;
  return {pass, fmt("min sector eigenvalue %.3e (tol_h %.2e), sector-2 ground %.6f -> %.6f", lowest, check.tol_h,
                    conv.rows.front().eigenvalues.front(), conv.rows.back().eigenvalues.front()) +
                    ", observed order" + orders + fmt(", min eig of lattice {Q,Q^dag}/2 %.2e", q.min_eigenvalue)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"S-matrix contract", 1.0, s_matrix_contract},
      {"Bethe coefficient path independence", 10.0, path_independence},
      {"matching conditions", 10.0, matching_conditions},
      {"bound-state energies", 60.0, bound_state_energies},
      {"Fock algebra exactness", 30.0, fock_algebra},
      {"sector Hamiltonian blocks", 60.0, sector_blocks},
      {"SUSY algebra", 60.0, susy_algebra},
      {"zero modes and Witten census", 60.0, zero_modes},
      {"SUSY partners", 60.0, partners},
      {"lattice oracle", 300.0, lattice_oracle},
  };
  std::vector<int> selected;
  if (argc > 1) {
    const int i = std::atoi(argv[1]);
    if (i < 1 || i > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion must be in [1, %zu]\n", criteria.size());
      return 2;
    }
    selected.push_back(i);
  } else {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }

  bool all = true;
  for (int i : selected) {
    const auto& cr = criteria[i - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = cr.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = v.pass && secs < cr.time_limit;
    all = all && pass;
    std::printf("[%s] %2d %s: %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", i, cr.title, v.detail.c_str(),
                secs, cr.time_limit);
  }
  return all ? 0 : 1;
}
