#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slly/bethe.hpp"
#include "slly/errors.hpp"
#include "slly/fock.hpp"
#include "slly/lattice.hpp"
#include "slly/report.hpp"
#include "slly/susy.hpp"

namespace {

using nlohmann::json;
using cplx = std::complex<double>;

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kNoConvergence = 3 };

constexpr int kMaxSymbolicN = 5;

struct RunConfig {
  std::string group;
  std::string action;
  int n = 0;
  double c = 0.0;
  std::vector<double> k;
  double p = 0.0;
  double q = 0.0;
  int grade = 0;
  int trials = 100;
  std::uint64_t seed = 0;
  double box = 24.0;
  std::vector<int> points;
  int eigs = 6;
  int max_basis = 240;
  int sector = 0;
  double tol = 1e-10;
  std::string output;
  std::string format = "json";

  bool has_n = false;
  bool has_seed = false;
};

struct Outcome {
  json result;
  bool pass;
  std::string csv;
};

json echo(const RunConfig& rc) {
  json j = {{"command", rc.group + " " + rc.action},
            {"c", rc.c},
            {"tol", rc.tol},
            {"format", rc.format}};
  if (rc.has_n) j["n"] = rc.n;
  if (!rc.k.empty()) j["k"] = rc.k;
  if (rc.group == "bethe") {
    j["p"] = rc.p;
    j["q"] = rc.q;
  }
  if (rc.group == "susy") {
    j["grade"] = rc.grade;
    j["trials"] = rc.trials;
  }
  if (rc.has_seed) j["seed"] = rc.seed;
  if (rc.group == "lattice") {
    j["box"] = rc.box;
    j["points"] = rc.points;
    j["eigs"] = rc.eigs;
    j["max_basis"] = rc.max_basis;
    j["sector"] = rc.sector;
  }
  return j;
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json interface_json(const slly::bethe::InterfaceReport& r) {
  return {{"interfaces", r.interfaces}, {"continuity_residual", r.continuity}, {"jump_residual", r.jump}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw slly::ArgumentError(what);
}

int particle_count(const RunConfig& rc, int fallback) { return rc.has_n ? rc.n : fallback; }

Outcome bound_outcome(const slly::bethe::BoundState& s, double c, double expected, double tol) {
  const auto iface = slly::bethe::check_interfaces(s.psi, c);
  const double bulk = slly::bethe::bulk_energy_residual(s.psi, s.energy);
  json k = json::array();
  for (auto z : s.k) k.push_back(complex_json(z));
  json r = {{"energy", s.energy},       {"expected_energy", expected}, {"momenta", k},
            {"bulk_residual", bulk},    {"matching", interface_json(iface)}};
  const bool pass = bulk < tol && iface.continuity < tol && iface.jump < tol && std::abs(s.energy - expected) < tol;
  return {r, pass, {}};
}

Outcome cmd_bethe(const RunConfig& rc) {
  using namespace slly::bethe;
  if (rc.action == "collision") {
    require(!rc.k.empty(), "--k is required");
    const int n = particle_count(rc, static_cast<int>(rc.k.size()));
    require(n == static_cast<int>(rc.k.size()), "--n disagrees with the number of momenta");
    const auto psi = collision_state(rc.k, rc.c);
    double e = 0;
    for (double x : rc.k) e += x * x;
    const auto iface = check_interfaces(psi, rc.c);
    const double bulk = bulk_energy_residual(psi, e);
    json table = json::array();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        table.push_back({{"i", i + 1}, {"j", j + 1}, {"s", complex_json(s_matrix(rc.k[i], rc.k[j], rc.c))},
                         {"theta", phase_shift(rc.k[j] - rc.k[i], rc.c)}});
    json r = {{"energy", e}, {"bulk_residual", bulk}, {"matching", interface_json(iface)}, {"s_matrix", table}};
    return {r, bulk < rc.tol && iface.continuity < rc.tol && iface.jump < rc.tol, {}};
  }
  if (rc.action == "dimer") return bound_outcome(dimer_state(rc.p, rc.c), rc.c, 2 * rc.p * rc.p - rc.c * rc.c / 2, rc.tol);
  if (rc.action == "trimer")
    return bound_outcome(trimer_state(rc.p, rc.c), rc.c, 3 * rc.p * rc.p - 2 * rc.c * rc.c, rc.tol);
  if (rc.action == "monomer-dimer")
    return bound_outcome(monomer_dimer_state(rc.p, rc.q, rc.c), rc.c,
                         rc.q * rc.q + 2 * rc.p * rc.p - rc.c * rc.c / 2, rc.tol);
  if (rc.action == "nmer") {
    const int n = particle_count(rc, 2);
    require(n >= 2 && n <= slly::piecewise::kMaxParticles, "--n must be in [2, 10]");
    if (!(rc.c < 0.0)) throw slly::DomainError("bound states need c < 0");
    const auto psi = nmer_ground(n, rc.c);
    const double expected = -rc.c * rc.c * n * (n * n - 1.0) / 12.0;
    const auto iface = check_interfaces(psi, rc.c);
    const double bulk = bulk_energy_residual(psi, expected);
    json r = {{"n", n}, {"energy", expected}, {"bulk_residual", bulk}, {"matching", interface_json(iface)}};
    return {r, bulk < rc.tol && iface.continuity < rc.tol && iface.jump < rc.tol, {}};
  }
  throw slly::ArgumentError("unknown bethe command '" + rc.action + "'");
}

json occupied(slly::fock::Mask m, int n) {
  json occ = json::array();
  for (int j = 0; j < n; ++j)
    if (m & (slly::fock::Mask{1} << j)) occ.push_back(j + 1);
  return occ;
}

Outcome cmd_susy(const RunConfig& rc) {
  using namespace slly::susy;
  const int n = particle_count(rc, rc.k.empty() ? 2 : static_cast<int>(rc.k.size()));
  if (n < 1 || n > kMaxSymbolicN) throw slly::SizeError("symbolic commands need N in [1, 5]");
  const Superpotential sp(n, rc.c);

  if (rc.action == "algebra") {
    require(rc.has_seed, "--seed is required for randomized checks");
    require(rc.trials > 0, "--trials must be positive");
    std::mt19937_64 rng(rc.seed);
    std::vector<SpinorFunction> samples;
    for (int t = 0; t < rc.trials; ++t) samples.push_back(random_spinor(n, rng));
    std::vector<double> nils(samples.size()), antis(samples.size());
    slly::report::parallel_for(samples.size(), [&](std::size_t i) {
      nils[i] = q_nilpotency_check(samples[i], sp);
      antis[i] = anticommutator_bulk_check(samples[i], sp);
    });
    const double nil = *std::max_element(nils.begin(), nils.end());
    const double anti = *std::max_element(antis.begin(), antis.end());
    const double tol = std::max(rc.tol, 1e-12);
    json r = {{"trials", rc.trials}, {"nilpotency_residual", nil}, {"anticommutator_residual", anti},
              {"max_residual", std::max(nil, anti)}};
    return {r, nil < tol && anti < tol, {}};
  }
  if (rc.action == "zero-modes" || rc.action == "census") {
    const auto census = witten_census(sp);
    json modes = json::array();
    bool ok = true;
    for (const auto& z : census.modes) {
      modes.push_back({{"grade", z.grade},
                       {"q_residual", z.q_residual},
                       {"q_dagger_residual", z.q_dagger_residual},
                       {"parity", z.parity},
                       {"check", to_json(z.check)}});
      ok = ok && z.q_residual < rc.tol && z.q_dagger_residual < rc.tol && z.check.accepted;
    }
    if (rc.action == "zero-modes") {
      json r = {{"modes", modes}, {"alternating_signs", alternating_signs(n)}};
      return {r, ok, {}};
    }
    json r = {{"n_b", census.n_b}, {"n_f", census.n_f}, {"index", census.index},
              {"lower_bound", census.lower_bound}, {"modes", modes}};
    return {r, ok && census.index == 0, {}};
  }
  if (rc.action == "sector") {
    require(rc.grade >= 0 && rc.grade <= n, "--grade must be in [0, N]");
    const auto h = sector_hamiltonian(rc.grade, sp);
    json basis = json::array();
    for (auto m : h.basis) basis.push_back(occupied(m, n));
    json blocks = json::array();
    for (const auto& cp : h.couplings)
      blocks.push_back({{"pair", {cp.a + 1, cp.b + 1}}, {"matrix", slly::fock::to_json(cp.block)}});
    json r = {{"grade", rc.grade}, {"shift", h.shift}, {"basis", basis}, {"couplings", blocks}};
    return {r, true, {}};
  }
  if (rc.action == "partner") {
    require(!rc.k.empty(), "--k is required");
    require(static_cast<int>(rc.k.size()) == n, "--n disagrees with the number of momenta");
    require(rc.grade == 0 || rc.grade == n, "--grade must be 0 (raise) or N (lower)");
    const bool raise = rc.grade == 0;
    const Mask m = raise ? 0 : (Mask{1} << n) - 1;
    const auto input = pure(m, slly::bethe::collision_state(rc.k, raise ? rc.c : -rc.c));
    double e = shift_constant(sp);
    for (double x : rc.k) e += x * x;
    const auto res = susy_partner(input, raise ? Direction::raise : Direction::lower, e, sp);
    json r = {{"energy", e}, {"direction", raise ? "raise" : "lower"}, {"singlet", res.singlet},
              {"input", to_json(verify_eigenstate(input, e, sp))}};
    if (!res.singlet) {
      r["partner_check"] = to_json(res.check);
      r["partner"] = to_json(res.partner);
    }
    return {r, !res.singlet && res.check.accepted, {}};
  }
  throw slly::ArgumentError("unknown susy command '" + rc.action + "'");
}

Outcome cmd_lattice(const RunConfig& rc) {
  using namespace slly::lattice;
  const int n = particle_count(rc, 2);
  if (n != 2 && n != 3) throw slly::ArgumentError("lattice commands support N = 2 and N = 3 only");
  SolverOptions opt;
  opt.seed = rc.has_seed ? rc.seed : 1;
  opt.max_basis = rc.max_basis;
  const auto single_points = [&](int fallback) {
    require(rc.points.size() <= 1, "--points takes one value here");
    return rc.points.empty() ? fallback : rc.points.front();
  };

  if (rc.action == "spectrum") {
    const Grid g(n, rc.box, single_points(n == 2 ? 120 : 24));
    const auto eig = lowest_eigenvalues(build_sector_matrix(rc.sector, g, rc.c), rc.eigs, opt);
    bool ok = true;
    for (double r : eig.residuals) ok = ok && r < 1e-8 * std::max(1.0, std::abs(eig.eigenvalues.back()));
    json r = to_json(eig);
    r["h"] = g.h();
    r["sector"] = rc.sector;
    return {r, ok, {}};
  }
  require(n == 2, "this lattice command supports N = 2 only");
  if (rc.action == "converge") {
    const std::vector<int> pts = rc.points.empty() ? std::vector<int>{119, 239, 479} : rc.points;
    const auto rep = convergence_study(rc.sector, rc.c, rc.box, pts, 1, opt);
    std::ostringstream csv;
    csv << "h,length,points,sector,energy,residual\n";
    json rows = json::array();
    for (const auto& row : rep.rows) {
      csv << slly::report::format_double(row.h) << ',' << slly::report::format_double(row.length) << ','
          << row.points << ',' << row.grade << ',' << slly::report::format_double(row.eigenvalues.front()) << ','
          << slly::report::format_double(row.residuals.front()) << '\n';
      rows.push_back({{"h", row.h}, {"points", row.points}, {"energy", row.eigenvalues.front()},
                      {"residual", row.residuals.front()}});
    }
    json r = {{"rows", rows}, {"observed_order", rep.observed_order}, {"decreasing", rep.decreasing}};
    return {r, rep.decreasing, csv.str()};
  }
  if (rc.action == "check") {
    const Grid g(n, rc.box, single_points(120));
    const auto rep = susy_spectrum_check(g, rc.c, rc.eigs, opt);
    json sectors = json::array();
    for (const auto& s : rep.sectors)
      sectors.push_back({{"grade", s.grade}, {"eigenvalues", s.eigenvalues}, {"residuals", s.residuals}});
    json r = {{"h", rep.h},
              {"tol_h", rep.tol_h},
              {"sectors", sectors},
              {"nonnegative", rep.nonnegative},
              {"zero_modes_near_zero", rep.zero_modes_near_zero},
              {"scattering_floor", rep.scattering_floor}};
    return {r, rep.pass, {}};
  }
  if (rc.action == "diagnose") {
    const Grid g(n, rc.box, single_points(40));
    const auto d = lattice_q_diagnostic(g, rc.c, opt);
    json r = {{"h", g.h()},
              {"min_eigenvalue", d.min_eigenvalue},
              {"q_squared_norm", d.q_squared_norm},
              {"q_squared_nonzeros", d.q_squared_nonzeros},
              {"max_diagonal_distance", d.max_diagonal_distance},
              {"symmetry_defect", d.symmetry_defect}};
    return {r, d.min_eigenvalue >= -1e-10, {}};
  }
  throw slly::ArgumentError("unknown lattice command '" + rc.action + "'");
}

void validate(const RunConfig& rc) {
  require(rc.tol > 0.0, "--tol must be positive");
  require(rc.format == "json" || rc.format == "csv", "--format must be json or csv");
  require(rc.format == "json" || rc.action == "converge", "csv output is only available for lattice converge");
  if (rc.group == "lattice") {
    require(rc.box > 0.0, "--box must be positive");
    require(rc.eigs > 0, "--eigs must be positive");
    require(rc.max_basis > 0, "--max-basis must be positive");
  }
}

int run(const RunConfig& rc) {
  validate(rc);
  Outcome out;
  if (rc.group == "bethe")
    out = cmd_bethe(rc);
  else if (rc.group == "susy")
    out = cmd_susy(rc);
  else if (rc.group == "lattice")
    out = cmd_lattice(rc);
  else
    throw slly::ArgumentError("unknown command group '" + rc.group + "'");

  std::string text;
  if (rc.format == "csv") {
    text = out.csv;
  } else {
    const json doc = {{"artifact", "slly"},
                      {"version", slly::report::kVersion},
                      {"config", echo(rc)},
                      {"result", out.result},
                      {"pass", out.pass}};
    text = slly::report::dump(doc) + "\n";
  }
  if (rc.output.empty())
    std::cout << text;
  else
    slly::report::write_atomic(rc.output, text);
  return out.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and lattice checks for delta-interacting bosons and their supersymmetric extension"};
  RunConfig rc;
  app.add_option("group", rc.group, "bethe | susy | lattice")->required();
  app.add_option("action", rc.action, "subcommand of the group")->required();
  app.add_option("--c", rc.c, "coupling")->required();
  auto* n_opt = app.add_option("--n", rc.n, "particle count");
  app.add_option("--k", rc.k, "comma-separated momenta")->delimiter(',');
  app.add_option("--p", rc.p, "bound-state momentum P");
  app.add_option("--q", rc.q, "free-particle momentum Q");
  app.add_option("--grade", rc.grade, "fermion number of the sector");
  app.add_option("--trials", rc.trials, "random trials");
  auto* seed_opt = app.add_option("--seed", rc.seed, "random seed");
  app.add_option("--box", rc.box, "box length L");
  app.add_option("--points", rc.points, "interior points per axis (comma list for converge)")->delimiter(',');
  app.add_option("--eigs", rc.eigs, "number of eigenvalues");
  app.add_option("--max-basis", rc.max_basis, "Krylov basis cap for the eigensolver");
  app.add_option("--sector", rc.sector, "lattice sector grade");
  app.add_option("--tol", rc.tol, "residual tolerance");
  app.add_option("--format", rc.format, "json or csv");
  app.add_option("--output", rc.output, "write the report to this path");
  app.set_config("--config", "", "key = value file; flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  rc.has_n = n_opt->count() > 0;
  rc.has_seed = seed_opt->count() > 0;

  try {
    return run(rc);
  } catch (const slly::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const slly::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}
