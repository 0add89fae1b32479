#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "slly/fock.hpp"
#include "slly/piecewise.hpp"

namespace slly::susy {

using cplx = std::complex<double>;
using fock::Mask;
using piecewise::Region;
using piecewise::RegionFunction;

/// W = (c/2) sum_{j<k} |x_j - x_k| with c > 0.
struct Superpotential {
  Superpotential(int n, double c);
  int n;
  double c;
};

/// dW/dx_j on r: (c/2)(2 rank(j) - N - 1) with rank counted from 1.
double grad_w(const Region& r, int j, const Superpotential& sp);
/// c^2 N (N^2 - 1) / 12 = sum_j grad_w^2 on every region.
double shift_constant(const Superpotential& sp);

/// Fock-state-indexed RegionFunctions; absent components are zero.
class SpinorFunction {
public:
  explicit SpinorFunction(int n);

  int dimension() const { return n_; }
  const std::map<Mask, RegionFunction>& components() const { return comps_; }
  /// Zero function when absent.
  RegionFunction component(Mask m) const;
  void set(Mask m, RegionFunction f);
  void add(Mask m, const RegionFunction& f);

  bool is_zero() const { return comps_.empty(); }
  double max_coefficient() const;
  /// Grades that carry a nonzero component.
  std::vector<int> grades() const;

  SpinorFunction& operator+=(const SpinorFunction& rhs);
  SpinorFunction& operator-=(const SpinorFunction& rhs);
  SpinorFunction& operator*=(cplx s);
  friend SpinorFunction operator+(SpinorFunction a, const SpinorFunction& b) { return a += b; }
  friend SpinorFunction operator-(SpinorFunction a, const SpinorFunction& b) { return a -= b; }
  friend SpinorFunction operator*(cplx s, SpinorFunction a) { return a *= s; }

private:
  int n_;
  std::map<Mask, RegionFunction> comps_;
};

/// Single-component spinor.
SpinorFunction pure(Mask m, RegionFunction f);

/// Q = i sqrt2 sum_j b_j (d_j + w_j).
SpinorFunction apply_q(const SpinorFunction& s, const Superpotential& sp);
/// Q^dag = i sqrt2 sum_j b_j^dag (d_j - w_j).
SpinorFunction apply_q_dagger(const SpinorFunction& s, const Superpotential& sp);

struct Coupling {
  int a;
  int b;
  Eigen::MatrixXcd block;
};

/// -Laplacian + shift in the bulk, plus Lambda_ab delta(x_a - x_b) per pair.
struct SectorHamiltonian {
  int n;
  int grade;
  double shift;
  std::vector<Mask> basis;
  std::vector<Coupling> couplings;

  const Eigen::MatrixXcd& block(int a, int b) const;
};

SectorHamiltonian sector_hamiltonian(int grade, const Superpotential& sp);

struct EigenReport {
  int grade = 0;
  double energy = 0.0;
  double bulk = 0.0;
  double continuity = 0.0;
  double jump = 0.0;
  bool accepted = false;
};

inline constexpr double kEigenTol = 1e-10;

/// Bulk residual per term plus the generalized jump condition on every
/// interface. Throws DiscontinuityError on discontinuous input.
EigenReport verify_eigenstate(const SpinorFunction& s, double e, const Superpotential& sp);

/// Grade-N mode exp(-W).
SpinorFunction zero_mode_top(const Superpotential& sp);
/// Sign vector over the grade-(N-1) basis, fixed by requiring Q^dag to annihilate
/// v * exp(-W): v for the state missing mode m is the sign of b_m^dag on it.
std::vector<int> alternating_signs(int n);
/// Grade-(N-1) mode v * exp(-W).
SpinorFunction zero_mode_alternating(const Superpotential& sp);

struct ZeroMode {
  int grade;
  double q_residual;
  double q_dagger_residual;
  EigenReport check;
  int parity;  // eigenvalue of K_F
};

struct WittenCensus {
  std::vector<ZeroMode> modes;
  int n_b = 0;
  int n_f = 0;
  int index = 0;
  /// Only the constructed modes are counted.
  bool lower_bound = true;
};

WittenCensus witten_census(const Superpotential& sp);

enum class Direction { raise, lower };

struct PartnerResult {
  SpinorFunction partner;
  bool singlet;
  EigenReport check;
};

/// Throws SingletError when e <= 1e-10 and ArgumentError when s is not a
/// verified eigenstate at e.
PartnerResult susy_partner(const SpinorFunction& s, Direction d, double e, const Superpotential& sp);

/// max(|Q Q s|, |Q^dag Q^dag s|), coefficient-wise.
double q_nilpotency_check(const SpinorFunction& s, const Superpotential& sp);
/// |1/2 (Q Q^dag + Q^dag Q) s - (-Laplacian + shift) s|, coefficient-wise.
double anticommutator_bulk_check(const SpinorFunction& s, const Superpotential& sp);

/// Random spinor on every Fock state (grade < 0) or on one grade, with
/// 1..terms random exponentials per region.
SpinorFunction random_spinor(int n, std::mt19937_64& rng, int grade = -1, int terms = 2);

struct SigmaCheck {
  int n;
  double residual;
  bool pass;
};

/// Fixed exchange matrices for N = 2 (full Fock space) and N = 3
/// (grade 2); the alternating zero mode must have eigenvalue -1.
SigmaCheck exchange_sigma_check(int n, double c);

nlohmann::json to_json(const SpinorFunction& s);
nlohmann::json to_json(const EigenReport& r);

}  // namespace slly::susy
