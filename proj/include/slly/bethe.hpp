#pragma once

#include <complex>
#include <span>
#include <vector>

#include "slly/piecewise.hpp"

namespace slly::bethe {

using cplx = std::complex<double>;
using piecewise::RegionFunction;

/// Denominators of S at or below this magnitude are treated as poles.
inline constexpr double kPoleTol = 1e-14;

/// Momenta k_1..k_N; collision states want them real and strictly decreasing.
using MomentumSet = std::vector<cplx>;

/// S(ki, kj) = (i(kj - ki) - c) / (i(kj - ki) + c).
cplx s_matrix(cplx ki, cplx kj, double c);

/// theta(k) = pi - 2 atan(k / c), so that exp(i theta(kj - ki)) = S(ki, kj).
double phase_shift(double k, double c);

/// alpha(P) for every permutation P of the momentum labels, indexed like
/// piecewise::Region::index() (the permutation is stored as a Region).
struct BetheCoefficients {
  int n = 0;
  std::vector<cplx> alpha;

  cplx at(const std::vector<int>& perm) const;
};

/// alpha(identity) = 1 and alpha(P) = prod of S(k_a, k_b) over the label
/// pairs a < b that P puts in reversed order.
BetheCoefficients bethe_coefficients(std::span<const cplx> k, double c);

struct PathResult {
  std::vector<int> perm;
  cplx alpha;
};

/// Walk from the identity through adjacent swaps (swap positions i, i+1 for
/// each entry), multiplying by S(k_{P_i}, k_{P_{i+1}}) at each step.
PathResult coefficient_along_path(std::span<const cplx> k, double c, std::span<const int> swaps);

/// |S12 S13 S23 - S23 S13 S12|.
double yang_baxter_residual(cplx ka, cplx kb, cplx kc, double c);

/// psi_Q = sum_P alpha(P) exp(i sum_j k_{P_j} x_{Q_j}) on every region Q.
/// Works for complex strings as long as no pair a < b hits a pole.
RegionFunction bethe_state(std::span<const cplx> k, double c);

/// Real, strictly decreasing k; c != 0.
RegionFunction collision_state(std::span<const double> k, double c);

struct BoundState {
  RegionFunction psi;
  MomentumSet k;
  double energy;
};

/// exp(iP(x1+x2)) exp(-|c|/2 |x1-x2|), c < 0.
BoundState dimer_state(double p, double c);
/// exp(3iPX) exp(-|c|/2 sum_{j<l} |x_j-x_l|), c < 0.
BoundState trimer_state(double p, double c);
/// Dimer with momentum P plus a free particle with momentum Q, c < 0, P != Q.
BoundState monomer_dimer_state(double p, double q, double c);

/// exp(-|c|/2 sum_{j<l} |x_j - x_l|): one real exponential per region.
RegionFunction nmer_ground(int n, double c);

/// sum k_j^2; throws DomainError if the imaginary part exceeds 1e-12.
double energy(std::span<const cplx> k);
cplx conserved_charge(int power, std::span<const cplx> k);

/// max over all terms of |-sum kappa^2 - e|.
double bulk_energy_residual(const RegionFunction& f, double e);
/// max over all terms of |sum_j (-i kappa_j)^power - value|.
double bulk_charge_residual(const RegionFunction& f, int power, cplx value);

struct InterfaceReport {
  double continuity = 0.0;
  double jump = 0.0;
  int interfaces = 0;
};

/// Worst continuity and scalar jump residual (C = [2c]) over all interfaces.
InterfaceReport check_interfaces(const RegionFunction& f, double c);

}  // namespace slly::bethe
