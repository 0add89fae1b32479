#pragma once

// Fermionic Fock space of N modes with exact Gaussian-integer operators.
// Mode j (0-based) is bit j of the occupation mask. Basis states are sorted
// by grade and then by mask value, which is the same as sorting by the
// descending list of occupied indices.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace slly::fock {

using cplx = std::complex<double>;
using Mask = std::uint32_t;

inline constexpr int kMaxModes = 12;
inline constexpr int kMaxGammaModes = 10;

struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  bool is_zero() const { return re == 0 && im == 0; }
  cplx value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
  GaussInt conj() const { return {re, -im}; }

  friend bool operator==(const GaussInt&, const GaussInt&) = default;
  friend GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussInt operator-(GaussInt a) { return {-a.re, -a.im}; }
  friend GaussInt operator*(GaussInt a, GaussInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

inline constexpr GaussInt kOne{1, 0};
inline constexpr GaussInt kImag{0, 1};

int grade_of(Mask m);
/// (-1)^{number of occupied modes below j}.
int jw_sign(Mask m, int j);

class FockBasis {
public:
  explicit FockBasis(int n);

  int modes() const { return n_; }
  std::size_t dim() const { return states_.size(); }
  Mask state(std::size_t i) const { return states_[i]; }
  std::size_t index_of(Mask m) const { return index_[m]; }
  std::size_t grade_offset(int g) const { return offsets_[g]; }
  std::size_t grade_size(int g) const { return offsets_[g + 1] - offsets_[g]; }
  /// Masks of one grade in basis order.
  std::vector<Mask> grade_states(int g) const;

private:
  int n_;
  std::vector<Mask> states_;
  std::vector<std::size_t> index_;
  std::vector<std::size_t> offsets_;
};

/// Sparse 2^N x 2^N matrix in the FockBasis order.
class FockOperator {
public:
  using Row = std::vector<std::pair<std::uint32_t, GaussInt>>;

  explicit FockOperator(int n);
  static FockOperator identity(int n);

  int modes() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_[i]; }
  GaussInt entry(std::size_t i, std::size_t j) const;
  std::size_t nonzeros() const;

  /// Accumulate into (i, j); rows stay sorted.
  void add(std::size_t i, std::size_t j, GaussInt v);

  FockOperator adjoint() const;
  bool is_zero() const;
  bool is_hermitian() const { return *this == adjoint(); }
  GaussInt trace() const;
  Eigen::MatrixXcd dense() const;

  friend bool operator==(const FockOperator&, const FockOperator&) = default;
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(GaussInt s, const FockOperator& a);

private:
  int n_;
  std::vector<Row> rows_;
};

enum class Parity { even, odd, mixed };

FockOperator annihilation(int j, int n);
FockOperator creation(int j, int n);
FockOperator fermi_number(int n);
FockOperator bose_number(int n);
FockOperator klein_f(int n);
FockOperator klein_b(int n);

/// gamma^j = b_j + b_j^dag and gamma^{N+j} = i(b_j - b_j^dag), j = 0..N-1.
std::vector<FockOperator> gamma_matrices(int n);

/// S_kl = -i(b_k^dag b_l - b_l^dag b_k).
FockOperator spin_operator(int k, int l, int n);

/// I - n_a - n_b + b_a^dag b_b + b_b^dag b_a; the coefficient of
/// delta(x_a - x_b) in the super-Hamiltonian is 2c times this.
FockOperator delta_pattern(int a, int b, int n);

struct DeltaCoupling {
  FockOperator pattern;
  double scale;  // 2c

  Eigen::MatrixXcd dense() const { return scale * pattern.dense(); }
  Eigen::MatrixXcd block(int grade) const;
};

DeltaCoupling delta_coupling(int a, int b, double c, int n);

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);
Parity parity(const FockOperator& op);

/// Grade-g diagonal block; throws GradingError unless [op, F] = 0 exactly.
Eigen::MatrixXcd grade_project(const FockOperator& op, int grade);

nlohmann::json to_json(const Eigen::MatrixXcd& block);

}  // namespace slly::fock
