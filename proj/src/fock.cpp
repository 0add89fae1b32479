#include "slly/fock.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "slly/errors.hpp"

namespace slly::fock {

namespace {

void check_modes(int n, int limit) {
  if (n < 1 || n > limit)
    throw SizeError("mode count " + std::to_string(n) + " outside [1, " + std::to_string(limit) + "]");
}

void check_mode(int j, int n) {
  if (j < 0 || j >= n) throw ArgumentError("mode index out of range");
}

// Diagonal operator with entry f(mask).
template <class F>
FockOperator diagonal(int n, F f) {
  check_modes(n, kMaxModes);
  const FockBasis basis(n);
  FockOperator op(n);
  for (std::size_t i = 0; i < basis.dim(); ++i) op.add(i, i, f(basis.state(i)));
  return op;
}

}  // namespace

int grade_of(Mask m) { return std::popcount(m); }

int jw_sign(Mask m, int j) { return (std::popcount(m & ((Mask{1} << j) - 1)) % 2 == 0) ? 1 : -1; }

FockBasis::FockBasis(int n) : n_(n) {
  check_modes(n, kMaxModes);
  const Mask count = Mask{1} << n;
  states_.reserve(count);
  index_.assign(count, 0);
  offsets_.assign(n + 2, 0);
  for (int g = 0; g <= n; ++g) {
    offsets_[g] = states_.size();
    for (Mask m = 0; m < count; ++m)
      if (grade_of(m) == g) {
        index_[m] = states_.size();
        states_.push_back(m);
      }
  }
  offsets_[n + 1] = states_.size();
}

std::vector<Mask> FockBasis::grade_states(int g) const {
  if (g < 0 || g > n_) throw ArgumentError("grade out of range");
  return {states_.begin() + static_cast<std::ptrdiff_t>(offsets_[g]),
          states_.begin() + static_cast<std::ptrdiff_t>(offsets_[g + 1])};
}

FockOperator::FockOperator(int n) : n_(n) {
  check_modes(n, kMaxModes);
  rows_.resize(std::size_t{1} << n);
}

FockOperator FockOperator::identity(int n) {
  FockOperator op(n);
  for (std::size_t i = 0; i < op.dim(); ++i) op.add(i, i, kOne);
  return op;
}

GaussInt FockOperator::entry(std::size_t i, std::size_t j) const {
  const auto& r = rows_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t col) { return e.first < col; });
  return (it != r.end() && it->first == j) ? it->second : GaussInt{};
}

std::size_t FockOperator::nonzeros() const {
  std::size_t nz = 0;
  for (const auto& r : rows_) nz += r.size();
  return nz;
}

void FockOperator::add(std::size_t i, std::size_t j, GaussInt v) {
  if (v.is_zero()) return;
  auto& r = rows_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t col) { return e.first < col; });
  if (it != r.end() && it->first == j) {
    it->second = it->second + v;
    if (it->second.is_zero()) r.erase(it);
  } else {
    r.insert(it, {static_cast<std::uint32_t>(j), v});
  }
}

FockOperator FockOperator::adjoint() const {
  FockOperator out(n_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, v] : rows_[i]) out.rows_[j].push_back({static_cast<std::uint32_t>(i), v.conj()});
  return out;  // rows filled in increasing i, so already sorted
}

bool FockOperator::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.empty(); });
}

GaussInt FockOperator::trace() const {
  GaussInt t;
  for (std::size_t i = 0; i < rows_.size(); ++i) t = t + entry(i, i);
  return t;
}

Eigen::MatrixXcd FockOperator::dense() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, v] : rows_[i]) m(static_cast<Eigen::Index>(i), j) = v.value();
  return m;
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  if (a.n_ != b.n_) throw ArgumentError("mode count mismatch");
  FockOperator out = a;
  for (std::size_t i = 0; i < b.rows_.size(); ++i)
    for (const auto& [j, v] : b.rows_[i]) out.add(i, j, v);
  return out;
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  return a + GaussInt{-1, 0} * b;
}

FockOperator operator*(GaussInt s, const FockOperator& a) {
  FockOperator out(a.n_);
  if (s.is_zero()) return out;
  for (std::size_t i = 0; i < a.rows_.size(); ++i)
    for (const auto& [j, v] : a.rows_[i]) out.rows_[i].push_back({j, s * v});
  return out;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  if (a.n_ != b.n_) throw ArgumentError("mode count mismatch");
  FockOperator out(a.n_);
  std::vector<GaussInt> acc(a.dim());
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(a.dim(), 0);
  for (std::size_t i = 0; i < a.rows_.size(); ++i) {
    touched.clear();
    for (const auto& [k, va] : a.rows_[i]) {
      for (const auto& [j, vb] : b.rows_[k]) {
        if (!mark[j]) {
          mark[j] = 1;
          touched.push_back(j);
        }
        acc[j] = acc[j] + va * vb;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto j : touched) {
      if (!acc[j].is_zero()) out.rows_[i].push_back({j, acc[j]});
      acc[j] = {};
      mark[j] = 0;
    }
  }
  return out;
}

FockOperator annihilation(int j, int n) {
  check_modes(n, kMaxModes);
  check_mode(j, n);
  const FockBasis basis(n);
  FockOperator op(n);
  const Mask bit = Mask{1} << j;
  for (std::size_t col = 0; col < basis.dim(); ++col) {
    const Mask m = basis.state(col);
    if (!(m & bit)) continue;
    op.add(basis.index_of(m ^ bit), col, {jw_sign(m, j), 0});
  }
  return op;
}

FockOperator creation(int j, int n) { return annihilation(j, n).adjoint(); }

FockOperator fermi_number(int n) {
  return diagonal(n, [](Mask m) { return GaussInt{grade_of(m), 0}; });
}

FockOperator bose_number(int n) {
  return diagonal(n, [n](Mask m) { return GaussInt{n - grade_of(m), 0}; });
}

FockOperator klein_f(int n) {
  return diagonal(n, [](Mask m) { return GaussInt{grade_of(m) % 2 == 0 ? 1 : -1, 0}; });
}

FockOperator klein_b(int n) {
  return diagonal(n, [n](Mask m) { return GaussInt{(n - grade_of(m)) % 2 == 0 ? 1 : -1, 0}; });
}

std::vector<FockOperator> gamma_matrices(int n) {
  check_modes(n, kMaxGammaModes);
  std::vector<FockOperator> first;
  std::vector<FockOperator> second;
  for (int j = 0; j < n; ++j) {
    const FockOperator b = annihilation(j, n);
    const FockOperator bd = b.adjoint();
    first.push_back(b + bd);
    second.push_back(kImag * (b - bd));
  }
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

FockOperator spin_operator(int k, int l, int n) {
  check_modes(n, kMaxModes);
  check_mode(k, n);
  check_mode(l, n);
  if (k == l) throw ArgumentError("spin operator needs k != l");
  const FockOperator x = creation(k, n) * annihilation(l, n) - creation(l, n) * annihilation(k, n);
  return GaussInt{0, -1} * x;
}

FockOperator delta_pattern(int a, int b, int n) {
  check_modes(n, kMaxModes);
  check_mode(a, n);
  check_mode(b, n);
  if (a == b) throw ArgumentError("delta coupling needs a != b");
  const FockOperator ba = annihilation(a, n);
  const FockOperator bb = annihilation(b, n);
  const FockOperator bad = ba.adjoint();
  const FockOperator bbd = bb.adjoint();
  return FockOperator::identity(n) - bad * ba - bbd * bb + bad * bb + bbd * ba;
}

DeltaCoupling delta_coupling(int a, int b, double c, int n) {
  return {delta_pattern(a, b, n), 2.0 * c};
}

Eigen::MatrixXcd DeltaCoupling::block(int grade) const { return scale * grade_project(pattern, grade); }

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) { return a * b + b * a; }

Parity parity(const FockOperator& op) {
  const FockOperator k = klein_f(op.modes());
  const FockOperator conj = k * op * k;
  if (conj == op) return Parity::even;
  if (conj == GaussInt{-1, 0} * op) return Parity::odd;
  return Parity::mixed;
}

Eigen::MatrixXcd grade_project(const FockOperator& op, int grade) {
  const int n = op.modes();
  if (grade < 0 || grade > n) throw ArgumentError("grade out of range");
  if (!commutator(op, fermi_number(n)).is_zero())
    throw GradingError("operator does not preserve fermion number");
  const FockBasis basis(n);
  const auto off = basis.grade_offset(grade);
  const auto size = static_cast<Eigen::Index>(basis.grade_size(grade));
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (const auto& [j, v] : op.row(off + static_cast<std::size_t>(i)))
      block(i, static_cast<Eigen::Index>(j - off)) = v.value();
  return block;
}

nlohmann::json to_json(const Eigen::MatrixXcd& block) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < block.cols(); ++j)
      row.push_back({{"re", block(i, j).real()}, {"im", block(i, j).imag()}});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace slly::fock
