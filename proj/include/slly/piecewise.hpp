#pragma once

// Exact calculus for sums of complex exponentials living on the ordering
// chambers of R^N cut out by the hyperplanes x_a = x_b.
//
// Particle indices are 0-based throughout the C++ API; the JSON shape and
// the CLI use 1-based indices.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace slly::piecewise {

using cplx = std::complex<double>;

/// Two exponents are the same if every component agrees within this.
inline constexpr double kKappaTol = 1e-12;
/// Coefficients at or below this magnitude are dropped.
inline constexpr double kDropTol = 1e-14;
/// Minimum pairwise gap for a point to count as interior to a region.
inline constexpr double kPointGap = 1e-9;
inline constexpr int kMaxParticles = 10;

/// One ordering chamber x_{order[0]} < x_{order[1]} < ... .
class Region {
public:
  explicit Region(std::vector<int> order);

  static Region identity(int n);
  /// Inverse of index(): the idx-th permutation in lexicographic order.
  static Region from_index(int n, std::size_t idx);

  int size() const { return static_cast<int>(order_.size()); }
  const std::vector<int>& order() const { return order_; }
  int particle_at(int position) const { return order_[position]; }
  /// Position (0-based) of `particle` from the left.
  int rank(int particle) const { return rank_[particle]; }
  /// Lexicographic rank of the permutation among all n! of them.
  std::size_t index() const;

  friend bool operator==(const Region&, const Region&) = default;
  friend auto operator<=>(const Region& a, const Region& b) { return a.order_ <=> b.order_; }

private:
  std::vector<int> order_;
  std::vector<int> rank_;
};

/// coef * exp(sum_j kappa_j x_j)
struct ExpTerm {
  cplx coef;
  std::vector<cplx> kappa;
};

/// A list of ExpTerm over a common variable set; canonical once merged.
using ExpSum = std::vector<ExpTerm>;

bool kappa_close(std::span<const cplx> a, std::span<const cplx> b);

/// Merge terms with matching exponents, drop negligible coefficients and
/// sort by exponent. Idempotent.
ExpSum canonicalize(ExpSum terms);

/// Largest coefficient magnitude of canonicalize(a - b).
double max_difference(const ExpSum& a, const ExpSum& b);
double max_coefficient(const ExpSum& terms);

class RegionFunction {
public:
  /// The zero function on R^n.
  explicit RegionFunction(int n);

  static RegionFunction constant(int n, cplx value);

  int dimension() const { return n_; }
  std::size_t region_count() const { return regions_.size(); }

  const ExpSum& terms(const Region& r) const { return regions_[r.index()]; }
  const ExpSum& terms(std::size_t region_index) const { return regions_[region_index]; }

  /// Append without merging; call canonicalize() afterwards.
  void add_term(const Region& r, ExpTerm term);
  void add_term(std::size_t region_index, ExpTerm term);
  void set_terms(std::size_t region_index, ExpSum terms);

  RegionFunction& canonicalize();
  bool is_zero() const;
  double max_coefficient() const;

  RegionFunction& operator+=(const RegionFunction& rhs);
  RegionFunction& operator-=(const RegionFunction& rhs);
  RegionFunction& operator*=(cplx s);

  friend RegionFunction operator+(RegionFunction a, const RegionFunction& b) { return a += b; }
  friend RegionFunction operator-(RegionFunction a, const RegionFunction& b) { return a -= b; }
  friend RegionFunction operator*(RegionFunction a, cplx s) { return a *= s; }
  friend RegionFunction operator*(cplx s, RegionFunction a) { return a *= s; }

private:
  int n_;
  std::vector<ExpSum> regions_;
};

/// Shared boundary between two regions that differ by swapping the
/// adjacent particles a < b. On `left` x_a < x_b, on `right` x_b < x_a.
struct Interface {
  Region left;
  Region right;
  int a;
  int b;
};

enum class Side { left, right };

std::vector<Region> enumerate_regions(int n);
std::vector<Interface> enumerate_interfaces(int n);

/// Sign of x_a - x_b on r.
int sign_value(const Region& r, int a, int b);

RegionFunction differentiate(const RegionFunction& f, int j);
RegionFunction multiply_sign(const RegionFunction& f, int a, int b);
/// Multiply every region by a constant that depends only on the region.
RegionFunction multiply_region_constant(const RegionFunction& f,
                                        const std::function<cplx(const Region&)>& factor);
/// Replace each coefficient by coef * g(kappa); used for constant-coefficient
/// differential operators acting termwise.
RegionFunction apply_symbol(const RegionFunction& f,
                            const std::function<cplx(std::span<const cplx>)>& symbol);

cplx evaluate(const RegionFunction& f, std::span<const double> x);

/// Substitute x_b := x_a on the chosen side. The result lives in the n-1
/// variables (x_0, ..., x_n) with x_b removed.
ExpSum restrict_to_interface(const RegionFunction& f, const Interface& iface, Side side);

double continuity_residual(const RegionFunction& f, const Interface& iface);

/// Residual of the generalized derivative-jump condition
///   [(d_a - d_b) F]_{right} - [(d_a - d_b) F]_{left} = C F|_iface.
/// Every component must be continuous across the interface.
double jump_residual(std::span<const RegionFunction> components, const Interface& iface,
                     const Eigen::MatrixXcd& coupling);

nlohmann::json to_json(const RegionFunction& f);
RegionFunction region_function_from_json(const nlohmann::json& j);

}  // namespace slly::piecewise
