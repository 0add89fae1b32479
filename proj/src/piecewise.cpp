#include "slly/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slly/errors.hpp"

namespace slly::piecewise {

namespace {

std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

void check_size(int n) {
  if (n < 1 || n > kMaxParticles)
    throw SizeError("particle count " + std::to_string(n) + " outside [1, " +
                    std::to_string(kMaxParticles) + "]");
}

void check_pair(int n, int a, int b) {
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw ArgumentError("particle index out of range");
  if (a == b) throw ArgumentError("sign of x_a - x_b needs a != b");
}

bool kappa_less(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

// Terms of one region restricted to x_b = x_a, each coefficient weighted by
// weight(kappa) (pass a constant 1 for plain restriction).
template <class Weight>
void restrict_terms(const ExpSum& terms, int a, int b, cplx scale, Weight weight, ExpSum& out) {
  for (const auto& t : terms) {
    ExpTerm r;
    r.coef = scale * t.coef * weight(t.kappa);
    r.kappa.reserve(t.kappa.size() - 1);
    for (int j = 0; j < static_cast<int>(t.kappa.size()); ++j) {
      if (j == b) continue;
      r.kappa.push_back(j == a ? t.kappa[a] + t.kappa[b] : t.kappa[j]);
    }
    out.push_back(std::move(r));
  }
}

}  // namespace

Region::Region(std::vector<int> order) : order_(std::move(order)), rank_(order_.size(), -1) {
  const int n = size();
  check_size(n);
  for (int pos = 0; pos < n; ++pos) {
    const int p = order_[pos];
    if (p < 0 || p >= n || rank_[p] != -1) throw ArgumentError("region order is not a permutation");
    rank_[p] = pos;
  }
}

Region Region::identity(int n) {
  check_size(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return Region(std::move(order));
}

Region Region::from_index(int n, std::size_t idx) {
  check_size(n);
  if (idx >= factorial(n)) throw ArgumentError("region index out of range");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> order;
  order.reserve(n);
  for (int i = n - 1; i >= 0; --i) {
    const std::size_t f = factorial(i);
    const std::size_t digit = idx / f;
    idx %= f;
    order.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return Region(std::move(order));
}

std::size_t Region::index() const {
  const int n = size();
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (order_[j] < order_[i]) ++smaller;
    idx += smaller * factorial(n - 1 - i);
  }
  return idx;
}

bool kappa_close(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].real() - b[i].real()) > kKappaTol) return false;
    if (std::abs(a[i].imag() - b[i].imag()) > kKappaTol) return false;
  }
  return true;
}

ExpSum canonicalize(ExpSum terms) {
  ExpSum out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ExpTerm& o) { return kappa_close(o.kappa, t.kappa); });
    if (it != out.end())
      it->coef += t.coef;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const ExpTerm& t) { return std::abs(t.coef) <= kDropTol; });
  std::sort(out.begin(), out.end(),
            [](const ExpTerm& x, const ExpTerm& y) { return kappa_less(x.kappa, y.kappa); });
  return out;
}

double max_coefficient(const ExpSum& terms) {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, std::abs(t.coef));
  return m;
}

double max_difference(const ExpSum& a, const ExpSum& b) {
  ExpSum diff = a;
  for (const auto& t : b) diff.push_back({-t.coef, t.kappa});
  return max_coefficient(canonicalize(std::move(diff)));
}

RegionFunction::RegionFunction(int n) : n_(n) {
  check_size(n);
  regions_.resize(factorial(n));
}

RegionFunction RegionFunction::constant(int n, cplx value) {
  RegionFunction f(n);
  if (std::abs(value) <= kDropTol) return f;
  for (auto& r : f.regions_) r.push_back({value, std::vector<cplx>(n, 0.0)});
  return f;
}

void RegionFunction::add_term(const Region& r, ExpTerm term) {
  if (r.size() != n_) throw ArgumentError("region dimension mismatch");
  add_term(r.index(), std::move(term));
}

void RegionFunction::add_term(std::size_t region_index, ExpTerm term) {
  if (static_cast<int>(term.kappa.size()) != n_) throw ArgumentError("term dimension mismatch");
  regions_.at(region_index).push_back(std::move(term));
}

void RegionFunction::set_terms(std::size_t region_index, ExpSum terms) {
  for (const auto& t : terms)
    if (static_cast<int>(t.kappa.size()) != n_) throw ArgumentError("term dimension mismatch");
  regions_.at(region_index) = std::move(terms);
}

RegionFunction& RegionFunction::canonicalize() {
  for (auto& r : regions_) r = piecewise::canonicalize(std::move(r));
  return *this;
}

bool RegionFunction::is_zero() const {
  return std::all_of(regions_.begin(), regions_.end(), [](const ExpSum& r) { return r.empty(); });
}

double RegionFunction::max_coefficient() const {
  double m = 0.0;
  for (const auto& r : regions_) m = std::max(m, piecewise::max_coefficient(r));
  return m;
}

RegionFunction& RegionFunction::operator+=(const RegionFunction& rhs) {
  if (rhs.n_ != n_) throw ArgumentError("dimension mismatch in sum");
  for (std::size_t i = 0; i < regions_.size(); ++i)
    regions_[i].insert(regions_[i].end(), rhs.regions_[i].begin(), rhs.regions_[i].end());
  return canonicalize();
}

RegionFunction& RegionFunction::operator-=(const RegionFunction& rhs) {
  if (rhs.n_ != n_) throw ArgumentError("dimension mismatch in difference");
  for (std::size_t i = 0; i < regions_.size(); ++i)
    for (const auto& t : rhs.regions_[i]) regions_[i].push_back({-t.coef, t.kappa});
  return canonicalize();
}

RegionFunction& RegionFunction::operator*=(cplx s) {
  for (auto& r : regions_)
    for (auto& t : r) t.coef *= s;
  return canonicalize();
}

std::vector<Region> enumerate_regions(int n) {
  check_size(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Region> out;
  out.reserve(factorial(n));
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

std::vector<Interface> enumerate_interfaces(int n) {
  std::vector<Interface> out;
  for (const auto& r : enumerate_regions(n)) {
    for (int pos = 0; pos + 1 < n; ++pos) {
      const int p = r.particle_at(pos);
      const int q = r.particle_at(pos + 1);
      if (p > q) continue;  // counted from the other side
      auto swapped = r.order();
      std::swap(swapped[pos], swapped[pos + 1]);
      out.push_back({r, Region(std::move(swapped)), p, q});
    }
  }
  return out;
}

int sign_value(const Region& r, int a, int b) {
  check_pair(r.size(), a, b);
  return r.rank(a) > r.rank(b) ? 1 : -1;
}

RegionFunction differentiate(const RegionFunction& f, int j) {
  if (j < 0 || j >= f.dimension()) throw ArgumentError("derivative index out of range");
  return apply_symbol(f, [j](std::span<const cplx> kappa) { return kappa[j]; });
}

RegionFunction multiply_sign(const RegionFunction& f, int a, int b) {
  check_pair(f.dimension(), a, b);
  return multiply_region_constant(
      f, [a, b](const Region& r) { return cplx(static_cast<double>(sign_value(r, a, b))); });
}

RegionFunction multiply_region_constant(const RegionFunction& f,
                                        const std::function<cplx(const Region&)>& factor) {
  RegionFunction out(f.dimension());
  for (std::size_t i = 0; i < f.region_count(); ++i) {
    const auto& terms = f.terms(i);
    if (terms.empty()) continue;
    const cplx s = factor(Region::from_index(f.dimension(), i));
    ExpSum scaled = terms;
    for (auto& t : scaled) t.coef *= s;
    out.set_terms(i, std::move(scaled));
  }
  return out.canonicalize();
}

RegionFunction apply_symbol(const RegionFunction& f,
                            const std::function<cplx(std::span<const cplx>)>& symbol) {
  RegionFunction out(f.dimension());
  for (std::size_t i = 0; i < f.region_count(); ++i) {
    ExpSum scaled = f.terms(i);
    for (auto& t : scaled) t.coef *= symbol(t.kappa);
    out.set_terms(i, std::move(scaled));
  }
  return out.canonicalize();
}

cplx evaluate(const RegionFunction& f, std::span<const double> x) {
  const int n = f.dimension();
  if (static_cast<int>(x.size()) != n) throw ArgumentError("point dimension mismatch");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return x[i] < x[j]; });
  for (int pos = 0; pos + 1 < n; ++pos) {
    if (x[order[pos + 1]] - x[order[pos]] <= kPointGap)
      throw AmbiguousPointError("point lies on a coincidence hyperplane; pick a side explicitly");
  }
  const Region r(std::move(order));
  cplx sum = 0.0;
  for (const auto& t : f.terms(r)) {
    cplx expo = 0.0;
    for (int j = 0; j < n; ++j) expo += t.kappa[j] * x[j];
    sum += t.coef * std::exp(expo);
  }
  return sum;
}

ExpSum restrict_to_interface(const RegionFunction& f, const Interface& iface, Side side) {
  const Region& r = side == Side::left ? iface.left : iface.right;
  ExpSum out;
  restrict_terms(f.terms(r), iface.a, iface.b, 1.0, [](const auto&) { return cplx(1.0); }, out);
  return canonicalize(std::move(out));
}

double continuity_residual(const RegionFunction& f, const Interface& iface) {
  return max_difference(restrict_to_interface(f, iface, Side::left),
                        restrict_to_interface(f, iface, Side::right));
}

double jump_residual(std::span<const RegionFunction> components, const Interface& iface,
                     const Eigen::MatrixXcd& coupling) {
  const auto m = static_cast<Eigen::Index>(components.size());
  if (coupling.rows() != m || coupling.cols() != m)
    throw ArgumentError("coupling matrix dimension does not match component count");
  for (const auto& f : components) {
    if (continuity_residual(f, iface) > 1e-10)
      throw DiscontinuityError("component is discontinuous across the interface");
  }
  const int a = iface.a;
  const int b = iface.b;
  const auto normal = [a, b](const std::vector<cplx>& k) { return k[a] - k[b]; };
  const auto one = [](const std::vector<cplx>&) { return cplx(1.0); };

  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    ExpSum acc;
    restrict_terms(components[i].terms(iface.right), a, b, 1.0, normal, acc);
    restrict_terms(components[i].terms(iface.left), a, b, -1.0, normal, acc);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (coupling(i, j) == cplx(0.0)) continue;
      restrict_terms(components[j].terms(iface.left), a, b, -coupling(i, j), one, acc);
    }
    worst = std::max(worst, max_coefficient(canonicalize(std::move(acc))));
  }
  return worst;
}

nlohmann::json to_json(const RegionFunction& f) {
  nlohmann::json regions = nlohmann::json::array();
  for (std::size_t i = 0; i < f.region_count(); ++i) {
    const Region r = Region::from_index(f.dimension(), i);
    nlohmann::json order = nlohmann::json::array();
    for (int p : r.order()) order.push_back(p + 1);
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : f.terms(i)) {
      nlohmann::json kappa = nlohmann::json::array();
      for (const auto& k : t.kappa) kappa.push_back({{"re", k.real()}, {"im", k.imag()}});
      terms.push_back({{"re", t.coef.real()}, {"im", t.coef.imag()}, {"kappa", kappa}});
    }
    regions.push_back({{"order", order}, {"terms", terms}});
  }
  return {{"n", f.dimension()}, {"regions", regions}};
}

RegionFunction region_function_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  RegionFunction f(n);
  for (const auto& reg : j.at("regions")) {
    std::vector<int> order;
    for (const auto& p : reg.at("order")) order.push_back(p.get<int>() - 1);
    const Region r(std::move(order));
    for (const auto& t : reg.at("terms")) {
      ExpTerm term{{t.at("re").get<double>(), t.at("im").get<double>()}, {}};
      for (const auto& k : t.at("kappa"))
        term.kappa.emplace_back(k.at("re").get<double>(), k.at("im").get<double>());
      f.add_term(r, std::move(term));
    }
  }
  return f.canonicalize();
}

}  // namespace slly::piecewise
