#include "coulomb2d/elements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "coulomb2d/errors.hpp"
#include "coulomb2d/specfun.hpp"

namespace coulomb2d {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int to_cpp_int(specfun::wide_uint v) {
  cpp_int hi = static_cast<std::uint64_t>(v >> 64);
  cpp_int lo = static_cast<std::uint64_t>(v);
  return (hi << 64) | lo;
}

// Sorted quantum numbers of the (1,4) and (2,3) pairs on one axis.
struct AxisPairs {
  unsigned p14, m14, p23, m23;
  unsigned n2_plus_n3;

  static AxisPairs from(unsigned n1, unsigned n2, unsigned n3, unsigned n4) {
    return {std::max(n1, n4), std::min(n1, n4), std::max(n2, n3),
            std::min(n2, n3), n2 + n3};
  }

  [[nodiscard]] unsigned twice_s() const { return p14 - m14 + p23 - m23; }
  [[nodiscard]] unsigned s() const { return twice_s() / 2; }
  [[nodiscard]] unsigned extent() const { return s() + m14 + m23; }

  [[nodiscard]] std::uint64_t key() const {
    return (std::uint64_t{p14} << 48) | (std::uint64_t{m14} << 32) |
           (std::uint64_t{p23} << 16) | std::uint64_t{m23};
  }
};

// c[a] for p = s + a, a = 0 .. m14 + m23:
//   c[a] = sum_{k + k' = a} (-1)^a / (k! k'!) C(p14, m14 - k) C(p23, m23 - k')
//          * (2p - 1)!! / 2^p
// so that Gamma(p + 1/2) = c-factor * sqrt(pi). Accumulated as an exact
// rational and rounded once.
std::vector<double> exact_axis_coefficients(const AxisPairs& ax) {
  const unsigned s = ax.s();
  std::vector<cpp_rational> acc(ax.m14 + ax.m23 + 1u, cpp_rational(0));

  std::vector<cpp_int> factorial(std::max(ax.m14, ax.m23) + 1u);
  factorial[0] = 1;
  for (std::size_t n = 1; n < factorial.size(); ++n) {
    factorial[n] = factorial[n - 1] * static_cast<unsigned>(n);
  }

  for (unsigned k = 0; k <= ax.m14; ++k) {
    const cpp_int b14 = to_cpp_int(specfun::binomial(ax.p14, ax.m14 - k));
    for (unsigned kp = 0; kp <= ax.m23; ++kp) {
      const cpp_int b23 = to_cpp_int(specfun::binomial(ax.p23, ax.m23 - kp));
      cpp_rational term(b14 * b23, factorial[k] * factorial[kp]);
      if ((k + kp) % 2 == 1) {
        term = -term;
      }
      acc[k + kp] += term;
    }
  }

  std::vector<double> out(acc.size());
  cpp_int double_factorial = 1;  // (2p - 1)!! for p = s + a
  for (unsigned p = 1; p <= s; ++p) {
    double_factorial *= 2 * p - 1;
  }
  for (std::size_t a = 0; a < acc.size(); ++a) {
    const unsigned p = s + static_cast<unsigned>(a);
    if (a > 0) {
      double_factorial *= 2 * p - 1;
    }
    const cpp_rational gamma_ratio(double_factorial, cpp_int(1) << p);
    out[a] = static_cast<double>(acc[a] * gamma_ratio);
  }
  return out;
}

const std::vector<double>& axis_coefficients(const AxisPairs& ax) {
  thread_local std::unordered_map<std::uint64_t, std::vector<double>> cache;
  const auto key = ax.key();
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, exact_axis_coefficients(ax)).first;
  }
  return it->second;
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

ElementIndex swap14(const ElementIndex& v) {
  return {{v[3], v[1], v[2], v[0]}};
}
ElementIndex swap23(const ElementIndex& v) {
  return {{v[0], v[2], v[1], v[3]}};
}
ElementIndex exchange(const ElementIndex& v) {
  return {{v[1], v[0], v[3], v[2]}};
}

std::array<ElementIndex, 8> orbit_members(const ElementIndex& idx) {
  const ElementIndex a = idx;
  const ElementIndex b = swap14(a);
  const ElementIndex c = swap23(a);
  const ElementIndex d = swap23(b);
  return {a, b, c, d, exchange(a), exchange(b), exchange(c), exchange(d)};
}

}  // namespace

double Geometry::gamma() const noexcept {
  return ax >= ay ? ay / ax : ax / ay;
}

void Geometry::validate() const {
  if (!(ax > 0.0 && std::isfinite(ax) && ay > 0.0 && std::isfinite(ay))) {
    throw DomainError("oscillator lengths must be positive and finite");
  }
  if (!std::isfinite(xi)) {
    throw DomainError("coupling xi must be finite");
  }
  if (gamma() < kMinGamma) {
    throw DomainError("eccentricity " + std::to_string(gamma()) +
                      " below supported minimum " + std::to_string(kMinGamma));
  }
}

ElementIndex ElementIndex::transposed() const noexcept {
  ElementIndex out;
  for (std::size_t k = 0; k < 4; ++k) {
    out.orbitals[k] = orbitals[k].transposed();
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Orbital& o) {
  return os << '(' << o.nx << ',' << o.ny << ')';
}

std::ostream& operator<<(std::ostream& os, const ElementIndex& idx) {
  return os << idx[0] << idx[1] << idx[2] << idx[3];
}

bool selection_rule(const ElementIndex& idx) noexcept {
  auto diff = [](unsigned a, unsigned b) { return a > b ? a - b : b - a; };
  const unsigned sx = diff(idx[0].nx, idx[3].nx) + diff(idx[1].nx, idx[2].nx);
  const unsigned sy = diff(idx[0].ny, idx[3].ny) + diff(idx[1].ny, idx[2].ny);
  return sx % 2 == 0 && sy % 2 == 0;
}

std::array<unsigned, 2> required_kernel_extent(const Geometry& geom,
                                               const ElementIndex& idx) noexcept {
  const ElementIndex c = geom.axes_swapped() ? idx.transposed() : idx;
  unsigned sum_x = 0;
  unsigned sum_y = 0;
  for (const auto& o : c.orbitals) {
    sum_x += o.nx;
    sum_y += o.ny;
  }
  // s + m14 + m23 = (n1 + n2 + n3 + n4) / 2 on each axis.
  return {sum_x / 2, sum_y / 2};
}

double element(const Geometry& geom, const ElementIndex& idx,
               const KernelTable& table) {
  geom.validate();
  const double gamma = geom.gamma();
  if (std::fabs(table.gamma() - gamma) >
      4 * std::numeric_limits<double>::epsilon() * gamma) {
    throw DomainError("kernel table built for gamma " +
                      std::to_string(table.gamma()) + " but geometry has " +
                      std::to_string(gamma));
  }
  if (!selection_rule(idx)) {
    return 0.0;
  }

  // Internally the x axis carries the larger oscillator length.
  const bool swapped = geom.axes_swapped();
  const ElementIndex c = swapped ? idx.transposed() : idx;
  const double a_long = swapped ? geom.ay : geom.ax;

  const auto x = AxisPairs::from(c[0].nx, c[1].nx, c[2].nx, c[3].nx);
  const auto y = AxisPairs::from(c[0].ny, c[1].ny, c[2].ny, c[3].ny);
  if (x.extent() > table.i_max() || y.extent() > table.j_max()) {
    throw CapacityError("kernel table extent (" +
                        std::to_string(table.i_max()) + ", " +
                        std::to_string(table.j_max()) + ") too small; need (" +
                        std::to_string(x.extent()) + ", " +
                        std::to_string(y.extent()) + ")");
  }

  const auto& cx = axis_coefficients(x);
  const auto& cy = axis_coefficients(y);
  const unsigned sx = x.s();
  const unsigned sy = y.s();

  CompensatedSum sum;
  for (std::size_t a = 0; a < cx.size(); ++a) {
    for (std::size_t b = 0; b < cy.size(); ++b) {
      sum.add(cx[a] * cy[b] *
              table(sx + static_cast<unsigned>(a), sy + static_cast<unsigned>(b)));
    }
  }

  const double log_ratio =
      specfun::log_factorial(x.m14) + specfun::log_factorial(y.m14) +
      specfun::log_factorial(x.m23) + specfun::log_factorial(y.m23) -
      specfun::log_factorial(x.p14) - specfun::log_factorial(y.p14) -
      specfun::log_factorial(x.p23) - specfun::log_factorial(y.p23);
  const bool negative = (sx + sy + x.n2_plus_n3 + y.n2_plus_n3) % 2 == 1;

  // xi / (a sqrt(2 pi^3)) times pi from the two sqrt(pi) Gamma factors.
  const double prefactor = geom.xi / a_long /
                           std::sqrt(2.0 * specfun::kPi) *
                           std::exp(0.5 * log_ratio);
  const double value = prefactor * sum.value();
  return negative ? -value : value;
}

double element(const Geometry& geom, const ElementIndex& idx) {
  geom.validate();
  const auto [i_max, j_max] = required_kernel_extent(geom, idx);
  const KernelTable table = KernelTable::fill(geom.gamma(), i_max, j_max);
  return element(geom, idx, table);
}

std::vector<ElementIndex> symmetry_orbit(const ElementIndex& idx) {
  const auto members = orbit_members(idx);
  std::vector<ElementIndex> out(members.begin(), members.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ElementIndex canonicalize(const ElementIndex& idx) noexcept {
  const auto members = orbit_members(idx);
  return *std::min_element(members.begin(), members.end());
}

}  // namespace coulomb2d
