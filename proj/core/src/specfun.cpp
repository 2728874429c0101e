#include "coulomb2d/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "coulomb2d/errors.hpp"

namespace coulomb2d::specfun {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr long double kSqrtPiL = 1.77245385090551602729816748334114518L;

// Largest n for which Gamma(n + 1/2) is taken from the exact double factorial.
constexpr unsigned kExactGammaHalfMax = 10;

constexpr std::size_t kLogFactorialTableSize = 4096;

wide_uint gcd(wide_uint a, wide_uint b) {
  while (b != 0) {
    const wide_uint t = a % b;
    a = b;
    b = t;
  }
  return a;
}

const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (std::size_t n = 1; n < t.size(); ++n) {
      acc += std::log(static_cast<long double>(n));
      t[n] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

}  // namespace

wide_uint double_factorial_odd(unsigned n) {
  wide_uint result = 1;
  for (unsigned k = 1; k <= n; ++k) {
    if (__builtin_mul_overflow(result, static_cast<wide_uint>(2 * k - 1),
                               &result)) {
      throw OverflowError("double factorial (2n-1)!! overflows for n = " +
                          std::to_string(n));
    }
  }
  return result;
}

double gamma_half(unsigned n) {
  if (n <= kExactGammaHalfMax) {
    const auto numerator = static_cast<double>(double_factorial_odd(n));
    return std::ldexp(numerator, -static_cast<int>(n)) * kSqrtPi;
  }
  long double value =
      std::ldexp(static_cast<long double>(double_factorial_odd(kExactGammaHalfMax)),
                 -static_cast<int>(kExactGammaHalfMax)) *
      kSqrtPiL;
  for (unsigned k = kExactGammaHalfMax; k < n; ++k) {
    value *= static_cast<long double>(k) + 0.5L;
  }
  return static_cast<double>(value);
}

double log_gamma_half(unsigned n) {
  long double acc = std::log(kSqrtPiL);
  for (unsigned k = 0; k < n; ++k) {
    acc += std::log(static_cast<long double>(k) + 0.5L);
  }
  return static_cast<double>(acc);
}

double log_factorial(unsigned n) {
  const auto& table = log_factorial_table();
  if (n < table.size()) {
    return table[n];
  }
  long double acc = table.back();
  for (std::size_t k = table.size(); k <= n; ++k) {
    acc += std::log(static_cast<long double>(k));
  }
  return static_cast<double>(acc);
}

double beta_half(unsigned k) {
  long double value = kPiL;
  for (unsigned i = 1; i <= k; ++i) {
    value *= (static_cast<long double>(i) - 0.5L) / static_cast<long double>(i);
  }
  return static_cast<double>(value);
}

BetaSequence::BetaSequence(unsigned k_max) {
  values_.reserve(k_max + 1);
  long double value = kPiL;
  values_.push_back(static_cast<double>(value));
  for (unsigned i = 1; i <= k_max; ++i) {
    value *= (static_cast<long double>(i) - 0.5L) / static_cast<long double>(i);
    values_.push_back(static_cast<double>(value));
  }
}

double BetaSequence::at(std::size_t k) const {
  if (k >= values_.size()) {
    throw OutOfRange("BetaSequence index " + std::to_string(k) +
                     " beyond precomputed size " +
                     std::to_string(values_.size()));
  }
  return values_[k];
}

long double hyp2f1_half_ld(unsigned k, unsigned l, long double z) {
  if (l < k) {
    throw DomainError("hyp2f1_half requires l >= k");
  }
  if (!(z >= 0.0L && z < 1.0L)) {
    throw DomainError("hyp2f1_half requires 0 <= z < 1");
  }
  if (z == 0.0L) {
    return 1.0L;
  }
  const long double a = static_cast<long double>(k) + 0.5L;
  const long double b = 0.5L;
  const long double c = static_cast<long double>(l) + 1.0L;

  long double term = 1.0L;
  long double sum = 1.0L;
  for (std::size_t m = 0; m < kHyp2f1MaxTerms; ++m) {
    const auto mm = static_cast<long double>(m);
    term *= (a + mm) * (b + mm) / ((c + mm) * (mm + 1.0L)) * z;
    sum += term;
    if (term < 1e-16L * sum) {
      return sum;
    }
  }
  throw NonConvergence("hyp2f1_half: series did not converge within " +
                       std::to_string(kHyp2f1MaxTerms) +
                       " terms (z too close to 1)");
}

double hyp2f1_half(unsigned k, unsigned l, double z) {
  return static_cast<double>(hyp2f1_half_ld(k, l, z));
}

long double elliptic_K_ld(long double m) {
  if (!(m >= 0.0L && m < 1.0L)) {
    throw DomainError("elliptic_K requires 0 <= m < 1");
  }
  long double a = 1.0L;
  long double b = std::sqrt(1.0L - m);
  const long double tol = 4 * std::numeric_limits<long double>::epsilon();
  for (int it = 0; it < 64 && std::fabs(a - b) > tol * a; ++it) {
    const long double an = 0.5L * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPiL / (2.0L * a);
}

long double elliptic_E_ld(long double m) {
  if (!(m >= 0.0L && m <= 1.0L)) {
    throw DomainError("elliptic_E requires 0 <= m <= 1");
  }
  if (m == 1.0L) {
    return 1.0L;
  }
  // E = K * (1 - sum_n 2^(n-1) c_n^2), c_0^2 = m, c_{n+1} = (a_n - b_n)/2.
  long double a = 1.0L;
  long double b = std::sqrt(1.0L - m);
  long double weight = 0.5L;
  long double acc = weight * m;
  for (int it = 0; it < 64; ++it) {
    const long double c = 0.5L * (a - b);
    if (std::fabs(c) <= std::numeric_limits<long double>::epsilon() * a) {
      break;
    }
    const long double an = 0.5L * (a + b);
    b = std::sqrt(a * b);
    a = an;
    weight *= 2.0L;
    acc += weight * c * c;
  }
  return kPiL / (2.0L * a) * (1.0L - acc);
}

double elliptic_K(double m) { return static_cast<double>(elliptic_K_ld(m)); }

double elliptic_E(double m) { return static_cast<double>(elliptic_E_ld(m)); }

double laguerre(unsigned n, unsigned alpha, double x) {
  if (n == 0) {
    return 1.0;
  }
  const double al = alpha;
  double prev = 1.0;
  double cur = 1.0 + al - x;
  for (unsigned k = 1; k < n; ++k) {
    const double kk = k;
    const double next = ((2.0 * kk + 1.0 + al - x) * cur - (kk + al) * prev) /
                        (kk + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

wide_uint binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) {
    throw DomainError("binomial requires n >= 0");
  }
  if (k < 0 || k > n) {
    return 0;
  }
  if (k > n - k) {
    k = n - k;
  }
  wide_uint result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i, with the division folded in first so that
    // intermediate products stay as small as the exact result allows.
    auto num = static_cast<wide_uint>(n - k + i);
    auto den = static_cast<wide_uint>(i);
    const wide_uint g1 = gcd(result, den);
    result /= g1;
    den /= g1;
    num /= den;  // den now divides num
    if (__builtin_mul_overflow(result, num, &result)) {
      throw OverflowError("binomial(" + std::to_string(n) + ", " +
                          std::to_string(k) + ") exceeds 128 bits");
    }
  }
  return result;
}

double to_double(wide_uint v) noexcept { return static_cast<double>(v); }

}  // namespace coulomb2d::specfun
