#pragma once

// Special functions used by the closed-form Coulomb matrix elements:
// half-integer Gamma, the Beta sequence B(1/2, k + 1/2), the Gauss series
// 2F1(k + 1/2, 1/2; l + 1; z), complete elliptic integrals (parameter
// convention, m = k^2), associated Laguerre polynomials and exact binomials.
//
// Everything here is a pure function of its arguments and safe to call
// concurrently.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace coulomb2d::specfun {

/// Unsigned integer type used for exact binomial coefficients.
__extension__ typedef unsigned __int128 wide_uint;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrtPi = 1.77245385090551602729816748334114518;

/// Gamma(n + 1/2). Exact double factorial up to n = 10, running product above.
/// Overflows to +inf for n > 170.
double gamma_half(unsigned n);

/// log Gamma(n + 1/2), accumulated in log space; finite for every n.
double log_gamma_half(unsigned n);

/// (2n - 1)!! as an exact integer; (-1)!! = 1.
wide_uint double_factorial_odd(unsigned n);

/// log(n!) from a cached table.
double log_factorial(unsigned n);

/// B(1/2, k + 1/2), by the recurrence B_k = (k - 1/2)/k * B_{k-1} from B_0 = pi.
double beta_half(unsigned k);

/// Precomputed, read-only prefix of the Beta sequence B(1/2, k + 1/2).
class BetaSequence {
 public:
  explicit BetaSequence(unsigned k_max);

  [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] double at(std::size_t k) const;
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] const std::vector<double>& values() const noexcept {
    return values_;
  }

 private:
  std::vector<double> values_;
};

/// Term cap for hyp2f1_half; hitting it throws NonConvergence.
inline constexpr std::size_t kHyp2f1MaxTerms = 1'000'000;

/// 2F1(k + 1/2, 1/2; l + 1; z) by direct Gauss series, for l >= k and
/// 0 <= z < 1. Stops when the relative increment drops below 1e-16.
/// Throws DomainError on bad arguments and NonConvergence at the term cap.
double hyp2f1_half(unsigned k, unsigned l, double z);

/// Extended-precision variant used where cancellation downstream matters.
long double hyp2f1_half_ld(unsigned k, unsigned l, long double z);

/// Complete elliptic integral of the first kind K(m), 0 <= m < 1, by AGM.
double elliptic_K(double m);

/// Complete elliptic integral of the second kind E(m), 0 <= m <= 1, by AGM.
double elliptic_E(double m);

long double elliptic_K_ld(long double m);
long double elliptic_E_ld(long double m);

/// Associated Laguerre polynomial L_n^alpha(x) by upward three-term recurrence.
double laguerre(unsigned n, unsigned alpha, double x);

/// Exact binomial coefficient C(n, k); 0 when k < 0 or k > n.
/// Throws OverflowError if the result does not fit wide_uint.
wide_uint binomial(std::int64_t n, std::int64_t k);

/// Lossy conversion helper for logging and tests.
double to_double(wide_uint v) noexcept;

}  // namespace coulomb2d::specfun
