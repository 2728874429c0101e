#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "coulomb2d/errors.hpp"
#include "coulomb2d/specfun.hpp"
#include "oracles.hpp"

namespace sf = coulomb2d::specfun;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST(GammaHalf, SmallArguments) {
  EXPECT_DOUBLE_EQ(sf::gamma_half(0), std::sqrt(pi));
  EXPECT_DOUBLE_EQ(sf::gamma_half(1), std::sqrt(pi) / 2);
  EXPECT_DOUBLE_EQ(sf::gamma_half(3), 15 * std::sqrt(pi) / 8);
  EXPECT_NEAR(sf::gamma_half(3), 3.3233509705, 1e-10);
}

TEST(GammaHalf, MatchesTgamma) {
  for (unsigned n = 0; n <= 60; ++n) {
    EXPECT_LT(rel(sf::gamma_half(n), std::tgamma(n + 0.5)), 1e-14) << n;
    EXPECT_LT(std::fabs(sf::log_gamma_half(n) - std::lgamma(n + 0.5)),
              1e-13 * (1 + std::fabs(std::lgamma(n + 0.5))))
        << n;
  }
}

TEST(GammaHalf, RatioWithinOneUlp) {
  for (unsigned n = 0; n <= 30; ++n) {
    const double ratio = sf::gamma_half(n + 1) / sf::gamma_half(n);
    const double expected = n + 0.5;
    const double ulp = std::nextafter(expected, 2 * expected) - expected;
    EXPECT_LE(std::fabs(ratio - expected), ulp) << n;
  }
}

TEST(BetaHalf, FirstValues) {
  EXPECT_DOUBLE_EQ(sf::beta_half(0), pi);
  EXPECT_DOUBLE_EQ(sf::beta_half(1), pi / 2);
  EXPECT_DOUBLE_EQ(sf::beta_half(2), 3 * pi / 8);
}

TEST(BetaHalf, GammaIdentityAndMonotone) {
  const sf::BetaSequence seq(40);
  for (unsigned k = 0; k <= 40; ++k) {
    const double via_gamma =
        std::sqrt(pi) * sf::gamma_half(k) / std::tgamma(k + 1.0);
    EXPECT_LT(rel(sf::beta_half(k), via_gamma), 1e-14) << k;
    EXPECT_EQ(seq[k], sf::beta_half(k));
    EXPECT_GT(seq[k], 0.0);
    if (k > 0) EXPECT_LT(seq[k], seq[k - 1]);
  }
  EXPECT_THROW((void)seq.at(41), coulomb2d::OutOfRange);
}

TEST(Hyp2f1Half, ZeroArgument) { EXPECT_EQ(sf::hyp2f1_half(0, 0, 0.0), 1.0); }

TEST(Hyp2f1Half, EllipticIdentity) {
  // 2F1(1/2, 1/2; 1; m) = (2/pi) K(m); reference from an independent
  // 50-digit evaluation.
  EXPECT_LT(rel(sf::hyp2f1_half(0, 0, 0.36), 1.1145644874839037445), 1e-15);
  for (const double m : {0.0, 0.19, 0.36, 0.64, 0.91, 0.99}) {
    EXPECT_LT(rel(pi * sf::hyp2f1_half(0, 0, m), 2 * sf::elliptic_K(m)), 1e-12)
        << m;
  }
}

TEST(Hyp2f1Half, MatchesIndependentSeries) {
  EXPECT_LT(rel(sf::hyp2f1_half(1, 2, 0.5), 1.1672458787974449172), 1e-15);
  EXPECT_LT(rel(sf::hyp2f1_half(1, 2, 0.5),
                static_cast<double>(testing_oracles::hyp2f1_terms(1.5L, 0.5L, 3.0L, 0.5L))),
            1e-14);
  for (unsigned k = 0; k <= 6; ++k) {
    for (unsigned l = k; l <= 12; l += 3) {
      const double oracle = static_cast<double>(testing_oracles::hyp2f1_terms(
          k + 0.5L, 0.5L, l + 1.0L, 0.3L));
      EXPECT_LT(rel(sf::hyp2f1_half(k, l, 0.3), oracle), 1e-14) << k << ' ' << l;
    }
  }
}

TEST(Hyp2f1Half, Errors) {
  EXPECT_THROW((void)sf::hyp2f1_half(2, 1, 0.5), coulomb2d::DomainError);
  EXPECT_THROW((void)sf::hyp2f1_half(0, 0, 1.0), coulomb2d::DomainError);
  EXPECT_THROW((void)sf::hyp2f1_half(0, 0, -0.1), coulomb2d::DomainError);
  // Logarithmic singularity: 1 - z = 1e-9 needs far more than 1e6 terms.
  EXPECT_THROW((void)sf::hyp2f1_half(0, 0, 1.0 - 1e-9), coulomb2d::NonConvergence);
}

TEST(Elliptic, EndpointsAndReferences) {
  EXPECT_DOUBLE_EQ(sf::elliptic_K(0.0), pi / 2);
  EXPECT_DOUBLE_EQ(sf::elliptic_E(0.0), pi / 2);
  EXPECT_EQ(sf::elliptic_E(1.0), 1.0);
  EXPECT_LT(rel(sf::elliptic_K(0.64), 1.9953027776647293877), 1e-15);
  EXPECT_LT(rel(sf::elliptic_E(0.64), 1.2763499431699064233), 1e-15);
  EXPECT_LT(rel(sf::elliptic_K(0.5), 1.8540746773013719184), 1e-15);
  EXPECT_LT(rel(sf::elliptic_E(0.5), 1.3506438810476755025), 1e-15);
  EXPECT_LT(rel(sf::elliptic_K(0.64), pi * sf::hyp2f1_half(0, 0, 0.64) / 2), 1e-13);
}

TEST(Elliptic, DomainErrors) {
  EXPECT_THROW((void)sf::elliptic_K(1.0), coulomb2d::DomainError);
  EXPECT_THROW((void)sf::elliptic_K(-0.5), coulomb2d::DomainError);
  EXPECT_THROW((void)sf::elliptic_E(1.5), coulomb2d::DomainError);
}

TEST(Laguerre, KnownValues) {
  EXPECT_EQ(sf::laguerre(0, 7, 3.5), 1.0);
  EXPECT_EQ(sf::laguerre(1, 0, 2.0), -1.0);
  EXPECT_NEAR(sf::laguerre(3, 2, 1.5), 0.0625, 1e-15);
  EXPECT_LT(rel(sf::laguerre(7, 3, 4.25), 4.7579133412194630456), 1e-13);
}

TEST(Laguerre, MatchesFiniteSum) {
  for (int n = 0; n <= 12; ++n) {
    for (int a = 0; a <= 6; ++a) {
      for (const double x : {0.0, 0.3, 1.5, 4.0, 9.0}) {
        const auto oracle = static_cast<double>(testing_oracles::laguerre_sum(n, a, x));
        EXPECT_NEAR(sf::laguerre(n, a, x), oracle, 1e-11 * (1 + std::fabs(oracle)))
            << n << ' ' << a << ' ' << x;
      }
    }
  }
}

TEST(Laguerre, RecurrenceProperty) {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<unsigned> n_dist(1, 19);
  std::uniform_int_distribution<unsigned> a_dist(0, 10);
  std::uniform_real_distribution<double> x_dist(0.0, 50.0);
  for (int trial = 0; trial < 500; ++trial) {
    const unsigned n = n_dist(rng);
    const unsigned a = a_dist(rng);
    const double x = x_dist(rng);
    const double lhs = (n + 1.0) * sf::laguerre(n + 1, a, x);
    const double rhs = (2.0 * n + 1 + a - x) * sf::laguerre(n, a, x) -
                       (n + a) * sf::laguerre(n - 1, a, x);
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs),
                                   std::fabs((2.0 * n + 1 + a - x) * sf::laguerre(n, a, x))});
    EXPECT_LE(std::fabs(lhs - rhs), 1e-12 * scale) << n << ' ' << a << ' ' << x;
  }
}

TEST(Binomial, SmallValues) {
  EXPECT_TRUE(sf::binomial(5, 2) == 10);
  EXPECT_TRUE(sf::binomial(7, 0) == 1);
  EXPECT_TRUE(sf::binomial(4, 7) == 0);
  EXPECT_TRUE(sf::binomial(4, -1) == 0);
  EXPECT_THROW((void)sf::binomial(-1, 0), coulomb2d::DomainError);
}

TEST(Binomial, PascalAndLimits) {
  for (int n = 1; n <= 120; ++n) {
    for (int k = 1; k < n; ++k) {
      EXPECT_TRUE(sf::binomial(n, k) == sf::binomial(n - 1, k - 1) + sf::binomial(n - 1, k));
    }
  }
  // C(130, 65) ~ 9.5e37 still fits in 128 bits; C(140, 70) ~ 9.4e40 does not.
  EXPECT_NO_THROW((void)sf::binomial(130, 65));
  EXPECT_THROW((void)sf::binomial(140, 70), coulomb2d::OverflowError);
}
