#include "coulomb2d/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "coulomb2d/errors.hpp"
#include "coulomb2d/specfun.hpp"

namespace coulomb2d {

namespace {

// Fraction of interior cells re-evaluated by series after a recurrence fill.
constexpr double kSpotCheckFraction = 0.05;
constexpr std::uint64_t kSpotCheckSeed = 0x5eed'c0de'2d2dULL;

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("kernel table requires 0 < gamma <= 1, got " +
                      std::to_string(gamma));
  }
}

struct Seeds {
  long double v00, v01, v10, v11;
};

Seeds seeds_ld(long double z) {
  const long double k = specfun::elliptic_K_ld(z);
  const long double e = specfun::elliptic_E_ld(z);
  return {
      2.0L * k,
      2.0L / z * (e + (z - 1.0L) * k),
      2.0L / z * (k - e),
      2.0L / (z * z) * (2.0L * (z - 1.0L) * k - (z - 2.0L) * e),
  };
}

double relative_deviation(double value, double reference) {
  return std::fabs(value - reference) / std::fabs(reference);
}

}  // namespace

double kernel_direct(unsigned i, unsigned j, double z) {
  return specfun::beta_half(i + j) * specfun::hyp2f1_half(i, i + j, z);
}

std::array<double, 4> seed_values(double z) {
  if (!(z > 0.0 && z < 1.0)) {
    throw DomainError("seed_values requires 0 < z < 1");
  }
  const Seeds s = seeds_ld(z);
  return {static_cast<double>(s.v00), static_cast<double>(s.v01),
          static_cast<double>(s.v10), static_cast<double>(s.v11)};
}

KernelTable::KernelTable(double gamma, unsigned i_max, unsigned j_max)
    : gamma_(gamma),
      z_(1.0 - gamma * gamma),
      i_max_(i_max),
      j_max_(j_max),
      values_(static_cast<std::size_t>(i_max + 1u) * (j_max + 1u), 0.0) {}

KernelTable KernelTable::fill(double gamma, unsigned i_max, unsigned j_max) {
  check_gamma(gamma);
  KernelTable table(gamma, i_max, j_max);
  if (table.z_ == 0.0) {
    // 2F1(.; 0) = 1, so every cell is just the Beta factor.
    const specfun::BetaSequence beta(i_max + j_max);
    for (unsigned i = 0; i <= i_max; ++i) {
      for (unsigned j = 0; j <= j_max; ++j) {
        table.cell(i, j) = beta[i + j];
      }
    }
    table.method_ = FillMethod::kClosedForm;
    return table;
  }
  table.fill_with_recurrences();
  if (!table.passes_spot_check()) {
    table.fill_with_series();
  }
  return table;
}

KernelTable KernelTable::fill_direct(double gamma, unsigned i_max,
                                     unsigned j_max) {
  check_gamma(gamma);
  KernelTable table(gamma, i_max, j_max);
  table.fill_with_series();
  return table;
}

KernelTable KernelTable::fill_recurrence_only(double gamma, unsigned i_max,
                                              unsigned j_max) {
  check_gamma(gamma);
  if (gamma == 1.0) {
    return fill(gamma, i_max, j_max);
  }
  KernelTable table(gamma, i_max, j_max);
  table.fill_with_recurrences();
  return table;
}

void KernelTable::fill_with_series() {
  for (unsigned i = 0; i <= i_max_; ++i) {
    for (unsigned j = 0; j <= j_max_; ++j) {
      cell(i, j) = kernel_direct(i, j, z_);
    }
  }
  method_ = FillMethod::kDirect;
}

void KernelTable::fill_with_recurrences() {
  // The row recurrence walks anti-diagonals, so cells of the rectangle need
  // rows 0 and 1 out to i_max + j_max. Work on that triangle, then copy.
  const unsigned diag_max = i_max_ + j_max_;
  const auto width = static_cast<std::size_t>(diag_max) + 1;
  std::vector<long double> work(static_cast<std::size_t>(i_max_ + 1u) * width,
                                0.0L);
  auto w = [&](unsigned i, unsigned j) -> long double& {
    return work[static_cast<std::size_t>(i) * width + j];
  };

  const long double z = z_;
  const long double g2 = static_cast<long double>(gamma_) * gamma_;
  const Seeds s = seeds_ld(z);

  w(0, 0) = s.v00;
  if (diag_max >= 1) w(0, 1) = s.v01;
  if (i_max_ >= 1) {
    w(1, 0) = s.v10;
    if (diag_max >= 2) w(1, 1) = s.v11;
  }

  // Columns: along j at fixed i in {0, 1}.
  for (unsigned i = 0; i <= std::min(i_max_, 1u); ++i) {
    for (unsigned j = 2; i + j <= diag_max; ++j) {
      const long double li = i;
      const long double lj = j;
      const long double den = (lj - 0.5L) * z;
      w(i, j) = (1.0L - li - lj - (2.0L - li - 2.0L * lj) * z) / den * w(i, j - 1) +
                (li + lj - 1.5L) * g2 / den * w(i, j - 2);
    }
  }

  // Rows: i >= 2 from (i-1, j+1) and (i-2, j+2) on the same anti-diagonal.
  for (unsigned d = 2; d <= diag_max; ++d) {
    for (unsigned i = 2; i <= std::min(d, i_max_); ++i) {
      const unsigned j = d - i;
      const long double li = i;
      const long double lj = j;
      w(i, j) = (1.0L + lj + (1.0L - li) * g2) / ((0.5L - li) * g2) * w(i - 1, j + 1) +
                (lj + 1.5L) / ((li - 0.5L) * g2) * w(i - 2, j + 2);
    }
  }

  for (unsigned i = 0; i <= i_max_; ++i) {
    for (unsigned j = 0; j <= j_max_; ++j) {
      cell(i, j) = static_cast<double>(w(i, j));
    }
  }
  method_ = FillMethod::kRecurrence;
}

bool KernelTable::passes_spot_check() const {
  auto ok = [&](unsigned i, unsigned j) {
    const double v = (*this)(i, j);
    return std::isfinite(v) && v > 0.0 &&
           relative_deviation(v, kernel_direct(i, j, z_)) <=
               kKernelValidationTolerance;
  };

  // Errors grow along each recurrence chain, so the chain ends come first.
  const unsigned diag_max = i_max_ + j_max_;
  for (unsigned d = 0; d <= diag_max; ++d) {
    const unsigned i = std::min(d, i_max_);
    const unsigned j = d - i;
    if (j <= j_max_ && !ok(i, j)) {
      return false;
    }
  }
  for (unsigned i = 0; i <= std::min(i_max_, 1u); ++i) {
    if (!ok(i, j_max_)) {
      return false;
    }
  }

  std::mt19937_64 rng(kSpotCheckSeed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (unsigned i = 0; i <= i_max_; ++i) {
    for (unsigned j = 0; j <= j_max_; ++j) {
      if (coin(rng) < kSpotCheckFraction && !ok(i, j)) {
        return false;
      }
    }
  }
  return true;
}

double KernelTable::at(unsigned i, unsigned j) const {
  if (i > i_max_ || j > j_max_) {
    throw OutOfRange("kernel cell (" + std::to_string(i) + ", " +
                     std::to_string(j) + ") outside table of extent (" +
                     std::to_string(i_max_) + ", " + std::to_string(j_max_) +
                     ")");
  }
  return (*this)(i, j);
}

KernelTable KernelTable::perturbed(unsigned i, unsigned j, double rel) const {
  KernelTable copy = *this;
  const double v = copy.at(i, j);
  copy.cell(i, j) = v * (1.0 + rel);
  return copy;
}

}  // namespace coulomb2d
