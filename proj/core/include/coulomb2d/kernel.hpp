#pragma once

// Kernel table v_ij = B(1/2, i+j+1/2) * 2F1(i+1/2, 1/2; i+j+1; z), z = 1 - gamma^2.
//
// Every term of the closed-form matrix element carries one v_ij, so the table
// is built once per eccentricity and shared read-only. Cells are seeded from
// complete elliptic integrals and filled by the row/column recurrences; a
// sample of cells (plus the last cell of every recurrence chain) is then
// checked against direct series evaluation and the whole table is rebuilt
// directly if any check fails. The forward recurrences lose accuracy quickly
// for large tables or gamma far from 0.5, so the fallback is routine there.

#include <array>
#include <cstddef>
#include <vector>

namespace coulomb2d {

/// B(1/2, i+j+1/2) * 2F1(i+1/2, 1/2; i+j+1; z) from the series.
/// Propagates NonConvergence.
double kernel_direct(unsigned i, unsigned j, double z);

/// Seed cells {v00, v01, v10, v11} in terms of K(z) and E(z), 0 < z < 1.
std::array<double, 4> seed_values(double z);

/// Relative deviation above which a recurrence-filled table is discarded.
inline constexpr double kKernelValidationTolerance = 1e-10;

class KernelTable {
 public:
  enum class FillMethod { kClosedForm, kRecurrence, kDirect };

  /// Fills the table for 0 < gamma <= 1. Throws DomainError otherwise.
  static KernelTable fill(double gamma, unsigned i_max, unsigned j_max);

  /// Same layout, every cell by kernel_direct.
  static KernelTable fill_direct(double gamma, unsigned i_max, unsigned j_max);

  /// Recurrence fill without the validation pass. Exposed for accuracy
  /// studies; production code should use fill().
  static KernelTable fill_recurrence_only(double gamma, unsigned i_max,
                                          unsigned j_max);

  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] double z() const noexcept { return z_; }
  [[nodiscard]] unsigned i_max() const noexcept { return i_max_; }
  [[nodiscard]] unsigned j_max() const noexcept { return j_max_; }
  [[nodiscard]] FillMethod method() const noexcept { return method_; }

  /// Bounds-checked read. Throws OutOfRange.
  [[nodiscard]] double at(unsigned i, unsigned j) const;

  /// Unchecked read.
  [[nodiscard]] double operator()(unsigned i, unsigned j) const noexcept {
    return values_[static_cast<std::size_t>(i) * stride() + j];
  }

  /// Copy with one cell scaled by (1 + rel). Fault injection for the
  /// verification path; never used when computing elements.
  [[nodiscard]] KernelTable perturbed(unsigned i, unsigned j, double rel) const;

 private:
  KernelTable(double gamma, unsigned i_max, unsigned j_max);

  [[nodiscard]] std::size_t stride() const noexcept { return j_max_ + 1u; }
  double& cell(unsigned i, unsigned j) noexcept {
    return values_[static_cast<std::size_t>(i) * stride() + j];
  }

  void fill_with_recurrences();
  void fill_with_series();
  [[nodiscard]] bool passes_spot_check() const;

  double gamma_;
  double z_;
  unsigned i_max_;
  unsigned j_max_;
  FillMethod method_ = FillMethod::kClosedForm;
  std::vector<double> values_;
};

/// Free-function spelling of KernelTable::fill.
inline KernelTable fill_table(double gamma, unsigned i_max, unsigned j_max) {
  return KernelTable::fill(gamma, i_max, j_max);
}

/// Free-function spelling of KernelTable::at.
inline double kernel_get(const KernelTable& table, unsigned i, unsigned j) {
  return table.at(i, j);
}

}  // namespace coulomb2d
