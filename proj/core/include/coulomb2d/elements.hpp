#pragma once

// Two-body Coulomb matrix elements <l1 l2 | xi/r | l3 l4> in the anisotropic
// 2D harmonic-oscillator basis, as an exact finite sum over kernel cells.
//
// Particle 1 goes l1 -> l4 and particle 2 goes l2 -> l3. The value depends on
// each axis only through the sorted pairs (l1, l4) and (l2, l3), which gives
// the eight-element symmetry group used for canonical storage.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "coulomb2d/kernel.hpp"

namespace coulomb2d {

/// Oscillator eigenstate |n_x n_y>.
struct Orbital {
  std::uint16_t nx = 0;
  std::uint16_t ny = 0;

  friend constexpr auto operator<=>(const Orbital&, const Orbital&) = default;

  [[nodiscard]] constexpr Orbital transposed() const noexcept {
    return {ny, nx};
  }
};

/// Oscillator lengths and Coulomb coupling V(r) = xi / r.
struct Geometry {
  double ax = 1.0;
  double ay = 1.0;
  double xi = 1.0;

  /// Eccentricity min(ax, ay) / max(ax, ay), in (0, 1].
  [[nodiscard]] double gamma() const noexcept;

  /// True when the y length exceeds the x length and axes get swapped
  /// internally.
  [[nodiscard]] bool axes_swapped() const noexcept { return ay > ax; }

  /// Throws DomainError for non-positive lengths, non-finite xi, or
  /// gamma below kMinGamma.
  void validate() const;
};

/// Elements below this eccentricity are rejected (the kernel series diverges
/// logarithmically as gamma -> 0).
inline constexpr double kMinGamma = 1e-3;

/// (l1, l2, l3, l4), ordered lexicographically on (nx1, ny1, ..., nx4, ny4).
struct ElementIndex {
  std::array<Orbital, 4> orbitals{};

  [[nodiscard]] const Orbital& operator[](std::size_t k) const noexcept {
    return orbitals[k];
  }
  Orbital& operator[](std::size_t k) noexcept { return orbitals[k]; }

  [[nodiscard]] ElementIndex transposed() const noexcept;

  friend constexpr auto operator<=>(const ElementIndex&,
                                    const ElementIndex&) = default;
};

std::ostream& operator<<(std::ostream& os, const Orbital& o);
std::ostream& operator<<(std::ostream& os, const ElementIndex& idx);

/// Per-axis parity condition: |n1 - n4| + |n2 - n3| even on both axes.
[[nodiscard]] bool selection_rule(const ElementIndex& idx) noexcept;

/// Smallest kernel extent (i_max, j_max) that element() needs for idx under
/// geom; the axes follow geom's internal canonicalization.
[[nodiscard]] std::array<unsigned, 2> required_kernel_extent(
    const Geometry& geom, const ElementIndex& idx) noexcept;

/// Closed-form matrix element. Returns exactly 0 when the selection rule
/// fails. The table must be built for geom.gamma() and be large enough
/// (CapacityError otherwise); DomainError for invalid geometry or a table
/// built for a different gamma.
[[nodiscard]] double element(const Geometry& geom, const ElementIndex& idx,
                             const KernelTable& table);

/// Convenience overload that builds a right-sized kernel table.
[[nodiscard]] double element(const Geometry& geom, const ElementIndex& idx);

/// All indices reachable by l1<->l4, l2<->l3 and particle exchange
/// (l1,l2,l3,l4) -> (l2,l1,l4,l3). Sorted, duplicates removed.
[[nodiscard]] std::vector<ElementIndex> symmetry_orbit(const ElementIndex& idx);

/// Lexicographically smallest member of symmetry_orbit(idx).
[[nodiscard]] ElementIndex canonicalize(const ElementIndex& idx) noexcept;

}  // namespace coulomb2d

template <>
struct std::hash<coulomb2d::ElementIndex> {
  std::size_t operator()(const coulomb2d::ElementIndex& idx) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& o : idx.orbitals) {
      for (const std::uint16_t n : {o.nx, o.ny}) {
        h ^= n;
        h *= 0x100000001b3ULL;
      }
    }
    return static_cast<std::size_t>(h);
  }
};
