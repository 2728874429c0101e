#pragma once

// Full two-body tensor over a truncated oscillator basis, stored once per
// symmetry orbit, with a little-endian binary format and CSV export.
//
// Binary layout (all integers and doubles little-endian):
//   "C2DV" | u32 version = 1 | f64 ax | f64 ay | f64 xi
//   | u8 mode (0 rectangular, 1 shell) | u32 nx_max | u32 ny_max | u32 shell_max
//   | u64 entry count
//   | entries: 8 x u16 (nx1, ny1, nx2, ny2, nx3, ny3, nx4, ny4), f64 value
//   | u32 CRC-32 (IEEE) of every preceding byte

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include "coulomb2d/elements.hpp"

namespace coulomb2d {

struct BasisSpec {
  enum class Mode : std::uint8_t { kRectangular = 0, kShell = 1 };

  Mode mode = Mode::kRectangular;
  std::uint32_t nx_max = 0;
  std::uint32_t ny_max = 0;
  std::uint32_t shell_max = 0;

  static BasisSpec rectangular(std::uint32_t nx_max, std::uint32_t ny_max);
  /// Orbitals with nx + ny <= shell_max.
  static BasisSpec shell(std::uint32_t shell_max);

  [[nodiscard]] bool contains(const Orbital& o) const noexcept;
  /// Orbitals in (nx, ny) lexicographic order.
  [[nodiscard]] std::vector<Orbital> orbitals() const;
  [[nodiscard]] std::size_t orbital_count() const noexcept;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

struct ElementTable {
  Geometry geom;
  BasisSpec basis;
  /// Canonical, parity-allowed indices only.
  std::map<ElementIndex, double> entries;

  /// Bitwise comparison of geometry, basis and every stored value.
  friend bool operator==(const ElementTable& a, const ElementTable& b) noexcept;
};

/// Canonical, parity-allowed indices over the basis, in ascending order.
[[nodiscard]] std::vector<ElementIndex> canonical_indices(const BasisSpec& basis);

/// Evaluates every canonical, parity-allowed element. threads == 0 means one
/// worker per hardware thread; the result does not depend on the count.
[[nodiscard]] ElementTable build_table(const Geometry& geom,
                                       const BasisSpec& basis,
                                       unsigned threads = 1);

/// Value for any index over the basis: canonical lookup, 0 for
/// parity-forbidden indices. Throws OutOfBasis.
[[nodiscard]] double lookup(const ElementTable& table, const ElementIndex& idx);

void save(const ElementTable& table, const std::filesystem::path& path);
void write_binary(const ElementTable& table, std::ostream& out);

/// Throws IoError if the file cannot be read and FormatError on bad magic,
/// version, length or checksum.
[[nodiscard]] ElementTable load(const std::filesystem::path& path);
[[nodiscard]] ElementTable read_binary(std::istream& in);

/// Header `nx1,ny1,nx2,ny2,nx3,ny3,nx4,ny4,value`, 17 significant digits.
void write_csv(const ElementTable& table, std::ostream& out);
void save_csv(const ElementTable& table, const std::filesystem::path& path);

}  // namespace coulomb2d
