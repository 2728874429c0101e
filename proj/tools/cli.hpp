#pragma once

// Command-line front end. `run` is the whole program minus process plumbing,
// so tests drive it in-process.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "coulomb2d/kernel.hpp"

namespace coulomb2d::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Internal test hooks; not reachable from the command line.
struct Hooks {
  /// Applied to the kernel table used by `verify` before any element is
  /// evaluated.
  std::function<KernelTable(const KernelTable&)> kernel_fault;
};

struct VerifyReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_abs_deviation = 0.0;
  /// Over quadruples whose quadrature value exceeds 1e-12.
  double max_rel_deviation = 0.0;
};

/// Closed form vs quadrature over every quadruple of the rectangular basis
/// nx, ny <= nmax, with ax = 1, ay = gamma, xi = 1. A quadruple passes when
/// |closed - quad| <= max(tol * |quad|, 1e-12).
VerifyReport verify_oracle_equivalence(unsigned nmax, double gamma, double tol,
                                       const Hooks& hooks = {});

/// Thread count: COULOMB2D_THREADS if set, else `flag`, else `fallback`.
/// Throws std::invalid_argument on a malformed environment value.
unsigned resolve_threads(int flag, unsigned fallback);

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const Hooks& hooks = {});

}  // namespace coulomb2d::cli
