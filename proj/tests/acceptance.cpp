// Acceptance gate. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "coulomb2d/elements.hpp"
#include "coulomb2d/errors.hpp"
#include "coulomb2d/kernel.hpp"
#include "coulomb2d/oracle.hpp"
#include "coulomb2d/specfun.hpp"
#include "coulomb2d/tables.hpp"

using namespace coulomb2d;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kOracleRelTol = 1e-8;
constexpr double kOracleAbsFloor = 1e-12;
constexpr double kOracleBudgetSeconds = 300;
constexpr double kKernelRelTol = 1e-9;
constexpr unsigned kKernelDiagonal = 40;
constexpr double kKernelBudgetSeconds = 10;
constexpr double kUIntegralRelTol = 1e-9;
constexpr double kSeedRelTol = 1e-12;
constexpr double kIsotropicRelTol = 1e-12;
constexpr double kContinuityRelTol = 1e-5;
constexpr double kOrbitRelTol = 1e-10;
constexpr double kOrbitAbsFloor = 1e-14;
constexpr double kScalingRelTol = 1e-12;
constexpr double kAxisSwapRelTol = 1e-10;
constexpr double kParityQuadratureAbs = 1e-10;
constexpr double kSymmetryBudgetSeconds = 120;
constexpr double kBuildBudgetSeconds = 60;
constexpr double kMinSpeedup = 3.0;
constexpr unsigned kSpeedupWorkers = 4;
constexpr int kTimingRepeats = 5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_dev(double got, double want) {
  return std::fabs(got - want) / std::fabs(want);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<ElementIndex> all_quadruples(const BasisSpec& basis) {
  const auto orbitals = basis.orbitals();
  std::vector<ElementIndex> out;
  out.reserve(orbitals.size() * orbitals.size() * orbitals.size() * orbitals.size());
  for (const auto& a : orbitals)
    for (const auto& b : orbitals)
      for (const auto& c : orbitals)
        for (const auto& d : orbitals) out.push_back(ElementIndex{{a, b, c, d}});
  return out;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const auto quads = all_quadruples(BasisSpec::rectangular(2, 2));
  std::size_t violations = 0;
  double worst = 0.0;
  for (const double gamma : {0.5, 0.9}) {
    const Geometry geom{1.0, gamma, 1.0};
    const KernelTable kernel = KernelTable::fill(gamma, 4, 4);
    oracle::ElementQuadrature quad(geom);
    for (const auto& idx : quads) {
      const double q = quad(idx);
      const double c = element(geom, idx, kernel);
      const double dev = std::fabs(c - q);
      if (std::fabs(q) > kOracleAbsFloor) worst = std::max(worst, dev / std::fabs(q));
      if (!(dev <= std::max(kOracleRelTol * std::fabs(q), kOracleAbsFloor))) ++violations;
    }
  }
  const double t = seconds_since(start);
  return {violations == 0 && t < kOracleBudgetSeconds,
          std::to_string(2 * quads.size()) + " quadruples, " + std::to_string(violations) +
              " violations, max relative deviation " + fmt(worst) + ", " + fmt(t) + " s"};
}

Outcome kernel_recurrence() {
  const auto start = Clock::now();
  double worst = 0.0;
  double worst_unvalidated = 0.0;
  std::size_t cells = 0;
  std::string methods;
  for (const double gamma : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const KernelTable table = fill_table(gamma, kKernelDiagonal, kKernelDiagonal);
    const KernelTable raw =
        KernelTable::fill_recurrence_only(gamma, kKernelDiagonal, kKernelDiagonal);
    const double z = 1.0 - gamma * gamma;
    methods += table.method() == KernelTable::FillMethod::kDirect ? 'd' : 'r';
    for (unsigned i = 0; i <= kKernelDiagonal; ++i) {
      for (unsigned j = 0; i + j <= kKernelDiagonal; ++j) {
        const double direct = kernel_direct(i, j, z);
        worst = std::max(worst, rel_dev(kernel_get(table, i, j), direct));
        const double d_raw = rel_dev(raw(i, j), direct);
        worst_unvalidated = std::isfinite(d_raw) ? std::max(worst_unvalidated, d_raw) : INFINITY;
        ++cells;
      }
    }
  }
  const double t = seconds_since(start);
  return {worst < kKernelRelTol && t < kKernelBudgetSeconds,
          std::to_string(cells) + " cells, max relative deviation " + fmt(worst) +
              ", fill paths [" + methods + "] (r recurrence, d series), unvalidated recurrence " +
              fmt(worst_unvalidated) + ", " + fmt(t) + " s"};
}

Outcome kernel_vs_u_integral() {
  double worst = 0.0;
  for (const double gamma : {0.25, 0.75}) {
    const KernelTable table = fill_table(gamma, 10, 10);
    for (unsigned i = 0; i <= 10; ++i) {
      for (unsigned j = 0; j <= 10; ++j) {
        const double closed = gamma / (2.0 * std::numbers::sqrt2) * table(i, j);
        worst = std::max(worst, rel_dev(oracle::u_integral(i, j, gamma), closed));
      }
    }
  }
  return {worst < kUIntegralRelTol, "242 cells, max relative deviation " + fmt(worst)};
}

Outcome seed_identities() {
  double worst = 0.0;
  for (const double z : {0.19, 0.36, 0.75}) {
    const auto seeds = seed_values(z);
    const unsigned ij[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, rel_dev(seeds[k], kernel_direct(ij[k][0], ij[k][1], z)));
    }
  }
  return {worst < kSeedRelTol, "max relative deviation " + fmt(worst)};
}

Outcome isotropic_value() {
  const ElementIndex zero{};
  const double iso = element(Geometry{1.0, 1.0, 1.0}, zero);
  const double expected = std::sqrt(std::numbers::pi / 2.0);
  const double near = element(Geometry{1.0, 1.0 - 1e-6, 1.0}, zero);
  const double d_iso = rel_dev(iso, expected);
  const double d_near = rel_dev(near, iso);
  return {d_iso < kIsotropicRelTol && d_near < kContinuityRelTol,
          "gamma=1 relative deviation " + fmt(d_iso) + ", gamma=1-1e-6 relative change " +
              fmt(d_near)};
}

Outcome symmetry_properties() {
  const auto start = Clock::now();
  constexpr double gamma = 0.7;
  const Geometry geom{1.0, gamma, 1.0};
  const BasisSpec basis = BasisSpec::rectangular(4, 4);
  const auto quads = all_quadruples(basis);
  const KernelTable kernel = KernelTable::fill(gamma, 8, 8);

  // Dense values keyed by position in `quads` (base-25 digits per orbital).
  auto position = [](const ElementIndex& idx) {
    std::size_t p = 0;
    for (const auto& o : idx.orbitals) p = p * 25 + o.nx * 5 + o.ny;
    return p;
  };
  std::vector<double> values(quads.size());
  for (std::size_t k = 0; k < quads.size(); ++k) values[k] = element(geom, quads[k], kernel);

  std::size_t orbit_bad = 0, scale_bad = 0, linear_bad = 0, swap_bad = 0, parity_bad = 0;
  std::vector<std::pair<Geometry, KernelTable>> scaled;
  for (const double c : {0.5, 2.0, 10.0}) {
    const Geometry g{c * geom.ax, c * geom.ay, geom.xi};
    scaled.emplace_back(g, KernelTable::fill(g.gamma(), 8, 8));
  }
  const Geometry doubled{geom.ax, geom.ay, 2.0 * geom.xi};
  const Geometry swapped{geom.ay, geom.ax, geom.xi};
  const KernelTable swapped_kernel = KernelTable::fill(swapped.gamma(), 8, 8);

  std::vector<ElementIndex> forbidden;
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const auto& idx = quads[k];
    const double v = values[k];
    if (!selection_rule(idx)) {
      if (v != 0.0) ++parity_bad;
      forbidden.push_back(idx);
      continue;
    }
    for (const auto& m : symmetry_orbit(idx)) {
      const double w = values[position(m)];
      const bool both_tiny = std::fabs(v) < kOrbitAbsFloor && std::fabs(w) < kOrbitAbsFloor;
      if (!(both_tiny || std::fabs(v - w) <= kOrbitRelTol * std::fabs(v))) ++orbit_bad;
    }
    for (const auto& [g, kt] : scaled) {
      const double want = v / (g.ax / geom.ax);
      if (!(std::fabs(element(g, idx, kt) - want) <= kScalingRelTol * std::fabs(want))) ++scale_bad;
    }
    const double v2 = element(doubled, idx, kernel);
    if (std::fabs(v2 - 2.0 * v) > std::fabs(std::nextafter(2.0 * v, 0.0) - 2.0 * v)) ++linear_bad;
    const double vs = element(swapped, idx.transposed(), swapped_kernel);
    if (!(std::fabs(vs - v) <= kAxisSwapRelTol * std::fabs(v))) ++swap_bad;
  }

  // The quadrature side of the parity property, on a fixed random sample.
  std::mt19937_64 rng(20241015);
  std::shuffle(forbidden.begin(), forbidden.end(), rng);
  forbidden.resize(std::min<std::size_t>(forbidden.size(), 200));
  oracle::ElementQuadrature quad(geom);
  double worst_forbidden = 0.0;
  for (const auto& idx : forbidden) {
    const double q = std::fabs(quad(idx));
    worst_forbidden = std::max(worst_forbidden, q);
    if (!(q < kParityQuadratureAbs)) ++parity_bad;
  }

  const double t = seconds_since(start);
  const bool pass = orbit_bad + scale_bad + linear_bad + swap_bad + parity_bad == 0 &&
                    t < kSymmetryBudgetSeconds;
  return {pass, std::to_string(quads.size()) + " quadruples; failures: orbit " +
                    std::to_string(orbit_bad) + ", scaling " + std::to_string(scale_bad) +
                    ", xi-linearity " + std::to_string(linear_bad) + ", axis swap " +
                    std::to_string(swap_bad) + ", parity " + std::to_string(parity_bad) +
                    " (max |quadrature| on " + std::to_string(forbidden.size()) +
                    " forbidden samples " + fmt(worst_forbidden) + "), " + fmt(t) + " s"};
}

Outcome build_performance() {
  const Geometry geom{1.0, 0.5, 1.0};
  const BasisSpec basis = BasisSpec::rectangular(4, 4);

  // Best of several runs for each worker count.
  auto timed = [&](unsigned threads, ElementTable& out) {
    double best = 0.0;
    for (int rep = 0; rep < kTimingRepeats; ++rep) {
      const auto start = Clock::now();
      out = build_table(geom, basis, threads);
      const double t = seconds_since(start);
      best = rep == 0 ? t : std::min(best, t);
    }
    return best;
  };
  ElementTable single;
  ElementTable multi;
  const double t1 = timed(1, single);
  const double t4 = timed(kSpeedupWorkers, multi);

  const double speedup = t1 / t4;
  const bool identical = single == multi;
  const bool pass = t1 < kBuildBudgetSeconds && speedup >= kMinSpeedup && identical;
  return {pass, std::to_string(single.entries.size()) + " canonical entries; 1 worker " +
                    fmt(t1) + " s, " + std::to_string(kSpeedupWorkers) + " workers " + fmt(t4) +
                    " s, speedup " + fmt(speedup) + " (hardware threads: " +
                    std::to_string(std::thread::hardware_concurrency()) + ")" +
                    (identical ? "" : ", results differ")};
}

Outcome persistence() {
  const ElementTable table = build_table(Geometry{1.0, 0.6, 1.5}, BasisSpec::shell(3));
  const fs::path dir = fs::temp_directory_path() / "coulomb2d_acceptance";
  fs::create_directories(dir);
  const fs::path path = dir / "table.bin";
  save(table, path);

  std::ifstream in(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), {});
  in.close();

  const ElementTable back = load(path);
  std::ostringstream again(std::ios::binary);
  write_binary(back, again);
  const bool round_trip = back == table && again.str() == bytes;

  auto rejected = [&](std::string corrupt) {
    std::istringstream is(corrupt, std::ios::binary);
    try {
      (void)read_binary(is);
    } catch (const FormatError&) {
      return true;
    }
    return false;
  };
  std::vector<std::string> corrupted;
  corrupted.push_back(bytes.substr(0, bytes.size() - 3));
  corrupted.push_back(bytes.substr(0, 40));
  std::string magic = bytes;
  magic[1] = 'x';
  corrupted.push_back(magic);
  for (std::size_t pos = 4; pos < bytes.size(); pos += 97) {
    std::string flipped = bytes;
    flipped[pos] = static_cast<char>(flipped[pos] ^ 0x01);
    corrupted.push_back(flipped);
  }
  corrupted.push_back(bytes + '\0');
  std::size_t caught = 0;
  for (const auto& c : corrupted) caught += rejected(c) ? 1 : 0;
  fs::remove_all(dir);

  return {round_trip && caught == corrupted.size(),
          std::string("round trip ") + (round_trip ? "bit-exact" : "MISMATCH") + ", rejected " +
              std::to_string(caught) + "/" + std::to_string(corrupted.size()) +
              " corrupted files"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for coulomb2d"};
  int selected = 0;
  app.add_option("--criterion", selected, "Run only this criterion (1-8)")
      ->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"kernel recurrence vs direct", kernel_recurrence},
      {"kernel vs u-integral", kernel_vs_u_integral},
      {"seed identities", seed_identities},
      {"isotropic value", isotropic_value},
      {"symmetry, scaling, linearity, axis swap, parity", symmetry_properties},
      {"table build performance", build_performance},
      {"persistence", persistence},
  };

  bool all_pass = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (selected != 0 && static_cast<std::size_t>(selected) != k + 1) continue;
    Outcome outcome;
    try {
      outcome = criteria[k].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && outcome.pass;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << k + 1 << ". " << criteria[k].name
              << ": " << outcome.detail << std::endl;
  }
  return all_pass ? 0 : 1;
}
