#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "coulomb2d/elements.hpp"
#include "coulomb2d/errors.hpp"
#include "coulomb2d/oracle.hpp"
#include "coulomb2d/tables.hpp"

namespace coulomb2d::cli {

namespace {

constexpr const char* kThreadsEnv = "COULOMB2D_THREADS";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ElementIndex parse_index(const std::string& text) {
  std::vector<unsigned long> numbers;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      if (item.empty() || item.front() == '-') {
        throw std::invalid_argument(item);
      }
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--idx: '" + item + "' is not a non-negative integer");
    }
    if (used != item.size() || v > 65535) {
      throw UsageError("--idx: '" + item + "' is not a quantum number");
    }
    numbers.push_back(v);
  }
  if (numbers.size() != 8) {
    throw UsageError("--idx needs 8 comma-separated quantum numbers "
                     "(nx1,ny1,nx2,ny2,nx3,ny3,nx4,ny4)");
  }
  ElementIndex idx;
  for (std::size_t k = 0; k < 4; ++k) {
    idx[k] = {static_cast<std::uint16_t>(numbers[2 * k]),
              static_cast<std::uint16_t>(numbers[2 * k + 1])};
  }
  return idx;
}

Geometry checked_geometry(double ax, double ay, double xi) {
  const Geometry geom{ax, ay, xi};
  try {
    geom.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return geom;
}

struct Options {
  double ax = 1.0;
  double ay = 0.5;
  double xi = 1.0;
  std::string idx;
  int nxmax = -1;
  int nymax = -1;
  int shell = -1;
  std::string out_path;
  std::string format = "bin";
  int threads = 0;
  double gamma = 0.5;
  unsigned imax = 0;
  unsigned jmax = 0;
  unsigned nmax = 2;
  double tol = 1e-8;
};

void add_geometry(CLI::App* cmd, Options& o) {
  cmd->add_option("--ax", o.ax, "Oscillator length along x")
      ->capture_default_str();
  cmd->add_option("--ay", o.ay, "Oscillator length along y")
      ->capture_default_str();
  cmd->add_option("--xi", o.xi, "Coulomb coupling xi in V(r) = xi/r")
      ->capture_default_str();
}

int cmd_element(const Options& o, std::ostream& out) {
  const Geometry geom = checked_geometry(o.ax, o.ay, o.xi);
  const ElementIndex idx = parse_index(o.idx);
  out << format_double(element(geom, idx)) << '\n';
  return kExitOk;
}

BasisSpec basis_from(const Options& o) {
  if (o.shell >= 0) {
    if (o.nxmax >= 0 || o.nymax >= 0) {
      throw UsageError("use either --shell or --nxmax/--nymax, not both");
    }
    return BasisSpec::shell(static_cast<std::uint32_t>(o.shell));
  }
  if (o.nxmax < 0 || o.nymax < 0) {
    throw UsageError("basis needs --nxmax and --nymax, or --shell");
  }
  return BasisSpec::rectangular(static_cast<std::uint32_t>(o.nxmax),
                                static_cast<std::uint32_t>(o.nymax));
}

int cmd_table(const Options& o, std::ostream& out) {
  const Geometry geom = checked_geometry(o.ax, o.ay, o.xi);
  const BasisSpec basis = basis_from(o);
  const unsigned threads = resolve_threads(
      o.threads, std::max(1u, std::thread::hardware_concurrency()));
  const ElementTable table = build_table(geom, basis, threads);
  if (o.format == "csv") {
    save_csv(table, o.out_path);
  } else {
    save(table, o.out_path);
  }
  out << "wrote " << table.entries.size() << " entries to " << o.out_path
      << '\n';
  return kExitOk;
}

int cmd_kernel(const Options& o, std::ostream& out) {
  if (!(o.gamma > 0.0 && o.gamma <= 1.0)) {
    throw UsageError("--gamma must lie in (0, 1]");
  }
  const KernelTable table = KernelTable::fill(o.gamma, o.imax, o.jmax);
  out << "i,j,v\n";
  for (unsigned i = 0; i <= table.i_max(); ++i) {
    for (unsigned j = 0; j <= table.j_max(); ++j) {
      out << i << ',' << j << ',' << format_double(table(i, j)) << '\n';
    }
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, const Hooks& hooks) {
  if (!(o.gamma >= kMinGamma && o.gamma <= 1.0)) {
    throw UsageError("--gamma must lie in [1e-3, 1]");
  }
  if (!(o.tol > 0.0)) {
    throw UsageError("--tol must be positive");
  }
  const VerifyReport report =
      verify_oracle_equivalence(o.nmax, o.gamma, o.tol, hooks);
  out << "checked " << report.checked << " elements, " << report.violations
      << " violations, max |closed - quadrature| "
      << format_double(report.max_abs_deviation) << ", max relative "
      << format_double(report.max_rel_deviation) << '\n';
  return report.violations == 0 ? kExitOk : kExitFailure;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const Geometry geom = checked_geometry(o.ax, o.ay, o.xi);
  if (o.nxmax < 0 || o.nymax < 0) {
    throw UsageError("bench needs --nxmax and --nymax");
  }
  const BasisSpec basis = BasisSpec::rectangular(
      static_cast<std::uint32_t>(o.nxmax), static_cast<std::uint32_t>(o.nymax));
  const unsigned threads = resolve_threads(o.threads, 1);
  const auto start = std::chrono::steady_clock::now();
  const ElementTable table = build_table(geom, basis, threads);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  const double rate =
      elapsed.count() > 0.0 ? table.entries.size() / elapsed.count() : 0.0;
  out << table.entries.size() << " elements in " << elapsed.count() << " s ("
      << threads << " thread" << (threads == 1 ? "" : "s") << "): " << rate
      << " elements/second\n";
  return kExitOk;
}

}  // namespace

unsigned resolve_threads(int flag, unsigned fallback) {
  if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::char_traits<char>::length(env) || v == 0 || v > 4096) {
      throw std::invalid_argument(std::string(kThreadsEnv) + "='" + env +
                                  "' is not a positive thread count");
    }
    return static_cast<unsigned>(v);
  }
  return flag > 0 ? static_cast<unsigned>(flag) : fallback;
}

VerifyReport verify_oracle_equivalence(unsigned nmax, double gamma, double tol,
                                       const Hooks& hooks) {
  constexpr double kAbsFloor = 1e-12;
  const Geometry geom{1.0, gamma, 1.0};
  geom.validate();
  const BasisSpec basis = BasisSpec::rectangular(nmax, nmax);
  const auto orbitals = basis.orbitals();

  KernelTable kernel = KernelTable::fill(geom.gamma(), 2 * nmax, 2 * nmax);
  if (hooks.kernel_fault) {
    kernel = hooks.kernel_fault(kernel);
  }
  oracle::ElementQuadrature quadrature(geom);

  VerifyReport report;
  for (const auto& o1 : orbitals) {
    for (const auto& o2 : orbitals) {
      for (const auto& o3 : orbitals) {
        for (const auto& o4 : orbitals) {
          const ElementIndex idx{{o1, o2, o3, o4}};
          const double closed = element(geom, idx, kernel);
          const double quad = quadrature(idx);
          const double dev = std::fabs(closed - quad);
          ++report.checked;
          report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
          if (std::fabs(quad) > kAbsFloor) {
            report.max_rel_deviation =
                std::max(report.max_rel_deviation, dev / std::fabs(quad));
          }
          if (!(dev <= std::max(tol * std::fabs(quad), kAbsFloor))) {
            ++report.violations;
          }
        }
      }
    }
  }
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Exact Coulomb matrix elements in the anisotropic 2D "
               "harmonic-oscillator basis",
               "coulomb2d"};
  app.require_subcommand(1);
  Options o;

  auto* element_cmd = app.add_subcommand("element", "Evaluate one matrix element");
  add_geometry(element_cmd, o);
  element_cmd
      ->add_option("--idx", o.idx, "nx1,ny1,nx2,ny2,nx3,ny3,nx4,ny4")
      ->required();

  auto* table_cmd = app.add_subcommand("table", "Write the full two-body tensor");
  add_geometry(table_cmd, o);
  table_cmd->add_option("--nxmax", o.nxmax, "Rectangular basis bound along x");
  table_cmd->add_option("--nymax", o.nymax, "Rectangular basis bound along y");
  table_cmd->add_option("--shell", o.shell, "Shell basis bound nx + ny <= S");
  table_cmd->add_option("--out", o.out_path, "Output file")->required();
  table_cmd->add_option("--format", o.format, "bin or csv")
      ->check(CLI::IsMember({"bin", "csv"}))
      ->capture_default_str();
  table_cmd->add_option("--threads", o.threads,
                        "Worker threads (default: logical cores)");

  auto* kernel_cmd = app.add_subcommand("kernel", "Dump the kernel table as CSV");
  kernel_cmd->add_option("--gamma", o.gamma, "Eccentricity in (0, 1]")->required();
  kernel_cmd->add_option("--imax", o.imax, "Largest i")->required();
  kernel_cmd->add_option("--jmax", o.jmax, "Largest j")->required();

  auto* verify_cmd = app.add_subcommand(
      "verify", "Cross-check closed form against momentum-space quadrature");
  verify_cmd->add_option("--nmax", o.nmax, "Basis bound per axis")
      ->capture_default_str();
  verify_cmd->add_option("--gamma", o.gamma, "Eccentricity")->capture_default_str();
  verify_cmd->add_option("--tol", o.tol, "Relative tolerance")->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Report table build throughput");
  add_geometry(bench_cmd, o);
  bench_cmd->add_option("--nxmax", o.nxmax, "Basis bound along x")->required();
  bench_cmd->add_option("--nymax", o.nymax, "Basis bound along y")->required();
  bench_cmd->add_option("--threads", o.threads, "Worker threads (default 1)");

  std::vector<const char*> argv;
  argv.push_back("coulomb2d");
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (element_cmd->parsed()) return cmd_element(o, out);
    if (table_cmd->parsed()) return cmd_table(o, out);
    if (kernel_cmd->parsed()) return cmd_kernel(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out, hooks);
    if (bench_cmd->parsed()) return cmd_bench(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace coulomb2d::cli
