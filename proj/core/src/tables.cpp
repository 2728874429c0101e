#include "coulomb2d/tables.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <boost/crc.hpp>

#include "coulomb2d/errors.hpp"
#include "coulomb2d/kernel.hpp"

namespace coulomb2d {

namespace {

constexpr std::array<char, 4> kMagic = {'C', '2', 'D', 'V'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 3 * 8 + 1 + 3 * 4 + 8;
constexpr std::size_t kEntryBytes = 8 * 2 + 8;
constexpr std::size_t kCrcBytes = 4;

class ByteWriter {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  template <typename UInt>
  void uint(UInt v) {
    for (std::size_t k = 0; k < sizeof(UInt); ++k) {
      buf_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

  [[nodiscard]] const std::vector<std::uint8_t>& buffer() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {}

  template <typename UInt>
  UInt uint() {
    need(sizeof(UInt));
    UInt v = 0;
    for (std::size_t k = 0; k < sizeof(UInt); ++k) {
      v |= static_cast<UInt>(static_cast<UInt>(data_[pos_ + k]) << (8 * k));
    }
    pos_ += sizeof(UInt);
    return v;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  void bytes(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
  }

 private:
  void need(std::size_t n) const {
    if (size_ - pos_ < n) {
      throw FormatError("table file truncated");
    }
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32(const std::uint8_t* data, std::size_t n) {
  boost::crc_32_type crc;
  crc.process_bytes(data, n);
  return crc.checksum();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BasisSpec BasisSpec::rectangular(std::uint32_t nx_max, std::uint32_t ny_max) {
  return {Mode::kRectangular, nx_max, ny_max, 0};
}

BasisSpec BasisSpec::shell(std::uint32_t shell_max) {
  return {Mode::kShell, shell_max, shell_max, shell_max};
}

bool BasisSpec::contains(const Orbital& o) const noexcept {
  if (mode == Mode::kShell) {
    return std::uint32_t{o.nx} + o.ny <= shell_max;
  }
  return o.nx <= nx_max && o.ny <= ny_max;
}

std::vector<Orbital> BasisSpec::orbitals() const {
  constexpr std::uint32_t kLimit = std::numeric_limits<std::uint16_t>::max();
  if (nx_max > kLimit || ny_max > kLimit || shell_max > kLimit) {
    throw DomainError("basis bound exceeds the 16-bit quantum number range");
  }
  std::vector<Orbital> out;
  out.reserve(orbital_count());
  for (std::uint32_t nx = 0; nx <= nx_max; ++nx) {
    for (std::uint32_t ny = 0; ny <= ny_max; ++ny) {
      const Orbital o{static_cast<std::uint16_t>(nx),
                      static_cast<std::uint16_t>(ny)};
      if (contains(o)) {
        out.push_back(o);
      }
    }
  }
  return out;
}

std::size_t BasisSpec::orbital_count() const noexcept {
  if (mode == Mode::kShell) {
    return (std::size_t{shell_max} + 1) * (shell_max + 2) / 2;
  }
  return (std::size_t{nx_max} + 1) * (ny_max + 1);
}

bool operator==(const ElementTable& a, const ElementTable& b) noexcept {
  auto same = [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  };
  if (!same(a.geom.ax, b.geom.ax) || !same(a.geom.ay, b.geom.ay) ||
      !same(a.geom.xi, b.geom.xi) || !(a.basis == b.basis) ||
      a.entries.size() != b.entries.size()) {
    return false;
  }
  return std::equal(a.entries.begin(), a.entries.end(), b.entries.begin(),
                    [&](const auto& x, const auto& y) {
                      return x.first == y.first && same(x.second, y.second);
                    });
}

std::vector<ElementIndex> canonical_indices(const BasisSpec& basis) {
  const auto orbs = basis.orbitals();
  std::vector<ElementIndex> out;
  for (const auto& o1 : orbs) {
    for (const auto& o2 : orbs) {
      for (const auto& o3 : orbs) {
        for (const auto& o4 : orbs) {
          const ElementIndex idx{{o1, o2, o3, o4}};
          if (selection_rule(idx) && canonicalize(idx) == idx) {
            out.push_back(idx);
          }
        }
      }
    }
  }
  return out;  // already ascending: the loops run in lexicographic order
}

ElementTable build_table(const Geometry& geom, const BasisSpec& basis,
                         unsigned threads) {
  geom.validate();
  if (basis.orbital_count() == 0) {
    throw DomainError("basis has no orbitals");
  }
  const auto indices = canonical_indices(basis);

  unsigned i_max = 0;
  unsigned j_max = 0;
  for (const auto& idx : indices) {
    const auto [i, j] = required_kernel_extent(geom, idx);
    i_max = std::max(i_max, i);
    j_max = std::max(j_max, j);
  }
  const KernelTable kernel = KernelTable::fill(geom.gamma(), i_max, j_max);

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(indices.size(), 1)));

  std::vector<double> values(indices.size());
  // Strided assignment: indices are sorted, so cost grows along the list.
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < indices.size(); k += stride) {
      values[k] = element(geom, indices[k], kernel);
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            work(t, threads);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }

  ElementTable table{geom, basis, {}};
  for (std::size_t k = 0; k < indices.size(); ++k) {
    table.entries.emplace_hint(table.entries.end(), indices[k], values[k]);
  }
  return table;
}

double lookup(const ElementTable& table, const ElementIndex& idx) {
  for (const auto& o : idx.orbitals) {
    if (!table.basis.contains(o)) {
      std::ostringstream msg;
      msg << "orbital " << o << " outside the table basis";
      throw OutOfBasis(msg.str());
    }
  }
  if (!selection_rule(idx)) {
    return 0.0;
  }
  const auto it = table.entries.find(canonicalize(idx));
  if (it == table.entries.end()) {
    std::ostringstream msg;
    msg << "index " << idx << " missing from table";
    throw OutOfBasis(msg.str());
  }
  return it->second;
}

void write_binary(const ElementTable& table, std::ostream& out) {
  ByteWriter w;
  w.bytes(kMagic.data(), kMagic.size());
  w.uint(kFormatVersion);
  w.f64(table.geom.ax);
  w.f64(table.geom.ay);
  w.f64(table.geom.xi);
  w.uint(static_cast<std::uint8_t>(table.basis.mode));
  w.uint(table.basis.nx_max);
  w.uint(table.basis.ny_max);
  w.uint(table.basis.shell_max);
  w.uint(static_cast<std::uint64_t>(table.entries.size()));
  for (const auto& [idx, value] : table.entries) {
    for (const auto& o : idx.orbitals) {
      w.uint(o.nx);
      w.uint(o.ny);
    }
    w.f64(value);
  }
  const auto& buf = w.buffer();
  ByteWriter tail;
  tail.uint(crc32(buf.data(), buf.size()));

  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  out.write(reinterpret_cast<const char*>(tail.buffer().data()),
            static_cast<std::streamsize>(tail.buffer().size()));
  if (!out) {
    throw IoError("failed writing element table");
  }
}

void save(const ElementTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_binary(table, out);
}

ElementTable read_binary(std::istream& in) {
  const std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("failed reading element table");
  }
  if (data.size() < kHeaderBytes + kCrcBytes) {
    throw FormatError("table file truncated");
  }

  ByteReader r(data.data(), data.size());
  std::array<char, 4> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) {
    throw FormatError("bad magic; not a coulomb2d table");
  }
  const auto version = r.uint<std::uint32_t>();
  if (version != kFormatVersion) {
    throw FormatError("unsupported table version " + std::to_string(version));
  }

  ElementTable table;
  table.geom.ax = r.f64();
  table.geom.ay = r.f64();
  table.geom.xi = r.f64();
  const auto mode = r.uint<std::uint8_t>();
  if (mode > 1) {
    throw FormatError("unknown basis mode " + std::to_string(mode));
  }
  table.basis.mode = static_cast<BasisSpec::Mode>(mode);
  table.basis.nx_max = r.uint<std::uint32_t>();
  table.basis.ny_max = r.uint<std::uint32_t>();
  table.basis.shell_max = r.uint<std::uint32_t>();
  const auto count = r.uint<std::uint64_t>();

  const std::size_t payload = data.size() - kCrcBytes;
  if (count > (payload - kHeaderBytes) / kEntryBytes ||
      kHeaderBytes + count * kEntryBytes != payload) {
    throw FormatError("table length does not match entry count");
  }
  ByteReader crc_reader(data.data() + payload, kCrcBytes);
  if (crc_reader.uint<std::uint32_t>() != crc32(data.data(), payload)) {
    throw FormatError("checksum mismatch");
  }

  for (std::uint64_t e = 0; e < count; ++e) {
    ElementIndex idx;
    for (auto& o : idx.orbitals) {
      o.nx = r.uint<std::uint16_t>();
      o.ny = r.uint<std::uint16_t>();
    }
    const double value = r.f64();
    if (!(canonicalize(idx) == idx) || !selection_rule(idx)) {
      throw FormatError("stored index is not canonical and parity-allowed");
    }
    if (!table.entries.empty() && !(table.entries.rbegin()->first < idx)) {
      throw FormatError("entries out of order or duplicated");
    }
    table.entries.emplace_hint(table.entries.end(), idx, value);
  }
  return table;
}

ElementTable load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return read_binary(in);
}

void write_csv(const ElementTable& table, std::ostream& out) {
  out << "nx1,ny1,nx2,ny2,nx3,ny3,nx4,ny4,value\n";
  for (const auto& [idx, value] : table.entries) {
    for (const auto& o : idx.orbitals) {
      out << o.nx << ',' << o.ny << ',';
    }
    out << format_double(value) << '\n';
  }
  if (!out) {
    throw IoError("failed writing CSV");
  }
}

void save_csv(const ElementTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_csv(table, out);
}

}  // namespace coulomb2d
