// Field snapshot serialization and CSV trace output.
//
// Snapshot format (little-endian): magic "SH2D", u32 N, f64 L, u8 space tag
// (0 = position, 1 = frequency), then N^2 complex128 values row-major.  Each
// snapshot is accompanied by a JSON sidecar with the grid metadata.
#pragma once

#include "sh2d/evolve.hpp"
#include "sh2d/grid.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sh2d {

/// Shortest round-trip decimal form of a double, for deterministic text output.
inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline void write_snapshot(const std::string& path, const Field& u) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_snapshot: cannot open " + path);
  f.write("SH2D", 4);
  const std::uint32_t n = static_cast<std::uint32_t>(u.spec().N);
  const double L = u.spec().L;
  const std::uint8_t tag = u.space() == Space::position ? 0 : 1;
  f.write(reinterpret_cast<const char*>(&n), 4);
  f.write(reinterpret_cast<const char*>(&L), 8);
  f.write(reinterpret_cast<const char*>(&tag), 1);
  f.write(reinterpret_cast<const char*>(u.values().data()),
          static_cast<std::streamsize>(u.size() * sizeof(cplx)));
  if (!f) throw std::runtime_error("write_snapshot: short write to " + path);

  nlohmann::json side;
  side["format"] = "SH2D";
  side["N"] = n;
  side["L"] = L;
  side["space"] = tag == 0 ? "position" : "frequency";
  side["h"] = u.spec().h();
  side["dxi"] = u.spec().dxi();
  std::ofstream sf(path + ".json");
  sf << side.dump(2) << "\n";
}

inline Field read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_snapshot: cannot open " + path);
  char magic[4];
  std::uint32_t n = 0;
  double L = 0.0;
  std::uint8_t tag = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&n), 4);
  f.read(reinterpret_cast<char*>(&L), 8);
  f.read(reinterpret_cast<char*>(&tag), 1);
  if (!f || std::memcmp(magic, "SH2D", 4) != 0 || tag > 1)
    throw std::runtime_error("read_snapshot: bad header in " + path);
  GridSpec spec(L, static_cast<int>(n));
  std::vector<cplx> vals(spec.size());
  f.read(reinterpret_cast<char*>(vals.data()),
         static_cast<std::streamsize>(vals.size() * sizeof(cplx)));
  if (!f) throw std::runtime_error("read_snapshot: truncated data in " + path);
  return Field(spec, tag == 0 ? Space::position : Space::frequency,
               std::move(vals));
}

inline void write_trace_csv(const std::string& path, const EvolutionTrace& tr) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_trace_csv: cannot open " + path);
  f << "t,mass,energy,h1alpha\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    f << format_double(tr.times[i]) << ',' << format_double(tr.mass[i]) << ','
      << format_double(tr.energy[i]) << ',' << format_double(tr.h1alpha[i])
      << '\n';
}

/// FNV-1a over a byte string; used as a content hash in run metadata.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sh2d
