#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hallmhd/axisym.hpp"
#include "hallmhd/errors.hpp"
#include "hallmhd/hall_dynamics.hpp"
#include "hallmhd/maxreg.hpp"

namespace hallmhd {

// Binary snapshot: magic "HMHD1", version, mode tag, dims, scalar metadata,
// then the little-endian 64-bit payload guarded by a CRC32.
namespace snapdetail {

inline constexpr char kMagic[5] = {'H', 'M', 'H', 'D', '1'};
inline constexpr std::uint32_t kVersion = 1;

inline std::uint32_t crc32(const std::uint8_t* data, std::size_t len) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i)
    c = table[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

struct Writer {
  std::vector<std::uint8_t> bytes;
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xFFu);
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back((v >> (8 * i)) & 0xFFu);
  }
  void f64(double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    u64(v);
  }
};

struct Reader {
  const std::uint8_t* p;
  const std::uint8_t* end;
  void need(std::size_t n) {
    if (static_cast<std::size_t>(end - p) < n)
      throw SnapshotError("snapshot file is truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    p += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    p += 8;
    return v;
  }
  double f64() {
    const std::uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
};

enum class Tag : std::uint32_t {
  hall3d = 1,
  coupled3d = 2,
  axi = 3,
  maxreg = 4,
  kmc = 5,
};

inline void payload_spectral(Writer& w, const SpectralVectorField& f) {
  for (const cplx& z : f.a) {
    w.f64(z.real());
    w.f64(z.imag());
  }
}

inline void read_spectral(Reader& r, SpectralVectorField& f) {
  for (cplx& z : f.a) {
    const double re = r.f64();
    const double im = r.f64();
    z = cplx(re, im);
  }
}

inline void write_file(const std::string& path, Tag tag,
                       const std::array<std::uint64_t, 4>& dims,
                       const std::array<double, 4>& meta,
                       const std::vector<std::uint8_t>& payload) {
  Writer h;
  h.bytes.insert(h.bytes.end(), kMagic, kMagic + 5);
  h.u32(kVersion);
  h.u32(static_cast<std::uint32_t>(tag));
  for (auto d : dims) h.u64(d);
  for (auto m : meta) h.f64(m);
  h.u64(payload.size());
  h.u32(crc32(payload.data(), payload.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(h.bytes.data()), h.bytes.size());
  out.write(reinterpret_cast<const char*>(payload.data()), payload.size());
  if (!out) throw SnapshotError("short write to '" + path + "'");
}

struct Header {
  Tag tag;
  std::array<std::uint64_t, 4> dims;
  std::array<double, 4> meta;
  std::vector<std::uint8_t> payload;
};

inline Header read_file(const std::string& path, Tag expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  Reader r{bytes.data(), bytes.data() + bytes.size()};
  r.need(5);
  if (std::memcmp(r.p, kMagic, 5) != 0)
    throw SnapshotError("'" + path + "' is not a snapshot (bad magic)");
  r.p += 5;
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw SnapshotError("snapshot version " + std::to_string(version) +
                        " is not supported; this build reads version " +
                        std::to_string(kVersion) +
                        " (re-save with a matching build)");
  Header h;
  h.tag = static_cast<Tag>(r.u32());
  if (h.tag != expected)
    throw SnapshotError("snapshot mode tag " +
                        std::to_string(static_cast<std::uint32_t>(h.tag)) +
                        " does not match the requested mode");
  for (auto& d : h.dims) d = r.u64();
  for (auto& m : h.meta) m = r.f64();
  const std::uint64_t len = r.u64();
  const std::uint32_t crc = r.u32();
  r.need(len);
  h.payload.assign(r.p, r.p + len);
  if (crc32(h.payload.data(), h.payload.size()) != crc)
    throw SnapshotError("snapshot payload checksum mismatch in '" + path + "'");
  return h;
}

}  // namespace snapdetail

inline void save_snapshot(const SpectralVectorField& B, double t,
                          const std::string& path) {
  snapdetail::Writer p;
  snapdetail::payload_spectral(p, B);
  snapdetail::write_file(path, snapdetail::Tag::hall3d,
                         {static_cast<std::uint64_t>(B.grid.n), 0, 0, 0},
                         {t, 0.0, 0.0, 0.0}, p.bytes);
}

inline std::pair<SpectralVectorField, double> load_snapshot_hall(
    const std::string& path) {
  auto h = snapdetail::read_file(path, snapdetail::Tag::hall3d);
  Grid3 g(static_cast<int>(h.dims[0]));
  SpectralVectorField B(g);
  snapdetail::Reader r{h.payload.data(), h.payload.data() + h.payload.size()};
  snapdetail::read_spectral(r, B);
  return {std::move(B), h.meta[0]};
}

inline void save_snapshot(const MhdState& s, const std::string& path) {
  snapdetail::Writer p;
  snapdetail::payload_spectral(p, s.u_hat);
  snapdetail::payload_spectral(p, s.B_hat);
  snapdetail::write_file(path, snapdetail::Tag::coupled3d,
                         {static_cast<std::uint64_t>(s.u_hat.grid.n), 0, 0, 0},
                         {s.t, 0.0, 0.0, 0.0}, p.bytes);
}

inline MhdState load_snapshot_coupled(const std::string& path) {
  auto h = snapdetail::read_file(path, snapdetail::Tag::coupled3d);
  Grid3 g(static_cast<int>(h.dims[0]));
  MhdState s(g);
  snapdetail::Reader r{h.payload.data(), h.payload.data() + h.payload.size()};
  snapdetail::read_spectral(r, s.u_hat);
  snapdetail::read_spectral(r, s.B_hat);
  s.t = h.meta[0];
  return s;
}

inline void save_snapshot(const AxiState& s, const std::string& path) {
  snapdetail::Writer p;
  for (double v : s.psi.v) p.f64(v);
  for (double v : s.b.v) p.f64(v);
  const AxiGrid& g = s.psi.grid;
  snapdetail::write_file(path, snapdetail::Tag::axi,
                         {static_cast<std::uint64_t>(g.nx),
                          static_cast<std::uint64_t>(g.nr), 0, 0},
                         {s.t, 0.0, g.Lx, g.R}, p.bytes);
}

inline AxiState load_snapshot_axi(const std::string& path) {
  auto h = snapdetail::read_file(path, snapdetail::Tag::axi);
  AxiGrid g(static_cast<int>(h.dims[0]), static_cast<int>(h.dims[1]),
            h.meta[2], h.meta[3]);
  AxiState s(g);
  snapdetail::Reader r{h.payload.data(), h.payload.data() + h.payload.size()};
  for (double& v : s.psi.v) v = r.f64();
  for (double& v : s.b.v) v = r.f64();
  s.t = h.meta[0];
  return s;
}

inline void save_snapshot(const MaxwellRegState& s, const std::string& path) {
  snapdetail::Writer p;
  snapdetail::payload_spectral(p, s.B_hat);
  snapdetail::payload_spectral(p, s.E_hat);
  snapdetail::write_file(path, snapdetail::Tag::maxreg,
                         {static_cast<std::uint64_t>(s.B_hat.grid.n), 0, 0, 0},
                         {s.t, s.eps, 0.0, 0.0}, p.bytes);
}

inline MaxwellRegState load_snapshot_maxreg(const std::string& path) {
  auto h = snapdetail::read_file(path, snapdetail::Tag::maxreg);
  Grid3 g(static_cast<int>(h.dims[0]));
  MaxwellRegState s(SpectralVectorField{g}, SpectralVectorField{g}, h.meta[1],
                    h.meta[0]);
  snapdetail::Reader r{h.payload.data(), h.payload.data() + h.payload.size()};
  snapdetail::read_spectral(r, s.B_hat);
  snapdetail::read_spectral(r, s.E_hat);
  return s;
}

}  // namespace hallmhd
