#include "bolab/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace bolab {

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ConfigError("snapshot: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

void header(std::ostream& os, const Grid& g, double time, FieldKind kind) {
  os.write("BOF1", 4);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
  put_le<double>(os, g.length());
  put_le<double>(os, time);
  put_le<std::uint8_t>(os, static_cast<std::uint8_t>(kind));
}

void payload(std::ostream& os, const cvec& v) {
  for (auto z : v) {
    put_le<double>(os, z.real());
    put_le<double>(os, z.imag());
  }
}

}  // namespace

void write_field(std::ostream& os, const RealField& f, double time) {
  header(os, *f.grid, time, FieldKind::real);
  for (double a : f.v) put_le<double>(os, a);
}

void write_field(std::ostream& os, const ComplexField& f, double time) {
  header(os, *f.grid, time, FieldKind::complex);
  payload(os, f.v);
}

void write_field(std::ostream& os, const SpectralField& F, double time) {
  header(os, *F.grid, time, FieldKind::spectral);
  payload(os, F.c);
}

Snapshot read_field(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "BOF1", 4) != 0)
    throw ConfigError("snapshot: bad magic (expected BOF1)");
  const auto n = get_le<std::uint32_t>(is);
  const double L = get_le<double>(is);
  Snapshot s;
  s.time = get_le<double>(is);
  const auto kind = get_le<std::uint8_t>(is);
  if (kind > 2) throw ConfigError("snapshot: unknown kind byte " + std::to_string(kind));
  s.kind = static_cast<FieldKind>(kind);
  s.grid = make_grid(n, L);
  if (s.kind == FieldKind::real) {
    s.real.resize(n);
    for (auto& a : s.real) a = get_le<double>(is);
  } else {
    s.values.resize(n);
    for (auto& z : s.values) {
      const double re = get_le<double>(is);
      const double im = get_le<double>(is);
      z = {re, im};
    }
  }
  return s;
}

void save_field(const std::string& path, const RealField& f, double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  write_field(os, f, time);
}

Snapshot load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  return read_field(is);
}

RealField as_real(const Snapshot& s) {
  switch (s.kind) {
    case FieldKind::real: return {s.grid, s.real};
    case FieldKind::complex: return real_part(ComplexField{s.grid, s.values});
    case FieldKind::spectral: return real_part(idft(SpectralField{s.grid, s.values, true}));
  }
  return {};
}

}  // namespace bolab
