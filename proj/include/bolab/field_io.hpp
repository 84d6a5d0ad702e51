#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "bolab/spectral.hpp"

namespace bolab {

// "BOF1" | u32 n | f64 length | f64 time | u8 kind | f64 payload, all little-endian
enum class FieldKind : std::uint8_t { real = 0, complex = 1, spectral = 2 };

struct Snapshot {
  FieldKind kind = FieldKind::real;
  GridPtr grid;
  double time = 0.0;
  rvec real;   // kind == real
  cvec values; // kind == complex (samples) or spectral (coefficients)
};

inline constexpr std::size_t kSnapshotHeaderBytes = 25;

void write_field(std::ostream& os, const RealField& f, double time);
void write_field(std::ostream& os, const ComplexField& f, double time);
void write_field(std::ostream& os, const SpectralField& F, double time);
Snapshot read_field(std::istream& is);

void save_field(const std::string& path, const RealField& f, double time);
Snapshot load_field(const std::string& path);
RealField as_real(const Snapshot& s);

}  // namespace bolab
