#pragma once

// Field snapshot exchange formats.
//
// Binary layout (little-endian):
//   bytes 0..7   magic "SHJBFLD1"
//   uint32       dim
//   uint32       points_per_axis
//   uint8        representation tag: 0 = physical (doubles),
//                                    1 = spectral (re,im double pairs)
//   payload      row-major values
//
// Text layout: a header comment line
//   # shjb-field dim=<n> points=<N> repr=<physical|spectral>
// followed by one value per line (spectral lines hold "re im").
// Values are printed with 17 significant digits; both formats round-trip
// bit-exactly.

#include "shjb/field.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace shjb {

using AnyField = std::variant<SpatialField, SpectralField>;

void write_binary(std::ostream& os, const SpatialField& f);
void write_binary(std::ostream& os, const SpectralField& f);
AnyField read_binary(std::istream& is);

void write_text(std::ostream& os, const SpatialField& f);
void write_text(std::ostream& os, const SpectralField& f);
AnyField read_text(std::istream& is);

void save_field(const std::string& path, const AnyField& f, bool binary);
AnyField load_field(const std::string& path);

} // namespace shjb
