#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qhd/spinor_field.hpp"

namespace qhd {

/// QHD1 record: 8-byte magic "QHD1\0\0\0\0", little-endian u32 version (1),
/// u32 n_points, f64 dx, f64 time_stamp, u32 n_components, then
/// n_components * n_points (re, im) f64 pairs, component-major.
/// A trajectory file is a plain concatenation of records.
inline constexpr std::size_t qhd1_header_bytes = 36;

void write_qhd1(std::ostream& out, const SpinorField& field);
/// Reads one record. Returns false at a clean end of stream; throws io errors otherwise.
/// dt of the returned grid is left at 0.1 dx.
bool read_qhd1(std::istream& in, SpinorField& field);

void save_qhd1(const std::string& path, const std::vector<SpinorField>& frames);
std::vector<SpinorField> load_qhd1(const std::string& path);

/// Real scalar field as a one-component record with zero imaginary part.
SpinorField scalar_record(const GridSpec& grid, const std::vector<double>& values, double time);

}  // namespace qhd
