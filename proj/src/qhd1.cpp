#include "qhd/qhd1.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "qhd/error.hpp"

namespace qhd {

namespace {

constexpr std::array<char, 8> magic{'Q', 'H', 'D', '1', '\0', '\0', '\0', '\0'};
constexpr std::uint32_t version = 1;

static_assert(std::endian::native == std::endian::little, "QHD1 I/O assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) fail(ErrorKind::io, "truncated QHD1 record");
  return v;
}

}  // namespace

void write_qhd1(std::ostream& out, const SpinorField& field) {
  out.write(magic.data(), magic.size());
  put<std::uint32_t>(out, version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.n_points()));
  put<double>(out, field.grid().dx);
  put<double>(out, field.time());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.n_components()));
  for (const cplx& v : field.data()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) fail(ErrorKind::io, "failed writing QHD1 record");
}

bool read_qhd1(std::istream& in, SpinorField& field) {
  std::array<char, 8> m{};
  in.read(m.data(), m.size());
  if (in.gcount() == 0 && in.eof()) return false;
  if (!in || m != magic) fail(ErrorKind::io, "bad QHD1 magic");
  const auto ver = get<std::uint32_t>(in);
  if (ver != version) fail(ErrorKind::io, "unsupported QHD1 version " + std::to_string(ver));
  const auto n = get<std::uint32_t>(in);
  const auto dx = get<double>(in);
  const auto t = get<double>(in);
  const auto nc = get<std::uint32_t>(in);
  GridSpec grid;
  try {
    grid = GridSpec::make(n, dx);
  } catch (const Error& e) {
    fail(ErrorKind::io, std::string("QHD1 header describes an invalid grid: ") + e.what());
  }
  if (nc == 0) fail(ErrorKind::io, "QHD1 record with zero components");
  field = SpinorField(grid, nc, t);
  for (auto& v : field.data()) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = cplx(re, im);
  }
  return true;
}

void save_qhd1(const std::string& path, const std::vector<SpinorField>& frames) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
  for (const auto& f : frames) write_qhd1(out, f);
  out.flush();
  if (!out) fail(ErrorKind::io, "failed writing " + path);
}

std::vector<SpinorField> load_qhd1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  std::vector<SpinorField> frames;
  SpinorField f;
  while (read_qhd1(in, f)) frames.push_back(f);
  if (frames.empty()) fail(ErrorKind::io, path + " holds no QHD1 records");
  return frames;
}

SpinorField scalar_record(const GridSpec& grid, const std::vector<double>& values, double time) {
  if (values.size() != grid.n_points) fail(ErrorKind::grid_mismatch, "scalar_record size mismatch");
  SpinorField f(grid, 1, time);
  for (std::size_t j = 0; j < values.size(); ++j) f(0, j) = values[j];
  return f;
}

}  // namespace qhd
