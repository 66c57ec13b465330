#pragma once

#include <cstddef>
#include <vector>

namespace qhd {

enum class Boundary { periodic };

/// Uniform periodic 1D lattice. Point j sits at z_j = (j - n/2) dx so the box is centred on 0.
struct GridSpec {
  std::size_t n_points = 0;
  double dx = 0.0;
  double dt = 0.0;
  Boundary boundary = Boundary::periodic;
  double t0 = 0.0;

  /// Validates and fills dt = 0.1 dx (c = 1) when dt <= 0 is passed.
  static GridSpec make(std::size_t n_points, double dx, double dt = 0.0, double t0 = 0.0);

  double length() const { return static_cast<double>(n_points) * dx; }
  double z(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n_points / 2)) * dx;
  }
  std::vector<double> coordinates() const;
  /// c dt / dx, reported with every run.
  double courant() const { return dt / dx; }

  bool same_space(const GridSpec& other) const {
    return n_points == other.n_points && dx == other.dx;
  }
};

void validate(const GridSpec& grid);
void require_same_space(const GridSpec& a, const GridSpec& b, const char* where);

}  // namespace qhd
