#include "qhd/grid.hpp"

#include <cmath>
#include <sstream>

#include "qhd/error.hpp"

namespace qhd {

GridSpec GridSpec::make(std::size_t n_points, double dx, double dt, double t0) {
  GridSpec g;
  g.n_points = n_points;
  g.dx = dx;
  g.dt = dt > 0.0 ? dt : 0.1 * dx;
  g.t0 = t0;
  validate(g);
  return g;
}

std::vector<double> GridSpec::coordinates() const {
  std::vector<double> zs(n_points);
  for (std::size_t j = 0; j < n_points; ++j) zs[j] = z(j);
  return zs;
}

void validate(const GridSpec& g) {
  if (g.n_points < 8 || (g.n_points & (g.n_points - 1)) != 0) {
    std::ostringstream os;
    os << "grid.n_points must be a power of two >= 8, got " << g.n_points;
    fail(ErrorKind::invalid_argument, os.str());
  }
  if (!(g.dx > 0.0) || !std::isfinite(g.dx)) fail(ErrorKind::invalid_argument, "grid.dx must be > 0");
  if (!(g.dt > 0.0) || !std::isfinite(g.dt)) fail(ErrorKind::invalid_argument, "grid.dt must be > 0");
}

void require_same_space(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!a.same_space(b)) {
    std::ostringstream os;
    os << where << ": grid mismatch (" << a.n_points << " x " << a.dx << " vs " << b.n_points
       << " x " << b.dx << ")";
    fail(ErrorKind::grid_mismatch, os.str());
  }
}

}  // namespace qhd
