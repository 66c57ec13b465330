#include "qhd/observables.hpp"

#include <cmath>
#include <numbers>

#include "qhd/error.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

double mean_position(const std::vector<double>& rho, const GridSpec& grid) {
  double s = 0.0, w = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    s += grid.z(j) * rho[j];
    w += rho[j];
  }
  if (!(w > 0.0)) fail(ErrorKind::invalid_argument, "mean_position of a zero density");
  return s / w;
}

double position_width(const std::vector<double>& rho, const GridSpec& grid) {
  const double mu = mean_position(rho, grid);
  double s = 0.0, w = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double d = grid.z(j) - mu;
    s += d * d * rho[j];
    w += rho[j];
  }
  return std::sqrt(s / w);
}

double mean_position(const SpinorField& psi) { return mean_position(density(psi), psi.grid()); }
double position_width(const SpinorField& psi) { return position_width(density(psi), psi.grid()); }

double spectral_peak(const std::vector<double>& series, double dt, std::size_t pad) {
  const std::size_t n = series.size();
  if (n < 8) fail(ErrorKind::invalid_argument, "spectral_peak needs at least 8 samples");
  std::size_t m = 8;
  while (m < n * pad) m *= 2;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<cplx> buf(m, 0.0), out(m);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(n - 1));
    buf[i] = (series[i] - mean) * w;
  }
  const Spectral sp(GridSpec::make(m, dt));
  sp.forward(buf, out);
  std::size_t best = 1;
  for (std::size_t i = 1; i < m / 2; ++i)
    if (std::abs(out[i]) > std::abs(out[best])) best = i;
  double shift = 0.0;
  if (best > 1 && best + 1 < m / 2) {
    const double a = std::log(std::abs(out[best - 1]));
    const double b = std::log(std::abs(out[best]));
    const double c = std::log(std::abs(out[best + 1]));
    const double den = a - 2.0 * b + c;
    if (den != 0.0) shift = 0.5 * (a - c) / den;
  }
  return 2.0 * std::numbers::pi * (static_cast<double>(best) + shift) / (static_cast<double>(m) * dt);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::invalid_argument, "fit_slope needs >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) fail(ErrorKind::invalid_argument, "fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

}  // namespace qhd
