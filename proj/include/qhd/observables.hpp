#pragma once

#include <vector>

#include "qhd/spinor_field.hpp"

namespace qhd {

/// <z> = sum z rho dx / sum rho dx (no periodic unwrapping; packets must stay clear of the seam).
double mean_position(const SpinorField& psi);
/// Standard deviation of z under rho.
double position_width(const SpinorField& psi);
double mean_position(const std::vector<double>& rho, const GridSpec& grid);
double position_width(const std::vector<double>& rho, const GridSpec& grid);

/// Angular frequency of the strongest non-DC peak of a uniformly sampled series.
/// The mean is removed, a Hann window applied, the series zero-padded by `pad`,
/// and the peak refined by parabolic interpolation on log magnitude.
double spectral_peak(const std::vector<double>& series, double dt, std::size_t pad = 8);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qhd
