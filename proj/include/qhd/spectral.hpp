#pragma once

#include <memory>
#include <span>
#include <vector>

#include "qhd/grid.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

/// FFT and spectral calculus on one periodic grid. Instances are cheap to copy
/// and safe to use concurrently; the underlying FFTW plans are shared per size.
class Spectral {
 public:
  explicit Spectral(const GridSpec& grid);

  std::size_t size() const { return n_; }
  /// Angular wavenumbers in FFT order; the Nyquist entry is -pi/dx.
  const std::vector<double>& wavenumbers() const { return *k_; }

  /// Unnormalised forward transform: F_k = sum_j f_j exp(-i k z'_j), z'_j = j dx.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// Inverse transform including the 1/N factor.
  void backward(std::span<const cplx> in, std::span<cplx> out) const;

  /// d^order f / dz^order. Odd orders drop the Nyquist mode so real input stays real.
  std::vector<cplx> derivative(std::span<const cplx> f, int order = 1) const;
  std::vector<double> derivative(std::span<const double> f, int order = 1) const;

  /// Band-limited interpolant of f evaluated at an arbitrary coordinate z
  /// (grid convention z_j = (j - n/2) dx) together with its first derivative.
  struct Interpolant {
    std::vector<cplx> coeffs;  // normalised Fourier coefficients
    double z_origin = 0.0;     // coordinate of sample 0
  };
  Interpolant interpolant(std::span<const cplx> f, double z_origin) const;
  /// Returns {f(z), f'(z)}.
  std::pair<cplx, cplx> evaluate(const Interpolant& ip, double z) const;

 struct Plan;

 private:
  std::size_t n_ = 0;
  double dx_ = 0.0;
  std::shared_ptr<const Plan> plan_;
  std::shared_ptr<const std::vector<double>> k_;
};

/// Spectral d/dz of every component.
SpinorField grad(const SpinorField& psi);
/// Spectral d^2/dz^2 of every component.
SpinorField laplacian(const SpinorField& psi);
/// In one dimension the divergence of the single z-component is its derivative.
std::vector<double> divergence(const std::vector<double>& jz, const GridSpec& grid);
std::vector<double> grad(const std::vector<double>& f, const GridSpec& grid);
std::vector<double> laplacian(const std::vector<double>& f, const GridSpec& grid);

}  // namespace qhd
