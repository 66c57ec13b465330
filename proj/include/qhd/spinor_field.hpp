#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qhd/grid.hpp"

namespace qhd {

using cplx = std::complex<double>;

/// Basis the 4-component field is expressed in. Two-component (Pauli) and
/// scalar fields ignore it.
enum class Representation { chiral_as_paper, dirac };

/// Complex multi-component field on a GridSpec. Storage is component-major:
/// all points of component 0, then component 1, and so on.
class SpinorField {
 public:
  SpinorField() = default;
  SpinorField(const GridSpec& grid, std::size_t n_components, double time = 0.0,
              Representation rep = Representation::chiral_as_paper);

  const GridSpec& grid() const { return grid_; }
  std::size_t n_components() const { return n_components_; }
  std::size_t n_points() const { return grid_.n_points; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  Representation representation() const { return rep_; }
  void set_representation(Representation rep) { rep_ = rep; }

  std::span<cplx> component(std::size_t a) {
    return {data_.data() + a * grid_.n_points, grid_.n_points};
  }
  std::span<const cplx> component(std::size_t a) const {
    return {data_.data() + a * grid_.n_points, grid_.n_points};
  }
  cplx& operator()(std::size_t a, std::size_t j) { return data_[a * grid_.n_points + j]; }
  const cplx& operator()(std::size_t a, std::size_t j) const { return data_[a * grid_.n_points + j]; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  bool all_finite() const;

 private:
  GridSpec grid_{};
  std::size_t n_components_ = 0;
  double time_ = 0.0;
  Representation rep_ = Representation::chiral_as_paper;
  std::vector<cplx> data_;
};

/// rho(z) = sum_a |psi_a(z)|^2.
std::vector<double> density(const SpinorField& psi);
/// sum_z rho dx.
double norm2(const SpinorField& psi);
/// sum_z psi_a^dagger psi_b dx; grids and component counts must agree.
cplx inner(const SpinorField& a, const SpinorField& b);
/// Multiplies every entry by s.
void scale(SpinorField& psi, cplx s);
/// Largest |a - b| entry over all components.
double max_abs_diff(const SpinorField& a, const SpinorField& b);
/// sqrt(sum |a - b|^2 dx).
double l2_distance(const SpinorField& a, const SpinorField& b);

}  // namespace qhd
