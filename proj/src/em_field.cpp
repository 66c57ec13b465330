#include "qhd/em_field.hpp"

#include <algorithm>
#include <cmath>

#include "qhd/error.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

namespace {
EMFieldSet blank(const GridSpec& grid, double mass, double charge) {
  validate(grid);
  EMFieldSet em;
  em.grid = grid;
  const std::size_t n = grid.n_points;
  em.W.assign(n, 0.0);
  em.grad_W.assign(n, 0.0);
  em.A.assign(n, 0.0);
  em.grad_A.assign(n, 0.0);
  em.dA_dt.assign(n, 0.0);
  em.mass = mass;
  em.charge = charge;
  return em;
}
}  // namespace

EMFieldSet EMFieldSet::free(const GridSpec& grid, double mass, double charge) {
  return blank(grid, mass, charge);
}

EMFieldSet EMFieldSet::uniform_e(const GridSpec& grid, double e_field, double mass, double charge) {
  EMFieldSet em = blank(grid, mass, charge);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    em.W[j] = -e_field * grid.z(j);
    em.grad_W[j] = -e_field;
  }
  return em;
}

EMFieldSet EMFieldSet::harmonic(const GridSpec& grid, double omega, double mass, double charge) {
  if (charge == 0.0) fail(ErrorKind::invalid_argument, "harmonic trap needs a nonzero charge");
  EMFieldSet em = blank(grid, mass, charge);
  const double k = mass * omega * omega / charge;
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const double z = grid.z(j);
    em.W[j] = 0.5 * k * z * z;
    em.grad_W[j] = k * z;
  }
  return em;
}

EMFieldSet EMFieldSet::tabulated(const GridSpec& grid, std::vector<double> W, std::vector<double> A,
                                 double mass, double charge) {
  EMFieldSet em = blank(grid, mass, charge);
  if (W.size() != grid.n_points || A.size() != grid.n_points)
    fail(ErrorKind::grid_mismatch, "tabulated potentials must have n_points entries");
  em.W = std::move(W);
  em.A = std::move(A);
  em.grad_W = grad(em.W, grid);
  em.grad_A = grad(em.A, grid);
  return em;
}

bool EMFieldSet::is_static() const {
  return std::all_of(dA_dt.begin(), dA_dt.end(), [](double v) { return v == 0.0; });
}

bool EMFieldSet::has_vector_potential() const {
  auto nz = [](double v) { return v != 0.0; };
  return std::any_of(A.begin(), A.end(), nz) || std::any_of(dA_dt.begin(), dA_dt.end(), nz);
}

std::vector<double> EMFieldSet::A_at(double t) const {
  std::vector<double> a(A.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = A[j] + t * dA_dt[j];
  return a;
}

std::vector<double> EMFieldSet::E() const {
  std::vector<double> e(W.size());
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = -grad_W[j] - dA_dt[j];
  return e;
}

void validate(const EMFieldSet& em) {
  validate(em.grid);
  const std::size_t n = em.grid.n_points;
  if (em.W.size() != n || em.grad_W.size() != n || em.A.size() != n || em.grad_A.size() != n ||
      em.dA_dt.size() != n)
    fail(ErrorKind::grid_mismatch, "EMFieldSet tables do not match the grid");
  if (!(em.mass >= 0.0)) fail(ErrorKind::invalid_argument, "mass must be >= 0");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(em.W) || !finite(em.A) || !finite(em.grad_W) || !finite(em.grad_A) || !finite(em.dA_dt))
    fail(ErrorKind::invalid_argument, "EMFieldSet contains non-finite values");
}

}  // namespace qhd
