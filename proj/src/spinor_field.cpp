#include "qhd/spinor_field.hpp"

#include <algorithm>
#include <cmath>

#include "qhd/error.hpp"

namespace qhd {

SpinorField::SpinorField(const GridSpec& grid, std::size_t n_components, double time,
                         Representation rep)
    : grid_(grid), n_components_(n_components), time_(time), rep_(rep),
      data_(grid.n_points * n_components) {
  if (n_components == 0) fail(ErrorKind::invalid_argument, "SpinorField needs at least one component");
}

bool SpinorField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

std::vector<double> density(const SpinorField& psi) {
  std::vector<double> rho(psi.n_points(), 0.0);
  for (std::size_t a = 0; a < psi.n_components(); ++a) {
    auto c = psi.component(a);
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] += std::norm(c[j]);
  }
  return rho;
}

double norm2(const SpinorField& psi) {
  double s = 0.0;
  for (const auto& v : psi.data()) s += std::norm(v);
  return s * psi.grid().dx;
}

namespace {
void require_compatible(const SpinorField& a, const SpinorField& b, const char* where) {
  require_same_space(a.grid(), b.grid(), where);
  if (a.n_components() != b.n_components())
    fail(ErrorKind::grid_mismatch, std::string(where) + ": component count mismatch");
}
}  // namespace

cplx inner(const SpinorField& a, const SpinorField& b) {
  require_compatible(a, b, "inner");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
  return s * a.grid().dx;
}

void scale(SpinorField& psi, cplx s) {
  for (auto& v : psi.data()) v *= s;
}

double max_abs_diff(const SpinorField& a, const SpinorField& b) {
  require_compatible(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double l2_distance(const SpinorField& a, const SpinorField& b) {
  require_compatible(a, b, "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s * a.grid().dx);
}

}  // namespace qhd
