#include "qhd/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "qhd/error.hpp"

namespace qhd {

struct Spectral::Plan {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  // FFTW planning is not thread-safe; execution with the new-array API is.
  static std::mutex& mutex() {
    static auto* m = new std::mutex;
    return *m;
  }
};

namespace {

std::shared_ptr<const Spectral::Plan> shared_plan(std::size_t n);

}  // namespace

Spectral::Spectral(const GridSpec& grid) : n_(grid.n_points), dx_(grid.dx) {
  validate(grid);
  plan_ = shared_plan(n_);
  auto k = std::make_shared<std::vector<double>>(n_);
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n_) * dx_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto m = static_cast<long>(i);
    const long half = static_cast<long>(n_ / 2);
    (*k)[i] = dk * static_cast<double>(m < half ? m : m - static_cast<long>(n_));
  }
  k_ = std::move(k);
}

namespace {

std::shared_ptr<const Spectral::Plan> shared_plan(std::size_t n) {
  // Plans live for the whole process.
  static auto* cache = new std::map<std::size_t, std::shared_ptr<const Spectral::Plan>>();
  std::lock_guard lock(Spectral::Plan::mutex());
  if (auto it = cache->find(n); it != cache->end()) return it->second;
  auto plan = std::make_shared<Spectral::Plan>();
  std::vector<cplx> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan->fwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, flags);
  plan->bwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, flags);
  if (!plan->fwd || !plan->bwd) fail(ErrorKind::invalid_argument, "FFTW planning failed");
  (*cache)[n] = plan;
  return plan;
}

}  // namespace

void Spectral::forward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != n_) fail(ErrorKind::grid_mismatch, "Spectral::forward size mismatch");
  fftw_execute_dft(plan_->fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void Spectral::backward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != n_) fail(ErrorKind::grid_mismatch, "Spectral::backward size mismatch");
  fftw_execute_dft(plan_->bwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double inv = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v *= inv;
}

std::vector<cplx> Spectral::derivative(std::span<const cplx> f, int order) const {
  std::vector<cplx> spec(n_), out(n_);
  forward(f, spec);
  const auto& k = *k_;
  for (std::size_t i = 0; i < n_; ++i) {
    if (order % 2 == 1 && i == n_ / 2) {
      spec[i] = 0.0;
      continue;
    }
    cplx factor = 1.0;
    for (int o = 0; o < order; ++o) factor *= cplx(0.0, k[i]);
    spec[i] *= factor;
  }
  backward(spec, out);
  return out;
}

std::vector<double> Spectral::derivative(std::span<const double> f, int order) const {
  std::vector<cplx> c(f.begin(), f.end());
  auto d = derivative(std::span<const cplx>(c), order);
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = d[i].real();
  return out;
}

Spectral::Interpolant Spectral::interpolant(std::span<const cplx> f, double z_origin) const {
  Interpolant ip;
  ip.coeffs.resize(n_);
  forward(f, ip.coeffs);
  const double inv = 1.0 / static_cast<double>(n_);
  for (auto& c : ip.coeffs) c *= inv;
  ip.z_origin = z_origin;
  return ip;
}

std::pair<cplx, cplx> Spectral::evaluate(const Interpolant& ip, double z) const {
  // The Nyquist mode is split symmetrically between +k_N and -k_N so the
  // interpolant of real data is real and reproduces the samples exactly.
  const auto& k = *k_;
  const double s = z - ip.z_origin;
  cplx value = 0.0, slope = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == n_ / 2) {
      const double kn = -k[i];
      value += ip.coeffs[i] * std::cos(kn * s);
      slope += ip.coeffs[i] * (-kn * std::sin(kn * s));
      continue;
    }
    const cplx e = std::polar(1.0, k[i] * s);
    value += ip.coeffs[i] * e;
    slope += ip.coeffs[i] * cplx(0.0, k[i]) * e;
  }
  return {value, slope};
}

SpinorField grad(const SpinorField& psi) {
  Spectral sp(psi.grid());
  SpinorField out = psi;
  for (std::size_t a = 0; a < psi.n_components(); ++a) {
    auto d = sp.derivative(psi.component(a), 1);
    std::copy(d.begin(), d.end(), out.component(a).begin());
  }
  return out;
}

SpinorField laplacian(const SpinorField& psi) {
  Spectral sp(psi.grid());
  SpinorField out = psi;
  for (std::size_t a = 0; a < psi.n_components(); ++a) {
    auto d = sp.derivative(psi.component(a), 2);
    std::copy(d.begin(), d.end(), out.component(a).begin());
  }
  return out;
}

std::vector<double> grad(const std::vector<double>& f, const GridSpec& grid) {
  return Spectral(grid).derivative(std::span<const double>(f), 1);
}

std::vector<double> divergence(const std::vector<double>& jz, const GridSpec& grid) { return grad(jz, grid); }

std::vector<double> laplacian(const std::vector<double>& f, const GridSpec& grid) {
  return Spectral(grid).derivative(std::span<const double>(f), 2);
}

}  // namespace qhd
