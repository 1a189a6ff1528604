#pragma once

// Uniform-grid synthesis of real trigonometric polynomials through FFTW.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "zygmund/errors.hpp"

namespace zygmund::detail {

// FFTW's planner is not re-entrant; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// Values of a0/2 + sum_{k>=1} (a_k cos k t + b_k sin k t) at
// t_j = 2 pi (j + shift) / M, j = 0..M-1. `a[0]` is a0, `b[0]` is ignored.
// Requires M even and degree < M/2.
inline std::vector<double> synthesize_on_grid(std::span<double const> a, std::span<double const> b,
                                              std::size_t M, double shift = 0.0) {
  std::size_t const degree = a.empty() ? 0 : a.size() - 1;
  if (M < 4 || M % 2 != 0) throw InvalidArgument("grid size must be even and >= 4");
  if (2 * degree >= M) throw InvalidArgument("grid too coarse for polynomial degree");

  std::size_t const bins = M / 2 + 1;
  std::unique_ptr<fftw_complex[], FftwFree> spectrum(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<double[], FftwFree> values(static_cast<double*>(fftw_malloc(sizeof(double) * M)));
  if (!spectrum || !values) throw std::bad_alloc();

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(M), spectrum.get(), values.get(), FFTW_ESTIMATE);
  }

  for (std::size_t k = 0; k < bins; ++k) spectrum[k][0] = spectrum[k][1] = 0.0;
  if (!a.empty()) spectrum[0][0] = 0.5 * a[0];
  double const step = 2.0 * 3.14159265358979323846 / static_cast<double>(M);
  for (std::size_t k = 1; k <= degree; ++k) {
    std::complex<double> c(0.5 * a[k], -0.5 * (k < b.size() ? b[k] : 0.0));
    if (shift != 0.0) c *= std::polar(1.0, static_cast<double>(k) * shift * step);
    spectrum[k][0] = c.real();
    spectrum[k][1] = c.imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return std::vector<double>(values.get(), values.get() + M);
}

inline std::size_t next_pow2(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

}  // namespace zygmund::detail
