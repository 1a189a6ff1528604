#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace zygmund {

struct Peak {
  double t = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of f on [lo, hi].
template <class F>
Peak golden_max(F&& f, double lo, double hi, int iterations = 80) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? Peak{x1, f1} : Peak{x2, f2};
}

// Indices of the `count` largest local maxima of a periodic sample sequence.
inline std::vector<std::size_t> top_local_maxima(std::span<double const> v, std::size_t count) {
  std::size_t const n = v.size();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    double const left = v[(i + n - 1) % n];
    double const right = v[(i + 1) % n];
    if (v[i] >= left && v[i] >= right) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t x, std::size_t y) { return v[x] > v[y]; });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

// Least-squares slope of y against x.
inline double fit_slope(std::span<double const> x, std::span<double const> y) {
  std::size_t const n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace zygmund
