#pragma once

// Finite-range diagnostics for the alpha-characteristic and for the
// generally-monotone (GM+) and almost-increasing (GA+) sequence classes.
// Class membership is asymptotic; everything here reports constants
// observed on the tested range only.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "zygmund/errors.hpp"
#include "zygmund/psi_family.hpp"

namespace zygmund {

enum class AlphaTrend { bounded, growing, decreasing };

inline char const* to_string(AlphaTrend t) {
  switch (t) {
    case AlphaTrend::bounded: return "bounded";
    case AlphaTrend::growing: return "growing";
    case AlphaTrend::decreasing: return "decreasing";
  }
  return "?";
}

struct GaPlusEntry {
  double eps;
  double k_min;
};

struct ClassifierReport {
  double alpha_inf = std::numeric_limits<double>::infinity();
  double alpha_sup = 0.0;
  AlphaTrend alpha_trend = AlphaTrend::bounded;
  std::size_t undefined_points = 0;  // grid points where g' vanished
  double grid_min = 0.0;
  double grid_max = 0.0;
  double gm_plus_A = 0.0;
  std::vector<GaPlusEntry> ga_plus;
  bool convex_ok = true;
};

// alpha(g; t) = g(t) / (t |g'(t+0)|)
inline double alpha_characteristic(WeightedProduct const& w, double t) {
  double const d = w.derivative(t);
  if (d == 0.0)
    throw DerivativeZero("g' vanishes at t=" + format_number(t) + " for " +
                         w.base().descriptor());
  return w(t) / (t * std::abs(d));
}

// Log-spaced grid 1 .. t_max with `per_decade` points per decade.
inline std::vector<double> default_alpha_grid(double t_max = 1e6, int per_decade = 20) {
  std::vector<double> grid;
  int const decades = static_cast<int>(std::ceil(std::log10(t_max) - 1e-12));
  for (int i = 0; i <= decades * per_decade; ++i) {
    double const t = std::pow(10.0, static_cast<double>(i) / per_decade);
    if (t > t_max * (1 + 1e-12)) break;
    grid.push_back(t);
  }
  return grid;
}

inline ClassifierReport classify_membership(WeightedProduct const& w,
                                            std::span<double const> grid) {
  if (grid.empty()) throw EmptySequence("classify_membership needs a non-empty grid");
  if (grid.front() != 1.0) throw InvalidArgument("classify_membership grid must start at 1");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("classify_membership grid must increase");

  ClassifierReport report;
  report.grid_min = grid.front();
  report.grid_max = grid.back();

  // trend: extremes of the first decade against those of the last one, so a
  // shift such as the K in ln(t + K) cannot mask slow growth
  double first_min = std::numeric_limits<double>::infinity(), first_max = 0.0;
  double last_min = std::numeric_limits<double>::infinity(), last_max = 0.0;
  double const first_end = 10.0 * grid.front();
  double const last_begin = grid.back() / 10.0;

  for (double t : grid) {
    double alpha;
    try {
      alpha = alpha_characteristic(w, t);
    } catch (DerivativeZero const&) {
      ++report.undefined_points;
      report.alpha_sup = std::numeric_limits<double>::infinity();
      continue;
    }
    report.alpha_inf = std::min(report.alpha_inf, alpha);
    report.alpha_sup = std::max(report.alpha_sup, alpha);
    if (t <= first_end) {
      first_min = std::min(first_min, alpha);
      first_max = std::max(first_max, alpha);
    }
    if (t >= last_begin) {
      last_min = std::min(last_min, alpha);
      last_max = std::max(last_max, alpha);
    }
  }

  if (first_max > 0.0 && last_max > 0.0) {
    if (last_max >= 2.0 * first_min)
      report.alpha_trend = AlphaTrend::growing;
    else if (first_max >= 2.0 * last_min)
      report.alpha_trend = AlphaTrend::decreasing;
  }
  return report;
}

// Minimal A with a_{n1} + sum_{k=n1}^{m-1} |a_k - a_{k+1}| <= A a_m over all
// 1 <= n1 <= m <= N. Linear time via prefix variation.
inline double gm_plus_constant(std::span<double const> a) {
  if (a.empty()) throw EmptySequence("gm_plus_constant needs a non-empty sequence");
  for (double v : a)
    if (!(v > 0.0)) throw InvalidArgument("gm_plus_constant needs a positive sequence");

  // variation[m] = sum_{k<m} |a_k - a_{k+1}| (0-based)
  double variation = 0.0;
  double best_start = a[0];  // max over n1 <= m of (a_{n1} - variation[n1])
  double A = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (m > 0) {
      variation += std::abs(a[m - 1] - a[m]);
      best_start = std::max(best_start, a[m] - variation);
    }
    A = std::max(A, (best_start + variation) / a[m]);
  }
  return A;
}

inline std::vector<double> default_eps_grid() {
  return {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
}

// For each eps: K_min = max_{n1 <= n2} (a_{n1} n1^{-eps}) / (a_{n2} n2^{-eps}).
inline std::vector<GaPlusEntry> ga_plus_report(std::span<double const> a,
                                               std::span<double const> eps_grid) {
  if (a.empty()) throw EmptySequence("ga_plus_report needs a non-empty sequence");
  if (eps_grid.empty()) throw EmptySequence("ga_plus_report needs a non-empty eps grid");
  std::vector<GaPlusEntry> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    double running_max = 0.0;
    double k_min = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      // log domain keeps k^{-eps} scaling harmless for long sequences
      double const b = std::log(a[i]) - eps * std::log(static_cast<double>(i + 1));
      running_max = i == 0 ? b : std::max(running_max, b);
      k_min = std::max(k_min, std::exp(running_max - b));
    }
    out.push_back({eps, k_min});
  }
  return out;
}

}  // namespace zygmund
