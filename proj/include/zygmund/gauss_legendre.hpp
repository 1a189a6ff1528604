#pragma once

#include <array>
#include <cmath>

namespace zygmund::detail {

inline constexpr std::array<double, 8> gl8_nodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};

inline constexpr std::array<double, 8> gl8_weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// 8-point Gauss-Legendre on [a, b].
template <class F>
double gauss8(F&& f, double a, double b) {
  double const half = 0.5 * (b - a);
  double const mid = 0.5 * (b + a);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl8_nodes.size(); ++i)
    sum += gl8_weights[i] * f(mid + half * gl8_nodes[i]);
  return half * sum;
}

// Same rule on [a, b] split in two; the difference is used as an error proxy.
template <class F>
double gauss8_split(F&& f, double a, double b, double* error) {
  double const whole = gauss8(f, a, b);
  double const m = 0.5 * (a + b);
  double const halves = gauss8(f, a, m) + gauss8(f, m, b);
  if (error) *error += std::abs(halves - whole);
  return halves;
}

}  // namespace zygmund::detail
