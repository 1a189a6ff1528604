#pragma once

#include <cmath>
#include <numbers>

namespace zygmund {

// Phase angle beta*pi/2 of the kernels cos(kt + beta*pi/2).
//
// cos/sin are exact for integer beta. The cos == 0 branch (odd integer beta)
// is only ever taken for exact integers; a non-integer beta whose cosine is
// numerically tiny raises `near_odd_integer` instead.
struct Phase {
  double beta = 0.0;
  double cos = 1.0;
  double sin = 0.0;
  bool integer = true;
  bool cos_is_zero = false;
  bool near_odd_integer = false;

  explicit Phase(double beta_in) : beta(beta_in) {
    integer = std::isfinite(beta) && std::floor(beta) == beta;
    if (integer) {
      double m = std::fmod(beta, 4.0);
      if (m < 0) m += 4.0;
      switch (static_cast<int>(m)) {
        case 0: cos = 1.0; sin = 0.0; break;
        case 1: cos = 0.0; sin = 1.0; break;
        case 2: cos = -1.0; sin = 0.0; break;
        default: cos = 0.0; sin = -1.0; break;
      }
      cos_is_zero = cos == 0.0;
    } else {
      double const angle = beta * std::numbers::pi / 2.0;
      cos = std::cos(angle);
      sin = std::sin(angle);
      near_odd_integer = std::abs(cos) < 1e-12;
    }
  }
};

}  // namespace zygmund
