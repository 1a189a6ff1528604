#pragma once

// Real trigonometric polynomials a0/2 + sum (a_k cos kt + b_k sin kt),
// their evaluation, L_q norms over [0, 2 pi], and the plain-text
// coefficient file format.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "zygmund/errors.hpp"
#include "zygmund/fft_grid.hpp"
#include "zygmund/format.hpp"
#include "zygmund/numerics.hpp"

namespace zygmund {

// Index 0 of `cos_coeffs` holds a0 (twice the mean); index 0 of `sin_coeffs`
// is unused and kept at zero. Both vectors have length degree + 1.
struct TrigPolynomial {
  std::vector<double> cos_coeffs{0.0};
  std::vector<double> sin_coeffs{0.0};

  TrigPolynomial() = default;

  explicit TrigPolynomial(std::size_t degree)
      : cos_coeffs(degree + 1, 0.0), sin_coeffs(degree + 1, 0.0) {}

  TrigPolynomial(double a0, std::vector<double> a, std::vector<double> b) {
    std::size_t const m = std::max(a.size(), b.size());
    cos_coeffs.assign(m + 1, 0.0);
    sin_coeffs.assign(m + 1, 0.0);
    cos_coeffs[0] = a0;
    std::copy(a.begin(), a.end(), cos_coeffs.begin() + 1);
    std::copy(b.begin(), b.end(), sin_coeffs.begin() + 1);
  }

  std::size_t degree() const { return cos_coeffs.size() - 1; }
  double a0() const { return cos_coeffs[0]; }
  double a(std::size_t k) const { return k < cos_coeffs.size() ? cos_coeffs[k] : 0.0; }
  double b(std::size_t k) const { return k >= 1 && k < sin_coeffs.size() ? sin_coeffs[k] : 0.0; }

  friend bool operator==(TrigPolynomial const&, TrigPolynomial const&) = default;
};

inline double eval_poly(TrigPolynomial const& p, double t) {
  double sum = 0.5 * p.a0();
  for (std::size_t k = 1; k <= p.degree(); ++k) {
    double const kt = static_cast<double>(k) * t;
    sum += p.cos_coeffs[k] * std::cos(kt) + p.sin_coeffs[k] * std::sin(kt);
  }
  return sum;
}

// Values at t_j = 2 pi (j + shift) / M.
inline std::vector<double> sample_poly(TrigPolynomial const& p, std::size_t M, double shift = 0.0) {
  return detail::synthesize_on_grid(p.cos_coeffs, p.sin_coeffs, M, shift);
}

struct QuadConfig {
  double tol = 1e-10;          // relative change allowed between grid doublings
  std::size_t oversample = 16;  // grid points per unit of degree
  std::size_t min_grid = 64;
  std::size_t max_grid = std::size_t{1} << 24;
  double shift = 0.0;  // grid offset in units of the grid step
  std::size_t peaks = 3;  // sup norm: number of grid peaks refined
};

struct NormEstimate {
  double value = 0.0;
  double error = 0.0;
  std::size_t grid_size = 0;
  double argmax = 0.0;  // sup norm only
};

namespace detail {

inline double grid_lq(std::span<double const> v, double q) {
  double const w = 2.0 * std::numbers::pi / static_cast<double>(v.size());
  double sum = 0.0;
  if (q == 2.0) {
    for (double x : v) sum += x * x;
    return std::sqrt(w * sum);
  }
  if (q == 1.0) {
    for (double x : v) sum += std::abs(x);
    return w * sum;
  }
  for (double x : v) sum += std::pow(std::abs(x), q);
  return std::pow(w * sum, 1.0 / q);
}

inline std::size_t base_grid(std::size_t degree, QuadConfig const& cfg) {
  std::size_t M = next_pow2(std::max({cfg.min_grid, cfg.oversample * std::max<std::size_t>(degree, 1),
                                      2 * degree + 2}));
  return M;
}

}  // namespace detail

// ||p||_q over [0, 2 pi]. q = inf is the sup norm.
inline NormEstimate norm_q(TrigPolynomial const& p, double q, QuadConfig const& cfg = {}) {
  if (!(q >= 1.0)) throw InvalidArgument("norm_q requires q >= 1");
  std::size_t M = detail::base_grid(p.degree(), cfg);

  if (std::isinf(q)) {
    auto const v = sample_poly(p, M, cfg.shift);
    std::vector<double> mag(v.size());
    std::transform(v.begin(), v.end(), mag.begin(), [](double x) { return std::abs(x); });
    double const h = 2.0 * std::numbers::pi / static_cast<double>(M);
    NormEstimate est;
    est.grid_size = M;
    std::size_t const imax = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
    est.value = mag[imax];
    est.argmax = (static_cast<double>(imax) + cfg.shift) * h;
    double const grid_max = est.value;
    auto const f = [&](double t) { return std::abs(eval_poly(p, t)); };
    for (std::size_t i : top_local_maxima(mag, cfg.peaks)) {
      double const t0 = (static_cast<double>(i) + cfg.shift) * h;
      Peak const pk = golden_max(f, t0 - h, t0 + h);
      if (pk.value > est.value) {
        est.value = pk.value;
        est.argmax = pk.t;
      }
    }
    // golden search resolves the peak to ~sqrt(eps); report that slack plus
    // a rounding term proportional to the coefficient mass
    double mass = 0.5 * std::abs(p.a0());
    for (std::size_t k = 1; k <= p.degree(); ++k)
      mass += std::abs(p.cos_coeffs[k]) + std::abs(p.sin_coeffs[k]);
    est.error = 1e-14 * mass + 1e-12 * std::max(est.value - grid_max, 0.0);
    return est;
  }

  double prev = detail::grid_lq(sample_poly(p, M, cfg.shift), q);
  while (true) {
    if (2 * M > cfg.max_grid)
      throw QuadratureNotConverged("L_" + format_number(q) + " quadrature did not settle below grid " +
                                   std::to_string(cfg.max_grid));
    M *= 2;
    double const next = detail::grid_lq(sample_poly(p, M, cfg.shift), q);
    double const change = std::abs(next - prev);
    if (change <= cfg.tol * std::max(std::abs(next), std::numeric_limits<double>::min())) {
      return {next, change, M, 0.0};
    }
    prev = next;
  }
}

// Coefficient file: header "a0=<value>", then rows "k a_k b_k".
inline void write_coefficients(std::ostream& out, TrigPolynomial const& p) {
  out << "a0=" << format_number(p.a0()) << '\n';
  for (std::size_t k = 1; k <= p.degree(); ++k)
    out << k << ' ' << format_number(p.cos_coeffs[k]) << ' ' << format_number(p.sin_coeffs[k]) << '\n';
}

inline TrigPolynomial read_coefficients(std::istream& in) {
  std::string line;
  bool have_header = false;
  double a0 = 0.0;
  std::vector<std::pair<std::size_t, std::pair<double, double>>> rows;
  std::size_t degree = 0;
  while (std::getline(in, line)) {
    auto const body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!have_header) {
      if (body.rfind("a0=", 0) != 0) throw InvalidArgument("coefficient file must start with 'a0='");
      a0 = detail::parse_double(body.substr(3), "a0");
      have_header = true;
      continue;
    }
    std::istringstream row{std::string(body)};
    long long k;
    double ak, bk;
    if (!(row >> k >> ak >> bk) || k < 1)
      throw InvalidArgument("bad coefficient row '" + std::string(body) + "'");
    rows.push_back({static_cast<std::size_t>(k), {ak, bk}});
    degree = std::max(degree, static_cast<std::size_t>(k));
  }
  if (!have_header) throw InvalidArgument("coefficient file lacks 'a0=' header");
  TrigPolynomial p(degree);
  p.cos_coeffs[0] = a0;
  for (auto const& [k, ab] : rows) {
    p.cos_coeffs[k] = ab.first;
    p.sin_coeffs[k] = ab.second;
  }
  return p;
}

}  // namespace zygmund
