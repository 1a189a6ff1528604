#pragma once

// Pointwise evaluation of the kernel tails
//
//   Psi_{-beta,n}(t) = sum_{k>=n} psi(k) cos(k t + beta pi / 2),
//
// which converge only conditionally when sum psi(k) diverges. The series is
// summed directly up to an index N and the rest is resolved by repeated
// summation by parts (Abel transformation): each step trades psi for its
// forward difference against the partial sums of e^{ikt}, so the remainder
// after M steps is bounded by |Delta^M psi(N)| / (|sin(t/2)| |2 sin(t/2)|^M).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "zygmund/errors.hpp"
#include "zygmund/numerics.hpp"
#include "zygmund/phase.hpp"
#include "zygmund/psi_family.hpp"
#include "zygmund/tail_sums.hpp"
#include "zygmund/trig_polynomial.hpp"

namespace zygmund {

struct KernelSpec {
  PsiFamily family;
  double beta = 0.0;
  std::size_t start_index = 1;  // 1: full kernel, n > 1: residual tail
};

struct KernelOptions {
  std::size_t hard_cap = 10'000'000;
  int abel_order = 3;
  double zero_threshold = 1e-8;  // |sin(t/2)| below this is treated as t = 0
};

struct KernelValue {
  double value = 0.0;
  double error = 0.0;
  std::size_t terms = 0;  // directly summed terms
};

struct TruncationPlan {
  std::size_t cutoff = 0;
  double tail_control = 0.0;
  double stability_change = std::numeric_limits<double>::quiet_NaN();
};

// D_{k,beta}(t) = cos(beta pi/2) / 2 + sum_{v=1}^{k} cos(v t - beta pi/2)
inline double dirichlet_like(std::size_t k, double beta, double t) {
  Phase const ph(beta);
  double const s = std::sin(0.5 * t);
  if (std::abs(s) > 1e-8) {
    // sum_{v=1}^{k} cos(v t - phi) = [sin((k+1/2)t - phi) - sin(t/2 - phi)] / (2 sin(t/2))
    double const kh = static_cast<double>(k) + 0.5;
    double const num = (std::sin(kh * t) * ph.cos - std::cos(kh * t) * ph.sin) -
                       (std::sin(0.5 * t) * ph.cos - std::cos(0.5 * t) * ph.sin);
    return 0.5 * ph.cos + num / (2.0 * s);
  }
  double sum = 0.5 * ph.cos;
  for (std::size_t v = 1; v <= k; ++v) {
    double const vt = static_cast<double>(v) * t;
    sum += std::cos(vt) * ph.cos + std::sin(vt) * ph.sin;
  }
  return sum;
}

// D_{k,beta} as a trigonometric polynomial.
inline TrigPolynomial dirichlet_polynomial(std::size_t k, double beta) {
  Phase const ph(beta);
  TrigPolynomial p(k);
  p.cos_coeffs[0] = ph.cos;
  for (std::size_t v = 1; v <= k; ++v) {
    p.cos_coeffs[v] = ph.cos;
    p.sin_coeffs[v] = ph.sin;
  }
  return p;
}

namespace detail {

inline double reduce_angle(double t) {
  double r = std::remainder(t, 2.0 * std::numbers::pi);
  return r;
}

// Delta^m psi(N) = psi(N) sum_j (-1)^{m-j} C(m,j) (psi(N+j)/psi(N) - 1).
// The ratios come from log_ratio and expm1, so the cancellation costs only a
// factor N^{m-1} in relative accuracy instead of N^m.
inline long double forward_difference(PsiFamily const& psi, std::size_t N, int m) {
  double const Nd = static_cast<double>(N);
  if (m == 0) return psi(Nd);
  long double sum = 0.0L;
  long double binom = m;  // C(m, 1)
  for (int j = 1; j <= m; ++j) {
    long double const term = binom * std::expm1(static_cast<long double>(psi.log_ratio(Nd, j)));
    sum += ((m - j) % 2 == 0) ? term : -term;
    binom = binom * (m - j) / (j + 1);
  }
  return static_cast<long double>(psi(Nd)) * sum;
}

// Rounding in forward_difference: each ratio carries ~1 ulp of the log ratio.
inline double forward_difference_noise(PsiFamily const& psi, std::size_t N, int m) {
  if (m == 0) return 1e-16 * psi(static_cast<double>(N));
  return 4e-16 * std::ldexp(1.0, m) * m / static_cast<double>(N) * psi(static_cast<double>(N));
}

inline double abel_remainder_bound(PsiFamily const& psi, std::size_t N, int order, double s) {
  double const d = static_cast<double>(std::abs(forward_difference(psi, N, order)));
  return d / (s * std::pow(2.0 * s, order));
}

// Smallest index at which the summand is analytic, so that forward
// differences are monotone from there on.
inline std::size_t smooth_from(PsiFamily const& psi) {
  if (auto const* tab = psi.as_tabulated()) return tab->values->size();
  return 1;
}

// sum_{k=lo}^{hi-1} w_k e^{ikt} for a coefficient callback, with periodic
// resynchronisation of the rotating phasor.
template <class Coef>
std::complex<double> phasor_sum(Coef&& coef, std::size_t lo, std::size_t hi, double t) {
  std::complex<double> sum = 0.0;
  std::complex<double> const step = std::polar(1.0, t);
  std::complex<double> z = std::polar(1.0, static_cast<double>(lo) * t);
  for (std::size_t k = lo; k < hi; ++k) {
    if (((k - lo) & 255u) == 0) z = std::polar(1.0, static_cast<double>(k) * t);
    sum += coef(k) * z;
    z *= step;
  }
  return sum;
}

}  // namespace detail

// Psi_{-beta,n}(t) to absolute accuracy `tol`.
inline KernelValue eval_kernel(KernelSpec const& spec, double t, double tol,
                               KernelOptions const& opts = {}) {
  if (!(tol > 0.0)) throw InvalidArgument("eval_kernel requires tol > 0");
  Phase const ph(spec.beta);
  PsiFamily const& psi = spec.family;
  std::size_t const n = std::max<std::size_t>(spec.start_index, 1);
  t = detail::reduce_angle(t);
  double const s = std::abs(std::sin(0.5 * t));

  KernelValue out;
  if (s <= opts.zero_threshold) {
    // cos(k*0 + phi) = cos(phi) for every k
    if (ph.cos == 0.0) return out;
    TailSum const tail = tail_sum_l1(psi, n);
    out.value = ph.cos * tail.value;
    out.error = std::abs(ph.cos) * 0.5 * tail.bracket.width();
    out.terms = tail.cutoff - n;
    return out;
  }

  int const order = std::max(1, opts.abel_order);
  std::size_t lo = std::max({n, detail::smooth_from(psi)});
  if (detail::abel_remainder_bound(psi, lo, order, s) > tol) {
    std::size_t hi = lo;
    do {
      lo = hi;
      hi *= 2;
      if (hi > opts.hard_cap)
        throw SlowConvergence("kernel tail at t=" + format_number(t) + " needs more than " +
                              std::to_string(opts.hard_cap) + " terms");
    } while (detail::abel_remainder_bound(psi, hi, order, s) > tol);
    while (hi - lo > 1) {
      std::size_t const mid = lo + (hi - lo) / 2;
      if (detail::abel_remainder_bound(psi, mid, order, s) > tol)
        lo = mid;
      else
        hi = mid;
    }
    lo = hi;
  }
  std::size_t const N = lo;

  std::complex<double> sum =
      detail::phasor_sum([&](std::size_t k) { return psi(static_cast<double>(k)); }, n, N, t);

  std::complex<double> const z = std::polar(1.0, t);
  std::complex<double> const one_minus_z = 1.0 - z;
  std::complex<double> factor = std::polar(1.0, static_cast<double>(N) * t) / one_minus_z;
  std::complex<double> const ratio = z / one_minus_z;
  for (int m = 0; m < order; ++m) {
    sum += static_cast<double>(detail::forward_difference(psi, N, m)) * factor;
    factor *= ratio;
  }

  out.value = ph.cos * sum.real() - ph.sin * sum.imag();
  out.terms = N - n;
  double rounding = 1e-15 * static_cast<double>(N - n + 1) * psi(static_cast<double>(n));
  for (int m = 0; m < order; ++m)
    rounding += detail::forward_difference_noise(psi, N, m) / std::pow(2.0 * s, m + 1);
  out.error = detail::abel_remainder_bound(psi, N, order, s) + rounding;
  return out;
}

namespace detail {

inline double tail_control_at(PsiFamily const& psi, double p_prime, std::size_t K) {
  TailConfig const cheap{4096, 4};
  if (std::isinf(p_prime)) return tail_sum_l1(psi, K + 1, cheap).bracket.hi;
  double const tail = tail_sum_pprime(psi, p_prime, K + 1, cheap).bracket.hi;
  double const Kd = static_cast<double>(K);
  double const edge = std::pow(psi(Kd), p_prime) * std::pow(Kd, p_prime - 1.0);
  return std::pow(tail + edge, 1.0 / p_prime);
}

}  // namespace detail

// Smallest power-of-two cutoff K >= n with
//   (sum_{k>K} psi^{p'} k^{p'-2} + psi^{p'}(K) K^{p'-1})^{1/p'} <= tol
// (sum_{k>K} psi(k) for p' = inf).
inline TruncationPlan plan_truncation(KernelSpec const& spec, double p_prime, double tol,
                                      KernelOptions const& opts = {}) {
  if (!(p_prime > 1.0)) throw InvalidArgument("plan_truncation requires p' > 1");
  if (!(tol > 0.0)) throw InvalidArgument("plan_truncation requires tol > 0");
  PsiFamily const& psi = spec.family;
  bool const converges = std::isinf(p_prime) ? psi.tail_converges(1.0, 0.0)
                                             : psi.tail_converges(p_prime, p_prime - 2.0);
  if (!converges)
    throw DivergentTail("kernel tail of " + psi.descriptor() + " is not in L_" +
                        format_number(p_prime));
  std::size_t K = detail::next_pow2(std::max<std::size_t>(spec.start_index, 1));
  while (true) {
    double const control = detail::tail_control_at(psi, p_prime, K);
    if (control <= tol) return {K, control};
    if (2 * K > opts.hard_cap)
      throw SlowConvergence("truncation of " + psi.descriptor() + " needs cutoff above " +
                            std::to_string(opts.hard_cap));
    K *= 2;
  }
}

// As above, then keeps doubling until `norm_at(K)` and `norm_at(2K)` differ
// by less than tol.
template <class NormAt>
TruncationPlan plan_truncation(KernelSpec const& spec, double p_prime, double tol, NormAt&& norm_at,
                               KernelOptions const& opts = {}) {
  TruncationPlan plan = plan_truncation(spec, p_prime, tol, opts);
  double current = norm_at(plan.cutoff);
  while (true) {
    if (2 * plan.cutoff > opts.hard_cap)
      throw SlowConvergence("truncated norm did not stabilise below cutoff " +
                            std::to_string(opts.hard_cap));
    double const doubled = norm_at(2 * plan.cutoff);
    plan.stability_change = std::abs(doubled - current);
    if (plan.stability_change < tol) return plan;
    plan.cutoff *= 2;
    plan.tail_control = detail::tail_control_at(spec.family, p_prime, plan.cutoff);
    current = doubled;
  }
}

struct SupTailCheck {
  bool applicable = false;
  double grid_sup = 0.0;
  double argmax = 0.0;
  double bound = 0.0;
  double eval_error = 0.0;
  bool pass = false;
};

struct SupTailReport {
  SupTailCheck cosine;  // beta = 0 against sum_{k>=n} psi(k)
  SupTailCheck sine;    // beta = 1 against (pi + 2) psi(n) n
};

namespace detail {

inline SupTailCheck sup_on_grid(KernelSpec const& spec, std::size_t points, double tol,
                                KernelOptions const& opts) {
  SupTailCheck check;
  check.applicable = true;
  std::vector<double> mag(points + 1);
  double max_err = 0.0;
  double const h = std::numbers::pi / static_cast<double>(points);
  // |Psi| is even in t for both phases used here, so [0, pi] suffices
  for (std::size_t j = 0; j <= points; ++j) {
    KernelValue const v = eval_kernel(spec, h * static_cast<double>(j), tol, opts);
    mag[j] = std::abs(v.value);
    max_err = std::max(max_err, v.error);
  }
  auto const imax = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
  check.grid_sup = mag[imax];
  check.argmax = h * static_cast<double>(imax);
  // refinement may wander next to t = 0 where the tail series is out of
  // reach; such points are simply not candidates
  auto const f = [&](double t) {
    try {
      KernelValue const v = eval_kernel(spec, t, tol, opts);
      max_err = std::max(max_err, v.error);
      return std::abs(v.value);
    } catch (SlowConvergence const&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  std::vector<std::size_t> candidates;
  // |Psi| is even about 0 and pi, so peaks at the ends are already exact
  for (std::size_t j = 1; j < points; ++j)
    if (mag[j] >= mag[j - 1] && mag[j] >= mag[j + 1]) candidates.push_back(j);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  if (candidates.size() > 3) candidates.resize(3);
  for (std::size_t j : candidates) {
    double const t0 = h * static_cast<double>(j);
    Peak const pk = golden_max(f, std::max(0.0, t0 - h), std::min(std::numbers::pi, t0 + h), 60);
    if (pk.value > check.grid_sup) {
      check.grid_sup = pk.value;
      check.argmax = pk.t;
    }
  }
  check.eval_error = max_err;
  return check;
}

}  // namespace detail

// Grid check of
//   ||Psi_{0,n}||_inf <= sum_{k>=n} psi(k)        (needs a summable psi)
//   ||Psi_{1,n}||_inf <= (pi + 2) psi(n) n
// on t_j = pi j / (grid_density n), refined around the largest peaks.
inline SupTailReport sup_tail_inequalities(PsiFamily const& family, std::size_t n,
                                           std::size_t grid_density, double tol = 1e-10,
                                           KernelOptions const& opts = {}) {
  if (n < 1) throw InvalidArgument("sup_tail_inequalities requires n >= 1");
  std::size_t const points = std::max<std::size_t>(64, grid_density * n);
  SupTailReport report;

  if (family.tail_converges(1.0, 0.0)) {
    report.cosine = detail::sup_on_grid({family, 0.0, n}, points, tol, opts);
    report.cosine.bound = tail_sum_l1(family, n).value;
    report.cosine.pass =
        report.cosine.grid_sup <= report.cosine.bound * (1.0 + 1e-12) + report.cosine.eval_error;
  }

  report.sine = detail::sup_on_grid({family, 1.0, n}, points, tol, opts);
  double const nd = static_cast<double>(n);
  report.sine.bound = (std::numbers::pi + 2.0) * family(nd) * nd;
  report.sine.pass = report.sine.grid_sup <= report.sine.bound + report.sine.eval_error;
  return report;
}

// Plain-text dump: one header line, then "t value" rows over [-pi, pi).
inline void write_kernel_samples(std::ostream& out, KernelSpec const& spec, std::size_t samples,
                                 double tol, KernelOptions const& opts = {}) {
  if (samples < 1) throw InvalidArgument("kernel dump needs at least one sample");
  std::vector<std::pair<double, double>> rows;
  rows.reserve(samples);
  double tail_control = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    double const t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                             static_cast<double>(samples);
    KernelValue const v = eval_kernel(spec, t, tol, opts);
    tail_control = std::max(tail_control, v.error);
    rows.emplace_back(t, v.value);
  }
  out << "# " << spec.family.descriptor() << " beta=" << format_number(spec.beta)
      << " n=" << spec.start_index << " tail_control=" << format_sci(tail_control) << '\n';
  for (auto const& [t, v] : rows) out << format_sci(t) << ' ' << format_sci(v) << '\n';
}

}  // namespace zygmund
