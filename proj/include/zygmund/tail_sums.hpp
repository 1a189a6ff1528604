#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "zygmund/errors.hpp"
#include "zygmund/psi_family.hpp"

namespace zygmund {

// Direct summation runs to max(min_direct, factor * n), at most max_direct
// terms past n; the remainder is enclosed by integral comparison for the
// decreasing summand.
struct TailConfig {
  std::size_t min_direct = 1'000'000;
  std::size_t factor = 1024;
  std::size_t max_direct = std::size_t{1} << 23;
};

struct TailSum {
  double value = 0.0;
  Bracket bracket;         // certified enclosure of the infinite sum
  std::size_t cutoff = 0;  // first index handled by the integral bracket
};

namespace detail {

inline double weighted_power(PsiFamily const& psi, double q, double e, double k) {
  double v = psi(k);
  if (q != 1.0) v = std::pow(v, q);
  if (e != 0.0) v *= std::pow(k, e);
  return v;
}

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    double const t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

// sum_{k >= n} psi(k)^q k^e for a summand that is non-increasing in k.
inline TailSum tail_sum(PsiFamily const& psi, double q, double e, std::size_t n,
                        TailConfig const& cfg = {}) {
  if (n < 1) throw InvalidArgument("tail_sum index must be >= 1");
  if (!psi.tail_converges(q, e))
    throw DivergentTail("sum_{k>=" + std::to_string(n) + "} psi^" + format_number(q) + " k^" +
                        format_number(e) + " diverges for " + psi.descriptor());
  std::size_t const cutoff = std::max({cfg.min_direct, std::min(cfg.factor * n, n + cfg.max_direct), n + 1});

  detail::CompensatedSum direct;
  for (std::size_t k = cutoff - 1; k >= n; --k) {
    direct.add(detail::weighted_power(psi, q, e, static_cast<double>(k)));
    if (k == n) break;
  }
  double const head = direct.value();
  double const f_cut = detail::weighted_power(psi, q, e, static_cast<double>(cutoff));
  Bracket const integral = psi.tail_integral(q, e, static_cast<double>(cutoff));

  double const rounding = 4e-16 * static_cast<double>(cutoff - n) * std::abs(head) + 1e-300;
  TailSum out;
  out.cutoff = cutoff;
  out.bracket = {head + integral.lo - rounding, head + f_cut + integral.hi + rounding};
  out.value = out.bracket.mid();
  return out;
}

// sum_{k >= n} psi^{p'}(k) k^{p'-2}, 1 < p' < inf
inline TailSum tail_sum_pprime(PsiFamily const& psi, double p_prime, std::size_t n,
                               TailConfig const& cfg = {}) {
  return tail_sum(psi, p_prime, p_prime - 2.0, n, cfg);
}

// sum_{k >= n} psi(k)
inline TailSum tail_sum_l1(PsiFamily const& psi, std::size_t n, TailConfig const& cfg = {}) {
  return tail_sum(psi, 1.0, 0.0, n, cfg);
}

}  // namespace zygmund
