#pragma once

// Order expressions for the uniform class error of Zygmund sums, the
// hypotheses behind them, and the ratio relations between the tail sums
// and their one-term surrogates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "zygmund/class_error.hpp"
#include "zygmund/classifiers.hpp"
#include "zygmund/errors.hpp"
#include "zygmund/tail_sums.hpp"

namespace zygmund {

enum class BoundVariant { t1_tail_pprime, t1_p1_cos, t1_p1_sin, t2_simplified, t3_log };
enum class BoundMethod { direct_sum_integral_tail, closed_form };

inline char const* to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::t1_tail_pprime: return "T1_tail_pprime";
    case BoundVariant::t1_p1_cos: return "T1_p1_cos";
    case BoundVariant::t1_p1_sin: return "T1_p1_sin";
    case BoundVariant::t2_simplified: return "T2_simplified";
    case BoundVariant::t3_log: return "T3_log";
  }
  return "?";
}

struct BoundValue {
  std::size_t n = 0;
  BoundVariant variant = BoundVariant::t1_tail_pprime;
  double value = 0.0;
  BoundMethod method = BoundMethod::closed_form;
  Bracket certified{};          // enclosure of `value` (degenerate for closed forms)
  bool applicable = true;       // false when the family's alpha-trend rules the bound out
  bool parity_warning = false;  // non-integer beta with cos(beta pi/2) ~ 0
};

// Sum_{k>=n} psi^{p'}(k) k^{p'-2}, 1 < p < inf.
inline TailSum tail_sum_pprime(ClassSpec const& spec, std::size_t n, TailConfig const& cfg = {}) {
  if (spec.p() == 1.0) throw InvalidArgument("tail_sum_pprime requires p > 1");
  return tail_sum_pprime(spec.family(), spec.p_prime(), n, cfg);
}

// Theorem-1 order: (sum_{k>=n} psi^{p'} k^{p'-2})^{1/p'} for 1 < p < inf;
// for p = 1 the tail sum of psi when cos(beta pi/2) != 0, psi(n) n otherwise.
inline BoundValue theory_bound(ClassSpec const& spec, std::size_t n, TailConfig const& cfg = {}) {
  if (n < 1) throw InvalidArgument("theory_bound requires n >= 1");
  BoundValue out;
  out.n = n;
  out.parity_warning = spec.phase().near_odd_integer;
  if (spec.p() > 1.0) {
    double const q = spec.p_prime();
    TailSum const tail = tail_sum_pprime(spec.family(), q, n, cfg);
    out.variant = BoundVariant::t1_tail_pprime;
    out.method = BoundMethod::direct_sum_integral_tail;
    out.value = std::pow(tail.value, 1.0 / q);
    out.certified = {std::pow(tail.bracket.lo, 1.0 / q), std::pow(tail.bracket.hi, 1.0 / q)};
    return out;
  }
  if (spec.cos_is_zero()) {
    double const nd = static_cast<double>(n);
    out.variant = BoundVariant::t1_p1_sin;
    out.value = spec.family()(nd) * nd;
    out.certified = {out.value, out.value};
    return out;
  }
  TailSum const tail = tail_sum_l1(spec.family(), n, cfg);
  out.variant = BoundVariant::t1_p1_cos;
  out.method = BoundMethod::direct_sum_integral_tail;
  out.value = tail.value;
  out.certified = tail.bracket;
  return out;
}

// Alpha-trend of g_{1/p} on the default grid; the simplified bound needs a
// bounded alpha (the M_C case).
inline bool mc_applicable(ClassSpec const& spec) {
  WeightedProduct const g(spec.family(), 1.0 / spec.p());
  auto const grid = default_alpha_grid();
  return classify_membership(g, grid).alpha_trend == AlphaTrend::bounded;
}

// Theorem-2 order psi(n) n^{1/p}.
inline BoundValue mc_simplified_bound(ClassSpec const& spec, std::size_t n) {
  if (n < 1) throw InvalidArgument("mc_simplified_bound requires n >= 1");
  double const nd = static_cast<double>(n);
  BoundValue out;
  out.n = n;
  out.variant = BoundVariant::t2_simplified;
  out.value = spec.family()(nd) * std::pow(nd, 1.0 / spec.p());
  out.certified = {out.value, out.value};
  out.applicable = mc_applicable(spec);
  return out;
}

// Theorem-3 order for psi(t) = t^{-1/p} ln^{-gamma}(t + K):
//   1 < p:  psi(n) n^{1/p} ln^{1/p'} n
//   p = 1:  psi(n) n ln n  (cos(beta pi/2) != 0),  psi(n) n  (otherwise)
inline BoundValue theorem3_bound(ClassSpec const& spec, std::size_t n) {
  auto const* f = spec.family().as_power_log();
  if (!f) throw InvalidArgument("theorem3_bound needs a powerlog family");
  if (f->p != spec.p())
    throw InvalidArgument("theorem3_bound: family exponent p=" + format_number(f->p) +
                          " differs from class p=" + format_number(spec.p()));
  if (n < 2) throw ConstraintViolated("theorem3_bound requires n >= 2");
  double const p = spec.p();
  if (p > 1.0) {
    double const q = spec.p_prime();
    if (!(f->gamma > 1.0 / q))
      throw ConstraintViolated("gamma > 1/p' fails: gamma=" + format_number(f->gamma) +
                               ", 1/p'=" + format_number(1.0 / q));
    if (!(f->K > std::exp(f->gamma * q / 2.0)))
      throw ConstraintViolated("K > exp(gamma p'/2) fails: K=" + format_number(f->K) +
                               ", exp(gamma p'/2)=" + format_number(std::exp(f->gamma * q / 2.0)));
  } else {
    if (!(f->gamma > 1.0))
      throw ConstraintViolated("gamma > 1 fails: gamma=" + format_number(f->gamma));
    if (!(f->K > std::exp(f->gamma)))
      throw ConstraintViolated("K > exp(gamma) fails: K=" + format_number(f->K) +
                               ", exp(gamma)=" + format_number(std::exp(f->gamma)));
  }
  double const nd = static_cast<double>(n);
  double const psi_n = spec.family()(nd);
  BoundValue out;
  out.n = n;
  out.variant = BoundVariant::t3_log;
  out.parity_warning = spec.phase().near_odd_integer;
  if (p > 1.0)
    out.value = psi_n * std::pow(nd, 1.0 / p) * std::pow(std::log(nd), 1.0 / spec.p_prime());
  else if (spec.cos_is_zero())
    out.value = psi_n * nd;
  else
    out.value = psi_n * nd * std::log(nd);
  out.certified = {out.value, out.value};
  return out;
}

enum class RatioTrend { bounded, decaying, growing, not_applicable };

inline char const* to_string(RatioTrend t) {
  switch (t) {
    case RatioTrend::bounded: return "bounded";
    case RatioTrend::decaying: return "decaying";
    case RatioTrend::growing: return "growing";
    case RatioTrend::not_applicable: return "n/a";
  }
  return "?";
}

struct RatioSeries {
  std::vector<double> values;  // NaN where not applicable
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  RatioTrend trend = RatioTrend::not_applicable;
};

struct RatioRelationsReport {
  std::vector<std::size_t> n_grid;
  RatioSeries pprime;  // psi^{p'}(n) n^{p'-1} / sum_{k>=n} psi^{p'} k^{p'-2}
  RatioSeries l1;      // psi(n) n / sum_{k>=n} psi(k)
};

namespace detail {

inline void summarize(RatioSeries& series) {
  std::vector<double> finite;
  for (double v : series.values)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.size() < 2) return;
  auto const [lo, hi] = std::minmax_element(finite.begin(), finite.end());
  series.min = *lo;
  series.max = *hi;
  double const first = finite.front(), last = finite.back();
  bool non_increasing_top = true;
  for (std::size_t i = finite.size() / 2 + 1; i < finite.size(); ++i)
    if (finite[i] > finite[i - 1]) non_increasing_top = false;
  if (last <= 0.5 * first && non_increasing_top)
    series.trend = RatioTrend::decaying;
  else if (last >= 2.0 * first)
    series.trend = RatioTrend::growing;
  else
    series.trend = RatioTrend::bounded;
}

}  // namespace detail

// Ratios of the one-term surrogates to the tail sums across an n-grid. For
// bounded-alpha families both stay bounded; for growing alpha they decay.
inline RatioRelationsReport ratio_relations(ClassSpec const& spec, std::span<std::size_t const> n_grid,
                                            TailConfig const& cfg = {}) {
  RatioRelationsReport report;
  report.n_grid.assign(n_grid.begin(), n_grid.end());
  PsiFamily const& psi = spec.family();
  double const q = spec.p_prime();
  bool const has_pprime = spec.p() > 1.0 && psi.tail_converges(q, q - 2.0);
  bool const has_l1 = psi.tail_converges(1.0, 0.0);
  double const nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n : n_grid) {
    double const nd = static_cast<double>(n);
    double const psi_n = psi(nd);
    report.pprime.values.push_back(
        has_pprime ? std::pow(psi_n, q) * std::pow(nd, q - 1.0) / tail_sum_pprime(psi, q, n, cfg).value
                   : nan);
    report.l1.values.push_back(has_l1 ? psi_n * nd / tail_sum_l1(psi, n, cfg).value : nan);
  }
  detail::summarize(report.pprime);
  detail::summarize(report.l1);
  return report;
}

struct ConditionsConfig {
  double alpha_grid_max = 1e6;
  std::size_t sequence_length = 4096;  // GM+/GA+ tested on N and 2N
  double stability = 1e-2;             // allowed relative growth N -> 2N
  TailConfig tail{100'000, 4};
};

struct ConditionsReport {
  // (um2) for p > 1, (ump1) for p = 1
  bool convergence_ok = false;
  double convergence_evidence = std::numeric_limits<double>::quiet_NaN();  // tail sum from n = 1
  std::string convergence_note;

  // (um3) inf alpha(g_{1/p}) > p'/2, or (um3p1) inf alpha(g_1) > 1
  double alpha_threshold = 0.0;
  double alpha_inf = 0.0;
  bool alpha_ok = false;

  // g_{1/p} in M_0 (alpha bounded below) and whether alpha also stays bounded (M_C)
  ClassifierReport g_inv_p;
  bool m0_ok = false;
  bool mc = false;

  // g_{s+1/p} in GM+ and GA+, judged by stability under doubling of the range
  double gm_plus_A_N = 0.0;
  double gm_plus_A_2N = 0.0;
  bool gm_ok = false;
  std::vector<GaPlusEntry> ga_N;
  std::vector<GaPlusEntry> ga_2N;
  double ga_eps = std::numeric_limits<double>::quiet_NaN();  // largest stable eps
  bool ga_ok = false;

  bool hypotheses_ok() const { return convergence_ok && alpha_ok && m0_ok && gm_ok && ga_ok; }
};

inline ConditionsReport conditions_report(ClassSpec const& spec, ConditionsConfig const& cfg = {}) {
  ConditionsReport r;
  PsiFamily const& psi = spec.family();
  double const p = spec.p();

  try {
    TailSum const tail = p > 1.0 ? tail_sum_pprime(psi, spec.p_prime(), 1, cfg.tail)
                                 : tail_sum_l1(psi, 1, cfg.tail);
    r.convergence_ok = true;
    r.convergence_evidence = tail.value;
  } catch (DivergentTail const& e) {
    r.convergence_note = e.what();
  }

  WeightedProduct const g_inv_p(psi, 1.0 / p);
  auto const grid = default_alpha_grid(cfg.alpha_grid_max);
  r.g_inv_p = classify_membership(g_inv_p, grid);
  r.alpha_inf = r.g_inv_p.alpha_inf;
  r.alpha_threshold = p > 1.0 ? spec.p_prime() / 2.0 : 1.0;
  r.alpha_ok = r.alpha_inf > r.alpha_threshold;
  r.m0_ok = r.alpha_inf > 0.0 && r.g_inv_p.alpha_trend != AlphaTrend::decreasing;
  r.mc = r.m0_ok && r.g_inv_p.alpha_trend == AlphaTrend::bounded;

  WeightedProduct const g_gm(psi, spec.s() + 1.0 / p);
  std::vector<double> const seq = g_gm.sequence(2 * cfg.sequence_length);
  std::span<double const> const whole(seq);
  std::span<double const> const half = whole.first(cfg.sequence_length);
  r.gm_plus_A_N = gm_plus_constant(half);
  r.gm_plus_A_2N = gm_plus_constant(whole);
  r.gm_ok = r.gm_plus_A_2N <= r.gm_plus_A_N * (1.0 + cfg.stability);

  auto const eps = default_eps_grid();
  r.ga_N = ga_plus_report(half, eps);
  r.ga_2N = ga_plus_report(whole, eps);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (r.ga_2N[i].k_min <= r.ga_N[i].k_min * (1.0 + cfg.stability)) {
      r.ga_ok = true;
      r.ga_eps = eps[i];
    }
  }
  return r;
}

inline void print_conditions(std::ostream& out, ClassSpec const& spec, ConditionsReport const& r) {
  out << "conditions for " << spec.family().descriptor() << " p=" << format_number(spec.p())
      << " beta=" << format_number(spec.beta()) << " s=" << format_number(spec.s()) << '\n';
  out << "  tail convergence (" << (spec.p() > 1.0 ? "psi^p' k^(p'-2)" : "psi") << "): "
      << (r.convergence_ok ? "ok, sum from 1 = " + format_number(r.convergence_evidence)
                           : "FAIL " + r.convergence_note)
      << '\n';
  out << "  inf alpha(g_1/p) = " << format_number(r.alpha_inf) << " vs threshold "
      << format_number(r.alpha_threshold) << ": " << (r.alpha_ok ? "ok" : "FAIL") << '\n';
  out << "  alpha(g_1/p) on [1, " << format_number(r.g_inv_p.grid_max) << "]: sup "
      << format_number(r.g_inv_p.alpha_sup) << ", trend " << to_string(r.g_inv_p.alpha_trend)
      << (r.mc ? " (M_C)" : r.m0_ok ? " (M_0)" : " (not M_0)") << '\n';
  out << "  GM+ constant of g_(s+1/p): A(N)=" << format_number(r.gm_plus_A_N)
      << " A(2N)=" << format_number(r.gm_plus_A_2N) << ": " << (r.gm_ok ? "ok" : "FAIL") << '\n';
  out << "  GA+ of g_(s+1/p): " << (r.ga_ok ? "ok with eps=" + format_number(r.ga_eps) : "FAIL")
      << '\n';
  out << "  hypotheses: " << (r.hypotheses_ok() ? "all hold on the tested range" : "violated") << '\n';
}

}  // namespace zygmund
