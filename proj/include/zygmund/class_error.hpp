#pragma once

// Class-level uniform error of Zygmund sums on C^psi_{beta,p}.
//
// For every class member, f(0) - Z^s_{n-1}(f; 0) = (1/pi) int Lambda_n phi,
// where phi runs over the zero-mean part of the unit ball of L_p and
//
//   Lambda_n(t) = n^{-s} sum_{k<n} psi(k) k^s cos(kt + beta pi/2)
//               + sum_{k>=n} psi(k) cos(kt + beta pi/2).
//
// Hoelder gives U_n = (1/pi) ||Lambda_n||_{p'} from above. A lower bound L_n
// comes from an explicit admissible phi with zero mean: the Hoelder equality
// case for Lambda_n - c, c the best constant approximation in L_{p'}.

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
#include "zygmund/gauss_legendre.hpp"
#include "zygmund/kernel_series.hpp"
#include "zygmund/numerics.hpp"
#include "zygmund/phase.hpp"
#include "zygmund/psi_family.hpp"
#include "zygmund/summation_filter.hpp"
#include "zygmund/tail_sums.hpp"
#include "zygmund/trig_polynomial.hpp"

namespace zygmund {

class ClassSpec {
 public:
  using Method = SummationFilter::Kind;

  // Fejer sums are Zygmund sums with s = 1; the Fejer method pins s to 1.
  ClassSpec(PsiFamily family, double beta, double p, double s, Method method = Method::zygmund)
      : family_(std::move(family)),
        beta_(beta),
        p_(p),
        s_(method == Method::fejer ? 1.0 : s),
        method_(method),
        phase_(beta) {
    if (!(p >= 1.0) || std::isinf(p)) throw InvalidArgument("class requires 1 <= p < inf");
    if (!(s > 0.0)) throw InvalidArgument("Zygmund exponent s must be positive");
    if (!std::isfinite(beta)) throw InvalidArgument("beta must be finite");
  }

  PsiFamily const& family() const { return family_; }
  double beta() const { return beta_; }
  double p() const { return p_; }
  double s() const { return s_; }
  Method method() const { return method_; }
  Phase const& phase() const { return phase_; }

  SummationFilter filter(std::size_t n) const { return SummationFilter::make(method_, n, s_); }

  // 1/p + 1/p' = 1; p = 1 gives p' = inf.
  double p_prime() const {
    return p_ == 1.0 ? std::numeric_limits<double>::infinity() : p_ / (p_ - 1.0);
  }

  bool cos_is_zero() const { return phase_.cos_is_zero; }

 private:
  PsiFamily family_;
  double beta_;
  double p_;
  double s_;
  Method method_;
  Phase phase_;
};

struct ErrorConfig {
  double tol = 1e-6;  // relative accuracy of norms and pointwise values
  std::size_t cutoff_factor = 16;
  std::size_t min_cutoff = 4096;
  std::size_t max_cutoff = std::size_t{1} << 17;
  // p' = 2: grow the cutoff until the discarded coefficient energy is at most
  // this fraction of the total (or max_cutoff is hit)
  double witness_energy_tol = 1e-4;
  QuadConfig quad{};
  KernelOptions kernel{};
};

class ResidualProfile {
 public:
  ResidualProfile(ClassSpec const& spec, std::size_t n) : family_(spec.family()), phase_(spec.phase()), n_(n) {
    if (n < 1) throw InvalidArgument("residual profile requires n >= 1");
    head_.assign(n, 0.0);
    SummationFilter const filter = spec.filter(n);
    for (std::size_t k = 1; k < n; ++k) head_[k] = family_(static_cast<double>(k)) * filter.complement(k);
  }

  std::size_t n() const { return n_; }
  Phase const& phase() const { return phase_; }
  PsiFamily const& family() const { return family_; }
  TruncationPlan const& truncation() const { return truncation_; }
  void set_truncation(TruncationPlan plan) { truncation_ = plan; }

  // c_k: damped head for k < n, psi(k) from n on.
  double coefficient(std::size_t k) const {
    if (k == 0) return 0.0;
    return k < n_ ? head_[k] : family_(static_cast<double>(k));
  }

  std::vector<double> const& head() const { return head_; }

  // Lambda_n truncated to degree K, as a polynomial.
  TrigPolynomial truncated(std::size_t K) const {
    TrigPolynomial p(K);
    for (std::size_t k = 1; k <= K; ++k) {
      double const c = coefficient(k);
      p.cos_coeffs[k] = c * phase_.cos;
      p.sin_coeffs[k] = -c * phase_.sin;
    }
    return p;
  }

  // Lambda_n(t) including the full infinite tail.
  KernelValue evaluate(double t, double tol, KernelOptions const& opts = {}) const {
    KernelValue tail = eval_kernel({family_, phase_.beta, n_}, t, tol, opts);
    std::complex<double> const head_sum =
        detail::phasor_sum([&](std::size_t k) { return head_[k]; }, 1, n_, t);
    tail.value += phase_.cos * head_sum.real() - phase_.sin * head_sum.imag();
    tail.error += 1e-15 * static_cast<double>(n_) * (n_ > 1 ? head_[1] : 0.0);
    return tail;
  }

 private:
  PsiFamily family_;
  Phase phase_;
  std::size_t n_;
  std::vector<double> head_;
  TruncationPlan truncation_{};
};

struct ExtremalWitness {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> values;
  double norm_p = 0.0;
  double mean = 0.0;
  double achieved = 0.0;  // (1/pi) int Lambda_n phi
};

struct BoundEstimate {
  double value = 0.0;
  double quad_err = 0.0;
  double trunc_err = 0.0;
};

struct ErrorBracket {
  double upper = 0.0;
  double lower = 0.0;
  double quad_err = 0.0;
  double trunc_err = 0.0;
  std::size_t cutoff = 0;
  ExtremalWitness witness;
};

namespace detail {

inline double sum_sq_head(ResidualProfile const& profile) {
  CompensatedSum acc;
  for (std::size_t k = 1; k < profile.n(); ++k) acc.add(profile.head()[k] * profile.head()[k]);
  return acc.value();
}

inline TailSum tail_energy(PsiFamily const& psi, std::size_t from) {
  return tail_sum(psi, 2.0, 0.0, from, TailConfig{1'000'000, 4});
}

inline std::size_t initial_cutoff(std::size_t n, ErrorConfig const& cfg) {
  return next_pow2(std::max(cfg.min_cutoff, cfg.cutoff_factor * n));
}

inline std::size_t grid_for(std::size_t K, ErrorConfig const& cfg) {
  return next_pow2(std::max({cfg.quad.min_grid, cfg.quad.oversample * K, 2 * K + 2}));
}

inline std::vector<double> grid_weights(std::size_t M) {
  return std::vector<double>(M, 2.0 * std::numbers::pi / static_cast<double>(M));
}

inline std::vector<double> grid_nodes(std::size_t M, double shift) {
  std::vector<double> t(M);
  double const h = 2.0 * std::numbers::pi / static_cast<double>(M);
  for (std::size_t j = 0; j < M; ++j) t[j] = (static_cast<double>(j) + shift) * h;
  return t;
}

inline double weighted_lp(std::span<double const> v, std::span<double const> w, double p) {
  double sum = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) sum += w[j] * std::pow(std::abs(v[j]), p);
  return std::pow(sum, 1.0 / p);
}

// p' = 2: the discarded part is orthogonal to the kept polynomial, so its
// energy pi * sum_{k>K} psi^2 completes the norm exactly.
inline ErrorBracket bracket_l2(ClassSpec const& spec, ResidualProfile& profile, ErrorConfig const& cfg) {
  PsiFamily const& psi = spec.family();
  std::size_t const n = profile.n();
  double const head_energy = sum_sq_head(profile);
  double const total_energy = head_energy + tail_energy(psi, n).value;

  std::size_t K = initial_cutoff(n, cfg);
  TailSum rest = tail_energy(psi, K + 1);
  while (rest.value > cfg.witness_energy_tol * total_energy && 2 * K <= cfg.max_cutoff) {
    K *= 2;
    rest = tail_energy(psi, K + 1);
  }
  profile.set_truncation({K, std::sqrt(std::numbers::pi * rest.value)});

  TrigPolynomial const poly = profile.truncated(K);
  std::size_t const M = grid_for(K, cfg);
  double const coarse = grid_lq(sample_poly(poly, M, cfg.quad.shift), 2.0);
  std::vector<double> const lambda = sample_poly(poly, 2 * M, 2.0 * cfg.quad.shift);
  double const kept = grid_lq(lambda, 2.0);

  auto const completed = [&](double energy) {
    return std::sqrt(kept * kept + std::numbers::pi * energy) / std::numbers::pi;
  };

  ErrorBracket out;
  out.cutoff = K;
  out.upper = completed(rest.value);
  out.trunc_err = 0.5 * (completed(rest.bracket.hi) - completed(rest.bracket.lo));
  out.quad_err = std::abs(kept - coarse) / std::numbers::pi;

  ExtremalWitness& w = out.witness;
  w.nodes = grid_nodes(2 * M, 2.0 * cfg.quad.shift);
  w.weights = grid_weights(2 * M);
  w.values.resize(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) w.values[j] = lambda[j] / kept;
  CompensatedSum achieved, mean;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    achieved.add(w.weights[j] * lambda[j] * w.values[j]);
    mean.add(w.weights[j] * w.values[j]);
  }
  w.norm_p = grid_lq(w.values, 2.0);
  w.mean = mean.value() / (2.0 * std::numbers::pi);
  w.achieved = achieved.value() / std::numbers::pi;
  out.lower = w.achieved;
  return out;
}

// 1 < p' < inf, p' != 2: cutoff doubled until the truncated norm settles.
inline ErrorBracket bracket_lq(ClassSpec const& spec, ResidualProfile& profile, ErrorConfig const& cfg) {
  double const q = spec.p_prime();
  double const p = spec.p();
  PsiFamily const& psi = spec.family();
  if (!psi.tail_converges(q, q - 2.0))
    throw DivergentTail("kernel tail of " + psi.descriptor() + " is not in L_" + format_number(q));

  QuadConfig quad = cfg.quad;
  quad.tol = cfg.tol;
  std::size_t K = initial_cutoff(profile.n(), cfg);
  NormEstimate current = norm_q(profile.truncated(K), q, quad);
  double change = std::numeric_limits<double>::infinity();
  while (2 * K <= cfg.max_cutoff) {
    NormEstimate const doubled = norm_q(profile.truncated(2 * K), q, quad);
    change = std::abs(doubled.value - current.value);
    K *= 2;
    current = doubled;
    if (change <= cfg.tol * current.value) break;
  }
  profile.set_truncation({K, detail::tail_control_at(psi, q, K), change});

  ErrorBracket out;
  out.cutoff = K;
  out.upper = current.value / std::numbers::pi;
  out.quad_err = current.error / std::numbers::pi;
  out.trunc_err = (std::isfinite(change) ? change : profile.truncation().tail_control) / std::numbers::pi;

  // The dual extremal is phi = |Lambda - c|^{q-1} sign(Lambda - c) where c
  // minimises ||Lambda - c||_q; the first-order condition for c is exactly
  // mean(phi) = 0. c is the root of the decreasing function
  // g(c) = sum w |Lambda - c|^{q-1} sign(Lambda - c), found by Illinois iteration.
  std::size_t const M = current.grid_size;
  std::vector<double> const lambda = sample_poly(profile.truncated(K), M, quad.shift);
  std::vector<double> const weights = grid_weights(M);
  auto const [lo_it, hi_it] = std::minmax_element(lambda.begin(), lambda.end());
  double lo = *lo_it, hi = *hi_it;
  auto const g = [&](double c) {
    double sum = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      double const d = lambda[j] - c;
      sum += weights[j] * std::copysign(std::pow(std::abs(d), q - 1.0), d);
    }
    return sum;
  };
  double g_lo = g(lo), g_hi = g(hi);
  double const scale = std::max(std::abs(lo), std::abs(hi));
  int side = 0;
  double c = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * scale; ++it) {
    c = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
    if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
    double const gc = g(c);
    if (gc == 0.0) break;
    if (gc > 0.0) {
      lo = c;
      g_lo = gc;
      if (side == 1) g_hi *= 0.5;
      side = 1;
    } else {
      hi = c;
      g_hi = gc;
      if (side == -1) g_lo *= 0.5;
      side = -1;
    }
  }
  std::vector<double> raw(M);
  CompensatedSum raw_mean;
  for (std::size_t j = 0; j < M; ++j) {
    double const d = lambda[j] - c;
    raw[j] = std::copysign(std::pow(std::abs(d), q - 1.0), d);
    raw_mean.add(weights[j] * raw[j]);
  }
  // remove what the root tolerance left of the mean
  double const residual_mean = raw_mean.value() / (2.0 * std::numbers::pi);
  for (double& v : raw) v -= residual_mean;
  double const norm = weighted_lp(raw, weights, p);

  ExtremalWitness& w = out.witness;
  w.nodes = grid_nodes(M, quad.shift);
  w.weights = weights;
  w.values.resize(M);
  CompensatedSum achieved, mean;
  for (std::size_t j = 0; j < M; ++j) {
    w.values[j] = raw[j] / norm;
    achieved.add(weights[j] * lambda[j] * w.values[j]);
    mean.add(weights[j] * w.values[j]);
  }
  w.norm_p = weighted_lp(w.values, weights, p);
  w.mean = mean.value() / (2.0 * std::numbers::pi);
  w.achieved = achieved.value() / std::numbers::pi;
  out.lower = w.achieved;
  return out;
}

struct Extremum {
  double t = 0.0;
  double value = 0.0;
  double error = 0.0;
};

// p' = inf. Peaks are located on the truncated polynomial, polished with
// exact evaluations of Lambda_n, and the witness is a dipole of two narrow
// bumps of mass 1/2 at the maximum and the minimum of Lambda_n. Its L_1 norm
// is 1 and its mean is 0 exactly, and it realises (max - min) / (2 pi) in the
// limit of vanishing width, which is the exact class supremum.
inline ErrorBracket bracket_sup(ClassSpec const& spec, ResidualProfile& profile, ErrorConfig const& cfg) {
  PsiFamily const& psi = spec.family();
  if (!psi.tail_converges(1.0, 0.0))
    throw DivergentTail("sum psi(k) diverges for " + psi.descriptor());

  std::size_t const K = next_pow2(std::max<std::size_t>(1024, cfg.cutoff_factor * profile.n()));
  TrigPolynomial const poly = profile.truncated(K);
  std::size_t const M = grid_for(K, cfg);
  std::vector<double> const samples = sample_poly(poly, M, cfg.quad.shift);
  double const h = 2.0 * std::numbers::pi / static_cast<double>(M);
  profile.set_truncation({K, tail_sum_l1(psi, K + 1, TailConfig{4096, 4}).bracket.hi});

  double const scale = *std::max_element(samples.begin(), samples.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  double const point_tol = std::max(cfg.tol * std::abs(scale), 1e-300);
  double worst_error = 0.0;
  // every exact value seen feeds the extremes, so U never falls below L
  double seen_max = -std::numeric_limits<double>::infinity();
  double seen_min = std::numeric_limits<double>::infinity();
  auto const exact = [&](double t) {
    KernelValue const v = profile.evaluate(t, point_tol, cfg.kernel);
    worst_error = std::max(worst_error, v.error);
    seen_max = std::max(seen_max, v.value + v.error);
    seen_min = std::min(seen_min, v.value - v.error);
    return v.value;
  };

  // sign = +1 for the maximum, -1 for the minimum. Points too close to a
  // zero of sin(t/2) for the kernel series are skipped.
  auto const polish = [&](double sign) {
    std::vector<double> oriented(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) oriented[j] = sign * samples[j];
    Extremum best{0.0, -std::numeric_limits<double>::infinity(), 0.0};
    auto const consider = [&](double t) {
      try {
        double const v = sign * exact(t);
        if (v > best.value) best = {t, v, 0.0};
        return v;
      } catch (SlowConvergence const&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    consider(0.0);
    consider(std::numbers::pi);
    auto const truncated = [&](double t) { return sign * eval_poly(poly, t); };
    for (std::size_t j : top_local_maxima(oriented, 2)) {
      double const t0 = (static_cast<double>(j) + cfg.quad.shift) * h;
      Peak const pk = golden_max(truncated, t0 - h, t0 + h, 40);
      // parabolic step on exact values around the truncated peak
      double const d = 0.125 * h;
      double const fm = consider(pk.t - d), f0 = consider(pk.t), fp = consider(pk.t + d);
      double const curvature = fm - 2.0 * f0 + fp;
      if (curvature < 0.0) {
        double const offset = 0.5 * d * (fm - fp) / curvature;
        if (std::abs(offset) < d) consider(pk.t + offset);
      }
    }
    if (!std::isfinite(best.value)) throw SlowConvergence("no extremum of the residual profile could be evaluated");
    best.value *= sign;
    return best;
  };

  Extremum const top = polish(1.0);
  Extremum const bottom = polish(-1.0);

  ErrorBracket out;
  out.cutoff = K;

  // Rectangle-shaped bumps resolved by Gauss-Legendre; a bump whose nodes
  // cannot all be evaluated is widened, which keeps phi admissible.
  ExtremalWitness& w = out.witness;
  CompensatedSum achieved;
  auto const add_bump = [&](double center, double mass) {
    for (double width = 0.25 * h; width < std::numbers::pi; width *= 2.0) {
      double const half = 0.5 * width;
      std::vector<double> values(gl8_nodes.size());
      try {
        for (std::size_t i = 0; i < gl8_nodes.size(); ++i) values[i] = exact(center + half * gl8_nodes[i]);
      } catch (SlowConvergence const&) {
        continue;
      }
      for (std::size_t i = 0; i < gl8_nodes.size(); ++i) {
        double const weight = half * gl8_weights[i];
        w.nodes.push_back(center + half * gl8_nodes[i]);
        w.weights.push_back(weight);
        w.values.push_back(mass / width);
        achieved.add(weight * mass / width * values[i]);
      }
      return;
    }
    throw SlowConvergence("witness bump at t=" + format_number(center) + " could not be evaluated");
  };
  add_bump(top.t, 0.5);
  add_bump(bottom.t, -0.5);
  out.upper = std::max({std::abs(top.value), std::abs(bottom.value), std::abs(seen_max), std::abs(seen_min)}) /
              std::numbers::pi;
  double norm = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    norm += w.weights[i] * std::abs(w.values[i]);
    mean += w.weights[i] * w.values[i];
  }
  w.norm_p = norm;
  w.mean = mean / (2.0 * std::numbers::pi);
  w.achieved = achieved.value() / std::numbers::pi;
  out.lower = w.achieved;
  out.trunc_err = worst_error / std::numbers::pi;
  // peak polishing resolves the extremum value to second order in the
  // parabolic step; golden search on the truncated polynomial bounds the rest
  out.quad_err = 1e-8 * out.upper;
  return out;
}

inline ErrorBracket compute_bracket(ClassSpec const& spec, std::size_t n, ErrorConfig const& cfg,
                                    ResidualProfile* profile_out = nullptr) {
  ResidualProfile profile(spec, n);
  double const q = spec.p_prime();
  ErrorBracket out = std::isinf(q) ? bracket_sup(spec, profile, cfg)
                     : q == 2.0    ? bracket_l2(spec, profile, cfg)
                                   : bracket_lq(spec, profile, cfg);
  if (profile_out) *profile_out = std::move(profile);
  return out;
}

}  // namespace detail

// Coefficient profile of Lambda_n with the truncation chosen for the class
// norm p'. Throws DivergentTail when the kernel is not in L_{p'}.
inline ResidualProfile residual_profile(ClassSpec const& spec, std::size_t n, double tol = 1e-6) {
  ResidualProfile profile(spec, n);
  double const q = spec.p_prime();
  PsiFamily const& psi = spec.family();
  ErrorConfig cfg;
  cfg.tol = tol;
  if (std::isinf(q)) {
    if (!psi.tail_converges(1.0, 0.0)) throw DivergentTail("sum psi(k) diverges for " + psi.descriptor());
    std::size_t const K = detail::next_pow2(std::max<std::size_t>(1024, cfg.cutoff_factor * n));
    profile.set_truncation({K, detail::tail_control_at(psi, q, K)});
  } else {
    if (!psi.tail_converges(q, q - 2.0))
      throw DivergentTail("kernel tail of " + psi.descriptor() + " is not in L_" + format_number(q));
    std::size_t const K = detail::initial_cutoff(n, cfg);
    profile.set_truncation({K, detail::tail_control_at(psi, q, K)});
  }
  return profile;
}

inline ErrorBracket error_bracket(ClassSpec const& spec, std::size_t n, ErrorConfig const& cfg = {}) {
  return detail::compute_bracket(spec, n, cfg);
}

inline BoundEstimate upper_bound(ClassSpec const& spec, std::size_t n, ErrorConfig const& cfg = {}) {
  ErrorBracket const b = error_bracket(spec, n, cfg);
  return {b.upper, b.quad_err, b.trunc_err};
}

inline std::pair<double, ExtremalWitness> lower_bound(ClassSpec const& spec, std::size_t n,
                                                      ErrorConfig const& cfg = {}) {
  ErrorBracket b = error_bracket(spec, n, cfg);
  return {b.lower, std::move(b.witness)};
}

// (1/pi) sqrt(pi (sum_{k<n} c_k^2 + sum_{k>=n} psi(k)^2)) from the
// coefficients alone.
inline double parseval_upper(ClassSpec const& spec, std::size_t n) {
  if (spec.p() != 2.0) throw InvalidArgument("parseval_upper applies to p = 2 only");
  ResidualProfile const profile(spec, n);
  double const energy = detail::sum_sq_head(profile) + tail_sum(spec.family(), 2.0, 0.0, n).value;
  return std::sqrt(std::numbers::pi * energy) / std::numbers::pi;
}

// CSV row: family,p,beta,s,n,U,L,quad_err,trunc_err
inline constexpr char const* bracket_csv_header = "family,p,beta,s,n,U,L,quad_err,trunc_err";

inline void write_bracket_row(std::ostream& out, ClassSpec const& spec, std::size_t n,
                              ErrorBracket const& b) {
  out << '"' << spec.family().descriptor() << "\"," << format_number(spec.p()) << ','
      << format_number(spec.beta()) << ',' << format_number(spec.s()) << ',' << n << ','
      << format_sci(b.upper) << ',' << format_sci(b.lower) << ',' << format_sci(b.quad_err) << ','
      << format_sci(b.trunc_err) << '\n';
}

}  // namespace zygmund
