#pragma once

// Linear summation methods on Fourier coefficient data: partial Fourier
// sums S_{n-1}, Fejer sums sigma_{n-1} and Zygmund sums Z^s_{n-1}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "zygmund/errors.hpp"
#include "zygmund/trig_polynomial.hpp"

namespace zygmund {

class SummationFilter {
 public:
  enum class Kind { fourier, fejer, zygmund };

  static SummationFilter make(Kind kind, std::size_t n, double s) {
    switch (kind) {
      case Kind::fourier: return fourier(n);
      case Kind::fejer: return fejer(n);
      case Kind::zygmund: return zygmund(n, s);
    }
    return zygmund(n, s);
  }

  static SummationFilter fourier(std::size_t n) { return {Kind::fourier, n, 0.0}; }
  static SummationFilter fejer(std::size_t n) { return {Kind::fejer, n, 1.0}; }
  static SummationFilter zygmund(std::size_t n, double s) {
    if (!(s > 0.0)) throw InvalidArgument("Zygmund filter requires s > 0");
    return {Kind::zygmund, n, s};
  }

  Kind kind() const { return kind_; }
  std::size_t order() const { return n_; }
  double exponent() const { return s_; }

  // lambda_{k,n}: 1 at k = 0, zero from k = n on.
  double multiplier(std::size_t k) const {
    if (k == 0) return 1.0;
    if (k >= n_) return 0.0;
    return 1.0 - complement(k);
  }

  // 1 - lambda_{k,n}, evaluated without cancellation: (k/n)^s for Zygmund,
  // k/n for Fejer, 0 for Fourier below n.
  double complement(std::size_t k) const {
    if (k == 0) return 0.0;
    if (k >= n_) return 1.0;
    double const ratio = static_cast<double>(k) / static_cast<double>(n_);
    switch (kind_) {
      case Kind::fourier: return 0.0;
      case Kind::fejer: return ratio;
      case Kind::zygmund: return s_ == 1.0 ? ratio : std::pow(ratio, s_);
    }
    return 0.0;
  }

 private:
  SummationFilter(Kind kind, std::size_t n, double s) : kind_(kind), n_(n), s_(s) {
    if (n < 1) throw InvalidArgument("summation filter order must be >= 1");
  }

  Kind kind_;
  std::size_t n_;
  double s_;
};

inline char const* to_string(SummationFilter::Kind kind) {
  switch (kind) {
    case SummationFilter::Kind::fourier: return "fourier";
    case SummationFilter::Kind::fejer: return "fejer";
    case SummationFilter::Kind::zygmund: return "zygmund";
  }
  return "?";
}

inline double filter_multiplier(SummationFilter const& f, std::size_t k) { return f.multiplier(k); }

inline TrigPolynomial apply_filter(TrigPolynomial const& p, SummationFilter const& f) {
  std::size_t const degree = std::min(p.degree(), f.order() - 1);
  TrigPolynomial out(degree);
  out.cos_coeffs[0] = p.a0();
  for (std::size_t k = 1; k <= degree; ++k) {
    double const lambda = f.multiplier(k);
    out.cos_coeffs[k] = lambda * p.cos_coeffs[k];
    out.sin_coeffs[k] = lambda * p.sin_coeffs[k];
  }
  return out;
}

}  // namespace zygmund
