#pragma once

// Weight families psi(t) that generate the convolution classes, and the
// weighted products g_delta(t) = psi(t) t^delta built from them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "zygmund/errors.hpp"
#include "zygmund/format.hpp"
#include "zygmund/gauss_legendre.hpp"

namespace zygmund {

// Certified enclosure [lo, hi] of a real quantity.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

inline Bracket operator+(Bracket a, Bracket b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Bracket operator+(Bracket a, double x) { return {a.lo + x, a.hi + x}; }

struct PowerParams {
  double r;
};

// psi(t) = t^{-1/p} ln^{-gamma}(t + K)
struct PowerLogParams {
  double p;
  double gamma;
  double K;
};

// psi(k) = values[k-1] for 1 <= k <= N, piecewise linear in between, and
// psi(N) (t/N)^{-tail_exponent} beyond N.
struct TabulatedParams {
  std::shared_ptr<std::vector<double> const> values;
  double tail_exponent;
};

struct FamilyInvariants {
  bool positive = true;
  bool nonincreasing = true;
  bool convex = true;
  bool decays = true;
  double decay_point = 0.0;  // T with psi(T) < 1e-3 psi(1)
};

class PsiFamily {
 public:
  enum class Kind { power, power_log, tabulated };

  static PsiFamily power(double r) {
    if (!(r > 0.0)) throw InvalidArgument("power family requires r > 0");
    return PsiFamily(PowerParams{r}, "power:r=" + format_number(r));
  }

  static PsiFamily power_log(double p, double gamma, double K) {
    if (!(p >= 1.0)) throw InvalidArgument("powerlog family requires p >= 1");
    if (!(gamma > 0.0)) throw InvalidArgument("powerlog family requires gamma > 0");
    if (!(K > 0.0)) throw InvalidArgument("powerlog family requires K > 0");
    return PsiFamily(PowerLogParams{p, gamma, K},
                     "powerlog:p=" + format_number(p) + ",gamma=" + format_number(gamma) +
                         ",K=" + format_number(K));
  }

  static PsiFamily tabulated(std::vector<double> values, double tail_exponent,
                             std::string descriptor = {}) {
    if (values.empty()) throw InvalidArgument("table family needs at least one value");
    for (double v : values)
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidArgument("table family values must be positive and finite");
    if (!(tail_exponent > 0.0))
      throw InvalidArgument("table family requires tail_exponent > 0");
    if (descriptor.empty()) descriptor = "table:<" + std::to_string(values.size()) + " values>";
    return PsiFamily(
        TabulatedParams{std::make_shared<std::vector<double> const>(std::move(values)),
                        tail_exponent},
        std::move(descriptor));
  }

  // "power:r=1.5", "powerlog:p=2,gamma=1,K=3", "table:@path"
  static PsiFamily parse(std::string_view descriptor);

  static PsiFamily load_table(std::string const& path);

  Kind kind() const { return static_cast<Kind>(params_.index()); }
  std::string const& descriptor() const { return descriptor_; }

  PowerParams const* as_power() const { return std::get_if<PowerParams>(&params_); }
  PowerLogParams const* as_power_log() const { return std::get_if<PowerLogParams>(&params_); }
  TabulatedParams const* as_tabulated() const { return std::get_if<TabulatedParams>(&params_); }

  double operator()(double t) const {
    return std::visit([t](auto const& f) { return eval(f, t); }, params_);
  }

  // Right derivative psi'(t+0).
  double derivative(double t) const {
    return std::visit([t](auto const& f) { return deriv(f, t); }, params_);
  }

  // ln psi(t + d) - ln psi(t), d >= 0, without forming the two logarithms
  // separately. Keeps full relative accuracy when d << t.
  double log_ratio(double t, double d) const {
    return std::visit([t, d](auto const& f) { return log_ratio(f, t, d); }, params_);
  }

  // Does sum_k psi(k)^q k^e converge?
  bool tail_converges(double q, double e) const {
    return std::visit([q, e](auto const& f) { return converges(f, q, e); }, params_);
  }

  // Enclosure of the integral of psi(t)^q t^e over [x, inf), x >= 1.
  // Throws DivergentTail when the integral is infinite.
  Bracket tail_integral(double q, double e, double x) const {
    if (!tail_converges(q, e))
      throw DivergentTail("sum of psi^" + format_number(q) + " k^" + format_number(e) +
                          " diverges for " + descriptor_);
    return std::visit([&](auto const& f) { return integral(f, q, e, x); }, params_);
  }

  // Samples psi on integer points 1..samples and checks the structural
  // assumptions on the family.
  FamilyInvariants check_invariants(std::size_t samples = 4096) const {
    FamilyInvariants report;
    double const psi1 = (*this)(1.0);
    double const convex_slack = 1e-10 * std::abs(psi1);
    double prev2 = 0.0, prev1 = 0.0;
    for (std::size_t k = 1; k <= samples; ++k) {
      double const v = (*this)(static_cast<double>(k));
      if (!(v > 0.0)) report.positive = false;
      if (k >= 2 && v > prev1) report.nonincreasing = false;
      if (k >= 3 && prev2 - 2.0 * prev1 + v < -convex_slack) report.convex = false;
      prev2 = prev1;
      prev1 = v;
    }
    report.decays = false;
    for (double T = 2.0; T < 1e300; T *= 2.0) {
      if ((*this)(T) < 1e-3 * psi1) {
        report.decays = true;
        report.decay_point = T;
        break;
      }
    }
    return report;
  }

 private:
  using Params = std::variant<PowerParams, PowerLogParams, TabulatedParams>;

  PsiFamily(Params params, std::string descriptor)
      : params_(std::move(params)), descriptor_(std::move(descriptor)) {}

  static double eval(PowerParams const& f, double t) { return std::pow(t, -f.r); }
  static double deriv(PowerParams const& f, double t) { return -f.r * std::pow(t, -f.r - 1.0); }

  static double eval(PowerLogParams const& f, double t) {
    return std::pow(t, -1.0 / f.p) * std::pow(std::log(t + f.K), -f.gamma);
  }
  static double deriv(PowerLogParams const& f, double t) {
    double const L = std::log(t + f.K);
    return eval(f, t) * (-1.0 / (f.p * t) - f.gamma / ((t + f.K) * L));
  }

  static double eval(TabulatedParams const& f, double t) {
    auto const& v = *f.values;
    double const n = static_cast<double>(v.size());
    if (t >= n) return v.back() * std::pow(t / n, -f.tail_exponent);
    if (t <= 1.0) return v.front();
    auto const i = static_cast<std::size_t>(std::floor(t));  // 1 <= i < N
    double const frac = t - static_cast<double>(i);
    return v[i - 1] + frac * (v[i] - v[i - 1]);
  }
  // Forward difference on the tabulated part, analytic on the tail.
  static double deriv(TabulatedParams const& f, double t) {
    auto const& v = *f.values;
    double const n = static_cast<double>(v.size());
    if (t >= n) return -f.tail_exponent * eval(f, t) / t;
    auto const i = static_cast<std::size_t>(std::max(1.0, std::floor(t)));
    return v[i] - v[i - 1];
  }

  static double log_ratio(PowerParams const& f, double t, double d) { return -f.r * std::log1p(d / t); }
  static double log_ratio(PowerLogParams const& f, double t, double d) {
    double const L = std::log(t + f.K);
    return -std::log1p(d / t) / f.p - f.gamma * std::log1p(std::log1p(d / (t + f.K)) / L);
  }
  static double log_ratio(TabulatedParams const& f, double t, double d) {
    double const n = static_cast<double>(f.values->size());
    if (t >= n) return -f.tail_exponent * std::log1p(d / t);
    return std::log(eval(f, t + d) / eval(f, t));
  }

  static bool converges(PowerParams const& f, double q, double e) { return f.r * q - e > 1.0; }
  static bool converges(PowerLogParams const& f, double q, double e) {
    double const a = q / f.p - e;
    if (std::abs(a - 1.0) <= unit_tol) return f.gamma * q > 1.0;
    return a > 1.0;
  }
  static bool converges(TabulatedParams const& f, double q, double e) {
    return f.tail_exponent * q - e > 1.0;
  }

  static Bracket integral(PowerParams const& f, double q, double e, double x) {
    double const a = f.r * q - e;
    double const v = std::pow(x, 1.0 - a) / (a - 1.0);
    return {v, v};
  }

  static Bracket integral(PowerLogParams const& f, double q, double e, double x) {
    double const a = q / f.p - e;
    double const b = f.gamma * q;
    double err = 0.0;
    double value = 0.0;
    if (std::abs(a - 1.0) <= unit_tol) {
      // u = ln(t + K):  int u^{-b} du  +  int u^{-b} K / (e^u - K) du
      double const u0 = std::log(x + f.K);
      value = std::pow(u0, 1.0 - b) / (b - 1.0);
      auto const g = [&](double u) { return std::pow(u, -b) * f.K / (std::exp(u) - f.K); };
      double u = u0;
      double const u_end = u0 + 60.0;
      while (u < u_end) {
        double const w = std::min(1.0, u_end - u);
        value += detail::gauss8_split(g, u, u + w, &err);
        u += w;
      }
      // remainder beyond u_end is below u0^{-b} K e^{-u_end} / (1 - K e^{-u_end})
      err += std::pow(u0, -b) * f.K * std::exp(-u_end) * 2.0;
    } else {
      // t = x e^u
      double const decay = a - 1.0;
      auto const g = [&](double u) {
        return std::exp(-decay * u) * std::pow(std::log(x * std::exp(u) + f.K), -b);
      };
      double u = 0.0;
      double const u_end = 45.0 / decay;
      while (u < u_end) {
        double const w = std::min({1.0 / decay, std::max(0.5, 0.25 * u), u_end - u});
        value += detail::gauss8_split(g, u, u + w, &err);
        u += w;
      }
      // log factor is decreasing, so the rest is below e^{-45} ln^{-b}(x+K) / decay
      err += std::exp(-45.0) * std::pow(std::log(x + f.K), -b) / decay;
      double const scale = std::pow(x, 1.0 - a);
      value *= scale;
      err *= scale;
    }
    err += 1e-14 * std::abs(value);
    return {value - err, value + err};
  }

  static Bracket integral(TabulatedParams const& f, double q, double e, double x) {
    double const n = static_cast<double>(f.values->size());
    double const a = f.tail_exponent * q - e;
    double const from = std::max(x, n);
    double const c = f.values->back() * std::pow(n, f.tail_exponent);
    double value = std::pow(c, q) * std::pow(from, 1.0 - a) / (a - 1.0);
    double err = 1e-14 * value;
    if (x < n) {
      auto const g = [&](double t) { return std::pow(eval(f, t), q) * std::pow(t, e); };
      double t = x;
      while (t < n) {
        double const next = std::min(n, std::floor(t) + 1.0);
        value += detail::gauss8_split(g, t, next, &err);
        t = next;
      }
    }
    return {value - err, value + err};
  }

  static constexpr double unit_tol = 1e-9;

  Params params_;
  std::string descriptor_;
};

namespace detail {

// "a=1,b=2" -> value lookup by key
inline double lookup_param(std::string_view body, std::string_view key) {
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto const comma = body.find(',', pos);
    auto const item = trim(body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos));
    auto const eq = item.find('=');
    if (eq != std::string_view::npos && trim(item.substr(0, eq)) == key)
      return parse_double(item.substr(eq + 1), key);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  throw InvalidArgument("missing parameter '" + std::string(key) + "' in '" + std::string(body) + "'");
}

}  // namespace detail

inline PsiFamily PsiFamily::load_table(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open table file '" + path + "'");
  std::vector<double> values;
  double tail = std::numeric_limits<double>::quiet_NaN();
  std::string line;
  while (std::getline(in, line)) {
    auto const body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.rfind("tail_exponent=", 0) == 0) {
      tail = detail::parse_double(body.substr(14), "tail_exponent");
      continue;
    }
    values.push_back(detail::parse_double(body, "table value"));
  }
  if (std::isnan(tail)) throw InvalidArgument("table file '" + path + "' lacks tail_exponent= footer");
  return tabulated(std::move(values), tail, "table:@" + path);
}

inline PsiFamily PsiFamily::parse(std::string_view descriptor) {
  auto const text = trim(descriptor);
  auto const colon = text.find(':');
  if (colon == std::string_view::npos)
    throw InvalidArgument("family descriptor '" + std::string(text) + "' lacks a kind prefix");
  auto const kind = text.substr(0, colon);
  auto const body = text.substr(colon + 1);
  if (kind == "power") return power(detail::lookup_param(body, "r"));
  if (kind == "powerlog")
    return power_log(detail::lookup_param(body, "p"), detail::lookup_param(body, "gamma"),
                     detail::lookup_param(body, "K"));
  if (kind == "table") {
    auto const path = trim(body);
    if (path.empty() || path.front() != '@')
      throw InvalidArgument("table descriptor must be 'table:@path'");
    return load_table(std::string(path.substr(1)));
  }
  throw InvalidArgument("unknown family kind '" + std::string(kind) + "'");
}

// g_delta(t) = psi(t) t^delta
class WeightedProduct {
 public:
  WeightedProduct(PsiFamily base, double delta) : base_(std::move(base)), delta_(delta) {
    if (!(delta >= 0.0)) throw InvalidArgument("weighted product requires delta >= 0");
  }

  PsiFamily const& base() const { return base_; }
  double delta() const { return delta_; }

  double operator()(double t) const { return base_(t) * std::pow(t, delta_); }

  // A sum that cancels to rounding level is reported as an exact zero.
  double derivative(double t) const {
    double const a = base_.derivative(t) * std::pow(t, delta_);
    double const b = delta_ * base_(t) * std::pow(t, delta_ - 1.0);
    double const d = a + b;
    return std::abs(d) <= 1e-12 * (std::abs(a) + std::abs(b)) ? 0.0 : d;
  }

  // Values g(1), ..., g(count) as a sequence.
  std::vector<double> sequence(std::size_t count) const {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = (*this)(static_cast<double>(k + 1));
    return out;
  }

 private:
  PsiFamily base_;
  double delta_;
};

}  // namespace zygmund
