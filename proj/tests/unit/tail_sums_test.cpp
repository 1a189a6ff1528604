#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "zygmund/tail_sums.hpp"

using namespace zygmund;

namespace {

// Plain forward loop in long double up to N plus the midpoint of the
// integral-comparison bracket for k^{-r}.
double power_tail_oracle(double r, std::size_t n, std::size_t N) {
  long double s = 0.0L;
  for (std::size_t k = n; k < N; ++k) s += std::pow(static_cast<long double>(k), -static_cast<long double>(r));
  double const Nd = static_cast<double>(N);
  double const lo = std::pow(Nd, 1.0 - r) / (r - 1.0);
  return static_cast<double>(s) + lo + 0.5 * std::pow(Nd, -r);
}

}  // namespace

TEST(TailSum, ClassicalValues) {
  double const pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(tail_sum_l1(PsiFamily::power(2.0), 1).value, pi2 / 6.0, 1e-12);
  EXPECT_NEAR(tail_sum_pprime(PsiFamily::power(1.0), 2.0, 2).value, pi2 / 6.0 - 1.0, 1e-12);
  EXPECT_NEAR(tail_sum_pprime(PsiFamily::power(1.0), 2.0, 2).value, 0.644934, 1e-6);
}

TEST(TailSum, PowerTailsMatchIntegralAsymptotics) {
  double const a = tail_sum_pprime(PsiFamily::power(0.9), 2.0, 100).value;
  EXPECT_NEAR(a, std::pow(100.0, -0.8) / 0.8, 0.02 * a);
  EXPECT_NEAR(a, 0.03137, 0.02 * 0.03137);
  double const b = tail_sum_l1(PsiFamily::power(1.5), 16).value;
  EXPECT_NEAR(b, 0.5, 0.05 * 0.5);
}

TEST(TailSum, AgreesWithLongDoubleSummation) {
  for (double r : {1.5, 2.0, 3.0}) {
    for (std::size_t n : {1u, 16u, 1000u}) {
      double const oracle = power_tail_oracle(r, n, 2'000'000);
      TailSum const t = tail_sum_l1(PsiFamily::power(r), n);
      EXPECT_NEAR(t.value, oracle, 1e-9 * oracle) << "r=" << r << " n=" << n;
    }
  }
}

TEST(TailSum, ValueInsideCertifiedBracket) {
  for (auto const& f : {PsiFamily::power(0.9), PsiFamily::power(1.5), PsiFamily::power_log(2.0, 1.2, 4.0),
                        PsiFamily::power_log(1.0, 2.0, 8.0)}) {
    for (std::size_t n : {1u, 8u, 4096u}) {
      TailSum const t = f.tail_converges(1.0, 0.0) ? tail_sum_l1(f, n) : tail_sum_pprime(f, 2.0, n);
      EXPECT_LE(t.bracket.lo, t.value);
      EXPECT_GE(t.bracket.hi, t.value);
      EXPECT_LT(t.bracket.width(), 1e-6 * t.value) << f.descriptor() << " n=" << n;
      // the summand itself brackets the remainder: int_n f <= S <= f(n) + int_n f
      double const q = f.tail_converges(1.0, 0.0) ? 1.0 : 2.0;
      Bracket const integral = f.tail_integral(q, 0.0, static_cast<double>(n));
      EXPECT_GE(t.bracket.hi, integral.lo);
      EXPECT_LE(t.bracket.lo, std::pow(f(static_cast<double>(n)), q) + integral.hi);
    }
  }
}

TEST(TailSum, DivergentTailsThrow) {
  EXPECT_THROW(tail_sum_l1(PsiFamily::power(1.0), 1), DivergentTail);
  EXPECT_THROW(tail_sum_pprime(PsiFamily::power(0.5), 2.0, 1), DivergentTail);
  EXPECT_THROW(tail_sum_l1(PsiFamily::power(2.0), 0), InvalidArgument);
}

TEST(TailSum, TabulatedFamilyUsesPowerTail) {
  std::vector<double> values;
  for (int k = 1; k <= 50; ++k) values.push_back(std::pow(k, -2.0));
  PsiFamily const t = PsiFamily::tabulated(values, 2.0);
  double const pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(tail_sum_l1(t, 1).value, pi2 / 6.0, 1e-10);
}
