#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zygmund/order_bounds.hpp"

using namespace zygmund;

namespace {

constexpr double pi = std::numbers::pi;

// sum_{k>=n} f(k) directly to N terms plus the integral of f past N + 1/2
template <class F, class G>
double tail_oracle(F f, G integral_from, std::size_t n, std::size_t N = 2'000'000) {
  long double s = 0;
  for (std::size_t k = N; k >= n; --k) s += f(static_cast<long double>(k));
  return static_cast<double>(s) + integral_from(N + 0.5);
}

ClassSpec power_class(double r, double beta, double p, double s = 1.0) {
  return ClassSpec(PsiFamily::power(r), beta, p, s);
}

}  // namespace

TEST(TheoryBound, TailOfPprimePowers) {
  // p = 2: (sum_{k>=n} k^-2)^(1/2); n = 1 gives pi/sqrt(6)
  BoundValue const b1 = theory_bound(power_class(1.0, 0.0, 2.0), 1);
  EXPECT_EQ(b1.variant, BoundVariant::t1_tail_pprime);
  EXPECT_NEAR(b1.value, pi / std::sqrt(6.0), 1e-9);
  EXPECT_LE(b1.certified.lo, b1.value);
  EXPECT_GE(b1.certified.hi, b1.value);

  // p = 3/2, p' = 3: sum psi^3 k = sum k^{-3.5+1} for psi = k^-(7/6)
  double const r = 7.0 / 6.0;
  std::size_t const n = 10;
  double const oracle = tail_oracle([&](long double k) { return std::pow(k, -3.0L * r + 1.0L); },
                                    [&](double x) { return std::pow(x, 2.0 - 3.0 * r) / (3.0 * r - 2.0); }, n);
  EXPECT_NEAR(theory_bound(power_class(r, 0.0, 1.5), n).value, std::cbrt(oracle), 1e-9);
  EXPECT_NEAR(tail_sum_pprime(power_class(r, 0.0, 1.5), n).value, oracle, 1e-9 * oracle);
}

TEST(TheoryBound, PEqualsOneVariants) {
  BoundValue const cos_case = theory_bound(power_class(2.0, 0.0, 1.0), 1);
  EXPECT_EQ(cos_case.variant, BoundVariant::t1_p1_cos);
  EXPECT_NEAR(cos_case.value, pi * pi / 6, 1e-9);

  BoundValue const sin_case = theory_bound(power_class(2.0, 1.0, 1.0), 4);
  EXPECT_EQ(sin_case.variant, BoundVariant::t1_p1_sin);
  EXPECT_DOUBLE_EQ(sin_case.value, 0.25);  // psi(n) n
  EXPECT_DOUBLE_EQ(theory_bound(power_class(2.0, 3.0, 1.0), 4).value, 0.25);

  EXPECT_THROW(tail_sum_pprime(power_class(2.0, 0.0, 1.0), 4), InvalidArgument);
  EXPECT_THROW(theory_bound(power_class(1.0, 0.0, 1.0), 4), DivergentTail);
  EXPECT_THROW(theory_bound(power_class(2.0, 0.0, 1.0), 0), InvalidArgument);
}

TEST(TheoryBound, ParityWarning) {
  EXPECT_FALSE(theory_bound(power_class(2.0, 1.0, 1.0), 4).parity_warning);
  EXPECT_FALSE(theory_bound(power_class(2.0, 0.5, 1.0), 4).parity_warning);
  BoundValue const near = theory_bound(power_class(2.0, 1.0 + 1e-14, 1.0), 4);
  EXPECT_TRUE(near.parity_warning);
  // non-integer beta always takes the cosine branch
  EXPECT_EQ(near.variant, BoundVariant::t1_p1_cos);
}

TEST(TheoryBound, CosineAndSineOrdersSeparateForLogFamilies) {
  // psi = 1/(t ln^2(t+8)): the cosine tail decays like 1/ln n, the sine
  // order like 1/ln^2 n, so their ratio grows like ln n
  PsiFamily const psi = PsiFamily::power_log(1.0, 2.0, 8.0);
  ClassSpec const cos_spec(psi, 0.0, 1.0, 1.0), sin_spec(psi, 1.0, 1.0, 1.0);
  auto const ratio = [&](std::size_t n) {
    return theory_bound(cos_spec, n).value / theory_bound(sin_spec, n).value;
  };
  EXPECT_GE(ratio(1u << 16), 1.5 * ratio(1u << 8));
}

TEST(SimplifiedBound, Examples) {
  BoundValue const b = mc_simplified_bound(power_class(1.5, 0.0, 2.0), 4);
  EXPECT_DOUBLE_EQ(b.value, 0.25);  // 4^-1.5 * 4^(1/2)
  EXPECT_TRUE(b.applicable);
  EXPECT_NEAR(mc_simplified_bound(power_class(1.2, 0.0, 1.5), 10).value, std::pow(10.0, -1.2 + 2.0 / 3.0), 1e-15);
  // g_{1/p} = ln^{-gamma}(t + K) has growing alpha
  EXPECT_FALSE(mc_simplified_bound(ClassSpec(PsiFamily::power_log(2.0, 1.2, 4.0), 0.0, 2.0, 1.0), 16).applicable);
  EXPECT_FALSE(mc_applicable(ClassSpec(PsiFamily::power_log(1.0, 2.0, 8.0), 0.0, 1.0, 1.0)));
  EXPECT_TRUE(mc_applicable(power_class(0.9, 0.0, 2.0)));
}

TEST(SimplifiedBound, SameOrderAsTheoryForPowers) {
  for (double r : {0.9, 1.5, 3.0}) {
    for (double p : {1.5, 2.0, 4.0}) {
      ClassSpec const spec = power_class(r, 0.0, p);
      if (!spec.family().tail_converges(spec.p_prime(), spec.p_prime() - 2.0)) continue;
      for (std::size_t n : {4u, 64u, 1024u}) {
        double const ratio = mc_simplified_bound(spec, n).value / theory_bound(spec, n).value;
        EXPECT_GE(ratio, 0.1) << "r=" << r << " p=" << p << " n=" << n;
        EXPECT_LE(ratio, 10.0) << "r=" << r << " p=" << p << " n=" << n;
      }
    }
  }
}

TEST(Theorem3, Formulas) {
  ClassSpec const spec(PsiFamily::power_log(2.0, 1.2, 4.0), 0.0, 2.0, 1.0);
  for (std::size_t n : {2u, 16u, 1000u}) {
    double const nd = static_cast<double>(n);
    double const expected = std::pow(std::log(nd + 4.0), -1.2) * std::sqrt(std::log(nd));
    EXPECT_NEAR(theorem3_bound(spec, n).value, expected, 1e-14 * expected);
  }
  ClassSpec const p1(PsiFamily::power_log(1.0, 2.0, 8.0), 0.0, 1.0, 1.0);
  EXPECT_NEAR(theorem3_bound(p1, 100).value, std::log(100.0) / std::pow(std::log(108.0), 2.0), 1e-15);
  ClassSpec const p1_sin(PsiFamily::power_log(1.0, 2.0, 8.0), 1.0, 1.0, 1.0);
  EXPECT_NEAR(theorem3_bound(p1_sin, 100).value, std::pow(std::log(108.0), -2.0), 1e-15);
}

TEST(Theorem3, TracksTheTailOrder) {
  // sum_{k>=n} 1/(k ln^{2 gamma} k) ~ ln^{1 - 2 gamma} n / (2 gamma - 1), so
  // theory / theorem3 -> 1 / sqrt(2 gamma - 1)
  double const gamma = 1.2;
  ClassSpec const spec(PsiFamily::power_log(2.0, gamma, 4.0), 0.0, 2.0, 1.0);
  std::size_t const n = std::size_t{1} << 20;
  double const ratio = theory_bound(spec, n).value / theorem3_bound(spec, n).value;
  EXPECT_NEAR(ratio, 1.0 / std::sqrt(2 * gamma - 1), 0.05);
}

TEST(Theorem3, Constraints) {
  EXPECT_THROW(theorem3_bound(ClassSpec(PsiFamily::power_log(2.0, 0.4, 4.0), 0.0, 2.0, 1.0), 16),
               ConstraintViolated);
  EXPECT_THROW(theorem3_bound(ClassSpec(PsiFamily::power_log(2.0, 1.2, 1.0), 0.0, 2.0, 1.0), 16),
               ConstraintViolated);
  EXPECT_THROW(theorem3_bound(ClassSpec(PsiFamily::power_log(1.0, 0.9, 8.0), 0.0, 1.0, 1.0), 16),
               ConstraintViolated);
  EXPECT_THROW(theorem3_bound(ClassSpec(PsiFamily::power_log(1.0, 2.0, 5.0), 0.0, 1.0, 1.0), 16),
               ConstraintViolated);
  EXPECT_THROW(theorem3_bound(ClassSpec(PsiFamily::power_log(2.0, 1.2, 4.0), 0.0, 2.0, 1.0), 1),
               ConstraintViolated);
  EXPECT_THROW(theorem3_bound(ClassSpec(PsiFamily::power_log(2.0, 1.2, 4.0), 0.0, 1.5, 1.0), 16),
               InvalidArgument);
  EXPECT_THROW(theorem3_bound(power_class(1.5, 0.0, 2.0), 16), InvalidArgument);
}

TEST(RatioRelations, PowersStayBounded) {
  std::vector<std::size_t> const grid{8, 64, 512, 4096, 32768};
  RatioRelationsReport const r = ratio_relations(power_class(1.5, 0.0, 2.0), grid);
  ASSERT_EQ(r.l1.values.size(), grid.size());
  // psi(n) n / sum_{k>=n} psi -> r - 1 = 0.5; the p' = 2 ratio -> 2r - 1 = 2
  EXPECT_NEAR(r.l1.values.back(), 0.5, 0.01);
  EXPECT_NEAR(r.pprime.values.back(), 2.0, 0.01);
  EXPECT_EQ(r.l1.trend, RatioTrend::bounded);
  EXPECT_EQ(r.pprime.trend, RatioTrend::bounded);

  RatioRelationsReport const sq = ratio_relations(power_class(2.0, 0.0, 2.0), grid);
  EXPECT_EQ(sq.pprime.trend, RatioTrend::bounded);
  EXPECT_NEAR(sq.pprime.values.back(), 3.0, 0.01);
}

TEST(RatioRelations, LogFamilyDecays) {
  std::vector<std::size_t> const grid{16, 256, 4096, 65536, 1u << 20};
  RatioRelationsReport const r =
      ratio_relations(ClassSpec(PsiFamily::power_log(1.0, 2.0, 8.0), 0.0, 1.0, 1.0), grid);
  EXPECT_EQ(r.l1.trend, RatioTrend::decaying);
  EXPECT_EQ(r.pprime.trend, RatioTrend::not_applicable);
  for (double v : r.pprime.values) EXPECT_TRUE(std::isnan(v));
}

TEST(RatioRelations, DivergentSeriesAreNotApplicable) {
  std::vector<std::size_t> const grid{8, 64, 512};
  RatioRelationsReport const r = ratio_relations(power_class(0.9, 0.0, 2.0), grid);
  EXPECT_EQ(r.l1.trend, RatioTrend::not_applicable);
  EXPECT_EQ(r.pprime.trend, RatioTrend::bounded);
}

TEST(Conditions, PowerFamilies) {
  ConditionsReport const ok = conditions_report(power_class(1.5, 0.0, 1.0, 2.0));
  EXPECT_TRUE(ok.convergence_ok);
  EXPECT_NEAR(ok.convergence_evidence, 2.6123753486854883, 1e-8);  // zeta(3/2)
  EXPECT_NEAR(ok.alpha_inf, 2.0, 1e-6);                           // g_1 = t^-1/2
  EXPECT_DOUBLE_EQ(ok.alpha_threshold, 1.0);
  EXPECT_TRUE(ok.alpha_ok && ok.m0_ok && ok.mc);
  EXPECT_TRUE(ok.gm_ok);
  EXPECT_TRUE(ok.ga_ok);
  EXPECT_TRUE(ok.hypotheses_ok());

  // g_{s+1/p} = t^-1/4 is decreasing, so its GM+ constant keeps growing
  ConditionsReport const bad = conditions_report(power_class(1.5, 0.0, 1.0, 0.25));
  EXPECT_FALSE(bad.gm_ok);
  EXPECT_GT(bad.gm_plus_A_2N, bad.gm_plus_A_N);
  EXPECT_FALSE(bad.hypotheses_ok());

  ConditionsReport const divergent = conditions_report(power_class(1.0, 0.0, 1.0, 1.0));
  EXPECT_FALSE(divergent.convergence_ok);
  EXPECT_FALSE(divergent.convergence_note.empty());

  // p = 2, p' = 2: alpha(g_1/2) = 1/(r - 1/2) must exceed 1
  ConditionsReport const p2 = conditions_report(power_class(1.2, 0.0, 2.0, 1.0));
  EXPECT_NEAR(p2.alpha_inf, 1.0 / 0.7, 1e-6);
  EXPECT_TRUE(p2.alpha_ok);
  ConditionsReport const p2_bad = conditions_report(power_class(1.8, 0.0, 2.0, 1.0));
  EXPECT_FALSE(p2_bad.alpha_ok);
}

TEST(Conditions, LogFamilyIsM0NotMC) {
  ConditionsReport const r = conditions_report(ClassSpec(PsiFamily::power_log(2.0, 1.2, 4.0), 0.0, 2.0, 1.0));
  EXPECT_TRUE(r.convergence_ok);
  EXPECT_TRUE(r.m0_ok);
  EXPECT_FALSE(r.mc);
  std::ostringstream out;
  print_conditions(out, ClassSpec(PsiFamily::power_log(2.0, 1.2, 4.0), 0.0, 2.0, 1.0), r);
  EXPECT_NE(out.str().find("M_0"), std::string::npos);
}
