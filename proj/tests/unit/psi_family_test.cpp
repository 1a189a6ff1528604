#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "zygmund/psi_family.hpp"

using namespace zygmund;

TEST(PsiFamily, ParsesDescriptors) {
  PsiFamily const a = PsiFamily::parse("power:r=1.5");
  ASSERT_NE(a.as_power(), nullptr);
  EXPECT_EQ(a.as_power()->r, 1.5);
  EXPECT_EQ(a.descriptor(), "power:r=1.5");

  PsiFamily const b = PsiFamily::parse(" powerlog:p=2, gamma=1, K=3 ");
  ASSERT_NE(b.as_power_log(), nullptr);
  EXPECT_EQ(b.as_power_log()->p, 2.0);
  EXPECT_EQ(b.as_power_log()->gamma, 1.0);
  EXPECT_EQ(b.as_power_log()->K, 3.0);
  EXPECT_EQ(PsiFamily::parse(b.descriptor()).descriptor(), b.descriptor());
}

TEST(PsiFamily, RejectsBadDescriptors) {
  EXPECT_THROW(PsiFamily::parse("power"), InvalidArgument);
  EXPECT_THROW(PsiFamily::parse("power:r=abc"), InvalidArgument);
  EXPECT_THROW(PsiFamily::parse("power:q=1"), InvalidArgument);
  EXPECT_THROW(PsiFamily::parse("power:r=-1"), InvalidArgument);
  EXPECT_THROW(PsiFamily::parse("powerlog:p=0.5,gamma=1,K=3"), InvalidArgument);
  EXPECT_THROW(PsiFamily::parse("spline:r=1"), InvalidArgument);
  EXPECT_THROW(PsiFamily::parse("table:nofile"), InvalidArgument);
  EXPECT_THROW(PsiFamily::parse("table:@/nonexistent/file"), InvalidArgument);
}

TEST(PsiFamily, EvaluatesClosedForms) {
  PsiFamily const p = PsiFamily::power(2.0);
  EXPECT_DOUBLE_EQ(p(3.0), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(p.derivative(3.0), -2.0 / 27.0);

  PsiFamily const q = PsiFamily::power_log(2.0, 1.0, 3.0);
  EXPECT_NEAR(q(10.0), 1.0 / (std::sqrt(10.0) * std::log(13.0)), 1e-15);
}

TEST(PsiFamily, DerivativeMatchesFiniteDifferences) {
  for (auto const& f : {PsiFamily::power(0.9), PsiFamily::power_log(2.0, 1.2, 4.0),
                        PsiFamily::power_log(1.0, 2.0, 8.0)}) {
    for (double t : {1.0, 2.5, 17.0, 300.0, 1e5}) {
      double const h = 1e-5 * t;
      double const fd = (f(t + h) - f(t - h)) / (2 * h);
      EXPECT_NEAR(f.derivative(t), fd, 1e-6 * std::abs(fd)) << f.descriptor() << " t=" << t;
    }
  }
}

TEST(PsiFamily, LogRatioKeepsRelativeAccuracy) {
  PsiFamily const f = PsiFamily::power_log(2.0, 1.2, 4.0);
  for (double t : {3.0, 1e3, 1e6}) {
    double const direct = std::log(f(t + 1) / f(t));
    EXPECT_NEAR(f.log_ratio(t, 1.0), direct, 1e-9 * std::abs(direct) + 1e-15);
  }
  // far out the direct quotient is pure rounding; the ratio keeps its digits
  PsiFamily const p = PsiFamily::power(1.5);
  EXPECT_NEAR(p.log_ratio(1e9, 1.0), -1.5 * (1e-9 - 0.5e-18), 1e-24);
}

TEST(PsiFamily, InvariantsHoldForBuiltIns) {
  for (auto const& f : {PsiFamily::power(0.5), PsiFamily::power(2.0), PsiFamily::power_log(2.0, 1.2, 4.0)}) {
    FamilyInvariants const inv = f.check_invariants(2048);
    EXPECT_TRUE(inv.positive);
    EXPECT_TRUE(inv.nonincreasing);
    EXPECT_TRUE(inv.convex);
    EXPECT_TRUE(inv.decays);
    EXPECT_LT(f(inv.decay_point), 1e-3 * f(1.0));
  }
}

TEST(PsiFamily, InvariantsCatchABadTable) {
  PsiFamily const t = PsiFamily::tabulated({1.0, 0.2, 0.5, 0.1}, 2.0);
  FamilyInvariants const inv = t.check_invariants(16);
  EXPECT_FALSE(inv.nonincreasing);
  EXPECT_FALSE(inv.convex);
}

TEST(PsiFamily, TableFileRoundTrip) {
  auto const path = std::filesystem::temp_directory_path() / "zygmund_psi_table.txt";
  {
    std::ofstream out(path);
    out << "# k^-2 sampled\n1\n0.25\n0.1111111111111111\n0.0625\ntail_exponent=2\n";
  }
  PsiFamily const t = PsiFamily::parse("table:@" + path.string());
  EXPECT_DOUBLE_EQ(t(2.0), 0.25);
  EXPECT_DOUBLE_EQ(t(8.0), 0.0625 * 0.25);  // power tail beyond the table
  EXPECT_DOUBLE_EQ(t(2.5), 0.5 * (0.25 + 0.1111111111111111));
  EXPECT_DOUBLE_EQ(t.derivative(2.0), 0.1111111111111111 - 0.25);  // forward difference
  EXPECT_TRUE(t.tail_converges(1.0, 0.0));
  EXPECT_FALSE(t.tail_converges(0.5, 0.0));
  std::filesystem::remove(path);
}

TEST(PsiFamily, TableWithoutFooterIsRejected) {
  auto const path = std::filesystem::temp_directory_path() / "zygmund_psi_nofooter.txt";
  { std::ofstream(path) << "1\n0.5\n"; }
  EXPECT_THROW(PsiFamily::load_table(path.string()), InvalidArgument);
  std::filesystem::remove(path);
  EXPECT_THROW(PsiFamily::tabulated({}, 2.0), InvalidArgument);
  EXPECT_THROW(PsiFamily::tabulated({1.0, -1.0}, 2.0), InvalidArgument);
}

TEST(PsiFamily, ConvergenceRules) {
  PsiFamily const p = PsiFamily::power(0.9);
  EXPECT_TRUE(p.tail_converges(2.0, 0.0));   // k^-1.8
  EXPECT_FALSE(p.tail_converges(1.0, 0.0));  // k^-0.9
  PsiFamily const h = PsiFamily::power(0.5);
  EXPECT_FALSE(h.tail_converges(2.0, 0.0));  // harmonic
  // t^{-1} ln^{-q gamma}: converges iff q gamma > 1
  PsiFamily const l = PsiFamily::power_log(2.0, 1.2, 4.0);
  EXPECT_TRUE(l.tail_converges(2.0, 0.0));
  PsiFamily const l2 = PsiFamily::power_log(2.0, 0.4, 4.0);
  EXPECT_FALSE(l2.tail_converges(2.0, 0.0));
  EXPECT_THROW(h.tail_integral(2.0, 0.0, 10.0), DivergentTail);
}

TEST(PsiFamily, TailIntegralsMatchQuadrature) {
  // power: closed form
  Bracket const b = PsiFamily::power(1.5).tail_integral(1.0, 0.0, 16.0);
  EXPECT_NEAR(b.mid(), 2.0 / 4.0, 1e-14);
  // powerlog with a = 1: int_x^inf dt / ((t) ln^{2}(t+K)) ~ compare against a crude substitution rule
  PsiFamily const l = PsiFamily::power_log(1.0, 2.0, 8.0);
  double ref = 0.0;
  // u = ln t from ln x to ln 1e12, midpoint rule, plus the analytic remainder 1/ln(1e12)
  double const x = 100.0, upper = 1e12;
  int const steps = 2'000'000;
  double const du = (std::log(upper) - std::log(x)) / steps;
  for (int i = 0; i < steps; ++i) {
    double const t = std::exp(std::log(x) + (i + 0.5) * du);
    ref += l(t) * t * du;
  }
  double const beyond_lo = 1.0 / std::log(upper + 8.0), beyond_hi = 1.0 / std::log(upper);
  Bracket const lb = l.tail_integral(1.0, 0.0, x);
  EXPECT_GT(lb.hi, ref + beyond_lo - 1e-8);
  EXPECT_LT(lb.lo, ref + beyond_hi + 1e-8);
  EXPECT_LT(lb.width(), 1e-6 * lb.mid());
}

TEST(WeightedProduct, EvaluatesAndDifferentiates) {
  WeightedProduct const g(PsiFamily::power(1.5), 1.0);
  EXPECT_DOUBLE_EQ(g(4.0), 0.5);
  EXPECT_NEAR(g.derivative(4.0), -0.5 * std::pow(4.0, -1.5), 1e-15);
  WeightedProduct const h(PsiFamily::power_log(2.0, 1.0, 3.0), 0.5);
  for (double t : {1.0, 10.0, 1e4}) {
    double const d = 1e-6 * t;
    double const fd = (h(t + d) - h(t - d)) / (2 * d);
    EXPECT_NEAR(h.derivative(t), fd, 1e-4 * std::abs(fd));
  }
  auto const seq = g.sequence(4);
  ASSERT_EQ(seq.size(), 4u);
  EXPECT_DOUBLE_EQ(seq[3], 0.5);
  EXPECT_THROW(WeightedProduct(PsiFamily::power(1.0), -0.5), InvalidArgument);
}
