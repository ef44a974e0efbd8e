#include <gtest/gtest.h>

#include "dbseq/dimension.hpp"
#include "oracles.hpp"

using namespace dbseq;

namespace {

const DigitSystem kCantor(3, {0, 2});

double d(const Real& x) { return static_cast<double>(x); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Contradiction;
}

}  // namespace

TEST(Alpha, Values) {
  EXPECT_EQ(*alpha_rational(2), ExactRational(1, 49));
  EXPECT_FALSE(alpha_rational(3).has_value());
  EXPECT_NEAR(d(alpha(2)), 1.0 / 49, 1e-16);
  EXPECT_NEAR(d(alpha(3)), 0.0203837651356245, 1e-15);
  EXPECT_NEAR(d(alpha(4)), std::log(2.0) / (4 * std::log(4.0)), 1e-15);
  EXPECT_NEAR(d(alpha(10)), std::lgamma(9.0) / (10 * std::log(10.0)), 1e-12);
  // Both routes give the same constant.
  EXPECT_LT(d(abs(alpha_step_route(2) - alpha(2))), 1e-45);
  EXPECT_LT(d(abs(alpha_step_route(3) - alpha(3))), 1e-45);
  EXPECT_EQ(kind_of([] { (void)alpha_step_route(4); }), ErrorKind::Domain);
}

TEST(Bounds, SandwichForManyK) {
  for (int k = 2; k <= 50; ++k) {
    for (int b : {k, k + 1, 2 * k + 3}) {
      const BoundReport r = bound_report(k, b);
      EXPECT_TRUE(r.sandwich) << k << " " << b;
      EXPECT_GT(r.lower, 0);
      EXPECT_LT(r.upper, r.delta);
    }
  }
  EXPECT_NEAR(d(upper_coefficient(3)), std::log(6.0) / (3 * std::log(3.0)), 1e-15);
  EXPECT_EQ(kind_of([] { (void)bound_report(3, 2); }), ErrorKind::Domain);
}

TEST(Moran, Cases) {
  EXPECT_NEAR(d(moran_dimension({Real(1) / 3, Real(1) / 3})), std::log(2.0) / std::log(3.0), 1e-14);
  EXPECT_NEAR(d(moran_dimension({Real(1) / 2, Real(1) / 4})), std::log((1 + std::sqrt(5.0)) / 2) / std::log(2.0), 1e-14);
  EXPECT_NEAR(d(moran_dimension({Real(1) / 2, Real(1) / 2})), 1.0, 1e-14);
  EXPECT_EQ(kind_of([] { (void)moran_dimension({Real(1) / 2}); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { (void)moran_dimension({Real(1) / 2, Real(1)}); }), ErrorKind::Domain);
}

TEST(Counting, DeBruijnWords) {
  EXPECT_EQ(count_debruijn_words(DigitSystem::full(2), 3), 16);
  EXPECT_EQ(count_debruijn_words(DigitSystem::full(3), 2), 216);
  EXPECT_EQ(count_debruijn_words(DigitSystem::full(3), 1), 6);
  for (int k : {2, 3}) {
    for (int m : {1, 2}) {
      EXPECT_EQ(count_debruijn_words(DigitSystem::full(k), m), BigCount(oracle::debruijn_words(k, m).size()));
    }
  }
  EXPECT_EQ(count_debruijn_words(DigitSystem::full(2), 4), BigCount(oracle::debruijn_words(2, 4).size()));
  // Exact count k!^(k^(m-1)) against the counting bound with its extra k^(m-1).
  for (int m = 1; m <= 5; ++m) {
    const BigCount exact = count_debruijn_words(DigitSystem::full(2), m);
    EXPECT_EQ(exact, pow_big(2, pow_u64(2, static_cast<std::uint64_t>(m - 1))));
    EXPECT_LE(exact, debruijn_count_bound(2, m));
  }
}

TEST(CostSeries, ClosedFormAndDecay) {
  for (const DigitSystem& ds : {DigitSystem::full(2), kCantor, DigitSystem::full(3), DigitSystem(5, {0, 2, 4})}) {
    const Real s = critical_exponent(ds) + Real("0.1");
    const CostSeries series = cost_series(ds, s, 1, 7);
    ASSERT_EQ(series.ratios.size(), 6u);
    for (const auto& r : series.ratios) {
      ASSERT_TRUE(r.relative_error.has_value());
      EXPECT_LT(d(*r.relative_error), 1e-40);
    }
    EXPECT_NEAR(d(series.epsilon), 0.1, 1e-40);
    // Eventually decreasing and geometric-or-faster at the tail.
    EXPECT_LT(series.ratios.back().ratio, series.ratios[series.ratios.size() - 2].ratio);
    EXPECT_LT(series.ratios.back().ratio, 1);
  }
  const CostSeries binary = cost_series(DigitSystem::full(2), Real("0.6"), 1, 7);
  EXPECT_NEAR(d(binary.ratios[0].ratio), 1.149, 1e-3);
  EXPECT_NEAR(d(binary.ratios[1].ratio), 1.0, 1e-12);
}

TEST(CostSeries, ExactCountsMarkedAndValidated) {
  std::map<int, BigCount> exact;
  for (int m = 1; m <= 3; ++m) exact[m] = count_debruijn_words(DigitSystem::full(2), m);
  const CostSeries series = cost_series(DigitSystem::full(2), Real("0.6"), 1, 5, exact);
  EXPECT_FALSE(series.terms[0].is_bound);
  EXPECT_TRUE(series.terms[4].is_bound);
  EXPECT_FALSE(series.ratios[0].closed_form.has_value());
  EXPECT_TRUE(series.ratios[3].closed_form.has_value());
  EXPECT_EQ(kind_of([] { (void)cost_series(DigitSystem::full(2), Real("0.6"), 1, 21); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { (void)cost_series(DigitSystem::full(2), Real(0), 1, 3); }), ErrorKind::Domain);
}

TEST(BoxDimension, BelowUpperBound) {
  const BigCount n5 = count_debruijn_words(DigitSystem::full(2), 5);
  EXPECT_EQ(n5, BigCount(65536));
  EXPECT_NEAR(d(empirical_box_dimension(DigitSystem::full(2), 5, n5)), 16.0 / 36.0, 1e-15);
  // Cantor digits, order 3: 16 words of length 10.
  const double est = d(empirical_box_dimension(kCantor, 3, count_debruijn_words(kCantor, 3)));
  EXPECT_NEAR(est, 0.25237, 1e-5);
  // m = 1: k! words of length k, which is the upper value itself.
  const Real upper = upper_coefficient(2) * fractal_dimension(2, 3);
  EXPECT_LT(abs(empirical_box_dimension(kCantor, 1, 2) - upper), Real("1e-45"));
  for (int m = 2; m <= 5; ++m) {
    EXPECT_LT(empirical_box_dimension(kCantor, m, count_debruijn_words(kCantor, m)), upper);
  }
}

TEST(Wilson, Interval) {
  const WilsonInterval all = wilson_interval(100, 100);
  EXPECT_DOUBLE_EQ(all.high, 1.0);
  EXPECT_GT(all.low, 0.9);
  const WilsonInterval none = wilson_interval(0, 100);
  EXPECT_DOUBLE_EQ(none.low, 0.0);
  EXPECT_NEAR(none.high, 9.0 / 109.0, 1e-12);
  const WilsonInterval half = wilson_interval(500, 1000);
  EXPECT_NEAR(half.low + half.high, 1.0, 1e-12);
  EXPECT_LT(half.low, 0.5);
  EXPECT_EQ(kind_of([] { (void)wilson_interval(0, 0); }), ErrorKind::Precondition);
}

TEST(Mdp, Constants) {
  EXPECT_EQ(cylinder_constant(kCantor), ExactRational(1));
  EXPECT_EQ(cylinder_constant(DigitSystem(10, {1, 3, 5})), ExactRational(4, 9));
  const auto spec4 = ExtensionSpec::defaults(DigitSystem::full(4));
  EXPECT_NEAR(d(mdp_constant(spec4, parse_word("0123"), Real("0.5"))), 3.0, 1e-15);
}

TEST(Mdp, StartCylinderHasFullMass) {
  const auto spec = ExtensionSpec::defaults(kCantor);
  const Word start = least_debruijn_word(kCantor, 1);
  const Real s = critical_exponent(kCantor) * Real("0.5");
  const CylinderCheck c = empirical_cylinder_check(spec, start, start, 50, s, std::nullopt, 3);
  EXPECT_EQ(c.hits, 50u);
  EXPECT_EQ(c.depth, 0);
  EXPECT_TRUE(c.pass);
}

TEST(Mdp, DeeperCylinderQuaternary) {
  const auto spec = ExtensionSpec::defaults(DigitSystem::full(4));
  const Word start = least_debruijn_word(DigitSystem::full(4), 1);
  Word tau = start;
  tau.letters.push_back(0);
  const Real s = alpha(4) * fractal_dimension(4, 4);
  const CylinderCheck c = empirical_cylinder_check(spec, start, tau, 400, s, std::nullopt, 9);
  EXPECT_EQ(c.depth, 1);
  EXPECT_TRUE(c.pass);
  const CylinderCheck again = empirical_cylinder_check(spec, start, tau, 400, s, std::nullopt, 9);
  EXPECT_EQ(again.hits, c.hits);
}
