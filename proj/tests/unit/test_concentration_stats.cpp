#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sinai/concentration_stats.hpp"
#include "sinai/errors.hpp"

using namespace sinai;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SinaiError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no SinaiError thrown";
  return ErrorCode::IoError;
}

std::vector<std::uint64_t> random_counts(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 25);
  std::uniform_int_distribution<int> val(0, 30);
  std::bernoulli_distribution hole(0.2);
  std::vector<std::uint64_t> c(static_cast<std::size_t>(len(rng)));
  for (auto& v : c) v = hole(rng) ? 0 : static_cast<std::uint64_t>(val(rng));
  c.front() += 1;
  return c;
}

std::uint64_t brute_radius(const std::vector<std::uint64_t>& counts, std::uint64_t n, const Fraction& beta,
                           std::uint64_t min_radius) {
  for (std::uint64_t r = min_radius;; ++r) {
    const auto best = oracle::best_window(counts, r);
    if (best * static_cast<std::uint64_t>(beta.den()) >= static_cast<std::uint64_t>(beta.num()) * n) return r;
  }
}

}  // namespace

TEST(Concentration, RandomTablesAgreeWithBruteForce) {
  std::mt19937_64 rng(2024);
  const std::vector<Fraction> betas{Fraction(0, 1), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10),
                                    Fraction(1, 1)};
  const std::vector<Fraction> deltas{Fraction(1, 100), Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)};
  for (int trial = 0; trial < 300; ++trial) {
    const auto counts = random_counts(rng);
    const Site first = std::uniform_int_distribution<Site>(-20, 20)(rng);
    const LocalTimeTable table(first, counts);
    std::uint64_t n = 0;
    std::uint64_t top = 0;
    for (auto c : counts) {
      n += c;
      top = std::max(top, c);
    }
    const auto view = table.view();
    EXPECT_EQ(max_local_time(view), top);
    for (std::uint64_t r = 0; r <= 15; ++r) {
      EXPECT_EQ(window_sup(view, r), (CountRatio{oracle::best_window(counts, r), n})) << "r=" << r;
    }
    for (const auto& beta : betas) {
      for (std::uint64_t m : {0, 1}) {
        const auto y = concentration_radius(view, beta, m);
        ASSERT_TRUE(y.is_finite());
        EXPECT_EQ(y.value(), brute_radius(counts, n, beta, m)) << beta.to_string();
      }
    }
    for (const auto& delta : deltas) {
      std::uint64_t heavy = 0;
      for (auto c : counts) heavy += c * static_cast<std::uint64_t>(delta.den()) >= static_cast<std::uint64_t>(delta.num()) * n;
      EXPECT_EQ(heavy_site_count(view, delta), heavy);
    }
  }
}

TEST(Concentration, ThresholdsAreInclusive) {
  const LocalTimeTable t(0, {1, 1, 1, 1});
  EXPECT_EQ(heavy_site_count(t.view(), Fraction(1, 4)), 4U);
  EXPECT_EQ(heavy_site_count(t.view(), Fraction(26, 100)), 0U);
  EXPECT_EQ(concentration_radius(t.view(), Fraction(1, 2)).value(), 1U);
  EXPECT_EQ(concentration_radius(t.view(), Fraction(3, 4)).value(), 1U);
  EXPECT_EQ(concentration_radius(t.view(), Fraction(1, 1)).value(), 2U);
}

TEST(Concentration, WideWindowsHoldEverything) {
  const LocalTimeTable t(-2, {3, 0, 0, 0, 0, 0, 5});
  EXPECT_EQ(window_sup(t.view(), 3), (CountRatio{8, 8}));
  EXPECT_EQ(window_sup(t.view(), 1000000), (CountRatio{1, 1}));
  EXPECT_EQ(window_sup(t.view(), 2), (CountRatio{5, 8}));
}

TEST(Concentration, MinimumRadiusIsHonoured) {
  const LocalTimeTable t(0, {10});
  EXPECT_EQ(concentration_radius(t.view(), Fraction(1, 2)).value(), 0U);
  EXPECT_EQ(concentration_radius(t.view(), Fraction(1, 2), 1).value(), 1U);
}

TEST(Concentration, RejectsBadInputs) {
  const LocalTimeTable empty;
  const LocalTimeTable t(0, {1, 2});
  EXPECT_EQ(code_of([&] { window_sup(empty.view(), 0); }), ErrorCode::EmptyWalk);
  EXPECT_EQ(code_of([&] { concentration_radius(empty.view(), Fraction(1, 2)); }), ErrorCode::EmptyWalk);
  EXPECT_EQ(code_of([&] { heavy_site_count(empty.view(), Fraction(1, 2)); }), ErrorCode::EmptyWalk);
  EXPECT_EQ(code_of([&] { concentration_radius(t.view(), Fraction(11, 10)); }), ErrorCode::BadBeta);
  EXPECT_EQ(code_of([&] { heavy_site_count(t.view(), Fraction(0, 1)); }), ErrorCode::BadDelta);
  EXPECT_EQ(max_local_time(empty.view()), 0U);
}

TEST(Concentration, ReportCollectsEveryStatistic) {
  const LocalTimeTable t(-1, {2, 5, 3});
  ConcentrationRequest req;
  req.radii = {0, 1};
  req.betas = {Fraction(1, 2), Fraction(9, 10)};
  req.deltas = {Fraction(1, 4)};
  const auto rep = concentration_report(t.view(), req);
  EXPECT_EQ(rep.steps, 10U);
  EXPECT_EQ(rep.lstar, 5U);
  ASSERT_EQ(rep.r_profile.size(), 2U);
  EXPECT_EQ(rep.r_profile[1].second, (CountRatio{1, 1}));
  EXPECT_EQ(rep.y_values[0].second.value(), 0U);
  EXPECT_EQ(rep.y_values[1].second.value(), 1U);
  EXPECT_EQ(rep.z_values[0].second, 2U);
}
