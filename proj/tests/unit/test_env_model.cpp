#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "sinai/env_model.hpp"
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

const SupportExtremes kSym = SupportExtremes::from_bounds(0.25, 0.75);
const SupportExtremes kAsym = SupportExtremes::from_bounds(0.1, 0.6);

}  // namespace

TEST(Distribution, AcceptsTheSymmetricTwoPointLaw) {
  const auto ext = validate_distribution({{0.25, 0.75}, {0.5, 0.5}});
  EXPECT_DOUBLE_EQ(ext.alpha_bar, 0.25);
  EXPECT_DOUBLE_EQ(ext.A_bar, 0.75);
  EXPECT_NEAR(ext.alpha_tilde, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(ext.A_tilde, 1.0 / 3.0, 1e-15);
}

TEST(Distribution, ExtremesIgnoreZeroWeightPoints) {
  const double p = solve_balanced_weight(0.2, 0.6);
  const auto ext = validate_distribution({{0.2, 0.6, 0.9}, {p, 1.0 - p, 0.0}});
  EXPECT_DOUBLE_EQ(ext.A_bar, 0.6);
}

TEST(Distribution, RejectsBrokenHypotheses) {
  EXPECT_EQ(code_of([] { validate_distribution({{}, {}}); }), ErrorCode::InvalidWeights);
  EXPECT_EQ(code_of([] { validate_distribution({{0.3, 0.7}, {1.0}}); }), ErrorCode::InvalidWeights);
  EXPECT_EQ(code_of([] { validate_distribution({{0.3, 0.7}, {0.5, 0.4}}); }), ErrorCode::InvalidWeights);
  EXPECT_EQ(code_of([] { validate_distribution({{0.0, 0.7}, {0.5, 0.5}}); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { validate_distribution({{0.3, 1.0}, {0.5, 0.5}}); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { validate_distribution({{0.5}, {1.0}}); }), ErrorCode::Degenerate);
  EXPECT_EQ(code_of([] { validate_distribution({{0.25, 0.75}, {0.4, 0.6}}); }), ErrorCode::NotRecurrent);
}

TEST(Distribution, BalancedWeightZeroesTheDrift) {
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0.2, 0.6}, {0.1, 0.9}, {0.45, 0.55}, {0.7, 0.3}}) {
    const double p = solve_balanced_weight(a, b);
    const double drift = p * std::log((1 - a) / a) + (1 - p) * std::log((1 - b) / b);
    EXPECT_NEAR(drift, 0.0, 1e-14);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
  EXPECT_EQ(code_of([] { solve_balanced_weight(0.2, 0.3); }), ErrorCode::NoSolution);
  EXPECT_EQ(code_of([] { solve_balanced_weight(0.5, 0.3); }), ErrorCode::NoSolution);
}

TEST(Extremes, RejectBoundsOnOneSideOfOneHalf) {
  EXPECT_EQ(code_of([] { SupportExtremes::from_bounds(0.5, 0.7); }), ErrorCode::BadExtremes);
  EXPECT_EQ(code_of([] { SupportExtremes::from_bounds(0.2, 0.4); }), ErrorCode::BadExtremes);
  const auto edge = SupportExtremes::from_bounds(0.0, 1.0);
  EXPECT_EQ(edge.alpha_tilde, 0.0);
  EXPECT_EQ(edge.A_tilde, 0.0);
}

TEST(Environment, IidIsAPureFunctionOfSeedAndSite) {
  const EnvironmentDistribution d{{0.25, 0.75}, {0.5, 0.5}};
  const auto a = Environment::iid(d, 42);
  const auto b = Environment::iid(d, 42);
  std::vector<double> forward;
  for (Site x = -100; x <= 100; ++x) forward.push_back(a.alpha_at(x));
  for (Site x = 100; x >= -100; --x) EXPECT_EQ(b.alpha_at(x), forward[static_cast<std::size_t>(x + 100)]);
  const auto c = Environment::iid(d, 43);
  int differ = 0;
  for (Site x = -100; x <= 100; ++x) differ += c.alpha_at(x) != a.alpha_at(x);
  EXPECT_GT(differ, 50);
}

TEST(Environment, IidFrequenciesMatchWeights) {
  const double p = solve_balanced_weight(0.2, 0.6);
  const auto env = Environment::iid({{0.2, 0.6}, {p, 1.0 - p}}, 7);
  std::map<double, int> freq;
  const int n = 400000;
  for (Site x = 0; x < n; ++x) ++freq[env.alpha_at(x)];
  ASSERT_EQ(freq.size(), 2U);
  EXPECT_NEAR(freq[0.2] / double(n), p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Environment, SteepestValleySites) {
  const auto env = Environment::valley_th1(kAsym);
  EXPECT_EQ(env.alpha_at(5), 0.1);
  EXPECT_EQ(env.alpha_at(-5), 0.6);
  // alpha_tilde = 1/9 < A_tilde = 2/3: the bottom site leans left.
  EXPECT_EQ(env.alpha_at(0), 0.1);
  EXPECT_EQ(Environment::valley_th1(SupportExtremes::from_bounds(0.4, 0.9)).alpha_at(0), 0.9);
}

TEST(Environment, ConstantRejectsBadProbabilities) {
  EXPECT_EQ(code_of([] { Environment::constant(1.0); }), ErrorCode::OutOfRange);
  EXPECT_EQ(Environment::constant(0.5).alpha_at(-1000000), 0.5);
}

TEST(Potential, SumsLogRatios) {
  const EnvironmentDistribution d{{0.25, 0.75}, {0.5, 0.5}};
  const auto env = Environment::iid(d, 3);
  const Potential pot(env);
  double s = 0.0;
  for (Site k = 1; k <= 40; ++k) {
    s += std::log((1 - env.alpha_at(k)) / env.alpha_at(k));
    EXPECT_NEAR(pot.s_at(k), s, 1e-12);
  }
  s = 0.0;
  for (Site k = 0; k >= -40; --k) {
    s -= std::log((1 - env.alpha_at(k)) / env.alpha_at(k));
    EXPECT_NEAR(pot.s_at(k - 1), s, 1e-12);
  }
  EXPECT_EQ(pot.s_at(0), 0.0);
}

TEST(GeometricProfile, TailsMatchDirectSums) {
  const auto p = valley_profile_th2(kAsym, 4, ValleySide::Minus);
  double right = 0.0;
  for (Site x = p.core_hi + 3; x < p.core_hi + 3000; ++x) right += p.value(x);
  EXPECT_NEAR(p.right_tail(p.core_hi + 2), right, 1e-14);
  double left = 0.0;
  for (Site x = p.core_lo - 2; x > p.core_lo - 3000; --x) left += p.value(x);
  EXPECT_NEAR(p.left_tail(p.core_lo - 1), left, 1e-12);
  EXPECT_EQ(code_of([&] { (void)p.right_tail(p.core_hi - 1); }), ErrorCode::InvalidArgument);
}

TEST(Measure, MatchesTheReversibleChainOracle) {
  for (const auto& ext : {kSym, kAsym, SupportExtremes::from_bounds(0.45, 0.55)}) {
    std::vector<Environment> envs{Environment::valley_th1(ext), Environment::valley_th2(ext, 5, ValleySide::Plus),
                                  Environment::valley_th2(ext, 5, ValleySide::Minus)};
    for (const auto& env : envs) {
      const std::int64_t hw = 400;
      const auto pi = oracle::reversible_measure([&](std::int64_t x) { return env.alpha_at(x); }, hw);
      const auto mu = valley_measure(env);
      EXPECT_NEAR(mu.total(), 1.0, 1e-12);
      for (Site x = -60; x <= 60; ++x) {
        EXPECT_NEAR(mu.mass(x), pi[static_cast<std::size_t>(x + hw)], 1e-12) << env.description() << " x=" << x;
      }
    }
  }
}

TEST(Measure, PlateauSitesCarryEqualMass) {
  const auto mu = valley_measure(Environment::valley_th2(kSym, 8, ValleySide::Plus));
  for (Site x = 1; x <= 8; ++x) EXPECT_NEAR(mu.mass(x), 0.105262, 5e-7);
  EXPECT_LT(mu.mass(0), 0.1);
  EXPECT_LT(mu.mass(9), 0.1);
}

TEST(Measure, RejectsDivergentProfilesAndNonValleys) {
  GeometricProfile flat;
  flat.core = {1.0};
  flat.right_start = 1.0;
  flat.right_ratio = 1.0;
  EXPECT_EQ(code_of([&] { measure_from_exp_neg_potential(flat, {0, 0}); }), ErrorCode::DivergentTotal);
  EXPECT_EQ(code_of([] { valley_measure(Environment::constant(0.5)); }), ErrorCode::InvalidArgument);
}

TEST(Measure, DegenerateSupportNeedsPositiveAlphaTilde) {
  const auto edge = SupportExtremes::from_bounds(0.0, 0.9);
  EXPECT_EQ(code_of([&] { valley_exp_neg_potential(edge, -1); }), ErrorCode::DegenerateSupport);
  EXPECT_EQ(code_of([&] { plateau_exp_neg_potential(edge, 2, ValleySide::Minus, -3); }),
            ErrorCode::DegenerateSupport);
  EXPECT_EQ(code_of([&] { Environment::valley_th2(edge, 2, ValleySide::Minus); }), ErrorCode::DegenerateSupport);
}

TEST(Measure, WindowSupMatchesDirectScan) {
  const auto mu = valley_measure(Environment::valley_th1(kAsym));
  std::vector<double> masses(mu.window_masses().begin(), mu.window_masses().end());
  for (std::uint64_t r : {0, 1, 2, 5}) EXPECT_NEAR(window_mass_sup(mu, r), oracle::best_mass_window(masses, r), 1e-15);
}
