// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sinai/concentration_stats.hpp"
#include "sinai/harness.hpp"
#include "sinai/theory.hpp"
#include "sinai/verify.hpp"
#include "sinai/walker.hpp"

using namespace sinai;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

const SupportExtremes kSym = SupportExtremes::from_bounds(0.25, 0.75);

Outcome detailed_balance() {
  double worst = 0.0;
  std::size_t envs = 0;
  for (const auto& e : extremes_grid()) {
    std::vector<Environment> list{Environment::valley_th1(e)};
    for (std::uint64_t g : {0, 3, 8}) {
      list.push_back(Environment::valley_th2(e, g, ValleySide::Plus));
      list.push_back(Environment::valley_th2(e, g, ValleySide::Minus));
    }
    for (const auto& env : list) {
      const auto mu = valley_measure(env);
      for (Site x = -100; x <= 100; ++x) {
        const double flux = mu.mass(x) * env.alpha_at(x) - mu.mass(x + 1) * (1.0 - env.alpha_at(x + 1));
        worst = std::max(worst, std::abs(flux));
      }
      ++envs;
    }
  }
  return {worst <= 1e-12, fmt("max |mu(x)a(x) - mu(x+1)(1-a(x+1))| = %.3g over %zu environments", worst, envs)};
}

Outcome window_identities() {
  double worst_c1 = 0.0;
  double worst_route = 0.0;
  for (const auto& e : extremes_grid()) {
    worst_c1 = std::max(worst_c1, std::abs(window_mass_limit(0, e) - single_site_limit(e.alpha_bar, e.A_bar)));
    for (std::uint64_t r = 0; r <= 20; ++r) {
      worst_route = std::max(worst_route, std::abs(window_mass_limit(r, e) - window_mass_limit_from_measure(r, e)));
    }
  }
  return {worst_c1 <= 1e-12 && worst_route <= 1e-12,
          fmt("max |g(0) - c1| = %.3g, max |F-route - measure-route| = %.3g", worst_c1, worst_route)};
}

Outcome occupation_convergence() {
  const auto env = Environment::valley_th1(kSym);
  const auto mu = valley_measure(env);
  Walker w(env);
  w.reset(20240601);
  const std::uint64_t n = 10'000'000;
  w.advance(n);
  const auto table = w.snapshot();
  const auto range = table.visited_range();
  const Site lo = std::min(range.lo, mu.window().lo);
  const Site hi = std::max(range.hi, mu.window().hi);
  double worst = 0.0;
  Site at = 0;
  for (Site x = lo; x <= hi; ++x) {
    const double d = std::abs(static_cast<double>(table.at(x)) / static_cast<double>(n) - mu.mass(x));
    if (d > worst) {
      worst = d;
      at = x;
    }
  }
  return {worst <= 0.002, fmt("sup_x |L(x,n)/n - mu(x)| = %.5f at x=%lld (n=1e7)", worst, static_cast<long long>(at))};
}

ExperimentConfig valley_run(EnvironmentKind kind, std::uint32_t replicas) {
  ExperimentConfig c;
  c.env.kind = kind;
  c.env.alpha_min = 0.25;
  c.env.alpha_max = 0.75;
  c.steps = 10'000'000;
  c.replicas = replicas;
  c.seed = 1000;
  return c;
}

Outcome radius_at_scale() {
  auto c = valley_run(EnvironmentKind::ValleyTh1, 20);
  c.betas = {Fraction(9, 10)};
  const auto expected = radius_limit(0.9, kSym);
  const auto result = run_experiment(c);
  int hits = 0;
  std::string seen;
  for (const auto& rep : result.replicas) {
    const auto y = rep.reports.back().y_values.front().second;
    hits += y == expected;
    seen += y.to_string() + " ";
  }
  const bool ok = hits * 100 >= 95 * static_cast<int>(c.replicas);
  return {ok, fmt("Y = f(9/10) = %s in %d/%u replicas; simplified route predicts %llu; final Y: %s",
                  expected.to_string().c_str(), hits, c.replicas,
                  static_cast<unsigned long long>(radius_limit_symmetric(0.9, kSym.alpha_tilde)), seen.c_str())};
}

Outcome heavy_sites_at_scale() {
  const std::uint64_t g = plateau_length(0.1, kSym, ValleySide::Plus);
  auto c = valley_run(EnvironmentKind::ValleyTh2Plus, 10);
  c.env.plateau = g;
  c.deltas = {Fraction(1, 10)};
  const auto result = run_experiment(c);
  int hits = 0;
  std::uint64_t worst = 0;
  std::string seen;
  for (const auto& rep : result.replicas) {
    for (const auto& report : rep.reports) worst = std::max(worst, report.z_values.front().second);
    const auto z = rep.reports.back().z_values.front().second;
    hits += z == g;
    seen += std::to_string(z) + " ";
  }
  const bool ok = g == 8 && hits * 100 >= 90 * static_cast<int>(c.replicas) && worst <= 10;
  return {ok, fmt("g(1/10) = %llu; Z = g in %d/%u replicas; max Z over all checkpoints = %llu (bound 10); final Z: %s",
                  static_cast<unsigned long long>(g), hits, c.replicas, static_cast<unsigned long long>(worst),
                  seen.c_str())};
}

Outcome growth_slope() {
  struct Case {
    const char* label;
    SupportExtremes ext;
  };
  // (alpha_tilde, A_tilde) = (1/3, 1/3) and (1/9, 2/3).
  const std::vector<Case> cases{{"(1/3,1/3)", kSym}, {"(1/9,2/3)", SupportExtremes::from_bounds(0.1, 0.6)}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto f = radius_limit(1.0 - 1e-10, c.ext);
    const double ratio = f.to_double() / (10.0 * std::log(10.0));
    const double slope = radius_growth_slope(c.ext);
    const double rel = std::abs(ratio - slope) / slope;
    ok = ok && rel <= 0.10;
    detail += fmt("%s f=%s ratio=%.5f slope=%.5f rel.err=%.4f; ", c.label, f.to_string().c_str(), ratio, slope, rel);
  }
  return {ok, detail};
}

Outcome oracle_equivalence() {
  const double p = solve_balanced_weight(0.3, 0.6);
  const std::vector<Environment> envs{Environment::constant(0.5), Environment::valley_th1(kSym),
                                      Environment::iid({{0.3, 0.6}, {p, 1.0 - p}}, 77)};
  const std::vector<Fraction> deltas{Fraction(1, 4)};
  const std::uint64_t replicas = 1'000'000;
  double worst_z = 0.0;
  bool ok = true;
  for (const auto& env : envs) {
    Walker w(env);
    for (std::uint64_t n : {2, 6, 10, 12}) {
      const auto exact = enumerate_exact(env, n, deltas);
      double sum_l = 0.0;
      double sum_z = 0.0;
      for (std::uint64_t i = 0; i < replicas; ++i) {
        w.reset(n * 1'000'003ULL + i);
        w.advance(n);
        sum_l += static_cast<double>(max_local_time(w.view()));
        sum_z += static_cast<double>(heavy_site_count(w.view(), deltas[0]));
      }
      const double count = static_cast<double>(replicas);
      auto score = [&](double sample_mean, const std::map<std::uint64_t, double>& law) {
        const double se = std::sqrt(ExactLaw::variance(law) / count);
        const double diff = std::abs(sample_mean - ExactLaw::mean(law));
        if (se == 0.0) return diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
        return diff / se;
      };
      const double zl = score(sum_l / count, exact.max_local_time);
      const double zz = score(sum_z / count, exact.heavy_sites[0]);
      worst_z = std::max({worst_z, zl, zz});
      if (zl > 3.0 || zz > 3.0) ok = false;
    }
  }
  return {ok, fmt("largest |MC mean - exact mean| / SE = %.3f over 12 (environment, n) pairs, 1e6 replicas each",
                  worst_z)};
}

Outcome pathwise_duality() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<int> val(0, 50);
  std::bernoulli_distribution hole(0.25);
  const std::vector<Fraction> betas{Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10), Fraction(1, 1)};
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(len(rng)));
    for (auto& c : counts) c = hole(rng) ? 0 : static_cast<std::uint64_t>(val(rng));
    counts.back() += 1;
    const LocalTimeTable table(std::uniform_int_distribution<Site>(-50, 50)(rng), counts);
    for (const auto& beta : betas) {
      std::uint64_t r = 0;
      while (!window_sup(table.view(), r).at_least(beta)) ++r;
      if (concentration_radius(table.view(), beta) != ExtendedCount::finite(r)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%d mismatches over 1000 tables x 5 betas", mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "detailed balance of valley measures", detailed_balance},
      {2, "g(0) = c1 and two routes to g(r)", window_identities},
      {3, "occupation measure converges to the valley measure", occupation_convergence},
      {4, "concentration radius Y at n = 1e7", radius_at_scale},
      {5, "heavy-site count Z at n = 1e7", heavy_sites_at_scale},
      {6, "growth slope of f(1 - 1e-10)", growth_slope},
      {7, "Monte Carlo matches exact enumeration", oracle_equivalence},
      {8, "radius/window duality on random tables", pathwise_duality},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.passed;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
