#include "sinai/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sinai/concentration_stats.hpp"
#include "sinai/errors.hpp"
#include "sinai/harness.hpp"
#include "sinai/theory.hpp"
#include "sinai/walker.hpp"

namespace sinai {

namespace {

constexpr double kIdentityTol = 1e-12;

bool close(double a, double b, double tol = kIdentityTol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

/// Collects failures for one check; only the first few are kept in the detail.
class Check {
 public:
  explicit Check(std::string name) : name_(std::move(name)) {}

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 3) detail_ << (failures_ > 1 ? "; " : "") << what;
  }

  CheckResult result() const {
    std::string detail = detail_.str();
    if (failures_ > 3) detail += " (" + std::to_string(failures_) + " failures)";
    return {name_, failures_ == 0, failures_ == 0 ? "ok" : detail};
  }

 private:
  std::string name_;
  std::ostringstream detail_;
  int failures_ = 0;
};

template <typename Fn>
CheckResult guarded(const std::string& name, Fn&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

std::string tag(const SupportExtremes& e) { return "(" + fmt(e.alpha_bar) + "," + fmt(e.A_bar) + ")"; }

/// Profiles assembled from the formula set, so a perturbed formula shows up
/// in the measures built from it.
// Profiles read the closed form on a core of a few sites beyond the valley
// bottom and extend it geometrically, so the checks see its shape.
constexpr Site kCoreMargin = 6;

GeometricProfile profile_from(const std::function<double(Site)>& e_of, const SupportExtremes& e, Site lo, Site hi) {
  GeometricProfile p;
  p.core_lo = lo - kCoreMargin;
  p.core_hi = hi + kCoreMargin;
  for (Site x = p.core_lo; x <= p.core_hi; ++x) p.core.push_back(e_of(x));
  p.right_start = e_of(p.core_hi + 1);
  p.right_ratio = e.alpha_tilde;
  p.left_start = e_of(p.core_lo - 1);
  p.left_ratio = e.A_tilde;
  return p;
}

GeometricProfile th1_profile(const FormulaSet& f, const SupportExtremes& e) {
  return profile_from([&](Site x) { return f.valley_exp_neg_potential(e, x); }, e, 0, 0);
}

GeometricProfile th2_profile(const FormulaSet& f, const SupportExtremes& e, std::uint64_t g, ValleySide side) {
  const Site gs = static_cast<Site>(g);
  return profile_from([&](Site x) { return f.plateau_exp_neg_potential(e, g, side, x); }, e,
                      side == ValleySide::Plus ? 0 : -gs, side == ValleySide::Plus ? gs : 0);
}

void detailed_balance(Check& c, const ProbMeasure& mu, const Environment& env, const std::string& what) {
  for (Site x = -100; x <= 100; ++x) {
    const double lhs = mu.mass(x) * env.alpha_at(x);
    const double rhs = mu.mass(x + 1) * (1.0 - env.alpha_at(x + 1));
    c.expect(std::abs(lhs - rhs) <= kIdentityTol, what + " x=" + std::to_string(x) + " " + fmt(lhs) + " vs " + fmt(rhs));
  }
}

CheckResult check_distribution_hypotheses() {
  Check c("distribution hypotheses");
  const auto ext = validate_distribution({{0.25, 0.75}, {0.5, 0.5}});
  c.expect(close(ext.alpha_tilde, 1.0 / 3.0) && close(ext.A_tilde, 1.0 / 3.0), "tilde extremes of {1/4,3/4}");
  auto rejects = [&](const EnvironmentDistribution& d, ErrorCode code, const std::string& what) {
    try {
      validate_distribution(d);
      c.expect(false, what + " accepted");
    } catch (const SinaiError& e) {
      c.expect(e.code() == code, what + " wrong error " + e.what());
    }
  };
  rejects({{0.5}, {1.0}}, ErrorCode::Degenerate, "{1/2}");
  rejects({{0.3, 0.6}, {0.5, 0.5}}, ErrorCode::NotRecurrent, "{0.3,0.6}");
  rejects({{0.0, 0.6}, {0.5, 0.5}}, ErrorCode::OutOfRange, "{0,0.6}");
  const double p = solve_balanced_weight(0.2, 0.6);
  c.expect(std::abs(p * std::log(4.0) + (1 - p) * std::log(2.0 / 3.0)) < 1e-12, "balanced weight (0.2,0.6)");
  return c.result();
}

CheckResult check_detailed_balance(const FormulaSet& f) {
  Check c("detailed balance of valley measures");
  for (const auto& e : extremes_grid()) {
    detailed_balance(c, measure_from_exp_neg_potential(th1_profile(f, e), default_measure_window(th1_profile(f, e))),
                     Environment::valley_th1(e), "th1" + tag(e));
    for (std::uint64_t g : {0, 3, 8}) {
      for (ValleySide side : {ValleySide::Plus, ValleySide::Minus}) {
        const auto p = th2_profile(f, e, g, side);
        detailed_balance(c, measure_from_exp_neg_potential(p, default_measure_window(p)),
                         Environment::valley_th2(e, g, side),
                         "th2-" + to_string(side) + " g=" + std::to_string(g) + tag(e));
      }
    }
  }
  return c.result();
}

CheckResult check_normalization(const FormulaSet& f) {
  Check c("measure normalization");
  for (const auto& e : extremes_grid()) {
    const auto p1 = th1_profile(f, e);
    const auto mu = measure_from_exp_neg_potential(p1, default_measure_window(p1));
    c.expect(std::abs(mu.total() - 1.0) <= kIdentityTol, "th1" + tag(e) + " total " + fmt(mu.total()));
    // A deliberately narrow window still sums to one through the tails.
    const auto narrow = measure_from_exp_neg_potential(p1, {p1.core_lo, p1.core_hi});
    c.expect(std::abs(narrow.total() - 1.0) <= kIdentityTol, "narrow th1" + tag(e));
    const auto p2 = th2_profile(f, e, 5, ValleySide::Minus);
    const auto mu2 = measure_from_exp_neg_potential(p2, default_measure_window(p2));
    c.expect(std::abs(mu2.total() - 1.0) <= kIdentityTol, "th2" + tag(e));
    c.expect(std::all_of(mu.window_masses().begin(), mu.window_masses().end(), [](double m) { return m >= 0; }),
             "negative mass" + tag(e));
  }
  return c.result();
}

CheckResult check_potential_consistency(const FormulaSet& f) {
  Check c("potential matches closed-form exp(-W)");
  for (const auto& e : extremes_grid()) {
    const Potential th1(Environment::valley_th1(e));
    const double norm = f.valley_exp_neg_potential(e, 0);
    for (Site x = -50; x <= 50; ++x) {
      const double expected = f.valley_exp_neg_potential(e, x) / norm;
      c.expect(close(std::exp(-th1.s_at(x)), expected), "th1" + tag(e) + " x=" + std::to_string(x));
    }
    for (ValleySide side : {ValleySide::Plus, ValleySide::Minus}) {
      const Potential th2(Environment::valley_th2(e, 4, side));
      const double n2 = f.plateau_exp_neg_potential(e, 4, side, 0);
      for (Site x = -50; x <= 50; ++x) {
        const double expected = f.plateau_exp_neg_potential(e, 4, side, x) / n2;
        c.expect(close(std::exp(-th2.s_at(x)), expected),
                 "th2-" + to_string(side) + tag(e) + " x=" + std::to_string(x));
      }
    }
  }
  return c.result();
}

CheckResult check_profile_proportional(const FormulaSet& f) {
  Check c("F is proportional to exp(-W)");
  for (const auto& e : extremes_grid()) {
    const double ratio0 = f.valley_profile(0, e) / f.valley_exp_neg_potential(e, 0);
    for (Site l = -30; l <= 30; ++l) {
      const double ratio = f.valley_profile(l, e) / f.valley_exp_neg_potential(e, l);
      c.expect(close(ratio, ratio0), "l=" + std::to_string(l) + tag(e));
    }
  }
  return c.result();
}

CheckResult check_single_site_identity(const FormulaSet& f) {
  Check c("g(0) = c1");
  for (const auto& e : extremes_grid()) {
    const double g0 = f.window_mass_limit(0, e);
    const double c1 = f.single_site_limit(e.alpha_bar, e.A_bar);
    c.expect(std::abs(g0 - c1) <= kIdentityTol, tag(e) + " " + fmt(g0) + " vs " + fmt(c1));
  }
  return c.result();
}

CheckResult check_window_routes(const FormulaSet& f) {
  Check c("g(r): F-sum route equals measure route");
  for (const auto& e : extremes_grid()) {
    for (std::uint64_t r = 0; r <= 20; ++r) {
      const double a = f.window_mass_limit(r, e);
      const double b = window_mass_limit_from_measure(r, e);
      c.expect(std::abs(a - b) <= kIdentityTol, tag(e) + " r=" + std::to_string(r) + " " + fmt(a) + " vs " + fmt(b));
      const double wide = window_mass_limit_scan(r, e, static_cast<Site>(r) + 50);
      c.expect(std::abs(window_mass_limit(r, e) - wide) <= kIdentityTol, "narrow scan misses the sup" + tag(e));
    }
  }
  return c.result();
}

CheckResult check_monotonicity() {
  Check c("g(r) increases to 1; f(beta) nondecreasing");
  for (const auto& e : extremes_grid()) {
    double prev = 0.0;
    for (std::uint64_t r = 0; r <= 30; ++r) {
      const double g = window_mass_limit(r, e);
      c.expect(g > prev || g >= 1.0 - 1e-12, "g not increasing" + tag(e) + " r=" + std::to_string(r));
      c.expect(g <= 1.0 + 1e-12, "g above 1" + tag(e));
      prev = g;
    }
    c.expect(window_mass_limit(400, e) > 1.0 - 1e-9, "g(400) below 1" + tag(e));
    std::uint64_t last = 0;
    for (int k = 0; k <= 99; ++k) {
      const auto f = radius_limit(k / 100.0, e);
      c.expect(f.is_finite() && f.value() >= last, "f not monotone" + tag(e));
      if (f.is_finite()) last = f.value();
    }
    c.expect(!radius_limit(1.0, e).is_finite(), "f(1) finite" + tag(e));
  }
  return c.result();
}

CheckResult check_center_sign() {
  Check c("maximizing center sign");
  for (const auto& e : extremes_grid()) {
    for (std::uint64_t r = 0; r <= 25; ++r) {
      const Site a = concentration_center(r, e);
      if (e.alpha_tilde >= e.A_tilde) {
        c.expect(a >= 0, tag(e) + " r=" + std::to_string(r) + " center " + std::to_string(a));
      } else {
        c.expect(a <= 0, tag(e) + " r=" + std::to_string(r) + " center " + std::to_string(a));
      }
    }
  }
  return c.result();
}

CheckResult check_growth_slope() {
  Check c("f(1-10^-k)/(k ln 10) approaches the slope (alpha_tilde = A_tilde)");
  for (double a : {0.25, 0.2, 0.4}) {
    const auto e = SupportExtremes::from_bounds(a, 1.0 - a);
    const double ratio = static_cast<double>(radius_limit(1.0 - 1e-10, e).value()) / (10.0 * std::log(10.0));
    const double slope = radius_growth_slope(e);
    c.expect(std::abs(ratio - slope) / slope <= 0.10, tag(e) + " " + fmt(ratio) + " vs " + fmt(slope));
  }
  return c.result();
}

CheckResult check_heavy_site_theory() {
  Check c("plateau length and heavy-site bounds");
  const auto e = SupportExtremes::from_bounds(0.25, 0.75);
  c.expect(plateau_length(0.1, e, ValleySide::Plus) == 8, "g(0.1) plus != 8");
  const auto b = heavy_site_bounds(0.1, e);
  c.expect(std::abs(b.lower - 8.49931412894376) < 1e-9 && b.upper == 10.0, "bounds at 0.1: " + fmt(b.lower));
  for (const auto& g : extremes_grid()) {
    for (double d : {0.3, 0.1, 0.05, 0.01, 0.001}) {
      try {
        const auto hb = heavy_site_bounds(d, g);
        c.expect(hb.lower <= hb.upper, "lower > upper" + tag(g));
      } catch (const SinaiError& err) {
        c.expect(err.code() == ErrorCode::NoValley, std::string("unexpected ") + err.what());
      }
    }
    const auto small = heavy_site_bounds(1e-4, g);
    c.expect(std::abs(1e-4 * small.lower - 1.0) < 1e-2, "delta*lower not near 1" + tag(g));
  }
  return c.result();
}

LocalTimeTable random_table(Xoshiro256& rng) {
  const std::size_t size = 1 + rng() % 30;
  const Site first = static_cast<Site>(rng() % 41) - 20;
  std::vector<std::uint64_t> counts(size);
  for (auto& v : counts) v = rng() % 4 == 0 ? 0 : rng() % 20;
  counts.front() += 1;
  return LocalTimeTable(first, std::move(counts));
}

CheckResult check_statistics(const VerifyOptions& opt) {
  Check c("local-time statistics invariants");
  Xoshiro256 rng(opt.seed);
  const Fraction betas[] = {{1, 4}, {1, 2}, {3, 4}, {9, 10}, {1, 1}};
  const Fraction deltas[] = {{1, 10}, {1, 4}, {1, 3}, {1, 2}, {1, 1}};
  for (int t = 0; t < 300; ++t) {
    const auto table = random_table(rng);
    const auto view = table.view();
    const auto width = table.visited_range().size();
    CountRatio prev{0, 1};
    for (std::uint64_t r = 0; r <= width; ++r) {
      const auto w = window_sup(view, r);
      c.expect(w.num * prev.den >= prev.num * w.den, "R not monotone");
      if (2 * r + 1 >= width) c.expect(w.num == w.den, "R below 1 for a spanning window");
      prev = w;
    }
    for (const auto& beta : betas) {
      std::uint64_t expected = 0;
      while (!window_sup(view, expected).at_least(beta)) ++expected;
      const auto y = concentration_radius(view, beta);
      c.expect(y.is_finite() && y.value() == expected, "duality fails for beta " + beta.to_string());
    }
    for (const auto& delta : deltas) {
      const auto z = heavy_site_count(view, delta);
      c.expect(z * static_cast<std::uint64_t>(delta.num()) <= static_cast<std::uint64_t>(delta.den()),
               "Z above 1/delta");
    }
  }
  return c.result();
}

CheckResult check_walker(const VerifyOptions& opt) {
  Check c("walker invariants");
  const auto e = SupportExtremes::from_bounds(0.25, 0.75);
  const Environment envs[] = {Environment::constant(0.5), Environment::valley_th1(e),
                              Environment::iid({{0.25, 0.75}, {0.5, 0.5}}, opt.seed)};
  const std::uint64_t checkpoints[] = {10, 100, 1000};
  for (const auto& env : envs) {
    const auto a = simulate(env, 5000, opt.seed, checkpoints);
    const auto b = simulate(env, 5000, opt.seed, checkpoints);
    c.expect(a.snapshots == b.snapshots, "not reproducible on " + env.description());
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
      const auto& t = a.snapshots[i];
      const std::uint64_t n = a.checkpoint_steps[i];
      c.expect(t.steps() == n, "sum of local times != n");
      const auto range = t.visited_range();
      c.expect(range.lo >= -static_cast<Site>(n) && range.hi <= static_cast<Site>(n), "range outside [-n,n]");
      std::uint64_t even = 0;
      for (Site k = range.lo; k <= range.hi; ++k) even += (k % 2 == 0) ? t.at(k) : 0;
      c.expect(even == n / 2, "parity: even-site visits != floor(n/2)");
      if (i > 0) {
        const auto& p = a.snapshots[i - 1];
        for (Site k = p.visited_range().lo; k <= p.visited_range().hi; ++k) {
          c.expect(p.at(k) <= t.at(k), "snapshots are not prefixes");
        }
      }
    }
  }
  return c.result();
}

CheckResult check_monte_carlo_vs_exact(const VerifyOptions& opt) {
  Check c("Monte Carlo matches exact enumeration");
  const auto e = SupportExtremes::from_bounds(0.25, 0.75);
  const Fraction quarter{1, 4};
  for (const auto& env : {Environment::constant(0.5), Environment::valley_th1(e)}) {
    constexpr std::uint64_t n = 6;
    const auto law = enumerate_exact(env, n, std::span(&quarter, 1));
    Walker w(env);
    std::uint64_t sum_lstar = 0;
    std::uint64_t sum_z = 0;
    for (std::uint64_t i = 0; i < opt.mc_replicas; ++i) {
      w.reset(opt.seed + i);
      w.advance(n);
      sum_lstar += max_local_time(w.view());
      sum_z += heavy_site_count(w.view(), quarter);
    }
    const double reps = static_cast<double>(opt.mc_replicas);
    const double se_l = std::sqrt(ExactLaw::variance(law.max_local_time) / reps);
    const double se_z = std::sqrt(ExactLaw::variance(law.heavy_sites[0]) / reps);
    const double diff_l = std::abs(static_cast<double>(sum_lstar) / reps - ExactLaw::mean(law.max_local_time));
    const double diff_z = std::abs(static_cast<double>(sum_z) / reps - ExactLaw::mean(law.heavy_sites[0]));
    c.expect(diff_l <= 3 * se_l + 1e-12, "L* on " + env.description());
    c.expect(diff_z <= 3 * se_z + 1e-12, "Z on " + env.description());
  }
  return c.result();
}

CheckResult check_harness(const VerifyOptions& opt) {
  Check c("harness determinism and running max");
  ExperimentConfig cfg;
  cfg.env.kind = EnvironmentKind::ValleyTh1;
  cfg.env.alpha_min = 0.25;
  cfg.env.alpha_max = 0.75;
  cfg.steps = 20000;
  cfg.first_checkpoint = 100;
  cfg.replicas = 3;
  cfg.seed = opt.seed;
  cfg.betas = {Fraction(9, 10)};
  cfg.deltas = {Fraction(1, 10)};
  cfg.radii = {0, 1, 2};
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  c.expect(to_csv(a) == to_csv(b), "CSV differs between identical runs");
  for (const auto& rep : a.replicas) {
    for (std::size_t k = 1; k < rep.running_max.size(); ++k) {
      for (std::size_t s = 0; s < rep.running_max[k].size(); ++s) {
        c.expect(rep.running_max[k][s] >= rep.running_max[k - 1][s], "running max decreased");
      }
    }
  }
  return c.result();
}

}  // namespace

FormulaSet FormulaSet::library() {
  FormulaSet f;
  f.single_site_limit = [](double a, double A) { return sinai::single_site_limit(a, A); };
  f.valley_profile = [](Site l, const SupportExtremes& e) { return sinai::valley_profile(l, e); };
  f.window_mass_limit = [](std::uint64_t r, const SupportExtremes& e) { return sinai::window_mass_limit(r, e); };
  f.valley_exp_neg_potential = [](const SupportExtremes& e, Site x) {
    return sinai::valley_exp_neg_potential(e, x);
  };
  f.plateau_exp_neg_potential = [](const SupportExtremes& e, std::uint64_t g, ValleySide s, Site x) {
    return sinai::plateau_exp_neg_potential(e, g, s, x);
  };
  return f;
}

std::vector<SupportExtremes> extremes_grid() {
  std::vector<SupportExtremes> grid;
  for (int i = 1; i <= 9; ++i) {
    for (int j = 11; j <= 19; ++j) grid.push_back(SupportExtremes::from_bounds(i / 20.0, j / 20.0));
  }
  return grid;
}

std::vector<CheckResult> run_invariant_suite(const FormulaSet& formulas, const VerifyOptions& options) {
  std::vector<CheckResult> out;
  out.push_back(guarded("distribution hypotheses", [] { return check_distribution_hypotheses(); }));
  out.push_back(guarded("detailed balance of valley measures", [&] { return check_detailed_balance(formulas); }));
  out.push_back(guarded("measure normalization", [&] { return check_normalization(formulas); }));
  out.push_back(guarded("potential matches closed-form exp(-W)", [&] { return check_potential_consistency(formulas); }));
  out.push_back(guarded("F is proportional to exp(-W)", [&] { return check_profile_proportional(formulas); }));
  out.push_back(guarded("g(0) = c1", [&] { return check_single_site_identity(formulas); }));
  out.push_back(guarded("g(r): F-sum route equals measure route", [&] { return check_window_routes(formulas); }));
  out.push_back(guarded("g(r) increases to 1; f(beta) nondecreasing", [] { return check_monotonicity(); }));
  out.push_back(guarded("maximizing center sign", [] { return check_center_sign(); }));
  out.push_back(guarded("growth slope (symmetric case)", [] { return check_growth_slope(); }));
  out.push_back(guarded("plateau length and heavy-site bounds", [] { return check_heavy_site_theory(); }));
  out.push_back(guarded("local-time statistics invariants", [&] { return check_statistics(options); }));
  out.push_back(guarded("walker invariants", [&] { return check_walker(options); }));
  out.push_back(guarded("Monte Carlo matches exact enumeration", [&] { return check_monte_carlo_vs_exact(options); }));
  out.push_back(guarded("harness determinism and running max", [&] { return check_harness(options); }));
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace sinai
