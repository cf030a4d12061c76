#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sinai {

using Site = std::int64_t;

/// Finite-support law of alpha_0.
struct EnvironmentDistribution {
  std::vector<double> support_points;
  std::vector<double> weights;
};

/// Support extremes and their tilde transforms:
///   alpha_tilde = alpha_bar / (1 - alpha_bar), A_tilde = (1 - A_bar) / A_bar.
/// Both tilde values are the geometric decay rates of the valley measures.
struct SupportExtremes {
  double alpha_bar = 0.0;
  double A_bar = 1.0;
  double alpha_tilde = 0.0;
  double A_tilde = 0.0;

  /// Requires 0 <= alpha_bar < 1/2 < A_bar <= 1, else BadExtremes.
  static SupportExtremes from_bounds(double alpha_bar, double A_bar);
};

/// Checks the recurrence (E[eps]=0), non-degeneracy (Var[eps]>0) and range
/// hypotheses, with eps = log((1 - alpha) / alpha). Returns the extremes of
/// the positive-weight support.
SupportExtremes validate_distribution(const EnvironmentDistribution& dist);

/// Weight p on `a` making the two-point law {a, b} recurrent.
double solve_balanced_weight(double a, double b);

enum class ValleySide { Plus, Minus };

std::string to_string(ValleySide side);

enum class EnvironmentKind { Iid, ValleyTh1, ValleyTh2Plus, ValleyTh2Minus, Constant };

/// A two-sided environment alpha: Z -> (0,1). Immutable; every query is a
/// pure function of the construction parameters and the site.
class Environment {
 public:
  static Environment iid(EnvironmentDistribution dist, std::uint64_t seed);
  /// Steepest admissible valley: alpha_bar to the right of 0, A_bar to the
  /// left, alpha_0 chosen so that its potential matches valley_exp_neg_potential.
  static Environment valley_th1(const SupportExtremes& ext);
  /// Flat-bottomed valley with a plateau of g+1 sites; alpha_x is read off the
  /// potential profile as E(x) / (E(x-1) + E(x)).
  static Environment valley_th2(const SupportExtremes& ext, std::uint64_t g, ValleySide side);
  static Environment constant(double p);

  double alpha_at(Site x) const;

  EnvironmentKind kind() const noexcept { return kind_; }
  std::string description() const;
  /// Only meaningful for valley kinds.
  const SupportExtremes& extremes() const noexcept { return ext_; }
  std::uint64_t plateau() const noexcept { return g_; }

 private:
  Environment() = default;

  EnvironmentKind kind_ = EnvironmentKind::Constant;
  SupportExtremes ext_{};
  std::uint64_t g_ = 0;
  std::uint64_t seed_ = 0;
  double constant_ = 0.5;
  std::vector<double> points_;
  std::vector<double> cumulative_;
};

/// Potential S_k: S_0 = 0, S_k - S_{k-1} = log((1 - alpha_k) / alpha_k).
class Potential {
 public:
  explicit Potential(Environment env) : env_(std::move(env)) {}

  double epsilon(Site k) const;
  /// O(|x|) partial sum.
  double s_at(Site x) const;

 private:
  Environment env_;
};

/// exp(-W(x)) for the steepest valley. DegenerateSupport if the x<0 branch
/// needs 1/alpha_tilde with alpha_tilde = 0.
double valley_exp_neg_potential(const SupportExtremes& ext, Site x);

/// exp(-W(x)) for the flat-bottomed valley with plateau {0..g} (Plus) or
/// {-g..0} (Minus).
double plateau_exp_neg_potential(const SupportExtremes& ext, std::uint64_t g, ValleySide side,
                                 Site x);

/// A positive profile E(x) = exp(-W(x)) that is given explicitly on a core
/// interval and decays geometrically outside it, so its tail sums are closed
/// form:
///   x > core_hi: E(x) = right_start * right_ratio^(x - core_hi - 1)
///   x < core_lo: E(x) = left_start  * left_ratio^(core_lo - 1 - x)
struct GeometricProfile {
  Site core_lo = 0;
  Site core_hi = 0;
  std::vector<double> core;  // E(core_lo) .. E(core_hi)
  double right_start = 0.0;
  double right_ratio = 0.0;
  double left_start = 0.0;
  double left_ratio = 0.0;

  double value(Site x) const;
  /// sum_{x > hi} E(x), requires hi >= core_hi.
  double right_tail(Site hi) const;
  /// sum_{x < lo} E(x), requires lo <= core_lo.
  double left_tail(Site lo) const;
  double total() const;
};

GeometricProfile valley_profile_th1(const SupportExtremes& ext);
GeometricProfile valley_profile_th2(const SupportExtremes& ext, std::uint64_t g, ValleySide side);

struct SiteInterval {
  Site lo = 0;
  Site hi = -1;

  bool empty() const noexcept { return hi < lo; }
  std::uint64_t size() const noexcept { return empty() ? 0 : static_cast<std::uint64_t>(hi - lo + 1); }
  bool contains(Site x) const noexcept { return lo <= x && x <= hi; }
};

/// Normalized site masses on a window plus the aggregated tail masses.
class ProbMeasure {
 public:
  ProbMeasure(SiteInterval window, std::vector<double> mass, double left_tail, double right_tail);

  /// Zero outside the window; the tail mass is only available in aggregate.
  double mass(Site x) const noexcept;
  SiteInterval window() const noexcept { return window_; }
  std::span<const double> window_masses() const noexcept { return mass_; }
  double left_tail() const noexcept { return left_tail_; }
  double right_tail() const noexcept { return right_tail_; }
  double total() const noexcept;

 private:
  SiteInterval window_;
  std::vector<double> mass_;
  double left_tail_;
  double right_tail_;
};

/// mu(x) = (E(x-1) + E(x)) / (2 sum_y E(y)). The window must contain the
/// profile core. DivergentTotal if the total is not finite and positive.
ProbMeasure measure_from_exp_neg_potential(const GeometricProfile& profile, SiteInterval window);

/// Smallest window containing the core outside of which every site carries
/// mass at most 1e-18.
SiteInterval default_measure_window(const GeometricProfile& profile);

/// Invariant measure of a valley environment; InvalidArgument for other kinds.
ProbMeasure valley_measure(const Environment& env);

/// sup_x of the mass in {x-r, ..., x+r}, over the window masses.
double window_mass_sup(const ProbMeasure& mu, std::uint64_t r);

}  // namespace sinai
