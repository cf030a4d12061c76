#include "sinai/env_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sinai/errors.hpp"
#include "sinai/rng.hpp"

namespace sinai {

namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kRecurrenceTolerance = 1e-10;
constexpr double kWindowMassCutoff = 1e-18;
constexpr Site kMaxWindowHalfWidth = 10'000'000;

double log_odds(double alpha) { return std::log((1.0 - alpha) / alpha); }

void require_positive_alpha_tilde(const SupportExtremes& ext, const char* what) {
  if (ext.alpha_tilde <= 0.0) {
    throw SinaiError(ErrorCode::DegenerateSupport,
                     std::string(what) + " needs 1/alpha_tilde but alpha_bar = 0");
  }
}

}  // namespace

SupportExtremes SupportExtremes::from_bounds(double alpha_bar, double A_bar) {
  if (!(alpha_bar >= 0.0 && alpha_bar < 0.5 && A_bar > 0.5 && A_bar <= 1.0)) {
    std::ostringstream msg;
    msg << "need 0 <= alpha_bar < 1/2 < A_bar <= 1, got (" << alpha_bar << ", " << A_bar << ")";
    throw SinaiError(ErrorCode::BadExtremes, msg.str());
  }
  return SupportExtremes{alpha_bar, A_bar, alpha_bar / (1.0 - alpha_bar), (1.0 - A_bar) / A_bar};
}

SupportExtremes validate_distribution(const EnvironmentDistribution& dist) {
  const auto& pts = dist.support_points;
  const auto& w = dist.weights;
  if (pts.empty()) throw SinaiError(ErrorCode::InvalidWeights, "empty support");
  if (pts.size() != w.size()) {
    throw SinaiError(ErrorCode::InvalidWeights, "support and weight lengths differ");
  }
  for (double p : pts) {
    if (!(p > 0.0 && p < 1.0)) {
      throw SinaiError(ErrorCode::OutOfRange, "support point " + std::to_string(p) + " not in (0,1)");
    }
  }
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw SinaiError(ErrorCode::InvalidWeights, "negative weight");
    total += x;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw SinaiError(ErrorCode::InvalidWeights, "weights sum to " + std::to_string(total));
  }

  double mean = 0.0;
  bool spread = false;
  double first_eps = 0.0;
  bool have_first = false;
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w[i] <= 0.0) continue;
    const double eps = log_odds(pts[i]);
    mean += w[i] * eps;
    if (!have_first) {
      first_eps = eps;
      have_first = true;
    } else if (eps != first_eps) {
      spread = true;
    }
    lo = std::min(lo, pts[i]);
    hi = std::max(hi, pts[i]);
  }
  if (!spread) throw SinaiError(ErrorCode::Degenerate, "Var[eps_0] = 0");
  if (std::abs(mean) > kRecurrenceTolerance) {
    std::ostringstream msg;
    msg << "E[eps_0] = " << mean << " != 0";
    throw SinaiError(ErrorCode::NotRecurrent, msg.str());
  }
  return SupportExtremes::from_bounds(lo, hi);
}

double solve_balanced_weight(double a, double b) {
  if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
    throw SinaiError(ErrorCode::OutOfRange, "points must lie in (0,1)");
  }
  const double la = log_odds(a);
  const double lb = log_odds(b);
  if (!(la * lb < 0.0)) {
    throw SinaiError(ErrorCode::NoSolution, "points on the same side of 1/2");
  }
  // p * la + (1 - p) * lb = 0
  return -lb / (la - lb);
}

std::string to_string(ValleySide side) { return side == ValleySide::Plus ? "plus" : "minus"; }

Environment Environment::iid(EnvironmentDistribution dist, std::uint64_t seed) {
  validate_distribution(dist);
  Environment env;
  env.kind_ = EnvironmentKind::Iid;
  env.seed_ = seed;
  env.points_ = std::move(dist.support_points);
  env.cumulative_.resize(dist.weights.size());
  std::partial_sum(dist.weights.begin(), dist.weights.end(), env.cumulative_.begin());
  return env;
}

Environment Environment::valley_th1(const SupportExtremes& ext) {
  Environment env;
  env.kind_ = EnvironmentKind::ValleyTh1;
  env.ext_ = ext;
  return env;
}

Environment Environment::valley_th2(const SupportExtremes& ext, std::uint64_t g, ValleySide side) {
  if (side == ValleySide::Minus) require_positive_alpha_tilde(ext, "minus plateau valley");
  Environment env;
  env.kind_ = side == ValleySide::Plus ? EnvironmentKind::ValleyTh2Plus
                                       : EnvironmentKind::ValleyTh2Minus;
  env.ext_ = ext;
  env.g_ = g;
  return env;
}

Environment Environment::constant(double p) {
  if (!(p > 0.0 && p < 1.0)) throw SinaiError(ErrorCode::OutOfRange, "constant alpha not in (0,1)");
  Environment env;
  env.kind_ = EnvironmentKind::Constant;
  env.constant_ = p;
  return env;
}

double Environment::alpha_at(Site x) const {
  switch (kind_) {
    case EnvironmentKind::Constant:
      return constant_;
    case EnvironmentKind::Iid: {
      const double u = to_unit_interval(counter_hash(seed_, static_cast<std::uint64_t>(x)));
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                             points_.size() - 1);
      return points_[idx];
    }
    case EnvironmentKind::ValleyTh1:
      if (x > 0) return ext_.alpha_bar;
      if (x < 0) return ext_.A_bar;
      return ext_.alpha_tilde >= ext_.A_tilde ? ext_.A_bar : ext_.alpha_bar;
    case EnvironmentKind::ValleyTh2Plus: {
      const Site g = static_cast<Site>(g_);
      if (x < 1) return ext_.A_bar;
      if (x <= g) return 0.5;
      if (x == g + 1) {
        const double e = std::pow(ext_.alpha_tilde, static_cast<double>(g + 1));
        return e / (1.0 + e);
      }
      return ext_.alpha_bar;
    }
    case EnvironmentKind::ValleyTh2Minus: {
      const Site g = static_cast<Site>(g_);
      if (x > 0) return ext_.alpha_bar;
      if (x > -g) return 0.5;
      if (x == -g) {
        const double e = std::pow(ext_.A_tilde, static_cast<double>(g));
        return ext_.alpha_tilde / (ext_.alpha_tilde + e);
      }
      return ext_.A_bar;
    }
  }
  return 0.5;
}

std::string Environment::description() const {
  std::ostringstream out;
  switch (kind_) {
    case EnvironmentKind::Constant: out << "constant(" << constant_ << ")"; break;
    case EnvironmentKind::Iid: out << "iid(seed=" << seed_ << ")"; break;
    case EnvironmentKind::ValleyTh1:
      out << "valley-th1(alpha_min=" << ext_.alpha_bar << ", alpha_max=" << ext_.A_bar << ")";
      break;
    case EnvironmentKind::ValleyTh2Plus:
    case EnvironmentKind::ValleyTh2Minus:
      out << "valley-th2-" << (kind_ == EnvironmentKind::ValleyTh2Plus ? "plus" : "minus")
          << "(alpha_min=" << ext_.alpha_bar << ", alpha_max=" << ext_.A_bar << ", g=" << g_ << ")";
      break;
  }
  return out.str();
}

double Potential::epsilon(Site k) const { return log_odds(env_.alpha_at(k)); }

double Potential::s_at(Site x) const {
  double s = 0.0;
  if (x > 0) {
    for (Site i = 1; i <= x; ++i) s += epsilon(i);
  } else {
    for (Site i = x + 1; i <= 0; ++i) s -= epsilon(i);
  }
  return s;
}

double valley_exp_neg_potential(const SupportExtremes& ext, Site x) {
  if (x > 0) return std::pow(ext.alpha_tilde, static_cast<double>(x));
  if (x == 0) return 1.0;
  const double tail = std::pow(ext.A_tilde, static_cast<double>(-x - 1));
  if (ext.alpha_tilde < ext.A_tilde) {
    require_positive_alpha_tilde(ext, "valley potential");
    return tail / ext.alpha_tilde;
  }
  return tail * ext.A_tilde;
}

double plateau_exp_neg_potential(const SupportExtremes& ext, std::uint64_t g, ValleySide side,
                                 Site x) {
  const Site gs = static_cast<Site>(g);
  if (side == ValleySide::Plus) {
    if (x > gs) return std::pow(ext.alpha_tilde, static_cast<double>(x));
    if (x >= 0) return 1.0;
    return std::pow(ext.A_tilde, static_cast<double>(-x));
  }
  if (x > 0) return std::pow(ext.alpha_tilde, static_cast<double>(x));
  if (x >= -gs) return 1.0;
  require_positive_alpha_tilde(ext, "minus plateau potential");
  return std::pow(ext.A_tilde, static_cast<double>(-x - 1)) / ext.alpha_tilde;
}

double GeometricProfile::value(Site x) const {
  if (x > core_hi) return right_start * std::pow(right_ratio, static_cast<double>(x - core_hi - 1));
  if (x < core_lo) return left_start * std::pow(left_ratio, static_cast<double>(core_lo - 1 - x));
  return core[static_cast<std::size_t>(x - core_lo)];
}

double GeometricProfile::right_tail(Site hi) const {
  if (hi < core_hi) throw SinaiError(ErrorCode::InvalidArgument, "tail start inside the core");
  if (right_start == 0.0) return 0.0;
  if (right_ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return right_start * std::pow(right_ratio, static_cast<double>(hi - core_hi)) / (1.0 - right_ratio);
}

double GeometricProfile::left_tail(Site lo) const {
  if (lo > core_lo) throw SinaiError(ErrorCode::InvalidArgument, "tail start inside the core");
  if (left_start == 0.0) return 0.0;
  if (left_ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return left_start * std::pow(left_ratio, static_cast<double>(core_lo - lo)) / (1.0 - left_ratio);
}

double GeometricProfile::total() const {
  return std::accumulate(core.begin(), core.end(), 0.0) + left_tail(core_lo) + right_tail(core_hi);
}

GeometricProfile valley_profile_th1(const SupportExtremes& ext) {
  GeometricProfile p;
  p.core_lo = 0;
  p.core_hi = 0;
  p.core = {1.0};
  p.right_start = valley_exp_neg_potential(ext, 1);
  p.right_ratio = ext.alpha_tilde;
  p.left_start = valley_exp_neg_potential(ext, -1);
  p.left_ratio = ext.A_tilde;
  return p;
}

GeometricProfile valley_profile_th2(const SupportExtremes& ext, std::uint64_t g, ValleySide side) {
  const Site gs = static_cast<Site>(g);
  GeometricProfile p;
  p.core_lo = side == ValleySide::Plus ? 0 : -gs;
  p.core_hi = side == ValleySide::Plus ? gs : 0;
  p.core.assign(g + 1, 1.0);
  p.right_start = plateau_exp_neg_potential(ext, g, side, p.core_hi + 1);
  p.right_ratio = ext.alpha_tilde;
  p.left_start = plateau_exp_neg_potential(ext, g, side, p.core_lo - 1);
  p.left_ratio = ext.A_tilde;
  return p;
}

ProbMeasure::ProbMeasure(SiteInterval window, std::vector<double> mass, double left_tail,
                         double right_tail)
    : window_(window), mass_(std::move(mass)), left_tail_(left_tail), right_tail_(right_tail) {
  if (mass_.size() != window_.size()) {
    throw SinaiError(ErrorCode::InvalidArgument, "mass vector does not match the window");
  }
}

double ProbMeasure::mass(Site x) const noexcept {
  if (!window_.contains(x)) return 0.0;
  return mass_[static_cast<std::size_t>(x - window_.lo)];
}

double ProbMeasure::total() const noexcept {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0) + left_tail_ + right_tail_;
}

ProbMeasure measure_from_exp_neg_potential(const GeometricProfile& profile, SiteInterval window) {
  if (window.lo > profile.core_lo || window.hi < profile.core_hi) {
    throw SinaiError(ErrorCode::InvalidArgument, "measure window must contain the profile core");
  }
  double window_sum = 0.0;
  for (Site x = window.lo; x <= window.hi; ++x) window_sum += profile.value(x);
  const double left = profile.left_tail(window.lo);
  const double right = profile.right_tail(window.hi);
  const double total = window_sum + left + right;
  if (!std::isfinite(total) || !(total > 0.0)) {
    throw SinaiError(ErrorCode::DivergentTotal, "sum of exp(-W) is not finite and positive");
  }
  const double norm = 2.0 * total;
  std::vector<double> mass;
  mass.reserve(window.size());
  for (Site x = window.lo; x <= window.hi; ++x) {
    mass.push_back((profile.value(x - 1) + profile.value(x)) / norm);
  }
  const double left_mass = (2.0 * left - profile.value(window.lo - 1)) / norm;
  const double right_mass = (profile.value(window.hi) + 2.0 * right) / norm;
  return ProbMeasure(window, std::move(mass), std::max(0.0, left_mass), right_mass);
}

SiteInterval default_measure_window(const GeometricProfile& profile) {
  const double total = profile.total();
  if (!std::isfinite(total) || !(total > 0.0)) {
    throw SinaiError(ErrorCode::DivergentTotal, "sum of exp(-W) is not finite and positive");
  }
  auto mass_at = [&](Site x) { return (profile.value(x - 1) + profile.value(x)) / (2.0 * total); };
  SiteInterval w{profile.core_lo, profile.core_hi};
  while (mass_at(w.hi + 1) > kWindowMassCutoff && w.hi - profile.core_hi < kMaxWindowHalfWidth) ++w.hi;
  while (mass_at(w.lo - 1) > kWindowMassCutoff && profile.core_lo - w.lo < kMaxWindowHalfWidth) --w.lo;
  return w;
}

ProbMeasure valley_measure(const Environment& env) {
  GeometricProfile profile;
  switch (env.kind()) {
    case EnvironmentKind::ValleyTh1: profile = valley_profile_th1(env.extremes()); break;
    case EnvironmentKind::ValleyTh2Plus:
      profile = valley_profile_th2(env.extremes(), env.plateau(), ValleySide::Plus);
      break;
    case EnvironmentKind::ValleyTh2Minus:
      profile = valley_profile_th2(env.extremes(), env.plateau(), ValleySide::Minus);
      break;
    default:
      throw SinaiError(ErrorCode::InvalidArgument, "no closed-form invariant measure for " + env.description());
  }
  return measure_from_exp_neg_potential(profile, default_measure_window(profile));
}

double window_mass_sup(const ProbMeasure& mu, std::uint64_t r) {
  const auto masses = mu.window_masses();
  const std::size_t width = 2 * r + 1;
  if (width >= masses.size()) return std::accumulate(masses.begin(), masses.end(), 0.0);
  double best = 0.0;
  for (std::size_t i = 0; i + width <= masses.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = i; j < i + width; ++j) s += masses[j];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace sinai
