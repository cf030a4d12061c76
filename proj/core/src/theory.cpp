#include "sinai/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "sinai/errors.hpp"

namespace sinai {

namespace {

constexpr double kThresholdSlack = 1e-12;
constexpr double kTieTolerance = 1e-12;

/// Window sums S(x) = sum_{k=x-r}^{x+r} F(k) + F(k-1) for x in [-scan, scan].
std::vector<double> window_sums(std::uint64_t r, const SupportExtremes& ext, Site scan) {
  const Site rs = static_cast<Site>(r);
  const Site first = -scan - rs;  // smallest k used
  const Site last = scan + rs;
  std::vector<double> pair(static_cast<std::size_t>(last - first + 1));
  for (Site k = first; k <= last; ++k) {
    pair[static_cast<std::size_t>(k - first)] = valley_profile(k, ext) + valley_profile(k - 1, ext);
  }
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(2 * scan + 1));
  for (Site x = -scan; x <= scan; ++x) {
    double s = 0.0;
    for (Site k = x - rs; k <= x + rs; ++k) s += pair[static_cast<std::size_t>(k - first)];
    sums.push_back(s);
  }
  return sums;
}

double best_window_sum(std::uint64_t r, const SupportExtremes& ext, Site scan) {
  const auto sums = window_sums(r, ext, scan);
  return *std::max_element(sums.begin(), sums.end());
}

}  // namespace

double single_site_limit(double alpha_bar, double A_bar) {
  if (!(alpha_bar >= 0.0 && alpha_bar < 0.5 && A_bar > 0.5 && A_bar <= 1.0)) {
    throw SinaiError(ErrorCode::BadExtremes, "need 0 <= alpha_bar < 1/2 < A_bar <= 1");
  }
  return (2.0 * A_bar - 1.0) * (1.0 - 2.0 * alpha_bar) /
         (2.0 * (A_bar - alpha_bar) * std::min(A_bar, 1.0 - alpha_bar));
}

double valley_profile(Site l, const SupportExtremes& ext) {
  const bool left_steeper = ext.alpha_tilde < ext.A_tilde;
  const double at_zero = left_steeper ? ext.alpha_tilde : 1.0;
  if (l > 0) return std::pow(ext.alpha_tilde, static_cast<double>(l)) * at_zero;
  if (l == 0) return at_zero;
  return std::pow(ext.A_tilde, static_cast<double>(-l - 1)) * (left_steeper ? 1.0 : ext.A_tilde);
}

double window_mass_prefactor(const SupportExtremes& ext) {
  return (1.0 - ext.alpha_tilde) * (1.0 - ext.A_tilde) / (2.0 * (1.0 - ext.alpha_tilde * ext.A_tilde));
}

double window_mass_limit_scan(std::uint64_t r, const SupportExtremes& ext, Site scan_radius) {
  return window_mass_prefactor(ext) * best_window_sum(r, ext, scan_radius);
}

double window_mass_limit(std::uint64_t r, const SupportExtremes& ext) {
  return window_mass_limit_scan(r, ext, static_cast<Site>(r) + 2);
}

double window_mass_limit_from_measure(std::uint64_t r, const SupportExtremes& ext) {
  return window_mass_sup(valley_measure(Environment::valley_th1(ext)), r);
}

Site concentration_center(std::uint64_t r, const SupportExtremes& ext) {
  const Site scan = static_cast<Site>(r) + 2;
  const auto sums = window_sums(r, ext, scan);
  const double best = *std::max_element(sums.begin(), sums.end());
  auto sum_at = [&](Site x) { return sums[static_cast<std::size_t>(x + scan)]; };
  // Candidates in tie-break order: 0, -1, 1, -2, 2, ...
  for (Site d = 0; d <= scan; ++d) {
    if (sum_at(-d) >= best * (1.0 - kTieTolerance)) return -d;
    if (d > 0 && sum_at(d) >= best * (1.0 - kTieTolerance)) return d;
  }
  return 0;
}

ExtendedCount radius_limit(double beta, const SupportExtremes& ext) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw SinaiError(ErrorCode::BadBeta, "beta must lie in [0,1]");
  if (beta == 1.0) return ExtendedCount::infinite();
  auto reaches = [&](std::uint64_t r) { return window_mass_limit(r, ext) >= beta - kThresholdSlack; };
  if (reaches(0)) return ExtendedCount::finite(0);
  std::uint64_t lo = 0;
  std::uint64_t hi = 1;
  while (!reaches(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > (std::uint64_t{1} << 24)) {
      throw SinaiError(ErrorCode::TooLarge, "window-mass limit does not reach beta");
    }
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (reaches(mid) ? hi : lo) = mid;
  }
  return ExtendedCount::finite(hi);
}

std::uint64_t radius_limit_symmetric(double beta, double alpha_tilde) {
  if (!(beta >= 0.0 && beta < 1.0)) throw SinaiError(ErrorCode::BadBeta, "beta must lie in [0,1)");
  if (!(alpha_tilde > 0.0 && alpha_tilde < 1.0)) {
    throw SinaiError(ErrorCode::BadExtremes, "alpha_tilde must lie in (0,1)");
  }
  double power = 1.0;  // alpha_tilde^(f-1)
  for (std::uint64_t f = 1;; ++f) {
    if (1.0 - (1.0 + alpha_tilde) * power / 2.0 >= beta - kThresholdSlack) return f;
    power *= alpha_tilde;
  }
}

double radius_growth_slope(const SupportExtremes& ext) {
  double slope = 0.0;
  bool any = false;
  for (double t : {ext.A_tilde, ext.alpha_tilde}) {
    if (t > 0.0) {
      slope = std::max(slope, 1.0 / std::abs(std::log(t)));
      any = true;
    }
  }
  if (!any) throw SinaiError(ErrorCode::DegenerateSupport, "alpha_tilde = A_tilde = 0");
  return slope;
}

std::uint64_t plateau_length(double delta, const SupportExtremes& ext, ValleySide side) {
  if (!(delta > 0.0)) throw SinaiError(ErrorCode::BadDelta, "delta must be positive");
  const double at = ext.alpha_tilde;
  const double At = ext.A_tilde;
  if (side == ValleySide::Minus && !(at > 0.0)) {
    throw SinaiError(ErrorCode::DegenerateSupport, "minus plateau needs alpha_tilde > 0");
  }
  auto rhs = [&](std::uint64_t g) {
    const double gd = static_cast<double>(g);
    if (side == ValleySide::Plus) {
      return 1.0 / delta - 1.0 - std::pow(at, gd + 1.0) / (1.0 - at) - At / (1.0 - At);
    }
    return 1.0 / delta - 1.0 - std::pow(At, gd) / (at * (1.0 - At)) - at / (1.0 - at);
  };
  if (!(0.0 <= rhs(0))) {
    throw SinaiError(ErrorCode::NoValley, "no plateau reaches level delta");
  }
  std::uint64_t g = 0;
  while (static_cast<double>(g + 1) <= rhs(g + 1)) ++g;
  return g;
}

HeavySiteBounds heavy_site_bounds(double delta, const SupportExtremes& ext) {
  if (!(delta > 0.0 && delta < 1.0)) throw SinaiError(ErrorCode::BadDelta, "delta must lie in (0,1)");
  const double at = ext.alpha_tilde;
  const double At = ext.A_tilde;
  if (!(at > 0.0)) throw SinaiError(ErrorCode::DegenerateSupport, "bounds need alpha_tilde > 0");
  HeavySiteBounds b;
  b.plateau_plus = plateau_length(delta, ext, ValleySide::Plus);
  b.plateau_minus = plateau_length(delta, ext, ValleySide::Minus);
  const double minus_corr =
      std::pow(At, static_cast<double>(b.plateau_minus)) / (at * (1.0 - At)) + at / (1.0 - at);
  const double plus_corr =
      std::pow(at, static_cast<double>(b.plateau_plus) + 1.0) / (1.0 - at) + At / (1.0 - At);
  b.lower = 1.0 / delta - 1.0 - std::max(minus_corr, plus_corr);
  b.upper = 1.0 / delta;
  return b;
}

TheoryReport theory_report(const SupportExtremes& ext, const TheoryRequest& request) {
  TheoryReport rep;
  rep.extremes = ext;
  rep.c1 = single_site_limit(ext.alpha_bar, ext.A_bar);
  for (std::uint64_t r : request.radii) {
    rep.g_profile.emplace_back(r, window_mass_limit(r, ext));
    rep.centers.emplace_back(r, concentration_center(r, ext));
  }
  for (const Fraction& b : request.betas) {
    rep.f_beta.emplace_back(b, radius_limit(b.to_double(), ext));
    std::optional<std::uint64_t> simple;
    if (b.num() < b.den() && ext.alpha_tilde > 0.0) {
      simple = radius_limit_symmetric(b.to_double(), ext.alpha_tilde);
    }
    rep.f_simplified.emplace_back(b, simple);
  }
  if (ext.alpha_tilde > 0.0 || ext.A_tilde > 0.0) rep.slope = radius_growth_slope(ext);
  for (const Fraction& d : request.deltas) {
    TheoryReport::DeltaEntry e{d, {}, {}, {}};
    const double dv = d.to_double();
    try {
      e.g_plus = plateau_length(dv, ext, ValleySide::Plus);
    } catch (const SinaiError&) {
    }
    try {
      e.g_minus = plateau_length(dv, ext, ValleySide::Minus);
    } catch (const SinaiError&) {
    }
    try {
      e.bounds = heavy_site_bounds(dv, ext);
    } catch (const SinaiError&) {
    }
    rep.deltas.push_back(e);
  }
  return rep;
}

std::string to_text_table(const TheoryReport& report) {
  std::ostringstream out;
  out << std::setprecision(12);
  const auto row = [&](const std::string& key, const std::string& value) {
    out << std::left << std::setw(22) << key << value << '\n';
  };
  const auto num = [](double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
  };
  const auto& e = report.extremes;
  row("alpha_min", num(e.alpha_bar));
  row("alpha_max", num(e.A_bar));
  row("alpha_tilde", num(e.alpha_tilde));
  row("A_tilde", num(e.A_tilde));
  row("c1", num(report.c1));
  for (std::size_t i = 0; i < report.g_profile.size(); ++i) {
    const auto& [r, g] = report.g_profile[i];
    row("g(" + std::to_string(r) + ")", num(g) + "  center=" + std::to_string(report.centers[i].second));
  }
  for (std::size_t i = 0; i < report.f_beta.size(); ++i) {
    const auto& [b, f] = report.f_beta[i];
    const auto& simple = report.f_simplified[i].second;
    row("f_beta(" + b.to_string() + ")", f.to_string());
    row("f_simplified(" + b.to_string() + ")", simple ? std::to_string(*simple) : std::string("-"));
  }
  row("slope", report.slope ? num(*report.slope) : std::string("-"));
  for (const auto& d : report.deltas) {
    const std::string tag = "(" + d.delta.to_string() + ")";
    row("g_delta_plus" + tag, d.g_plus ? std::to_string(*d.g_plus) : std::string("-"));
    row("g_delta_minus" + tag, d.g_minus ? std::to_string(*d.g_minus) : std::string("-"));
    if (d.bounds) {
      row("z_lower" + tag, num(d.bounds->lower));
      row("z_upper" + tag, num(d.bounds->upper));
    } else {
      row("z_bounds" + tag, "-");
    }
  }
  return out.str();
}

}  // namespace sinai
