#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sinai/env_model.hpp"
#include "sinai/fraction.hpp"

namespace sinai {

/// c1 = (2A - 1)(1 - 2a) / (2 (A - a) min(A, 1 - a)) with a = alpha_bar,
/// A = A_bar: the almost-sure lower limit of L*(n)/n.
double single_site_limit(double alpha_bar, double A_bar);

/// The F(l) profile entering the window-mass limit. Equals exp(-W(l)) of the
/// steepest valley up to a constant factor.
double valley_profile(Site l, const SupportExtremes& ext);

/// (1 - at)(1 - At) / (2 (1 - at At)): normalizer turning F-window sums into
/// masses.
double window_mass_prefactor(const SupportExtremes& ext);

/// g(r): the largest attainable limsup of R_n(r). Evaluated as the prefactor
/// times the best window sum of F(k) + F(k-1) over centers in [-(r+2), r+2].
double window_mass_limit(std::uint64_t r, const SupportExtremes& ext);

/// Same sup with an explicit center range, for checking the narrow scan.
double window_mass_limit_scan(std::uint64_t r, const SupportExtremes& ext, Site scan_radius);

/// g(r) recomputed as the best (2r+1)-window mass of the steepest valley's
/// invariant measure. Independent of valley_profile.
double window_mass_limit_from_measure(std::uint64_t r, const SupportExtremes& ext);

/// a+: the maximizing center of g(r). Ties go to smaller |x|, then to x < 0.
Site concentration_center(std::uint64_t r, const SupportExtremes& ext);

/// f(beta): smallest r with g(r) >= beta (1e-12 slack); infinite at beta = 1.
ExtendedCount radius_limit(double beta, const SupportExtremes& ext);

/// Closed form for A_bar = 1 - alpha_bar: the smallest f >= 1 with
/// 1 - (1 + at) at^(f-1) / 2 >= beta. Requires beta in [0,1), at in (0,1).
std::uint64_t radius_limit_symmetric(double beta, double alpha_tilde);

/// max(1/|log A_tilde|, 1/|log alpha_tilde|); a zero tilde value drops its
/// term. DegenerateSupport if both are zero.
double radius_growth_slope(const SupportExtremes& ext);

/// g(delta): the largest g >= 0 with
///   Plus:  g <= 1/delta - 1 - at^(g+1)/(1-at) - At/(1-At)
///   Minus: g <= 1/delta - 1 - (1/at) At^g/(1-At) - at/(1-at)
/// NoValley if g = 0 already fails, BadDelta if delta <= 0.
std::uint64_t plateau_length(double delta, const SupportExtremes& ext, ValleySide side);

struct HeavySiteBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t plateau_plus = 0;
  std::uint64_t plateau_minus = 0;
};

/// Bounds on limsup_n Z_{n,delta}: 1/delta - 1 - max(minus, plus correction)
/// and 1/delta.
HeavySiteBounds heavy_site_bounds(double delta, const SupportExtremes& ext);

struct TheoryRequest {
  std::vector<std::uint64_t> radii;
  std::vector<Fraction> betas;
  std::vector<Fraction> deltas;
};

struct TheoryReport {
  SupportExtremes extremes;
  double c1 = 0.0;
  std::vector<std::pair<std::uint64_t, double>> g_profile;
  std::vector<std::pair<std::uint64_t, Site>> centers;
  std::vector<std::pair<Fraction, ExtendedCount>> f_beta;
  std::vector<std::pair<Fraction, std::optional<std::uint64_t>>> f_simplified;
  std::optional<double> slope;
  struct DeltaEntry {
    Fraction delta;
    std::optional<std::uint64_t> g_plus;
    std::optional<std::uint64_t> g_minus;
    std::optional<HeavySiteBounds> bounds;
  };
  std::vector<DeltaEntry> deltas;
};

/// Evaluates everything it can; entries whose preconditions fail are left empty.
TheoryReport theory_report(const SupportExtremes& ext, const TheoryRequest& request);

std::string to_text_table(const TheoryReport& report);

}  // namespace sinai
