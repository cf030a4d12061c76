#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sinai/fraction.hpp"
#include "sinai/walker.hpp"

namespace sinai {

/// L*(n) = max_k L(k, n); 0 for an empty table.
std::uint64_t max_local_time(const LocalTimeView& table) noexcept;

/// R_n(r) = max_x L({x-r..x+r}, n) / n, exact. EmptyWalk if n = 0.
CountRatio window_sup(const LocalTimeView& table, std::uint64_t r);

/// Y_{n,beta}: the smallest r >= min_radius with R_n(r) >= beta.
/// BadBeta unless 0 <= beta <= 1; EmptyWalk if n = 0. Always finite for
/// beta <= 1 since R_n(r) = 1 once the window spans the visited range.
ExtendedCount concentration_radius(const LocalTimeView& table, const Fraction& beta,
                                   std::uint64_t min_radius = 0);

/// Z_{n,delta}: number of sites with L(x, n) >= delta * n (exact).
/// BadDelta if delta <= 0; EmptyWalk if n = 0.
std::uint64_t heavy_site_count(const LocalTimeView& table, const Fraction& delta);

struct ConcentrationRequest {
  std::vector<std::uint64_t> radii;
  std::vector<Fraction> betas;
  std::vector<Fraction> deltas;
  std::uint64_t min_radius = 0;
};

struct ConcentrationReport {
  std::uint64_t steps = 0;
  std::uint64_t lstar = 0;
  std::vector<std::pair<std::uint64_t, CountRatio>> r_profile;
  std::vector<std::pair<Fraction, ExtendedCount>> y_values;
  std::vector<std::pair<Fraction, std::uint64_t>> z_values;
};

ConcentrationReport concentration_report(const LocalTimeView& table,
                                         const ConcentrationRequest& request);

}  // namespace sinai
