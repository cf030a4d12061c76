#include "sinai/concentration_stats.hpp"

#include <algorithm>
#include <numeric>

#include "sinai/errors.hpp"

namespace sinai {

namespace {

void require_steps(const LocalTimeView& table) {
  if (table.steps == 0) throw SinaiError(ErrorCode::EmptyWalk, "statistic needs n >= 1");
}

std::uint64_t best_window_count(std::span<const std::uint64_t> counts, std::uint64_t r) {
  const std::size_t size = counts.size();
  // Windows hanging over the visited range are dominated by ones inside it.
  if (r >= size / 2) return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  const std::size_t width = 2 * r + 1;
  std::uint64_t sum = std::accumulate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(width),
                                      std::uint64_t{0});
  std::uint64_t best = sum;
  for (std::size_t i = width; i < size; ++i) {
    sum += counts[i];
    sum -= counts[i - width];
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace

std::uint64_t max_local_time(const LocalTimeView& table) noexcept {
  if (table.counts.empty()) return 0;
  return *std::max_element(table.counts.begin(), table.counts.end());
}

CountRatio window_sup(const LocalTimeView& table, std::uint64_t r) {
  require_steps(table);
  return CountRatio{best_window_count(table.counts, r), table.steps};
}

ExtendedCount concentration_radius(const LocalTimeView& table, const Fraction& beta,
                                   std::uint64_t min_radius) {
  if (beta.num() > beta.den()) {
    throw SinaiError(ErrorCode::BadBeta, "beta must lie in [0,1], got " + beta.to_string());
  }
  require_steps(table);
  auto reaches = [&](std::uint64_t r) {
    return CountRatio{best_window_count(table.counts, r), table.steps}.at_least(beta);
  };
  if (reaches(min_radius)) return ExtendedCount::finite(min_radius);

  // Beyond this radius every window already holds the whole table.
  const std::uint64_t full = std::max<std::uint64_t>(min_radius, table.counts.size() / 2);
  if (!reaches(full)) return ExtendedCount::infinite();

  // reaches() is monotone in r: gallop to a bracket, then bisect.
  std::uint64_t lo = min_radius;  // fails
  std::uint64_t hi = full;        // holds
  for (std::uint64_t step = 1; lo + step < hi; step *= 2) {
    if (reaches(lo + step)) {
      hi = lo + step;
      break;
    }
    lo += step;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (reaches(mid) ? hi : lo) = mid;
  }
  return ExtendedCount::finite(hi);
}

std::uint64_t heavy_site_count(const LocalTimeView& table, const Fraction& delta) {
  if (delta.num() == 0) throw SinaiError(ErrorCode::BadDelta, "delta must be positive");
  require_steps(table);
  const auto num = static_cast<UInt128>(delta.num());
  const auto den = static_cast<UInt128>(delta.den());
  const UInt128 threshold = num * table.steps;
  return static_cast<std::uint64_t>(std::count_if(
      table.counts.begin(), table.counts.end(), [&](std::uint64_t c) { return c * den >= threshold; }));
}

ConcentrationReport concentration_report(const LocalTimeView& table,
                                         const ConcentrationRequest& request) {
  ConcentrationReport report;
  report.steps = table.steps;
  report.lstar = max_local_time(table);
  for (std::uint64_t r : request.radii) report.r_profile.emplace_back(r, window_sup(table, r));
  for (const Fraction& b : request.betas) {
    report.y_values.emplace_back(b, concentration_radius(table, b, request.min_radius));
  }
  for (const Fraction& d : request.deltas) report.z_values.emplace_back(d, heavy_site_count(table, d));
  return report;
}

}  // namespace sinai
