#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sinai/env_model.hpp"
#include "sinai/fraction.hpp"
#include "sinai/rng.hpp"

namespace sinai {

/// Non-owning view of local times on a contiguous site interval.
struct LocalTimeView {
  Site first_site = 0;
  std::span<const std::uint64_t> counts;
  std::uint64_t steps = 0;

  std::uint64_t at(Site x) const noexcept {
    if (x < first_site || x >= first_site + static_cast<Site>(counts.size())) return 0;
    return counts[static_cast<std::size_t>(x - first_site)];
  }
};

/// L(k, n): visits to k during steps 1..n (X_0 is not counted).
class LocalTimeTable {
 public:
  LocalTimeTable() = default;
  /// n is taken as the sum of the counts. Sites with zero count are allowed
  /// inside the range; the stored range is trimmed to nonzero ends.
  LocalTimeTable(Site first_site, std::vector<std::uint64_t> counts);
  static LocalTimeTable from_counts(const std::map<Site, std::uint64_t>& counts);

  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t at(Site x) const noexcept { return view().at(x); }
  bool empty() const noexcept { return counts_.empty(); }
  /// Empty interval when no steps were taken.
  SiteInterval visited_range() const noexcept;
  LocalTimeView view() const noexcept { return {first_site_, counts_, steps_}; }

  friend bool operator==(const LocalTimeTable&, const LocalTimeTable&) = default;

 private:
  Site first_site_ = 0;
  std::vector<std::uint64_t> counts_;
  std::uint64_t steps_ = 0;
};

struct Trajectory {
  std::vector<std::uint64_t> checkpoint_steps;
  std::vector<LocalTimeTable> snapshots;
};

/// Quenched walk X_0 = 0, P(X_{k+1} = x+1 | X_k = x) = alpha_x.
///
/// Holds a two-sided growable cache of step thresholds and local times, so a
/// single Walker can be reset and reused across replicas on the same
/// environment without touching the allocator in the hot loop.
class Walker {
 public:
  explicit Walker(Environment env);

  /// X_0 = 0, local times cleared, walk stream reseeded.
  void reset(std::uint64_t walk_seed);
  void advance(std::uint64_t steps);

  Site position() const noexcept { return position_; }
  std::uint64_t steps() const noexcept { return steps_; }
  /// Valid until the next advance/reset.
  LocalTimeView view() const noexcept;
  LocalTimeTable snapshot() const;

 private:
  void grow_to_include(Site x);
  std::uint64_t threshold_for(Site x) const;

  Environment env_;
  Xoshiro256 rng_{0};
  Site base_ = 0;  // site of index 0 in the arrays
  std::vector<std::uint64_t> thresholds_;
  std::vector<std::uint64_t> counts_;
  Site position_ = 0;
  Site min_visited_ = 1;
  Site max_visited_ = 0;
  std::uint64_t steps_ = 0;
};

/// Runs n steps and snapshots the local times at every checkpoint (which must
/// be increasing and within [1, n]).
Trajectory simulate(const Environment& env, std::uint64_t n, std::uint64_t walk_seed,
                    std::span<const std::uint64_t> checkpoints);

/// Exact law of a few functionals of L(., n), by enumerating all 2^n paths.
struct ExactLaw {
  std::uint64_t steps = 0;
  std::map<std::uint64_t, double> max_local_time;
  std::vector<std::map<std::uint64_t, double>> heavy_sites;  // one per delta
  std::vector<std::map<std::uint64_t, double>> radius;       // one per beta

  static double mean(const std::map<std::uint64_t, double>& law);
  static double variance(const std::map<std::uint64_t, double>& law);
};

/// TooLarge if n > 20.
ExactLaw enumerate_exact(const Environment& env, std::uint64_t n,
                         std::span<const Fraction> deltas = {},
                         std::span<const Fraction> betas = {});

inline constexpr std::uint64_t kMaxEnumerationSteps = 20;

}  // namespace sinai
