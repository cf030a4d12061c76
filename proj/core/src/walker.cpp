#include "sinai/walker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sinai/concentration_stats.hpp"
#include "sinai/errors.hpp"

namespace sinai {

namespace {

constexpr std::uint64_t kWalkStreamTag = 0xd1b54a32d192ed03ULL;
constexpr Site kInitialHalfWidth = 64;

}  // namespace

LocalTimeTable::LocalTimeTable(Site first_site, std::vector<std::uint64_t> counts) {
  std::size_t lo = 0;
  std::size_t hi = counts.size();
  while (lo < hi && counts[lo] == 0) ++lo;
  while (hi > lo && counts[hi - 1] == 0) --hi;
  first_site_ = first_site + static_cast<Site>(lo);
  counts_.assign(counts.begin() + static_cast<std::ptrdiff_t>(lo),
                 counts.begin() + static_cast<std::ptrdiff_t>(hi));
  steps_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (counts_.empty()) first_site_ = 0;
}

LocalTimeTable LocalTimeTable::from_counts(const std::map<Site, std::uint64_t>& counts) {
  if (counts.empty()) return {};
  const Site lo = counts.begin()->first;
  const Site hi = counts.rbegin()->first;
  std::vector<std::uint64_t> dense(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& [site, c] : counts) dense[static_cast<std::size_t>(site - lo)] = c;
  return LocalTimeTable(lo, std::move(dense));
}

SiteInterval LocalTimeTable::visited_range() const noexcept {
  if (counts_.empty()) return {};
  return {first_site_, first_site_ + static_cast<Site>(counts_.size()) - 1};
}

Walker::Walker(Environment env) : env_(std::move(env)) {
  base_ = -kInitialHalfWidth;
  const auto size = static_cast<std::size_t>(2 * kInitialHalfWidth + 1);
  thresholds_.resize(size);
  counts_.assign(size, 0);
  for (std::size_t i = 0; i < size; ++i) thresholds_[i] = threshold_for(base_ + static_cast<Site>(i));
  reset(0);
}

std::uint64_t Walker::threshold_for(Site x) const {
  const double alpha = env_.alpha_at(x);
  if (!(alpha > 0.0)) return 0;
  if (alpha >= 1.0) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ldexp(alpha, 64));
}

void Walker::reset(std::uint64_t walk_seed) {
  if (min_visited_ <= max_visited_) {
    std::fill(counts_.begin() + (min_visited_ - base_), counts_.begin() + (max_visited_ - base_) + 1,
              std::uint64_t{0});
  }
  rng_.reseed(mix64(walk_seed ^ kWalkStreamTag));
  position_ = 0;
  min_visited_ = 1;
  max_visited_ = 0;
  steps_ = 0;
}

void Walker::grow_to_include(Site x) {
  const Site lo = base_;
  const Site hi = base_ + static_cast<Site>(counts_.size()) - 1;
  if (x > lo && x < hi) return;
  const Site width = hi - lo + 1;
  const Site new_lo = x <= lo ? lo - width : lo;
  const Site new_hi = x >= hi ? hi + width : hi;
  const auto new_size = static_cast<std::size_t>(new_hi - new_lo + 1);
  std::vector<std::uint64_t> thr(new_size);
  std::vector<std::uint64_t> cnt(new_size, 0);
  const auto offset = static_cast<std::size_t>(lo - new_lo);
  std::copy(thresholds_.begin(), thresholds_.end(), thr.begin() + static_cast<std::ptrdiff_t>(offset));
  std::copy(counts_.begin(), counts_.end(), cnt.begin() + static_cast<std::ptrdiff_t>(offset));
  for (Site s = new_lo; s < lo; ++s) thr[static_cast<std::size_t>(s - new_lo)] = threshold_for(s);
  for (Site s = hi + 1; s <= new_hi; ++s) thr[static_cast<std::size_t>(s - new_lo)] = threshold_for(s);
  thresholds_ = std::move(thr);
  counts_ = std::move(cnt);
  base_ = new_lo;
}

void Walker::advance(std::uint64_t steps) {
  if (steps == 0) return;
  const std::uint64_t* thr = thresholds_.data();
  std::uint64_t* cnt = counts_.data();
  auto last = static_cast<Site>(counts_.size()) - 1;
  Site idx = position_ - base_;
  Site lo_idx = steps_ == 0 ? std::numeric_limits<Site>::max() : min_visited_ - base_;
  Site hi_idx = steps_ == 0 ? std::numeric_limits<Site>::min() : max_visited_ - base_;

  for (std::uint64_t k = 0; k < steps; ++k) {
    idx += rng_() < thr[idx] ? 1 : -1;
    ++cnt[idx];
    lo_idx = std::min(lo_idx, idx);
    hi_idx = std::max(hi_idx, idx);
    if (idx == 0 || idx == last) [[unlikely]] {
      const Site old_base = base_;
      grow_to_include(base_ + idx);
      idx += old_base - base_;
      lo_idx += old_base - base_;
      hi_idx += old_base - base_;
      thr = thresholds_.data();
      cnt = counts_.data();
      last = static_cast<Site>(counts_.size()) - 1;
    }
  }
  position_ = base_ + idx;
  min_visited_ = base_ + lo_idx;
  max_visited_ = base_ + hi_idx;
  steps_ += steps;
}

LocalTimeView Walker::view() const noexcept {
  if (steps_ == 0) return {0, {}, 0};
  const auto first = static_cast<std::size_t>(min_visited_ - base_);
  const auto len = static_cast<std::size_t>(max_visited_ - min_visited_ + 1);
  return {min_visited_, std::span<const std::uint64_t>(counts_).subspan(first, len), steps_};
}

LocalTimeTable Walker::snapshot() const {
  const LocalTimeView v = view();
  return LocalTimeTable(v.first_site, std::vector<std::uint64_t>(v.counts.begin(), v.counts.end()));
}

Trajectory simulate(const Environment& env, std::uint64_t n, std::uint64_t walk_seed,
                    std::span<const std::uint64_t> checkpoints) {
  std::uint64_t prev = 0;
  for (std::uint64_t c : checkpoints) {
    if (c <= prev || c > n) {
      throw SinaiError(ErrorCode::InvalidArgument, "checkpoints must be increasing within [1, n]");
    }
    prev = c;
  }
  Trajectory traj;
  Walker walker(env);
  walker.reset(walk_seed);
  for (std::uint64_t c : checkpoints) {
    walker.advance(c - walker.steps());
    traj.checkpoint_steps.push_back(c);
    traj.snapshots.push_back(walker.snapshot());
  }
  if (traj.checkpoint_steps.empty() || traj.checkpoint_steps.back() != n) {
    walker.advance(n - walker.steps());
    traj.checkpoint_steps.push_back(n);
    traj.snapshots.push_back(walker.snapshot());
  }
  return traj;
}

double ExactLaw::mean(const std::map<std::uint64_t, double>& law) {
  double m = 0.0;
  for (const auto& [v, p] : law) m += static_cast<double>(v) * p;
  return m;
}

double ExactLaw::variance(const std::map<std::uint64_t, double>& law) {
  const double m = mean(law);
  double v = 0.0;
  for (const auto& [x, p] : law) v += (static_cast<double>(x) - m) * (static_cast<double>(x) - m) * p;
  return v;
}

namespace {

struct Enumerator {
  std::uint64_t n;
  Site origin;  // array index of site 0
  std::vector<double> alpha;
  std::vector<std::uint64_t> counts;
  std::span<const Fraction> deltas;
  std::span<const Fraction> betas;
  ExactLaw* law;

  void leaf(double prob) {
    const LocalTimeView view{-origin, counts, n};
    law->max_local_time[max_local_time(view)] += prob;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      law->heavy_sites[i][heavy_site_count(view, deltas[i])] += prob;
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
      law->radius[i][concentration_radius(view, betas[i]).value()] += prob;
    }
  }

  void walk(Site idx, std::uint64_t depth, double prob) {
    if (depth == n) {
      leaf(prob);
      return;
    }
    const double up = alpha[static_cast<std::size_t>(idx)];
    if (up > 0.0) {
      ++counts[static_cast<std::size_t>(idx + 1)];
      walk(idx + 1, depth + 1, prob * up);
      --counts[static_cast<std::size_t>(idx + 1)];
    }
    if (up < 1.0) {
      ++counts[static_cast<std::size_t>(idx - 1)];
      walk(idx - 1, depth + 1, prob * (1.0 - up));
      --counts[static_cast<std::size_t>(idx - 1)];
    }
  }
};

}  // namespace

ExactLaw enumerate_exact(const Environment& env, std::uint64_t n, std::span<const Fraction> deltas,
                         std::span<const Fraction> betas) {
  if (n > kMaxEnumerationSteps) {
    throw SinaiError(ErrorCode::TooLarge, "exact enumeration is limited to n <= 20");
  }
  if (n == 0 && (!deltas.empty() || !betas.empty())) {
    throw SinaiError(ErrorCode::EmptyWalk, "Z and Y need n >= 1");
  }
  ExactLaw law;
  law.steps = n;
  law.heavy_sites.resize(deltas.size());
  law.radius.resize(betas.size());

  Enumerator e;
  e.n = n;
  e.origin = static_cast<Site>(n) + 1;
  const auto size = static_cast<std::size_t>(2 * n + 3);
  e.alpha.resize(size);
  for (std::size_t i = 0; i < size; ++i) e.alpha[i] = env.alpha_at(static_cast<Site>(i) - e.origin);
  e.counts.assign(size, 0);
  e.deltas = deltas;
  e.betas = betas;
  e.law = &law;
  e.walk(e.origin, 0, 1.0);
  return law;
}

}  // namespace sinai
