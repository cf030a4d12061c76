#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sinai/concentration_stats.hpp"
#include "sinai/env_model.hpp"
#include "sinai/fraction.hpp"

namespace sinai {

struct EnvSpec {
  EnvironmentKind kind = EnvironmentKind::ValleyTh1;
  /// Law of alpha_0 for Iid; for valleys it may stand in for the extremes.
  std::optional<EnvironmentDistribution> distribution;
  std::optional<double> alpha_min;
  std::optional<double> alpha_max;
  /// Plateau length for th2 valleys; defaults to g(delta) for the first delta.
  std::optional<std::uint64_t> plateau;
  double constant = 0.5;
};

/// Extremes from alpha_min/alpha_max if both given, else from the distribution.
SupportExtremes resolve_extremes(const EnvSpec& spec);

/// `deltas` is consulted only to default the th2 plateau length.
Environment build_environment(const EnvSpec& spec, std::uint64_t env_seed,
                              const std::vector<Fraction>& deltas = {});

struct ExperimentConfig {
  EnvSpec env;
  std::uint64_t steps = 0;
  std::uint64_t first_checkpoint = 1000;
  double checkpoint_ratio = 2.0;
  std::uint32_t replicas = 1;
  std::uint64_t seed = 0;
  /// Environment stream seed (Iid only); defaults to `seed`.
  std::optional<std::uint64_t> env_seed;
  std::vector<Fraction> betas;
  std::vector<Fraction> deltas;
  std::vector<std::uint64_t> radii;
  std::uint64_t min_radius = 0;
  unsigned threads = 0;  // 0: hardware concurrency

  std::string csv_path;
  std::string summary_path;
  std::string svg_path;
  std::string svg_statistic;

  /// InvalidArgument/BadBeta/BadDelta on a bad field.
  void validate() const;
};

/// floor(n0 * rho^k) for k = 0, 1, ... while below n, deduplicated, then n.
/// Empty for n = 0.
std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t steps, std::uint64_t first,
                                               double ratio);

struct ReplicaResult {
  std::uint32_t replica = 0;
  std::uint64_t walk_seed = 0;
  std::vector<ConcentrationReport> reports;      // one per checkpoint
  std::vector<std::vector<double>> values;       // [checkpoint][statistic]
  std::vector<std::vector<double>> running_max;  // limsup proxy
  std::vector<std::vector<double>> running_min;  // liminf proxy
};

struct SummaryRow {
  std::string statistic;
  std::uint64_t step = 0;
  double mean = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double mean_running_max = 0.0;
  double mean_running_min = 0.0;
  std::optional<double> theory;
};

struct AggregateResult {
  std::string environment;
  std::vector<std::string> statistics;  // CSV column order after replica, step
  std::vector<std::uint64_t> checkpoints;
  std::vector<ReplicaResult> replicas;  // sorted by replica index
  std::vector<SummaryRow> summary;
  std::map<std::string, double> theory;
};

/// Replica i walks with seed base_seed + i on one shared environment.
/// Replicas run on worker threads; the fold is by replica index, so the
/// result does not depend on scheduling.
AggregateResult run_experiment(const ExperimentConfig& config);

std::vector<std::string> statistic_names(const ConcentrationRequest& request);

std::string to_csv(const AggregateResult& result);
std::string to_summary_csv(const AggregateResult& result);
/// UnknownStatistic if `statistic` is not a column of the result.
std::string to_svg(const AggregateResult& result, const std::string& statistic);

/// IoError on failure.
void emit_csv(const AggregateResult& result, const std::string& path);
void emit_summary_csv(const AggregateResult& result, const std::string& path);
void emit_svg(const AggregateResult& result, const std::string& statistic, const std::string& path);

/// %.12g; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double value);

}  // namespace sinai
