#include "sinai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "sinai/errors.hpp"
#include "sinai/theory.hpp"
#include "sinai/walker.hpp"

namespace sinai {

namespace {

ConcentrationRequest request_of(const ExperimentConfig& config) {
  return ConcentrationRequest{config.radii, config.betas, config.deltas, config.min_radius};
}

std::vector<double> report_values(const ConcentrationReport& rep) {
  std::vector<double> v;
  v.reserve(1 + rep.r_profile.size() + rep.y_values.size() + rep.z_values.size());
  v.push_back(static_cast<double>(rep.lstar) / static_cast<double>(rep.steps));
  for (const auto& [r, ratio] : rep.r_profile) v.push_back(ratio.to_double());
  for (const auto& [b, y] : rep.y_values) v.push_back(y.to_double());
  for (const auto& [d, z] : rep.z_values) v.push_back(static_cast<double>(z));
  return v;
}

ReplicaResult run_replica(const Environment& env, const ExperimentConfig& config,
                          const std::vector<std::uint64_t>& checkpoints, std::uint32_t replica) {
  ReplicaResult out;
  out.replica = replica;
  out.walk_seed = config.seed + replica;
  const ConcentrationRequest request = request_of(config);
  Walker walker(env);
  walker.reset(out.walk_seed);
  for (std::uint64_t c : checkpoints) {
    walker.advance(c - walker.steps());
    out.reports.push_back(concentration_report(walker.view(), request));
    out.values.push_back(report_values(out.reports.back()));
    if (out.running_max.empty()) {
      out.running_max.push_back(out.values.back());
      out.running_min.push_back(out.values.back());
    } else {
      auto hi = out.running_max.back();
      auto lo = out.running_min.back();
      for (std::size_t s = 0; s < hi.size(); ++s) {
        hi[s] = std::max(hi[s], out.values.back()[s]);
        lo[s] = std::min(lo[s], out.values.back()[s]);
      }
      out.running_max.push_back(std::move(hi));
      out.running_min.push_back(std::move(lo));
    }
  }
  return out;
}

double quantile(std::vector<double> sorted_values, double q) {
  if (sorted_values.empty()) return std::numeric_limits<double>::quiet_NaN();
  // nearest rank
  const auto n = sorted_values.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted_values[rank - 1];
}

/// Limits attached to each column: the valley's own invariant measure for
/// valley environments, the almost-sure constants for i.i.d. ones.
std::map<std::string, double> attach_theory(const Environment& env, const ExperimentConfig& config,
                                            const std::vector<std::string>& names) {
  std::map<std::string, double> theory;
  const std::size_t nr = config.radii.size();
  const std::size_t nb = config.betas.size();
  const std::size_t nd = config.deltas.size();
  switch (env.kind()) {
    case EnvironmentKind::ValleyTh1:
    case EnvironmentKind::ValleyTh2Plus:
    case EnvironmentKind::ValleyTh2Minus: {
      const ProbMeasure mu = valley_measure(env);
      const auto masses = mu.window_masses();
      theory[names[0]] = *std::max_element(masses.begin(), masses.end());
      for (std::size_t i = 0; i < nr; ++i) theory[names[1 + i]] = window_mass_sup(mu, config.radii[i]);
      for (std::size_t i = 0; i < nb; ++i) {
        const double beta = config.betas[i].to_double();
        if (beta >= 1.0) continue;
        for (std::uint64_t r = config.min_radius; r <= masses.size(); ++r) {
          if (window_mass_sup(mu, r) >= beta - 1e-12) {
            theory[names[1 + nr + i]] = static_cast<double>(r);
            break;
          }
        }
      }
      for (std::size_t i = 0; i < nd; ++i) {
        const double delta = config.deltas[i].to_double();
        theory[names[1 + nr + nb + i]] = static_cast<double>(
            std::count_if(masses.begin(), masses.end(), [&](double m) { return m >= delta; }));
      }
      break;
    }
    case EnvironmentKind::Iid: {
      const SupportExtremes ext = resolve_extremes(config.env);
      theory[names[0]] = single_site_limit(ext.alpha_bar, ext.A_bar);
      for (std::size_t i = 0; i < nr; ++i) theory[names[1 + i]] = window_mass_limit(config.radii[i], ext);
      for (std::size_t i = 0; i < nb; ++i) {
        theory[names[1 + nr + i]] = radius_limit(config.betas[i].to_double(), ext).to_double();
      }
      break;
    }
    case EnvironmentKind::Constant:
      break;
  }
  return theory;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SinaiError(ErrorCode::IoError, "cannot open " + path);
  out << content;
  if (!out) throw SinaiError(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace

SupportExtremes resolve_extremes(const EnvSpec& spec) {
  if (spec.alpha_min && spec.alpha_max) return SupportExtremes::from_bounds(*spec.alpha_min, *spec.alpha_max);
  if (spec.distribution) return validate_distribution(*spec.distribution);
  throw SinaiError(ErrorCode::InvalidArgument,
                   "environment needs --alpha-min/--alpha-max or a distribution");
}

Environment build_environment(const EnvSpec& spec, std::uint64_t env_seed,
                              const std::vector<Fraction>& deltas) {
  switch (spec.kind) {
    case EnvironmentKind::Iid:
      if (!spec.distribution) throw SinaiError(ErrorCode::InvalidArgument, "iid environment needs a distribution");
      return Environment::iid(*spec.distribution, env_seed);
    case EnvironmentKind::Constant:
      return Environment::constant(spec.constant);
    case EnvironmentKind::ValleyTh1:
      return Environment::valley_th1(resolve_extremes(spec));
    case EnvironmentKind::ValleyTh2Plus:
    case EnvironmentKind::ValleyTh2Minus: {
      const SupportExtremes ext = resolve_extremes(spec);
      const ValleySide side =
          spec.kind == EnvironmentKind::ValleyTh2Plus ? ValleySide::Plus : ValleySide::Minus;
      std::uint64_t g = 0;
      if (spec.plateau) {
        g = *spec.plateau;
      } else if (!deltas.empty()) {
        g = plateau_length(deltas.front().to_double(), ext, side);
      } else {
        throw SinaiError(ErrorCode::InvalidArgument, "plateau valley needs g or a delta");
      }
      return Environment::valley_th2(ext, g, side);
    }
  }
  throw SinaiError(ErrorCode::InvalidArgument, "unknown environment kind");
}

void ExperimentConfig::validate() const {
  if (first_checkpoint < 1) throw SinaiError(ErrorCode::InvalidArgument, "first checkpoint must be >= 1");
  if (!(checkpoint_ratio > 1.0)) throw SinaiError(ErrorCode::InvalidArgument, "checkpoint ratio must be > 1");
  if (replicas < 1) throw SinaiError(ErrorCode::InvalidArgument, "need at least one replica");
  for (const Fraction& b : betas) {
    if (b.num() > b.den()) throw SinaiError(ErrorCode::BadBeta, "beta " + b.to_string() + " not in [0,1]");
  }
  for (const Fraction& d : deltas) {
    if (d.num() == 0) throw SinaiError(ErrorCode::BadDelta, "delta must be positive");
  }
}

std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t steps, std::uint64_t first, double ratio) {
  std::vector<std::uint64_t> out;
  if (steps == 0) return out;
  for (double c = static_cast<double>(first); c < static_cast<double>(steps); c *= ratio) {
    const auto step = static_cast<std::uint64_t>(std::floor(c));
    if (step >= 1 && (out.empty() || step > out.back())) out.push_back(step);
  }
  out.push_back(steps);
  return out;
}

std::vector<std::string> statistic_names(const ConcentrationRequest& request) {
  std::vector<std::string> names{"lstar_over_n"};
  for (std::uint64_t r : request.radii) names.push_back("R_" + std::to_string(r));
  for (const Fraction& b : request.betas) names.push_back("Y_" + b.to_string());
  for (const Fraction& d : request.deltas) names.push_back("Z_" + d.to_string());
  return names;
}

AggregateResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Environment env = build_environment(config.env, config.env_seed.value_or(config.seed), config.deltas);

  AggregateResult result;
  result.environment = env.description();
  result.statistics = statistic_names(request_of(config));
  result.checkpoints = checkpoint_schedule(config.steps, config.first_checkpoint, config.checkpoint_ratio);
  result.theory = attach_theory(env, config, result.statistics);
  if (result.checkpoints.empty()) return result;

  result.replicas.resize(config.replicas);
  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, config.replicas);

  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::uint32_t i = next++; i < config.replicas; i = next++) {
      try {
        result.replicas[i] = run_replica(env, config, result.checkpoints, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t s = 0; s < result.statistics.size(); ++s) {
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
      std::vector<double> values;
      double sum = 0.0;
      double sum_max = 0.0;
      double sum_min = 0.0;
      for (const auto& rep : result.replicas) {
        values.push_back(rep.values[c][s]);
        sum += rep.values[c][s];
        sum_max += rep.running_max[c][s];
        sum_min += rep.running_min[c][s];
      }
      std::sort(values.begin(), values.end());
      const double n = static_cast<double>(values.size());
      SummaryRow row;
      row.statistic = result.statistics[s];
      row.step = result.checkpoints[c];
      row.mean = sum / n;
      row.q10 = quantile(values, 0.10);
      row.median = quantile(values, 0.50);
      row.q90 = quantile(values, 0.90);
      row.mean_running_max = sum_max / n;
      row.mean_running_min = sum_min / n;
      if (auto it = result.theory.find(row.statistic); it != result.theory.end()) row.theory = it->second;
      result.summary.push_back(std::move(row));
    }
  }
  return result;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string to_csv(const AggregateResult& result) {
  std::ostringstream out;
  out << "replica,step";
  for (const auto& name : result.statistics) out << ',' << name;
  out << '\n';
  for (const auto& rep : result.replicas) {
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
      out << rep.replica << ',' << result.checkpoints[c];
      for (double v : rep.values[c]) out << ',' << format_number(v);
      out << '\n';
    }
  }
  return out.str();
}

std::string to_summary_csv(const AggregateResult& result) {
  std::ostringstream out;
  out << "statistic,step,mean,q10,median,q90,limsup_proxy_running_max_mean,"
         "liminf_proxy_running_min_mean,theory\n";
  for (const auto& row : result.summary) {
    out << row.statistic << ',' << row.step << ',' << format_number(row.mean) << ','
        << format_number(row.q10) << ',' << format_number(row.median) << ',' << format_number(row.q90)
        << ',' << format_number(row.mean_running_max) << ',' << format_number(row.mean_running_min)
        << ',' << (row.theory ? format_number(*row.theory) : std::string()) << '\n';
  }
  return out.str();
}

std::string to_svg(const AggregateResult& result, const std::string& statistic) {
  const auto it = std::find(result.statistics.begin(), result.statistics.end(), statistic);
  if (it == result.statistics.end()) {
    throw SinaiError(ErrorCode::UnknownStatistic, "no column named '" + statistic + "'");
  }
  const auto s = static_cast<std::size_t>(it - result.statistics.begin());
  const std::optional<double> theory =
      result.theory.count(statistic) ? std::optional<double>(result.theory.at(statistic)) : std::nullopt;

  constexpr double kWidth = 640, kHeight = 400, kLeft = 60, kRight = 20, kTop = 30, kBottom = 50;
  double xmin = 0, xmax = 1, ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  if (!result.checkpoints.empty()) {
    xmin = std::log10(static_cast<double>(result.checkpoints.front()));
    xmax = std::log10(static_cast<double>(result.checkpoints.back()));
  }
  if (xmax <= xmin) xmax = xmin + 1;
  for (const auto& rep : result.replicas) {
    for (const auto& row : rep.values) {
      if (std::isfinite(row[s])) {
        ymin = std::min(ymin, row[s]);
        ymax = std::max(ymax, row[s]);
      }
    }
  }
  if (theory && std::isfinite(*theory)) {
    ymin = std::min(ymin, *theory);
    ymax = std::max(ymax, *theory);
  }
  if (!std::isfinite(ymin)) {
    ymin = 0;
    ymax = 1;
  }
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight); };
  const auto py = [&](double y) { return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << statistic
      << " vs log10(step)</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kHeight - kBottom + 18 << "\" font-size=\"11\">"
      << format_number(xmin) << "</text>\n";
  out << "<text x=\"" << kWidth - kRight << "\" y=\"" << kHeight - kBottom + 18
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_number(xmax) << "</text>\n";
  out << "<text x=\"" << kLeft - 4 << "\" y=\"" << py(ymin) << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_number(ymin) << "</text>\n";
  out << "<text x=\"" << kLeft - 4 << "\" y=\"" << py(ymax) << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_number(ymax) << "</text>\n";
  if (theory && std::isfinite(*theory)) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << py(*theory) << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << py(*theory) << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (const auto& rep : result.replicas) {
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.6\" points=\"";
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
      const double y = rep.values[c][s];
      if (!std::isfinite(y)) continue;
      out << format_number(px(std::log10(static_cast<double>(result.checkpoints[c])))) << ','
          << format_number(py(y)) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_csv(const AggregateResult& result, const std::string& path) { write_file(path, to_csv(result)); }

void emit_summary_csv(const AggregateResult& result, const std::string& path) {
  write_file(path, to_summary_csv(result));
}

void emit_svg(const AggregateResult& result, const std::string& statistic, const std::string& path) {
  write_file(path, to_svg(result, statistic));
}

}  // namespace sinai
