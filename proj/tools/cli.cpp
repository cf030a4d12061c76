#include "cli.hpp"

#include <filesystem>
#include <sstream>

#include "CLI11.hpp"
#include "sinai/errors.hpp"
#include "sinai/harness.hpp"
#include "sinai/json_io.hpp"
#include "sinai/theory.hpp"
#include "sinai/verify.hpp"

namespace sinai::cli {

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string env;
  std::string dist;
  std::optional<double> alpha_min;
  std::optional<double> alpha_max;
  std::optional<std::uint64_t> plateau;
  std::vector<std::string> betas;
  std::vector<std::string> deltas;
  std::vector<std::uint64_t> radii;
};

struct SimOptions {
  std::string config;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> env_seed;
  std::optional<std::uint32_t> replicas;
  std::optional<double> ratio;
  std::optional<std::uint64_t> first_checkpoint;
  std::optional<std::uint64_t> min_radius;
  std::optional<unsigned> threads;
  std::string out;
  std::string svg;
};

void add_environment_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--env", o.env,
                  "iid | valley-th1 | valley-th2-plus | valley-th2-minus | constant, or a JSON spec");
  cmd->add_option("--dist", o.dist, "distribution JSON {\"points\":[...],\"weights\":[...]} or a file");
  cmd->add_option("--alpha-min", o.alpha_min, "lower support extreme");
  cmd->add_option("--alpha-max", o.alpha_max, "upper support extreme");
  cmd->add_option("--g", o.plateau, "plateau length for valley-th2");
}

void add_stat_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--beta", o.betas, "beta values, exact fractions allowed (9/10)")->delimiter(',');
  cmd->add_option("--delta", o.deltas, "delta values, exact fractions allowed (1/10)")->delimiter(',');
  cmd->add_option("--r", o.radii, "window radii")->delimiter(',');
}

void add_sim_flags(CLI::App* cmd, SimOptions& s) {
  cmd->add_option("--config", s.config, "JSON experiment config; flags override it");
  cmd->add_option("--steps", s.steps, "walk length n");
  cmd->add_option("--seed", s.seed, "base walk seed (replica i uses seed+i)");
  cmd->add_option("--env-seed", s.env_seed, "environment seed for iid environments");
  cmd->add_option("--replicas", s.replicas, "number of replicas");
  cmd->add_option("--checkpoint-ratio", s.ratio, "geometric checkpoint ratio (> 1)");
  cmd->add_option("--first-checkpoint", s.first_checkpoint, "first checkpoint step");
  cmd->add_option("--min-radius", s.min_radius, "smallest radius allowed in Y (0 or 1)");
  cmd->add_option("--threads", s.threads, "worker threads (0: all cores)");
  cmd->add_option("--out", s.out, "CSV output path (summary goes to <out>.summary.csv)");
  cmd->add_option("--svg", s.svg, "statistic to plot into <out>.<statistic>.svg");
}

std::string json_or_file(const std::string& value) {
  if (!value.empty() && value.front() == '{') return value;
  return read_text_file(value);
}

std::vector<Fraction> fractions(const std::vector<std::string>& items) {
  std::vector<Fraction> out;
  for (const auto& s : items) out.push_back(Fraction::parse(s));
  return out;
}

void apply_environment(const CommonOptions& o, EnvSpec& spec) {
  if (!o.dist.empty()) spec.distribution = parse_distribution_json(json_or_file(o.dist));
  if (!o.env.empty()) {
    if (o.env == "iid") {
      spec.kind = EnvironmentKind::Iid;
    } else if (o.env == "valley-th1") {
      spec.kind = EnvironmentKind::ValleyTh1;
    } else if (o.env == "valley-th2-plus" || o.env == "valley-th2") {
      spec.kind = EnvironmentKind::ValleyTh2Plus;
    } else if (o.env == "valley-th2-minus") {
      spec.kind = EnvironmentKind::ValleyTh2Minus;
    } else if (o.env == "constant") {
      spec.kind = EnvironmentKind::Constant;
    } else {
      EnvSpec parsed = parse_env_spec_json(json_or_file(o.env));
      if (!parsed.distribution) parsed.distribution = spec.distribution;
      if (!parsed.alpha_min) parsed.alpha_min = spec.alpha_min;
      if (!parsed.alpha_max) parsed.alpha_max = spec.alpha_max;
      if (!parsed.plateau) parsed.plateau = spec.plateau;
      spec = parsed;
    }
  } else if (!o.dist.empty()) {
    spec.kind = EnvironmentKind::Iid;
  }
  if (o.alpha_min) spec.alpha_min = o.alpha_min;
  if (o.alpha_max) spec.alpha_max = o.alpha_max;
  if (o.plateau) spec.plateau = o.plateau;
}

ExperimentConfig build_config(const CommonOptions& o, const SimOptions& s) {
  ExperimentConfig cfg;
  if (!s.config.empty()) cfg = parse_config_json(read_text_file(s.config));
  apply_environment(o, cfg.env);
  if (!o.betas.empty()) cfg.betas = fractions(o.betas);
  if (!o.deltas.empty()) cfg.deltas = fractions(o.deltas);
  if (!o.radii.empty()) cfg.radii = o.radii;
  if (s.steps) cfg.steps = *s.steps;
  if (s.seed) cfg.seed = *s.seed;
  if (s.env_seed) cfg.env_seed = s.env_seed;
  if (s.replicas) cfg.replicas = *s.replicas;
  if (s.ratio) cfg.checkpoint_ratio = *s.ratio;
  if (s.first_checkpoint) cfg.first_checkpoint = *s.first_checkpoint;
  if (s.min_radius) cfg.min_radius = *s.min_radius;
  if (s.threads) cfg.threads = *s.threads;
  if (!s.out.empty()) {
    cfg.csv_path = s.out;
    cfg.summary_path = s.out + ".summary.csv";
  }
  if (!s.svg.empty()) {
    cfg.svg_statistic = s.svg;
    std::string safe = s.svg;
    for (char& ch : safe) {
      if (ch == '/') ch = '_';
    }
    cfg.svg_path = (s.out.empty() ? std::string("sinai") : s.out) + "." + safe + ".svg";
  }
  return cfg;
}

void write_outputs(const AggregateResult& result, const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.csv_path.empty()) {
    emit_csv(result, cfg.csv_path);
    out << "wrote " << cfg.csv_path << '\n';
  } else {
    out << to_csv(result);
  }
  if (!cfg.summary_path.empty()) {
    emit_summary_csv(result, cfg.summary_path);
    out << "wrote " << cfg.summary_path << '\n';
  }
  if (!cfg.svg_path.empty()) {
    emit_svg(result, cfg.svg_statistic, cfg.svg_path);
    out << "wrote " << cfg.svg_path << '\n';
  }
}

int cmd_predict(const CommonOptions& o, const std::string& format, std::ostream& out) {
  EnvSpec spec;
  apply_environment(o, spec);
  const TheoryReport report = theory_report(resolve_extremes(spec), {o.radii, fractions(o.betas), fractions(o.deltas)});
  if (format == "text" || format == "both") out << to_text_table(report);
  if (format == "json" || format == "both") out << theory_report_to_json(report) << '\n';
  return 0;
}

int cmd_simulate(const CommonOptions& o, const SimOptions& s, std::ostream& out) {
  const ExperimentConfig cfg = build_config(o, s);
  const AggregateResult result = run_experiment(cfg);
  write_outputs(result, cfg, out);
  return 0;
}

int cmd_sweep(const CommonOptions& o, const SimOptions& s, const std::string& beta_range,
              const std::string& delta_range, std::ostream& out) {
  if (beta_range.empty() == delta_range.empty()) {
    throw CLI::ValidationError("sweep", "give exactly one of --beta or --delta ranges");
  }
  ExperimentConfig cfg = build_config(o, s);
  const SupportExtremes ext = resolve_extremes(cfg.env);
  const bool by_beta = !beta_range.empty();
  const auto points = parse_fraction_range(by_beta ? beta_range : delta_range);

  std::ostringstream csv;
  if (by_beta) {
    csv << "beta,f_beta,f_simplified" << (cfg.steps > 0 ? ",Y_mean_final" : "") << '\n';
  } else {
    csv << "delta,g_delta_plus,g_delta_minus,z_lower,z_upper" << (cfg.steps > 0 ? ",Z_mean_final" : "") << '\n';
  }
  for (const Fraction& p : points) {
    const TheoryReport rep = theory_report(ext, {{}, by_beta ? std::vector<Fraction>{p} : std::vector<Fraction>{},
                                                 by_beta ? std::vector<Fraction>{} : std::vector<Fraction>{p}});
    csv << p.to_string() << ',';
    if (by_beta) {
      const auto& simple = rep.f_simplified.front().second;
      csv << rep.f_beta.front().second.to_string() << ',' << (simple ? std::to_string(*simple) : "");
    } else {
      const auto& d = rep.deltas.front();
      csv << (d.g_plus ? std::to_string(*d.g_plus) : "") << ',' << (d.g_minus ? std::to_string(*d.g_minus) : "")
          << ',' << (d.bounds ? format_number(d.bounds->lower) : "") << ','
          << (d.bounds ? format_number(d.bounds->upper) : "");
    }
    if (cfg.steps > 0) {
      ExperimentConfig point = cfg;
      point.betas = by_beta ? std::vector<Fraction>{p} : std::vector<Fraction>{};
      point.deltas = by_beta ? std::vector<Fraction>{} : std::vector<Fraction>{p};
      point.radii.clear();
      point.csv_path.clear();
      point.summary_path.clear();
      point.svg_path.clear();
      const auto result = run_experiment(point);
      const auto& final_row = result.summary.back();  // last statistic, final checkpoint
      csv << ',' << format_number(final_row.mean);
    }
    csv << '\n';
  }
  if (!s.out.empty()) {
    std::ofstream f(s.out);
    if (!(f << csv.str())) throw SinaiError(ErrorCode::IoError, "cannot write " + s.out);
    out << "wrote " << s.out << '\n';
  } else {
    out << csv.str();
  }
  return 0;
}

int cmd_verify(std::uint64_t seed, std::uint64_t mc_replicas, std::ostream& out) {
  VerifyOptions opt;
  opt.seed = seed;
  opt.mc_replicas = mc_replicas;
  const auto results = run_invariant_suite(FormulaSet::library(), opt);
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.passed) out << ": " << r.detail;
    out << '\n';
  }
  const bool ok = all_passed(results);
  out << (ok ? "all invariants hold\n" : "invariant failures\n");
  return ok ? 0 : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and limit predictor for Sinai's walk local-time concentration", "sinai"};
  app.require_subcommand(1);

  CommonOptions predict_o;
  std::string format = "both";
  auto* predict = app.add_subcommand("predict", "closed-form limits for given extremes");
  add_environment_flags(predict, predict_o);
  add_stat_flags(predict, predict_o);
  predict->add_option("--format", format, "text | json | both")->check(CLI::IsMember({"text", "json", "both"}));

  CommonOptions sim_o;
  SimOptions sim_s;
  auto* simulate = app.add_subcommand("simulate", "run seeded replicas and write CSV/SVG");
  add_environment_flags(simulate, sim_o);
  add_stat_flags(simulate, sim_o);
  add_sim_flags(simulate, sim_s);

  CommonOptions sweep_o;
  SimOptions sweep_s;
  std::string beta_range;
  std::string delta_range;
  auto* sweep = app.add_subcommand("sweep", "tabulate limits (and optionally simulations) over a range");
  add_environment_flags(sweep, sweep_o);
  add_sim_flags(sweep, sweep_s);
  sweep->add_option("--beta", beta_range, "range a:b:step");
  sweep->add_option("--delta", delta_range, "range a:b:step");
  sweep->add_option("--r", sweep_o.radii, "unused; accepted for symmetry")->delimiter(',');

  std::uint64_t verify_seed = 20240601;
  std::uint64_t verify_reps = 200000;
  auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 1 on failure");
  verify->add_option("--seed", verify_seed, "seed for randomized checks");
  verify->add_option("--mc-replicas", verify_reps, "replicas for the Monte Carlo check");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*predict) return cmd_predict(predict_o, format, out);
    if (*simulate) return cmd_simulate(sim_o, sim_s, out);
    if (*sweep) return cmd_sweep(sweep_o, sweep_s, beta_range, delta_range, out);
    if (*verify) return cmd_verify(verify_seed, verify_reps, out);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SinaiError& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? kExitFailure : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sinai::cli
