#include "sinai/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sinai/errors.hpp"

namespace sinai {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SinaiError(ErrorCode::ParseError, e.what());
  }
}

template <typename T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SinaiError(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

Fraction fraction_from_json(const json& j) {
  if (j.is_string()) return Fraction::parse(j.get<std::string>());
  if (j.is_number_integer()) return Fraction(j.get<std::int64_t>(), 1);
  if (j.is_number()) {
    // Round-trip through the shortest decimal text so 0.9 becomes 9/10.
    return Fraction::parse(json(j.get<double>()).dump());
  }
  throw SinaiError(ErrorCode::ParseError, "expected a fraction, got " + j.dump());
}

std::vector<Fraction> fractions_from_json(const json& j) {
  std::vector<Fraction> out;
  if (!j.is_array()) throw SinaiError(ErrorCode::ParseError, "expected an array of fractions");
  for (const auto& item : j) out.push_back(fraction_from_json(item));
  return out;
}

EnvironmentDistribution distribution_from(const json& j) {
  EnvironmentDistribution d;
  d.support_points = get_field<std::vector<double>>(j, "points");
  d.weights = get_field<std::vector<double>>(j, "weights");
  return d;
}

EnvSpec env_spec_from(const json& j) {
  if (!j.is_object()) throw SinaiError(ErrorCode::ParseError, "environment spec must be an object");
  EnvSpec spec;
  const std::string kind = j.value("kind", std::string("iid"));
  if (j.contains("points")) spec.distribution = distribution_from(j);
  if (j.contains("alpha_min")) spec.alpha_min = get_field<double>(j, "alpha_min");
  if (j.contains("alpha_max")) spec.alpha_max = get_field<double>(j, "alpha_max");
  if (kind == "iid") {
    spec.kind = EnvironmentKind::Iid;
    if (!spec.distribution) throw SinaiError(ErrorCode::ParseError, "iid spec needs points and weights");
  } else if (kind == "valley-th1") {
    spec.kind = EnvironmentKind::ValleyTh1;
  } else if (kind == "valley-th2" || kind == "valley-th2-plus" || kind == "valley-th2-minus") {
    std::string sign = kind == "valley-th2-minus" ? "minus" : "plus";
    if (j.contains("sign")) sign = get_field<std::string>(j, "sign");
    if (sign != "plus" && sign != "minus") throw SinaiError(ErrorCode::ParseError, "sign must be plus or minus");
    spec.kind = sign == "plus" ? EnvironmentKind::ValleyTh2Plus : EnvironmentKind::ValleyTh2Minus;
    if (j.contains("g")) spec.plateau = get_field<std::uint64_t>(j, "g");
  } else if (kind == "constant") {
    spec.kind = EnvironmentKind::Constant;
    spec.constant = j.value("p", 0.5);
  } else {
    throw SinaiError(ErrorCode::ParseError, "unknown environment kind '" + kind + "'");
  }
  return spec;
}

json env_spec_json(const EnvSpec& spec) {
  json j;
  switch (spec.kind) {
    case EnvironmentKind::Iid: j["kind"] = "iid"; break;
    case EnvironmentKind::ValleyTh1: j["kind"] = "valley-th1"; break;
    case EnvironmentKind::ValleyTh2Plus:
    case EnvironmentKind::ValleyTh2Minus:
      j["kind"] = "valley-th2";
      j["sign"] = spec.kind == EnvironmentKind::ValleyTh2Plus ? "plus" : "minus";
      if (spec.plateau) j["g"] = *spec.plateau;
      break;
    case EnvironmentKind::Constant:
      j["kind"] = "constant";
      j["p"] = spec.constant;
      break;
  }
  if (spec.distribution) {
    j["points"] = spec.distribution->support_points;
    j["weights"] = spec.distribution->weights;
  }
  if (spec.alpha_min) j["alpha_min"] = *spec.alpha_min;
  if (spec.alpha_max) j["alpha_max"] = *spec.alpha_max;
  return j;
}

json fractions_json(const std::vector<Fraction>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back(f.to_string());
  return a;
}

}  // namespace

EnvironmentDistribution parse_distribution_json(std::string_view text) {
  return distribution_from(parse_json(text));
}

std::string distribution_to_json(const EnvironmentDistribution& dist) {
  return json{{"points", dist.support_points}, {"weights", dist.weights}}.dump();
}

EnvSpec parse_env_spec_json(std::string_view text) { return env_spec_from(parse_json(text)); }

std::string env_spec_to_json(const EnvSpec& spec) { return env_spec_json(spec).dump(); }

ExperimentConfig parse_config_json(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw SinaiError(ErrorCode::ParseError, "config must be a JSON object");
  ExperimentConfig c;
  if (j.contains("env")) c.env = env_spec_from(j.at("env"));
  if (j.contains("alpha_min")) c.env.alpha_min = get_field<double>(j, "alpha_min");
  if (j.contains("alpha_max")) c.env.alpha_max = get_field<double>(j, "alpha_max");
  if (j.contains("steps")) c.steps = get_field<std::uint64_t>(j, "steps");
  if (j.contains("first_checkpoint")) c.first_checkpoint = get_field<std::uint64_t>(j, "first_checkpoint");
  if (j.contains("checkpoint_ratio")) c.checkpoint_ratio = get_field<double>(j, "checkpoint_ratio");
  if (j.contains("replicas")) c.replicas = get_field<std::uint32_t>(j, "replicas");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("env_seed")) c.env_seed = get_field<std::uint64_t>(j, "env_seed");
  if (j.contains("betas")) c.betas = fractions_from_json(j.at("betas"));
  if (j.contains("deltas")) c.deltas = fractions_from_json(j.at("deltas"));
  if (j.contains("radii")) c.radii = get_field<std::vector<std::uint64_t>>(j, "radii");
  if (j.contains("min_radius")) c.min_radius = get_field<std::uint64_t>(j, "min_radius");
  if (j.contains("threads")) c.threads = get_field<unsigned>(j, "threads");
  if (j.contains("csv_path")) c.csv_path = get_field<std::string>(j, "csv_path");
  if (j.contains("summary_path")) c.summary_path = get_field<std::string>(j, "summary_path");
  if (j.contains("svg_path")) c.svg_path = get_field<std::string>(j, "svg_path");
  if (j.contains("svg_statistic")) c.svg_statistic = get_field<std::string>(j, "svg_statistic");
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j{{"env", env_spec_json(c.env)},
         {"steps", c.steps},
         {"first_checkpoint", c.first_checkpoint},
         {"checkpoint_ratio", c.checkpoint_ratio},
         {"replicas", c.replicas},
         {"seed", c.seed},
         {"betas", fractions_json(c.betas)},
         {"deltas", fractions_json(c.deltas)},
         {"radii", c.radii},
         {"min_radius", c.min_radius},
         {"threads", c.threads}};
  if (c.env_seed) j["env_seed"] = *c.env_seed;
  if (!c.csv_path.empty()) j["csv_path"] = c.csv_path;
  if (!c.summary_path.empty()) j["summary_path"] = c.summary_path;
  if (!c.svg_path.empty()) j["svg_path"] = c.svg_path;
  if (!c.svg_statistic.empty()) j["svg_statistic"] = c.svg_statistic;
  return j.dump(2);
}

std::string theory_report_to_json(const TheoryReport& r) {
  json j;
  j["alpha_min"] = r.extremes.alpha_bar;
  j["alpha_max"] = r.extremes.A_bar;
  j["alpha_tilde"] = r.extremes.alpha_tilde;
  j["A_tilde"] = r.extremes.A_tilde;
  j["c1"] = r.c1;
  j["g_profile"] = json::array();
  for (std::size_t i = 0; i < r.g_profile.size(); ++i) {
    j["g_profile"].push_back(
        {{"r", r.g_profile[i].first}, {"g", r.g_profile[i].second}, {"center", r.centers[i].second}});
  }
  j["f_beta"] = json::array();
  for (std::size_t i = 0; i < r.f_beta.size(); ++i) {
    const auto& [b, f] = r.f_beta[i];
    json e{{"beta", b.to_string()}};
    e["f_beta"] = f.is_finite() ? json(f.value()) : json("inf");
    const auto& simple = r.f_simplified[i].second;
    e["f_simplified"] = simple ? json(*simple) : json(nullptr);
    j["f_beta"].push_back(e);
  }
  j["slope"] = r.slope ? json(*r.slope) : json(nullptr);
  j["deltas"] = json::array();
  for (const auto& d : r.deltas) {
    json e{{"delta", d.delta.to_string()}};
    e["g_delta_plus"] = d.g_plus ? json(*d.g_plus) : json(nullptr);
    e["g_delta_minus"] = d.g_minus ? json(*d.g_minus) : json(nullptr);
    e["z_lower"] = d.bounds ? json(d.bounds->lower) : json(nullptr);
    e["z_upper"] = d.bounds ? json(d.bounds->upper) : json(nullptr);
    j["deltas"].push_back(e);
  }
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SinaiError(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sinai
