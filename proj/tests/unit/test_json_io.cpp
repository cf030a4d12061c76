#include <gtest/gtest.h>

#include "sinai/errors.hpp"
#include "sinai/json_io.hpp"

using namespace sinai;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SinaiError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no SinaiError thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Json, DistributionRoundTrip) {
  const EnvironmentDistribution d{{0.2, 0.6}, {0.3, 0.7}};
  const auto back = parse_distribution_json(distribution_to_json(d));
  EXPECT_EQ(back.support_points, d.support_points);
  EXPECT_EQ(back.weights, d.weights);
}

TEST(Json, EnvSpecKinds) {
  EXPECT_EQ(parse_env_spec_json(R"({"kind":"valley-th1","alpha_min":0.25,"alpha_max":0.75})").kind,
            EnvironmentKind::ValleyTh1);
  const auto th2 = parse_env_spec_json(R"({"kind":"valley-th2","sign":"minus","g":4})");
  EXPECT_EQ(th2.kind, EnvironmentKind::ValleyTh2Minus);
  EXPECT_EQ(th2.plateau, 4U);
  EXPECT_EQ(parse_env_spec_json(R"({"kind":"valley-th2-plus"})").kind, EnvironmentKind::ValleyTh2Plus);
  const auto c = parse_env_spec_json(R"({"kind":"constant","p":0.3})");
  EXPECT_EQ(c.kind, EnvironmentKind::Constant);
  EXPECT_EQ(c.constant, 0.3);
  const auto iid = parse_env_spec_json(R"({"points":[0.25,0.75],"weights":[0.5,0.5]})");
  EXPECT_EQ(iid.kind, EnvironmentKind::Iid);
  ASSERT_TRUE(iid.distribution.has_value());
}

TEST(Json, EnvSpecRoundTrip) {
  EnvSpec s;
  s.kind = EnvironmentKind::ValleyTh2Plus;
  s.plateau = 8;
  s.alpha_min = 0.25;
  s.alpha_max = 0.75;
  const auto back = parse_env_spec_json(env_spec_to_json(s));
  EXPECT_EQ(back.kind, s.kind);
  EXPECT_EQ(back.plateau, s.plateau);
  EXPECT_EQ(back.alpha_min, s.alpha_min);
}

TEST(Json, ConfigRoundTripKeepsExactFractions) {
  const auto c = parse_config_json(R"({
    "env": {"kind": "valley-th1"}, "alpha_min": 0.25, "alpha_max": 0.75,
    "steps": 1000, "replicas": 3, "seed": 5, "betas": ["9/10", 0.5], "deltas": ["1/10"], "radii": [0, 2]
  })");
  EXPECT_EQ(c.betas, (std::vector<Fraction>{Fraction(9, 10), Fraction(1, 2)}));
  EXPECT_EQ(c.env.alpha_min, 0.25);
  const auto back = parse_config_json(config_to_json(c));
  EXPECT_EQ(back.betas, c.betas);
  EXPECT_EQ(back.deltas, c.deltas);
  EXPECT_EQ(back.radii, c.radii);
  EXPECT_EQ(back.steps, 1000U);
  EXPECT_EQ(back.replicas, 3U);
}

TEST(Json, MalformedInputIsAParseError) {
  EXPECT_EQ(code_of([] { parse_distribution_json("{"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_distribution_json(R"({"points":[0.5]})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_env_spec_json(R"({"kind":"mystery"})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_env_spec_json(R"({"kind":"valley-th2","sign":"up"})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_config_json(R"({"betas":"9/10"})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_config_json(R"({"steps":"many"})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { read_text_file("/nonexistent/file.json"); }), ErrorCode::IoError);
}

TEST(Json, TheoryReportHasEveryEntry) {
  const auto ext = SupportExtremes::from_bounds(0.25, 0.75);
  const auto json = theory_report_to_json(theory_report(ext, {{2}, {Fraction(9, 10)}, {Fraction(1, 10)}}));
  for (const char* key : {"c1", "g", "f_beta", "f_simplified", "slope", "9/10", "1/10"}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}
