#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "platoon/io.hpp"

using namespace platoon;
using nlohmann::json;
using platoon::testing::example_spec;

namespace {

json example_config() {
  return json::parse(R"({
    "platoon": {"followers": 2, "vehicle_length": 4.5, "length_bound": 10, "speed": [13, 17], "dt": 0.5,
                "control": [-3, 3], "disturbance": {"position": [-0.25, 0.25], "velocity": [-1, 1]}},
    "lambda": 0.2, "kappa": 8, "alpha": 0.1, "precision": 0.02, "beta": 0.4, "bias": 0.7, "seed": 99,
    "horizon": 30, "workers": 2, "architecture": "distributed", "effort": "l1",
    "n_list": [1, 2], "density_grid": [{"N": 2, "L": 10}], "initial_state": [4.75, 0, 9.75, 0, 15]
  })");
}

}  // namespace

TEST(Config, ParsesEveryField) {
  const ExperimentConfig c = parse_config(example_config());
  EXPECT_EQ(c.spec.n_followers, 2);
  EXPECT_DOUBLE_EQ(c.spec.length_bound, 10.0);
  EXPECT_DOUBLE_EQ(c.spec.disturbance_bounds[2].velocity.hi, 1.0);
  EXPECT_DOUBLE_EQ(c.spec.disturbance_bounds[2].position.lo, -0.25);
  EXPECT_DOUBLE_EQ(c.lambda, 0.2);
  EXPECT_EQ(c.kappa, 8);
  EXPECT_DOUBLE_EQ(c.alpha, 0.1);
  EXPECT_DOUBLE_EQ(c.precision, 0.02);
  EXPECT_DOUBLE_EQ(c.beta, 0.4);
  EXPECT_DOUBLE_EQ(c.bias, 0.7);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.horizon, 30);
  EXPECT_EQ(c.workers, 2);
  EXPECT_EQ(c.architecture, "distributed");
  EXPECT_EQ(c.effort, EffortCost::L1);
  EXPECT_EQ(c.n_list, (std::vector<int>{1, 2}));
  ASSERT_EQ(c.density_grid.size(), 1u);
  ASSERT_TRUE(c.initial_state.has_value());
  EXPECT_DOUBLE_EQ(c.scaled_spec().disturbance_bounds[0].velocity.hi, 0.2);
  EXPECT_EQ(c.rci_options().kappa, 8);
  EXPECT_DOUBLE_EQ(c.distributed_options().beta, 0.4);
  EXPECT_DOUBLE_EQ(c.search_options().precision, 0.02);
}

TEST(Config, Defaults) {
  json j = example_config();
  for (const char* k : {"lambda", "kappa", "alpha", "precision", "beta", "bias", "seed", "horizon", "workers",
                        "architecture", "effort", "n_list", "density_grid", "initial_state"})
    j.erase(k);
  const ExperimentConfig c = parse_config(j);
  EXPECT_EQ(c.kappa, 10);
  EXPECT_DOUBLE_EQ(c.alpha, 0.0);
  EXPECT_DOUBLE_EQ(c.precision, 0.01);
  EXPECT_DOUBLE_EQ(c.beta, 0.5);
  EXPECT_DOUBLE_EQ(c.bias, 0.8);
  EXPECT_EQ(c.horizon, 120);
  EXPECT_EQ(c.architecture, "centralized");
  EXPECT_EQ(c.effort, EffortCost::Quadratic);
}

TEST(Config, Rejections) {
  auto rejects = [](const std::function<void(json&)>& edit) {
    json j = example_config();
    edit(j);
    EXPECT_THROW(parse_config(j), ConfigError) << j.dump();
  };
  rejects([](json& j) { j.erase("platoon"); });
  rejects([](json& j) { j["alpha"] = 1.0; });
  rejects([](json& j) { j["kappa"] = "ten"; });
  rejects([](json& j) { j["bias"] = 1.2; });
  rejects([](json& j) { j["architecture"] = "hybrid"; });
  rejects([](json& j) { j["effort"] = "l2"; });
  rejects([](json& j) { j["platoon"]["length_bound"] = 9; });
  rejects([](json& j) { j["platoon"]["speed"] = {17, 13}; });
  rejects([](json& j) { j["platoon"]["disturbance"] = {{"position", {-1, 1}}}; });
  rejects([](json& j) { j["platoon"]["disturbance"]["velocity"] = {0.5, 0.5}; });
  rejects([](json& j) { j["platoon"].erase("control"); });
  rejects([](json& j) { j["density_grid"] = {{{"N", 2}}}; });
  EXPECT_THROW(parse_config(json::array()), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, SnapshotRoundTrip) {
  const ExperimentConfig c = parse_config(example_config());
  const ExperimentConfig back = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(*back.initial_state, *c.initial_state);
}

TEST(Serialization, HeterogeneousSpec) {
  PlatoonSpec spec = example_spec(2, 12.0);
  spec.vehicle_lengths = {4.0, 5.0, 4.5};
  spec.control_bounds[1] = {-2.0, 4.0};
  spec.disturbance_bounds[2].velocity = {-0.1, 0.3};
  spec.collision_margin = 0.05;
  const PlatoonSpec back = spec_from_json(to_json(spec));
  EXPECT_EQ(back.vehicle_lengths, spec.vehicle_lengths);
  EXPECT_DOUBLE_EQ(back.control_bounds[1].lo, -2.0);
  EXPECT_DOUBLE_EQ(back.disturbance_bounds[2].velocity.hi, 0.3);
  EXPECT_DOUBLE_EQ(back.collision_margin, 0.05);
}

TEST(Serialization, MatricesAreRowMajor) {
  const Mat m = (Mat(2, 3) << 1, 2, 3, 4, 5, 6).finished();
  const json j = matrix_to_json(m);
  EXPECT_EQ(j["rows"], 2);
  EXPECT_EQ(j["cols"], 3);
  EXPECT_EQ(j["data"], json({1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(matrix_from_json(j), m);
  json bad = j;
  bad["rows"] = 3;
  EXPECT_THROW(matrix_from_json(bad), ConfigError);
}

TEST(Serialization, ParameterizationIsExact) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.2);
  const SynthesisResult r = synthesize_rci(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                                           build_disturbance_box(spec));
  ASSERT_TRUE(r.feasible());
  const RciParameterization& p = *r.parameterization;
  const json j = to_json(p);
  EXPECT_EQ(j["format"], "platoon-rci");
  EXPECT_EQ(j["kappa"], 10);
  const RciParameterization back = parameterization_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.x_bar, p.x_bar);
  EXPECT_EQ(back.u_bar, p.u_bar);
  ASSERT_EQ(back.M.size(), p.M.size());
  for (size_t i = 0; i < p.M.size(); ++i) EXPECT_EQ(back.M[i], p.M[i]);
  EXPECT_EQ(back.system.A, p.system.A);
  EXPECT_EQ(back.state_generators.size(), p.state_generators.size());
  EXPECT_EQ(back.state_generators.back(), p.state_generators.back());

  json wrong = j;
  wrong["format"] = "other";
  EXPECT_THROW(parameterization_from_json(wrong), ConfigError);
  wrong = j;
  wrong["kappa"] = 9;
  EXPECT_THROW(parameterization_from_json(wrong), ConfigError);
}

TEST(Serialization, DistributedPolicy) {
  const DistributedSynthesis r = synthesize_distributed(example_spec(2, 10.0).with_disturbance_scale(0.15));
  ASSERT_TRUE(r.feasible());
  const json j = to_json(*r.policy);
  EXPECT_EQ(j["format"], "platoon-distributed");
  const DistributedPolicy back = distributed_policy_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.n_followers(), 2);
  EXPECT_EQ(back.leader.x_bar, r.policy->leader.x_bar);
  EXPECT_EQ(back.followers[1].x_bar, r.policy->followers[1].x_bar);
  EXPECT_DOUBLE_EQ(back.envelopes[1].lo, r.policy->envelopes[1].lo);
  EXPECT_DOUBLE_EQ(back.beta, r.policy->beta);
}
