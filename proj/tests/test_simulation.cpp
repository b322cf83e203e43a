#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "platoon/simulation.hpp"

using namespace platoon;
using platoon::testing::example_spec;

namespace {

std::shared_ptr<const RciParameterization> anchored_param(const PlatoonSpec& spec) {
  RciOptions o;
  o.cost = CostProfile::anchored(nominal_state(spec));
  const SynthesisResult r = synthesize_rci(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                                           build_disturbance_box(spec), o);
  if (!r.feasible()) throw std::runtime_error("synthesis failed: " + r.message);
  return std::make_shared<const RciParameterization>(*r.parameterization);
}

bool is_vertex(const Box& W, const Vec& w) {
  for (int k = 0; k < W.dim(); ++k)
    if (w(k) != W.lower(k) && w(k) != W.upper(k)) return false;
  return true;
}

// Holds the input at zero and fails after a few steps.
class FlakyPolicy final : public Policy {
 public:
  explicit FlakyPolicy(int m) : m_(m) {}
  std::string descriptor() const override { return "flaky"; }
  bool accepts(const Vec&) override { return true; }
  PolicyOutput act(const Vec&) override {
    if (++calls_ > 3) return {Vec(), ControlStatus::SolverFailure, "gave up"};
    return {Vec::Zero(m_), ControlStatus::Ok, ""};
  }

 private:
  int m_;
  int calls_ = 0;
};

}  // namespace

TEST(Sampling, FullBiasGivesVertices) {
  std::mt19937_64 rng(41);
  const Box W = Box::symmetric(Vec::Ones(1));
  for (int k = 0; k < 1000; ++k) {
    const double w = sample_disturbance(W, 1.0, rng)(0);
    EXPECT_TRUE(w == -1.0 || w == 1.0);
  }
  EXPECT_THROW(sample_disturbance(W, 1.5, rng), SpecError);
}

TEST(Sampling, UnbiasedMeanIsTheCenter) {
  std::mt19937_64 rng(42);
  const Box W(Vec::Constant(1, -1.0), Vec::Constant(1, 3.0));
  const int n = 100000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec w = sample_disturbance(W, 0.0, rng);
    ASSERT_TRUE(W.contains(w));
    sum += w(0);
  }
  const double sigma = 4.0 / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(sum / n, 1.0, 3.0 * sigma);
}

// Binomial(1e5, 0.8): standard deviation of the fraction is 0.0013, so +-0.02 is > 15 sigma.
TEST(Sampling, VertexFractionFollowsTheBias) {
  std::mt19937_64 rng(43);
  const Box W((Vec(4) << -1, -2, 0, -0.5).finished(), (Vec(4) << 1, 2, 1, 0.25).finished());
  const int n = 100000;
  int vertices = 0;
  for (int k = 0; k < n; ++k) vertices += is_vertex(W, sample_disturbance(W, 0.8, rng));
  EXPECT_NEAR(static_cast<double>(vertices) / n, 0.8, 0.02);
}

TEST(Step, TrivialMotions) {
  const PlatoonSpec spec = example_spec(2, 10.0);
  const LinearSystem s = build_platoon_system(spec);
  Vec y = Vec::Zero(5);
  y(4) = 15.0;
  const Vec next = step(s, y, Vec::Zero(3), Vec::Zero(6));
  EXPECT_EQ(next, y);

  std::mt19937_64 rng(44);
  std::normal_distribution<double> g;
  platoon::testing::AbsolutePlatoon abs{Vec(3), Vec(3)};
  for (int i = 0; i < 3; ++i) {
    abs.p(i) = -5.0 * i + g(rng);
    abs.v(i) = 15.0 + g(rng);
  }
  const Vec u = (Vec(3) << g(rng), g(rng), g(rng)).finished();
  Vec w(6);
  for (auto& x : w) x = g(rng);
  const Vec y0 = abs.relative();
  abs.step(spec.dt, u, w);
  EXPECT_LE((step(s, y0, u, w) - abs.relative()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Monitor, Cases) {
  const PlatoonSpec spec = example_spec(2, 10.0);
  const SafetyReport nominal = monitor(spec, nominal_state(spec), Vec::Zero(3));
  EXPECT_FALSE(nominal.any_violation());
  EXPECT_GT(nominal.headway_margin, 0.0);
  EXPECT_GT(nominal.length_margin, 0.0);
  EXPECT_GT(nominal.speed_margin, 0.0);
  EXPECT_DOUBLE_EQ(nominal.actuator_margin, 3.0);

  Vec touching = nominal_state(spec);
  touching(0) = 4.5;
  const SafetyReport zero = monitor(spec, touching, Vec());
  EXPECT_DOUBLE_EQ(zero.headway_margin, 0.0);
  EXPECT_FALSE(zero.collision);
  EXPECT_TRUE(zero.zero_headway);

  Vec fast = nominal_state(spec);
  fast(4) = 17.1;
  const SafetyReport speeding = monitor(spec, fast, Vec());
  EXPECT_TRUE(speeding.speed_violation);
  EXPECT_NEAR(speeding.speed_margin, -0.1, 1e-12);

  Vec crash = nominal_state(spec);
  crash(2) = crash(0) + 4.0;
  EXPECT_TRUE(monitor(spec, crash, Vec()).collision);

  Vec longer = nominal_state(spec);
  longer(2) = 10.5;
  EXPECT_TRUE(monitor(spec, longer, Vec()).length_violation);

  EXPECT_TRUE(monitor(spec, nominal_state(spec), Vec::Constant(3, 3.5)).actuator_violation);
}

TEST(Simulation, CentralizedRunIsSafeAndWellFormed) {
  const PlatoonSpec spec = example_spec(3, 15.0).with_disturbance_scale(0.3);
  CentralizedPolicy policy(anchored_param(spec));
  const SimulationTrace t = run_simulation(policy, spec, nominal_state(spec), 60, 0.8, 5);
  ASSERT_TRUE(t.completed) << t.failure;
  EXPECT_EQ(t.records.size(), 61u);
  EXPECT_EQ(t.violation_count(), 0);
  EXPECT_GT(t.min_headway(), 0.0);
  const Box W = build_disturbance_box(spec);
  for (size_t k = 0; k + 1 < t.records.size(); ++k) {
    EXPECT_TRUE(W.contains(t.records[k].w));
    EXPECT_EQ(t.records[k].t, static_cast<int>(k));
  }
  EXPECT_EQ(t.records.back().u.size(), 0);
}

TEST(Simulation, DeterministicForAFixedSeed) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.3);
  const auto param = anchored_param(spec);
  auto render = [&](std::uint64_t seed) {
    CentralizedPolicy policy(param);
    std::ostringstream os;
    write_trace_csv(os, run_simulation(policy, spec, nominal_state(spec), 40, 0.8, seed));
    return os.str();
  };
  EXPECT_EQ(render(9), render(9));
  EXPECT_NE(render(9), render(10));
}

TEST(Simulation, NoDisturbanceMeansNoMotion) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.0);
  const auto param = anchored_param(spec);
  CentralizedPolicy policy(param);
  const SimulationTrace t = run_simulation(policy, spec, param->x_bar, 20, 0.8, 1);
  ASSERT_TRUE(t.completed);
  for (const auto& r : t.records) EXPECT_LE((r.y - param->x_bar).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Simulation, RejectsStartsOutsideTheSet) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.3);
  CentralizedPolicy policy(anchored_param(spec));
  Vec y0 = nominal_state(spec);
  y0(0) = 4.0;
  EXPECT_THROW(run_simulation(policy, spec, y0, 10, 0.8, 1), SpecError);
}

TEST(Simulation, ControllerFailureTruncatesTheTrace) {
  const PlatoonSpec spec = example_spec(2, 10.0);
  FlakyPolicy policy(3);
  const SimulationTrace t = run_simulation(policy, spec, nominal_state(spec), 10, 0.8, 1);
  EXPECT_FALSE(t.completed);
  EXPECT_EQ(t.records.size(), 4u);
  EXPECT_NE(t.failure.find("step 3"), std::string::npos);
}

TEST(Simulation, DistributedRunKeepsVehiclesInTheirEnvelopes) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.17);
  const DistributedSynthesis syn = synthesize_distributed(spec);
  ASSERT_TRUE(syn.feasible());
  auto policy = std::make_shared<const DistributedPolicy>(*syn.policy);
  DistributedPolicyRunner runner(policy);
  const SimulationTrace t = run_simulation(runner, spec, nominal_state(spec), 120, 0.8, 3);
  ASSERT_TRUE(t.completed) << t.failure;
  EXPECT_EQ(t.violation_count(), 0);
  const Box U = build_control_box(spec);
  for (const auto& r : t.records) {
    for (int i = 0; i < 2; ++i) EXPECT_TRUE(policy->envelopes[static_cast<size_t>(i)].contains(r.y(2 * i), 1e-7));
    if (r.u.size()) EXPECT_TRUE(U.contains(r.u, 1e-9));
  }
}

TEST(TraceOutput, CsvAndSummary) {
  const PlatoonSpec spec = example_spec(1, 5.0).with_disturbance_scale(0.2);
  CentralizedPolicy policy(anchored_param(spec));
  const SimulationTrace t = run_simulation(policy, spec, nominal_state(spec), 3, 0.8, 2);
  std::ostringstream os;
  write_trace_csv(os, t);
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header,
            "t,x1,v1,v0,u0,u1,w0x,w0v,w1x,w1v,h1,length,collision,length_violation,speed_violation,"
            "actuator_violation");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);

  const nlohmann::json j = trace_summary(t);
  EXPECT_EQ(j["records"], 4);
  EXPECT_EQ(j["seed"], 2);
  EXPECT_EQ(j["violations"]["total_steps_with_violation"], 0);
  EXPECT_TRUE(j["completed"].get<bool>());
}
