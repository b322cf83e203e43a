#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "platoon/controller.hpp"

using namespace platoon;
using platoon::testing::example_spec;

namespace {

std::shared_ptr<const RciParameterization> example_param(int N, double L, double lambda) {
  const PlatoonSpec spec = example_spec(N, L).with_disturbance_scale(lambda);
  const SynthesisResult r = synthesize_rci(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                                           build_disturbance_box(spec));
  if (!r.feasible()) throw std::runtime_error("synthesis failed: " + r.message);
  return std::make_shared<const RciParameterization>(*r.parameterization);
}

const EffortCost kCosts[] = {EffortCost::Quadratic, EffortCost::L1, EffortCost::Linf};

}  // namespace

TEST(Controller, CenterStateNeedsNoEffort) {
  const auto p = example_param(2, 10.0, 0.2);
  // The offset equilibrium forces u_bar = 0 for the platoon model.
  EXPECT_LE(p->u_bar.cwiseAbs().maxCoeff(), 1e-9);
  for (EffortCost c : kCosts) {
    const ControlResult r = centralized_control(*p, p->x_bar, c);
    ASSERT_TRUE(r.ok()) << to_string(c) << ": " << r.message;
    EXPECT_LE(r.u.cwiseAbs().maxCoeff(), 1e-7) << to_string(c);
  }
}

TEST(Controller, MembersAreAlwaysServedAndObjectiveMatchesEffort) {
  const auto p = example_param(2, 10.0, 0.25);
  const Box U = build_control_box(example_spec(2, 10.0));
  std::mt19937_64 rng(17);
  for (EffortCost c : kCosts) {
    CentralizedController ctrl(p, c);
    for (int k = 0; k < 200; ++k) {
      const Vec y = p->state_of(random_decomposition(*p, rng));
      const ControlResult r = ctrl.compute(y);
      ASSERT_TRUE(r.ok()) << to_string(c) << ": " << r.message;
      EXPECT_TRUE(U.contains(r.u, 1e-9));
      EXPECT_NEAR(r.objective_value, effort(c, r.u), 1e-8);
      EXPECT_LE((p->state_of(r.decomposition) - y).cwiseAbs().maxCoeff(), 1e-7);
      EXPECT_LE((p->input_of(r.decomposition) - r.u).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Controller, QuadraticBeatsOrTiesAnyWitness) {
  const auto p = example_param(1, 5.0, 0.2);
  std::mt19937_64 rng(18);
  CentralizedController ctrl(p, EffortCost::Quadratic);
  for (int k = 0; k < 100; ++k) {
    const Decomposition d = random_decomposition(*p, rng);
    const ControlResult r = ctrl.compute(p->state_of(d));
    ASSERT_TRUE(r.ok());
    EXPECT_LE(r.u.squaredNorm(), p->input_of(d).squaredNorm() + 1e-7);
  }
}

TEST(Controller, OutsideStatesAreReported) {
  const auto p = example_param(2, 10.0, 0.2);
  Vec y = p->x_bar;
  y(0) += 5.0;
  for (EffortCost c : kCosts) {
    const ControlResult r = centralized_control(*p, y, c);
    EXPECT_EQ(r.status, ControlStatus::OutsideInvariantSet) << to_string(c);
  }
}

TEST(Controller, EffortNames) {
  for (EffortCost c : kCosts) EXPECT_EQ(parse_effort_cost(to_string(c)), c);
  EXPECT_THROW(parse_effort_cost("l2"), SpecError);
  const Vec u = (Vec(3) << 1, -2, 0.5).finished();
  EXPECT_DOUBLE_EQ(effort(EffortCost::Quadratic, u), 5.25);
  EXPECT_DOUBLE_EQ(effort(EffortCost::L1, u), 3.5);
  EXPECT_DOUBLE_EQ(effort(EffortCost::Linf, u), 2.0);
}
