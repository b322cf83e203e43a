#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace platoon;
using platoon::testing::example_spec;

TEST(PlatoonModel, SingleFollowerMatrices) {
  const LinearSystem s = build_platoon_system(example_spec(1, 5.0));
  Mat A(3, 3), B(3, 2), E(3, 4);
  A << 1, 0.5, 0, 0, 1, 0, 0, 0, 1;
  B << 0.125, -0.125, 0.5, -0.5, 0.5, 0;
  E << 1, 0, -1, 0, 0, 1, 0, -1, 0, 1, 0, 0;
  EXPECT_EQ(s.A, A);
  EXPECT_EQ(s.B, B);
  EXPECT_EQ(s.E, E);
}

TEST(PlatoonModel, BlockStructure) {
  const LinearSystem s = build_platoon_system(example_spec(3, 15.0));
  ASSERT_EQ(s.state_dim(), 7);
  ASSERT_EQ(s.input_dim(), 4);
  ASSERT_EQ(s.dist_dim(), 8);
  for (int i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(s.A(2 * i, 2 * i + 1), 0.5);
    EXPECT_DOUBLE_EQ(s.B(2 * i, 0), -s.B(2 * i, i + 1));
    EXPECT_DOUBLE_EQ(s.B(2 * i + 1, 0), -s.B(2 * i + 1, i + 1));
    EXPECT_NE(s.B(2 * i, 0), 0.0);
  }
  EXPECT_DOUBLE_EQ(s.A(6, 6), 1.0);
  EXPECT_DOUBLE_EQ(s.B(6, 0), 0.5);
  for (int j = 1; j < 4; ++j) EXPECT_DOUBLE_EQ(s.B(6, j), 0.0);
}

// Relative model against absolute-coordinate double integrators.
TEST(PlatoonModel, OneStepMatchesAbsoluteSimulation) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int N : {1, 2, 5}) {
    const PlatoonSpec spec = example_spec(N, 6.0 * N);
    const LinearSystem s = build_platoon_system(spec);
    for (int trial = 0; trial < 200; ++trial) {
      platoon::testing::AbsolutePlatoon abs{Vec(N + 1), Vec(N + 1)};
      for (int i = 0; i <= N; ++i) {
        abs.p(i) = -6.0 * i + g(rng);
        abs.v(i) = 15.0 + g(rng);
      }
      Vec u(N + 1), w(2 * N + 2);
      for (auto& x : u) x = g(rng);
      for (auto& x : w) x = g(rng);
      const Vec y = abs.relative();
      abs.step(spec.dt, u, w);
      const Vec expected = abs.relative();
      const Vec got = s.step(y, u, w);
      EXPECT_LE((got - expected).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + expected.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(PlatoonModel, RejectsInvalidSpecs) {
  PlatoonSpec s = example_spec(2, 10.0);
  s.dt = 0.0;
  EXPECT_THROW(build_platoon_system(s), SpecError);

  s = example_spec(2, 10.0);
  s.length_bound = 9.0;  // equals the physical minimum
  EXPECT_THROW(s.validate(), SpecError);

  PlatoonSpec z = PlatoonSpec::uniform(1, 0.0, 0.0, 13, 17, 0.5, {-3, 3}, {{-1, 1}, {-1, 1}});
  EXPECT_THROW(build_safe_set(z), SpecError);

  s = example_spec(2, 10.0);
  s.control_bounds[1] = {1.0, -1.0};
  EXPECT_THROW(build_control_box(s), SpecError);

  s = example_spec(2, 10.0);
  s.disturbance_bounds[0].position = {0.1, 0.3};  // excludes zero
  EXPECT_THROW(s.validate(), SpecError);

  s = example_spec(2, 10.0);
  s.vehicle_lengths.pop_back();
  EXPECT_THROW(build_platoon_system(s), SpecError);

  s = example_spec(2, 10.0);
  s.speed_min = 17.0;
  EXPECT_THROW(s.validate(), SpecError);
}

TEST(PlatoonModel, SafeSetTwoFollowers) {
  const Polyhedron S = build_safe_set(example_spec(2, 10.0));
  Mat H(5, 5);
  H << -1, 0, 0, 0, 0,  //
      1, 0, -1, 0, 0,   //
      0, 0, 1, 0, 0,    //
      0, 0, 0, 0, 1,    //
      0, 0, 0, 0, -1;
  Vec h(5);
  h << -4.5, -4.5, 10, 17, -13;
  EXPECT_EQ(S.H, H);
  EXPECT_EQ(S.h, h);

  // Triangle in (x1, x2): vertices (4.5, 9), (4.5, 10), (5.5, 10).
  auto at = [](double x1, double x2) {
    Vec y(5);
    y << x1, 0, x2, 0, 15;
    return y;
  };
  EXPECT_TRUE(S.contains(at(4.5, 9.0)));
  EXPECT_TRUE(S.contains(at(4.5, 10.0)));
  EXPECT_TRUE(S.contains(at(5.5, 10.0)));
  EXPECT_FALSE(S.contains(at(5.6, 10.0)));
  EXPECT_FALSE(S.contains(at(4.4, 9.5)));
  EXPECT_FALSE(S.contains(at(4.6, 10.1)));
}

TEST(PlatoonModel, EquallySpacedPointIsSafe) {
  const PlatoonSpec spec = example_spec(3, 30.0);
  const Polyhedron S = build_safe_set(spec);
  EXPECT_EQ(S.rows(), 6);
  Vec y(7);
  y << 7.5, 0, 15, 0, 22.5, 0, 15;
  EXPECT_TRUE(S.contains(y));
  EXPECT_TRUE(S.contains(nominal_state(spec)));
}

TEST(PlatoonModel, NominalStateInsideWheneverLengthAllows) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> len(2.0, 6.0), slack(0.01, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 1 + trial % 7;
    PlatoonSpec spec = example_spec(N, 100.0);
    double total = 0.0;
    for (int i = 0; i <= N; ++i) spec.vehicle_lengths[static_cast<size_t>(i)] = len(rng);
    for (int i = 0; i < N; ++i) total += spec.vehicle_lengths[static_cast<size_t>(i)];
    spec.length_bound = total + slack(rng);
    EXPECT_TRUE(build_safe_set(spec).contains(nominal_state(spec)));
  }
}

TEST(PlatoonModel, CollisionMarginTightensRows) {
  PlatoonSpec spec = example_spec(2, 10.0);
  spec.collision_margin = 0.1;
  const Polyhedron S = build_safe_set(spec);
  EXPECT_DOUBLE_EQ(S.h(0), -4.6);
  EXPECT_DOUBLE_EQ(S.h(1), -4.6);
}

TEST(PlatoonModel, Boxes) {
  const PlatoonSpec spec = example_spec(6, 30.0);
  const Box U = build_control_box(spec);
  ASSERT_EQ(U.dim(), 7);
  EXPECT_TRUE(U.lower.isApproxToConstant(-3.0));
  EXPECT_TRUE(U.upper.isApproxToConstant(3.0));

  const Box W = build_disturbance_box(spec);
  ASSERT_EQ(W.dim(), 14);
  for (int i = 0; i <= 6; ++i) {
    EXPECT_DOUBLE_EQ(W.upper(2 * i), 0.25);
    EXPECT_DOUBLE_EQ(W.upper(2 * i + 1), 1.0);
    EXPECT_DOUBLE_EQ(W.lower(2 * i), -0.25);
  }
}

TEST(PlatoonModel, DisturbanceScaling) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.5);
  const Box W = build_disturbance_box(spec);
  EXPECT_DOUBLE_EQ(W.upper(0), 0.125);
  EXPECT_DOUBLE_EQ(W.lower(1), -0.5);
  EXPECT_THROW(example_spec(2, 10.0).with_disturbance_scale(-1.0), SpecError);
}

TEST(PlatoonModel, Headways) {
  const PlatoonSpec spec = example_spec(2, 10.0);
  Vec y(5);
  y << 5.0, 0, 10.0, 0, 15;
  const Vec h = headways(spec, y);
  EXPECT_DOUBLE_EQ(h(0), 0.5);
  EXPECT_DOUBLE_EQ(h(1), 0.5);
}

TEST(Box, ViewsAndValidation) {
  Box b(Vec::Constant(2, -1.0), Vec::Constant(2, 3.0));
  EXPECT_EQ(b.center(), Vec::Constant(2, 1.0));
  EXPECT_EQ(b.half_width(), Vec::Constant(2, 2.0));
  EXPECT_FALSE(b.is_symmetric());
  EXPECT_TRUE(b.symmetric_part().is_symmetric());
  EXPECT_THROW(Box(Vec::Constant(2, 1.0), Vec::Constant(2, 0.0)), SpecError);
  EXPECT_THROW(Box(Vec::Constant(2, 1.0), Vec::Constant(3, 2.0)), SpecError);
}
