#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "platoon/distributed.hpp"
#include "platoon/set_calculus.hpp"
#include "platoon/verification.hpp"

using namespace platoon;
using platoon::testing::example_spec;

namespace {

Box uniform_box(int n, double lo, double hi) { return Box(Vec::Constant(n, lo), Vec::Constant(n, hi)); }

bool fits(const Interval& leader, const Interval& follower, const Interval& u) {
  for (double a : {leader.lo, leader.hi})
    for (double b : {follower.lo, follower.hi})
      if (!u.contains(a - b, 1e-12)) return false;
  return true;
}

}  // namespace

TEST(Split, SymmetricHalving) {
  const ControlSplit s = split_control_box(uniform_box(4, -3, 3), 0.5);
  EXPECT_DOUBLE_EQ(s.leader.lo, -1.5);
  EXPECT_DOUBLE_EQ(s.leader.hi, 1.5);
  ASSERT_EQ(s.followers.size(), 3u);
  for (const Interval& f : s.followers) {
    EXPECT_DOUBLE_EQ(f.lo, -1.5);
    EXPECT_DOUBLE_EQ(f.hi, 1.5);
  }
}

TEST(Split, Extremes) {
  const ControlSplit full = split_control_box(uniform_box(2, -3, 3), 1.0);
  EXPECT_DOUBLE_EQ(full.followers[0].lo, 0.0);
  EXPECT_DOUBLE_EQ(full.followers[0].hi, 0.0);
  const ControlSplit none = split_control_box(uniform_box(2, -3, 3), 0.0);
  EXPECT_DOUBLE_EQ(none.leader.width(), 0.0);
  EXPECT_DOUBLE_EQ(none.followers[0].lo, -3.0);
  EXPECT_DOUBLE_EQ(none.followers[0].hi, 3.0);
  EXPECT_THROW(split_control_box(uniform_box(2, -3, 3), 1.5), SpecError);
  EXPECT_THROW(split_control_box(uniform_box(2, 1, 3), 0.5), SpecError);
}

// Leader [-1, 2] and follower [a, b] need [-1 - b, 2 - a] inside [-2, 4], so [a, b] = [-2, 1].
TEST(Split, AsymmetricBoxByEndpointExhaustion) {
  const ControlSplit s = split_control_box(uniform_box(2, -2, 4), 0.5);
  EXPECT_DOUBLE_EQ(s.leader.lo, -1.0);
  EXPECT_DOUBLE_EQ(s.leader.hi, 2.0);
  const Interval f = s.followers[0];
  EXPECT_DOUBLE_EQ(f.lo, -2.0);
  EXPECT_DOUBLE_EQ(f.hi, 1.0);
  const Interval u{-2, 4};
  EXPECT_TRUE(fits(s.leader, f, u));
  EXPECT_FALSE(fits(s.leader, {f.lo - 1e-6, f.hi}, u));
  EXPECT_FALSE(fits(s.leader, {f.lo, f.hi + 1e-6}, u));
}

TEST(Split, ReconstructedInputsStayAdmissible) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec lo(4), hi(4);
  lo << -3, -2, -4, -1;
  hi << 3, 5, 2, 1.5;
  const Box U(lo, hi);
  const ControlSplit s = split_control_box(U, 0.4);
  for (int k = 0; k < 1000; ++k) {
    const double u0 = s.leader.lo + unit(rng) * s.leader.width();
    Vec u(4);
    u(0) = u0;
    for (int i = 1; i < 4; ++i) {
      const Interval& f = s.followers[static_cast<size_t>(i - 1)];
      u(i) = u0 - (f.lo + unit(rng) * f.width());
    }
    EXPECT_TRUE(U.contains(u, 1e-12));
  }
}

TEST(RelativeDisturbance, ExampleRangesDouble) {
  const RelativeDisturbance r = relative_disturbance_box(build_disturbance_box(example_spec(3, 15.0)));
  EXPECT_DOUBLE_EQ(r.leader.lo, -1.0);
  EXPECT_DOUBLE_EQ(r.leader.hi, 1.0);
  ASSERT_EQ(r.followers.size(), 3u);
  for (const Box& b : r.followers) {
    EXPECT_DOUBLE_EQ(b.upper(0), 0.5);
    EXPECT_DOUBLE_EQ(b.lower(0), -0.5);
    EXPECT_DOUBLE_EQ(b.upper(1), 2.0);
    EXPECT_DOUBLE_EQ(b.lower(1), -2.0);
  }
}

TEST(RelativeDisturbance, QuietLeaderKeepsFollowerMagnitude) {
  PlatoonSpec spec = example_spec(2, 10.0);
  spec.disturbance_bounds[0] = {{0, 0}, {0, 0}};
  const RelativeDisturbance r = relative_disturbance_box(build_disturbance_box(spec));
  EXPECT_DOUBLE_EQ(r.leader.width(), 0.0);
  EXPECT_DOUBLE_EQ(r.followers[1].upper(0), 0.25);
  EXPECT_DOUBLE_EQ(r.followers[1].upper(1), 1.0);
}

TEST(RelativeDisturbance, MatchesVertexImageAndContainsSamples) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    Vec lo(6), hi(6);
    for (int k = 0; k < 6; ++k) {
      lo(k) = -std::abs(g(rng));
      hi(k) = std::abs(g(rng));
    }
    const Box W(lo, hi);
    const RelativeDisturbance r = relative_disturbance_box(W);
    for (int i = 1; i <= 2; ++i) {
      Mat T = Mat::Zero(2, 6);
      T(0, 0) = 1;
      T(1, 1) = 1;
      T(0, 2 * i) = -1;
      T(1, 2 * i + 1) = -1;
      const Box img = linear_image_bbox(T, W);
      Vec vlo = Vec::Constant(2, 1e300), vhi = Vec::Constant(2, -1e300);
      for (const Vec& v : enumerate_vertices(W)) {
        vlo = vlo.cwiseMin(T * v);
        vhi = vhi.cwiseMax(T * v);
      }
      const Box& f = r.followers[static_cast<size_t>(i - 1)];
      EXPECT_LE((f.lower - vlo).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((f.upper - vhi).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((img.lower - vlo).cwiseAbs().maxCoeff(), 1e-12);
      for (int s = 0; s < 50; ++s) EXPECT_TRUE(f.contains(T * platoon::testing::uniform_in(W, rng), 1e-12));
    }
  }
}

TEST(Envelopes, HandValues) {
  const auto two = build_envelopes(example_spec(2, 10.0));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_DOUBLE_EQ(two[0].lo, 4.5);
  EXPECT_DOUBLE_EQ(two[0].hi, 5.0);
  EXPECT_DOUBLE_EQ(two[1].lo, 9.5);
  EXPECT_DOUBLE_EQ(two[1].hi, 10.0);
  const auto one = build_envelopes(example_spec(1, 5.0));
  EXPECT_DOUBLE_EQ(one[0].lo, 4.5);
  EXPECT_DOUBLE_EQ(one[0].hi, 5.0);

  PlatoonSpec tight = example_spec(2, 10.0);
  tight.length_bound = 9.0 + 1e-9;
  tight.vehicle_lengths[2] = 4.5;
  EXPECT_NO_THROW(build_envelopes(tight));
  PlatoonSpec mixed = example_spec(2, 10.0);
  mixed.vehicle_lengths[1] = 4.0;
  EXPECT_THROW(build_envelopes(mixed), SpecError);
}

TEST(Envelopes, ProductLiesInSafeSet) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int N : {1, 3, 6}) {
    const PlatoonSpec spec = example_spec(N, 5.2 * N);
    const auto env = build_envelopes(spec);
    const Polyhedron S = build_safe_set(spec);
    for (size_t i = 1; i < env.size(); ++i) EXPECT_LE(env[i - 1].hi, env[i].lo);
    EXPECT_LE(env.back().hi, spec.length_bound + 1e-12);
    for (int k = 0; k < 500; ++k) {
      Vec y = Vec::Zero(2 * N + 1);
      for (int i = 0; i < N; ++i) y(2 * i) = env[static_cast<size_t>(i)].lo + unit(rng) * env[static_cast<size_t>(i)].width();
      y(2 * N) = 13.0 + 4.0 * unit(rng);
      EXPECT_LE(S.max_violation(y), 1e-12);
    }
  }
}

TEST(DistributedSynthesis, FeasibleBelowAndInfeasibleAbove) {
  const PlatoonSpec spec = example_spec(2, 10.0);
  const DistributedSynthesis ok = synthesize_distributed(spec.with_disturbance_scale(0.17));
  ASSERT_TRUE(ok.feasible()) << ok.message;
  EXPECT_EQ(ok.policy->n_followers(), 2);
  const DistributedSynthesis bad = synthesize_distributed(spec.with_disturbance_scale(0.5));
  EXPECT_EQ(bad.status, SynthesisStatus::Infeasible);
  EXPECT_GE(bad.failed_vehicle, 0);
  EXPECT_FALSE(bad.message.empty());
}

// Shared synthesis translates vehicle 1; independent syntheses must agree with it.
TEST(DistributedSynthesis, IdenticalFollowersAreTranslates) {
  const PlatoonSpec spec = example_spec(3, 15.0).with_disturbance_scale(0.15);
  const DistributedSynthesis shared = synthesize_distributed(spec);
  DistributedOptions o;
  o.share_identical_followers = false;
  const DistributedSynthesis separate = synthesize_distributed(spec, o);
  ASSERT_TRUE(shared.feasible());
  ASSERT_TRUE(separate.feasible());
  EXPECT_TRUE(shared.policy->shared_follower_synthesis);
  EXPECT_FALSE(separate.policy->shared_follower_synthesis);
  const auto env = build_envelopes(spec);
  for (int i = 1; i < 3; ++i) {
    const auto& a = shared.policy->followers[static_cast<size_t>(i)];
    const auto& b = separate.policy->followers[static_cast<size_t>(i)];
    const double shift = env[static_cast<size_t>(i)].lo - env[0].lo;
    EXPECT_NEAR(a.x_bar(0) - shared.policy->followers[0].x_bar(0), shift, 1e-12);
    for (size_t k = 0; k < a.M.size(); ++k) EXPECT_EQ(a.M[k], shared.policy->followers[0].M[k]);
    // The independently synthesized set is feasible on its own envelope and
    // has the same offset up to LP tie-breaking.
    const IdentityResiduals res = check_identities(b, follower_safe_set(env[static_cast<size_t>(i)]),
                                                   Box(Vec::Constant(1, -1.5), Vec::Constant(1, 1.5)));
    EXPECT_LE(res.state_containment, 1e-9);
    EXPECT_NEAR(b.x_bar(0), a.x_bar(0), 1e-6);
    const IdentityResiduals moved = check_identities(a, follower_safe_set(env[static_cast<size_t>(i)]),
                                                     Box(Vec::Constant(1, -1.5), Vec::Constant(1, 1.5)));
    EXPECT_LE(moved.state_containment, 1e-9);
  }
}

TEST(DistributedSynthesis, EveryBlockIsInvariant) {
  const DistributedSynthesis r = synthesize_distributed(example_spec(2, 10.0).with_disturbance_scale(0.17));
  ASSERT_TRUE(r.feasible());
  VerificationOptions v;
  v.sample_count = 500;
  EXPECT_TRUE(verify_invariance(r.policy->leader, v).all_passed());
  for (const auto& f : r.policy->followers) EXPECT_TRUE(verify_invariance(f, v).all_passed());
}

TEST(DistributedControl, CentersNeedNoEffortAndOutsideIsNamed) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.17);
  const DistributedSynthesis r = synthesize_distributed(spec);
  ASSERT_TRUE(r.feasible());
  const DistributedPolicy& p = *r.policy;
  Vec y(5);
  y << p.followers[0].x_bar, p.followers[1].x_bar, p.leader.x_bar;
  const DistributedControlResult c = distributed_control(p, y);
  ASSERT_TRUE(c.ok()) << c.message;
  EXPECT_LE(c.u.cwiseAbs().maxCoeff(), 1e-7);

  y(2) += 3.0;
  const DistributedControlResult out = distributed_control(p, y);
  EXPECT_EQ(out.status, ControlStatus::OutsideInvariantSet);
  EXPECT_EQ(out.failed_vehicle, 2);
}

TEST(DistributedControl, InputsComposeFromRelativeInputs) {
  const PlatoonSpec spec = example_spec(3, 15.0).with_disturbance_scale(0.15);
  const DistributedSynthesis r = synthesize_distributed(spec);
  ASSERT_TRUE(r.feasible());
  auto policy = std::make_shared<const DistributedPolicy>(*r.policy);
  DistributedController ctrl(policy);
  const Box U = build_control_box(spec);
  std::mt19937_64 rng(34);
  for (int k = 0; k < 100; ++k) {
    Vec y(7);
    for (int i = 0; i < 3; ++i) y.segment(2 * i, 2) = policy->followers[static_cast<size_t>(i)].state_of(
                                    random_decomposition(policy->followers[static_cast<size_t>(i)], rng));
    y(6) = policy->leader.state_of(random_decomposition(policy->leader, rng))(0);
    ASSERT_TRUE(ctrl.contains(y));
    const DistributedControlResult c = ctrl.compute(y);
    ASSERT_TRUE(c.ok()) << c.message;
    EXPECT_TRUE(U.contains(c.u, 1e-9));
    for (int i = 1; i <= 3; ++i) EXPECT_NEAR(c.u(i), c.relative_inputs(0) - c.relative_inputs(i), 1e-12);
  }
}

TEST(Compare, SingleCellReproducesBothPipelines) {
  const PlatoonSpec base = example_spec(1, 5.0);
  const auto rows = compare_architectures(base, {{1, 5.0}});
  ASSERT_EQ(rows.size(), 1u);
  const auto c = find_lambda_star(base);
  const auto d = find_lambda_star_distributed(base);
  EXPECT_DOUBLE_EQ(rows[0].centralized.lambda, c.lambda);
  EXPECT_DOUBLE_EQ(rows[0].distributed.lambda, d.lambda);
  EXPECT_LE(rows[0].distributed.lambda, rows[0].centralized.lambda);

  std::ostringstream os;
  write_comparison_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "rho,N,L,lambda_centralized,lambda_distributed");
}

TEST(Compare, ResizeKeepsVehicleProfiles) {
  PlatoonSpec base = example_spec(2, 10.0);
  base.control_bounds[0] = {-4, 4};
  const PlatoonSpec big = resize_spec(base, 5, 30.0);
  EXPECT_EQ(big.n_followers, 5);
  EXPECT_DOUBLE_EQ(big.length_bound, 30.0);
  EXPECT_EQ(big.vehicle_lengths.size(), 6u);
  EXPECT_DOUBLE_EQ(big.control_bounds[0].hi, 4.0);
  EXPECT_DOUBLE_EQ(big.control_bounds[5].hi, 3.0);
}
