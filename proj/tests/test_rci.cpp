#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "platoon/rci.hpp"
#include "platoon/set_calculus.hpp"
#include "platoon/verification.hpp"

using namespace platoon;
using platoon::testing::example_spec;

namespace {

LinearSystem double_integrator() {
  LinearSystem s;
  s.A = (Mat(2, 2) << 1, 1, 0, 1).finished();
  s.B = (Mat(2, 1) << 0.5, 1).finished();
  s.E = Mat::Identity(2, 2);
  return s;
}

Polyhedron box_set(const Box& b) {
  const int n = b.dim();
  Polyhedron P;
  P.H.resize(2 * n, n);
  P.h.resize(2 * n);
  P.H << Mat::Identity(n, n), -Mat::Identity(n, n);
  P.h << b.upper, -b.lower;
  return P;
}

SynthesisResult synth(const PlatoonSpec& spec, const RciOptions& o = {}) {
  return synthesize_rci(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                        build_disturbance_box(spec), o);
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST(Xi, Blocks) {
  const LinearSystem s = build_platoon_system(example_spec(1, 5.0));
  const int n = 3, m = 2, kappa = 4;
  EXPECT_EQ(build_xi(s.A, s.B, 0, kappa), Mat::Zero(n, kappa * m));
  Mat xi1 = Mat::Zero(n, kappa * m);
  xi1.leftCols(m) = s.B;
  EXPECT_EQ(build_xi(s.A, s.B, 1, kappa), xi1);
  Mat xi2 = Mat::Zero(n, kappa * m);
  xi2.leftCols(m) = s.A * s.B;
  xi2.middleCols(m, m) = s.B;
  EXPECT_TRUE(build_xi(s.A, s.B, 2, kappa).isApprox(xi2));
}

// A (A^i + xi_i M) + B M_i = A^{i+1} + xi_{i+1} M for arbitrary M.
TEST(Xi, RecurrenceOnRandomGains) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  const LinearSystem s = build_platoon_system(example_spec(2, 10.0));
  const int n = s.state_dim(), m = s.input_dim(), kappa = 6;
  Mat M(kappa * m, n);
  for (auto& x : M.reshaped()) x = g(rng);
  Mat Ai = Mat::Identity(n, n);
  for (int i = 0; i < kappa; ++i) {
    const Mat lhs = s.A * (Ai + build_xi(s.A, s.B, i, kappa) * M) + s.B * M.middleRows(i * m, m);
    const Mat rhs = s.A * Ai + build_xi(s.A, s.B, i + 1, kappa) * M;
    EXPECT_LE(max_abs(lhs - rhs), 1e-10);
    Ai = s.A * Ai;
  }
}

TEST(Controllability, Indices) {
  const LinearSystem di = double_integrator();
  EXPECT_EQ(controllability_index(di.A, di.B), 2);
  const LinearSystem p1 = build_platoon_system(example_spec(1, 5.0));
  EXPECT_EQ(controllability_index(p1.A, p1.B), 2);
  EXPECT_EQ(controllability_index(Mat::Identity(2, 2), (Mat(2, 1) << 1, 0).finished()), -1);

  RciOptions o;
  o.kappa = 2;
  EXPECT_THROW(assemble_rci_lp(di, box_set(Box::symmetric(Vec::Ones(2))), Box::symmetric(Vec::Ones(1)),
                               Box::symmetric(Vec::Ones(2)), o),
               SpecError);
  o.kappa = 3;
  o.alpha = 1.0;
  EXPECT_THROW(assemble_rci_lp(di, box_set(Box::symmetric(Vec::Ones(2))), Box::symmetric(Vec::Ones(1)),
                               Box::symmetric(Vec::Ones(2)), o),
               SpecError);
}

// Counts from the assembly rules for N = 2, kappa = 10, alpha = 0:
//   offsets 5 + 3, gains 10*3*5, lifted Phi_1..Phi_9 9*25;
//   4 safe-set directions (x1, x1 - x2, x2, v0) x 9 nonconstant Phi_i x 6 channels;
//   input bounds 3 x 10 x 6; each |.| variable has two rows.
TEST(RciLp, SizesForTwoFollowers) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.2);
  const RciLp lp = assemble_rci_lp(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                                   build_disturbance_box(spec));
  const int state_abs = 4 * 9 * 6, input_abs = 3 * 10 * 6;
  EXPECT_EQ(lp.layout.counts.directions, 4);
  EXPECT_EQ(lp.layout.counts.state_abs_vars, state_abs);
  EXPECT_EQ(lp.layout.counts.input_abs_vars, input_abs);
  EXPECT_EQ(lp.model.num_variables(), 5 + 3 + 150 + 225 + state_abs + input_abs);
  EXPECT_EQ(lp.model.num_rows(), 225 + 25 + 2 * (state_abs + input_abs) + 5 + 6 + 5);
}

TEST(Synthesis, ZeroDisturbanceGivesAPoint) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.0);
  const SynthesisResult r = synth(spec);
  ASSERT_TRUE(r.feasible()) << r.message;
  const Box bb = r.parameterization->bounding_box();
  EXPECT_LE(max_abs(bb.upper - bb.lower), 1e-12);
  EXPECT_TRUE(build_safe_set(spec).contains(r.parameterization->x_bar, 1e-9));
}

TEST(Synthesis, TwoFollowerExample) {
  const PlatoonSpec spec = example_spec(2, 10.0);
  const SynthesisResult ok = synth(spec.with_disturbance_scale(0.23));
  ASSERT_TRUE(ok.feasible()) << ok.message;
  const RciParameterization& p = *ok.parameterization;
  const IdentityResiduals res = check_identities(p, build_safe_set(spec), build_control_box(spec));
  EXPECT_LE(res.terminal, 1e-6);
  EXPECT_LE(res.recurrence, 1e-10);
  EXPECT_LE(res.offset, 1e-9);
  EXPECT_LE(res.state_containment, 1e-9);
  EXPECT_LE(res.input_containment, 1e-9);

  // Frozen regression values for this model: feasible through 0.33, infeasible from 0.34.
  EXPECT_TRUE(synth(spec.with_disturbance_scale(0.33)).feasible());
  EXPECT_EQ(synth(spec.with_disturbance_scale(0.34)).status, SynthesisStatus::Infeasible);
  EXPECT_EQ(synth(spec.with_disturbance_scale(0.6)).status, SynthesisStatus::Infeasible);
}

TEST(Synthesis, DoubleIntegratorRoomyInstanceIsInvariant) {
  const LinearSystem di = double_integrator();
  const SynthesisResult r = synthesize_rci(di, box_set(Box::symmetric(Vec::Constant(2, 100.0))),
                                           Box::symmetric(Vec::Constant(1, 100.0)),
                                           Box::symmetric(Vec::Constant(2, 0.01)));
  ASSERT_TRUE(r.feasible());
  VerificationOptions o;
  o.sample_count = 300;
  o.force_lp = true;
  const VerificationReport rep = verify_invariance(*r.parameterization, o);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.checks, 300 * 4);
}

TEST(Synthesis, RandomDecompositionsStayInSafeAndInputSets) {
  const PlatoonSpec spec = example_spec(3, 15.0).with_disturbance_scale(0.3);
  const SynthesisResult r = synth(spec);
  ASSERT_TRUE(r.feasible());
  const Polyhedron S = build_safe_set(spec);
  const Box U = build_control_box(spec);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 2000; ++k) {
    const Decomposition d = random_decomposition(*r.parameterization, rng);
    EXPECT_LE(S.max_violation(r.parameterization->state_of(d)), 1e-7);
    EXPECT_TRUE(U.contains(r.parameterization->input_of(d), 1e-7));
  }
}

TEST(Synthesis, MonotoneInDisturbanceScale) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.3);
  const SynthesisResult base = synth(spec);
  ASSERT_TRUE(base.feasible());
  const Polyhedron S = build_safe_set(spec);
  const Box U = build_control_box(spec);
  for (double lambda : {0.25, 0.5, 1.0}) {
    EXPECT_TRUE(synth(spec.with_disturbance_scale(lambda)).feasible()) << lambda;
    RciParameterization shrunk = *base.parameterization;
    shrunk.disturbance = shrunk.disturbance.scaled(lambda);
    shrunk.finalize();
    const IdentityResiduals res = check_identities(shrunk, S, U);
    EXPECT_LE(res.state_containment, 1e-9) << lambda;
    EXPECT_LE(res.input_containment, 1e-9) << lambda;
  }
}

TEST(Synthesis, ContractiveTerminalCondition) {
  const PlatoonSpec spec = example_spec(1, 5.0).with_disturbance_scale(0.15);
  RciOptions o;
  o.kappa = 6;
  o.alpha = 0.2;
  const SynthesisResult r = synth(spec, o);
  ASSERT_TRUE(r.feasible()) << r.message;
  const RciParameterization& p = *r.parameterization;
  EXPECT_LE(max_abs(p.terminal() * p.system.E - p.system.E * p.terminal_map), 1e-7);
  EXPECT_TRUE(box_in_scaled_box(p.terminal_map, p.disturbance, p.alpha + 1e-7, p.disturbance));
  VerificationOptions v;
  v.sample_count = 300;
  EXPECT_TRUE(verify_invariance(p, v).all_passed());
}

TEST(Synthesis, OffCenterDisturbanceIsRecentred) {
  PlatoonSpec spec = example_spec(1, 5.0).with_disturbance_scale(0.1);
  spec.disturbance_bounds[1].velocity = {-0.05, 0.15};
  const SynthesisResult r = synth(spec);
  ASSERT_TRUE(r.feasible()) << r.message;
  const RciParameterization& p = *r.parameterization;
  EXPECT_TRUE(p.disturbance.is_symmetric());
  EXPECT_NEAR(p.disturbance_center(3), 0.05, 1e-15);
  const IdentityResiduals res = check_identities(p, build_safe_set(spec), build_control_box(spec));
  EXPECT_LE(res.offset, 1e-9);
  VerificationOptions v;
  v.sample_count = 300;
  EXPECT_TRUE(verify_invariance(p, v).all_passed());
}

TEST(Membership, CenterWitnessAndOutside) {
  const PlatoonSpec spec = example_spec(2, 10.0).with_disturbance_scale(0.2);
  const SynthesisResult r = synth(spec);
  ASSERT_TRUE(r.feasible());
  const RciParameterization& p = *r.parameterization;
  EXPECT_TRUE(membership(p, p.x_bar));

  std::mt19937_64 rng(2);
  Decomposition d = random_decomposition(p, rng, 1.0);
  EXPECT_TRUE(membership(p, p.state_of(d)));

  Vec far = p.x_bar;
  far(0) += 50.0;
  EXPECT_FALSE(membership(p, far));
  EXPECT_THROW(membership(p, Vec::Zero(3)), SpecError);
}

TEST(Verification, ExampleParameterizationPasses) {
  const SynthesisResult r = synth(example_spec(2, 10.0).with_disturbance_scale(0.23));
  ASSERT_TRUE(r.feasible());
  const VerificationReport rep = verify_invariance(*r.parameterization);
  EXPECT_EQ(rep.samples, 1000);
  EXPECT_EQ(rep.checks, 1000 * 64);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_LE(rep.worst_residual, 1e-7);
}

TEST(Verification, CorruptedGainsAreCaught) {
  const SynthesisResult r = synth(example_spec(2, 10.0).with_disturbance_scale(0.23));
  ASSERT_TRUE(r.feasible());
  RciParameterization bad = *r.parameterization;
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 0.1);
  for (Mat& M : bad.M)
    for (auto& x : M.reshaped()) x += g(rng);
  bad.finalize();
  VerificationOptions o;
  o.sample_count = 100;
  const VerificationReport rep = verify_invariance(bad, o);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_GT(rep.failed + rep.controller_failures, 0);
}
