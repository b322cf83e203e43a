#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "platoon/lambda_search.hpp"
#include "platoon/verification.hpp"

using namespace platoon;
using platoon::testing::example_spec;

namespace {

// Synthetic feasibility boundary; the artifact is the probed lambda itself.
auto threshold_probe(double t, std::atomic<int>* calls = nullptr) {
  return [t, calls](double lambda) {
    if (calls) ++*calls;
    ProbeOutcome<double> out;
    out.status = lambda <= t ? SynthesisStatus::Feasible : SynthesisStatus::Infeasible;
    if (lambda <= t) out.value = lambda;
    return out;
  };
}

}  // namespace

TEST(GridBisection, FindsLargestFeasibleGridPoint) {
  for (double t : {0.005, 0.01, 0.17, 0.2349, 1.0, 3.33, 7.99}) {
    std::atomic<int> calls = 0;
    const auto r = grid_bisection<double>(threshold_probe(t, &calls), {});
    ASSERT_EQ(r.status, SearchStatus::Found) << t;
    const double expected = std::floor(t / 0.01 + 1e-9) * 0.01;
    EXPECT_NEAR(r.lambda, expected, 1e-12) << t;
    EXPECT_NEAR(r.lambda_above, expected + 0.01, 1e-12) << t;
    ASSERT_TRUE(r.value.has_value());
    EXPECT_NEAR(*r.value, r.lambda, 1e-12);
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_LE(calls.load(), 22) << t;  // ~log2(800) bracket + bisection steps
    EXPECT_EQ(static_cast<int>(r.probes.size()), calls.load());
  }
}

TEST(GridBisection, CapInfeasibleAndFailure) {
  const auto capped = grid_bisection<double>(threshold_probe(100.0), {});
  EXPECT_EQ(capped.status, SearchStatus::Capped);
  EXPECT_DOUBLE_EQ(capped.lambda, 8.0);

  const auto none = grid_bisection<double>(threshold_probe(-1.0), {});
  EXPECT_EQ(none.status, SearchStatus::Infeasible);
  EXPECT_DOUBLE_EQ(none.probes.back().lambda, 0.0);

  const auto failing = grid_bisection<double>(
      [](double lambda) {
        ProbeOutcome<double> out;
        out.status = lambda < 0.3 ? SynthesisStatus::Feasible
                     : lambda < 0.4 ? SynthesisStatus::SolverFailure
                                    : SynthesisStatus::Infeasible;
        return out;
      },
      {});
  EXPECT_EQ(failing.status, SearchStatus::Failure);
  EXPECT_FALSE(failing.ok());
  EXPECT_LE(failing.lambda, 0.3);
  EXPECT_GE(failing.lambda_above, 0.3);
  EXPECT_FALSE(failing.message.empty());
}

TEST(GridBisection, NonMonotoneProbesAreFlagged) {
  // Feasible at 0.08 and 0.16 but infeasible at 0.04. The speculative batch
  // probes past the bracket, and the inconsistency is reported.
  LambdaSearchOptions o;
  o.workers = 8;
  const auto r = grid_bisection<double>(
      [](double lambda) {
        ProbeOutcome<double> out;
        const bool ok = lambda < 0.035 || (lambda > 0.075 && lambda < 0.17);
        out.status = ok ? SynthesisStatus::Feasible : SynthesisStatus::Infeasible;
        return out;
      },
      o);
  EXPECT_NEAR(r.lambda, 0.03, 1e-12);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(GridBisection, WorkersGiveTheSameAnswer) {
  LambdaSearchOptions o;
  o.workers = 4;
  for (double t : {0.03, 0.42, 5.0}) {
    const auto serial = grid_bisection<double>(threshold_probe(t), {});
    const auto parallel = grid_bisection<double>(threshold_probe(t), o);
    EXPECT_EQ(parallel.status, serial.status);
    EXPECT_DOUBLE_EQ(parallel.lambda, serial.lambda);
  }
}

TEST(GridBisection, RejectsBadOptions) {
  LambdaSearchOptions o;
  o.precision = 0.0;
  EXPECT_THROW(grid_bisection<double>(threshold_probe(1.0), o), SpecError);
  o.precision = 0.1;
  o.lambda_cap = 0.01;
  EXPECT_THROW(grid_bisection<double>(threshold_probe(1.0), o), SpecError);
}

TEST(LambdaStar, ZeroNominalDisturbanceHitsTheCap) {
  const PlatoonSpec spec = example_spec(1, 5.0).with_disturbance_scale(0.0);
  const auto r = find_lambda_star(spec);
  EXPECT_EQ(r.status, SearchStatus::Capped);
  EXPECT_DOUBLE_EQ(r.lambda, 8.0);
}

// Frozen values for the channel assignment position +-0.25 m, velocity +-1 m/s.
TEST(LambdaStar, SmallPlatoonsRegression) {
  const auto one = find_lambda_star(example_spec(1, 5.0));
  ASSERT_EQ(one.status, SearchStatus::Found);
  EXPECT_NEAR(one.lambda, 0.24, 1e-12);
  const auto two = find_lambda_star(example_spec(2, 10.0));
  ASSERT_EQ(two.status, SearchStatus::Found);
  EXPECT_NEAR(two.lambda, 0.33, 1e-12);
  EXPECT_TRUE(two.warnings.empty());

  ASSERT_TRUE(two.value.has_value());
  VerificationOptions v;
  v.sample_count = 300;
  EXPECT_TRUE(verify_invariance(*two.value, v).all_passed());
}

TEST(LambdaStar, ProbeLog) {
  std::vector<LambdaProbe> probes{{0.01, SynthesisStatus::Feasible, 0.5, ""},
                                  {0.02, SynthesisStatus::Infeasible, 0.25, ""}};
  std::ostringstream os;
  write_probe_log(os, probes);
  EXPECT_EQ(os.str(), "lambda,status,seconds\n0.01,feasible,0.500000\n0.02,infeasible,0.250000\n");
}
