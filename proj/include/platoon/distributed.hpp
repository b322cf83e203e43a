#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "platoon/controller.hpp"
#include "platoon/lambda_search.hpp"

namespace platoon {

/// Split of the per-vehicle control box into a leader interval for u_0 and
/// follower intervals for the relative inputs u~_i = u_0 - u_i.
struct ControlSplit {
  Interval leader;
  std::vector<Interval> followers;
};

/// Leader gets beta * U_0; follower i gets the largest [a, b] with
/// leader - [a, b] inside U_i, i.e. [b_l - u_i,max, a_l - u_i,min].
/// beta = 0 gives the leader nothing to do; beta must lie in [0, 1].
ControlSplit split_control_box(const Box& U, double beta);

/// Per-follower relative disturbance boxes (position, velocity) and the leader's velocity interval.
struct RelativeDisturbance {
  Interval leader;
  std::vector<Box> followers;
};

/// Exact bounding boxes of (w_0x - w_ix, w_0v - w_iv) for w in W.
RelativeDisturbance relative_disturbance_box(const Box& W);

/// Position envelopes [i l + (i-1) g, i l + i g] with g = (L - N l) / N.
/// Requires identical vehicle lengths and L > N l. A positive collision
/// margin raises every lower end by that margin.
std::vector<Interval> build_envelopes(const PlatoonSpec& spec);

LinearSystem follower_system(double dt);  // (x~_i, v~_i), input u~_i, disturbance identity
LinearSystem leader_system(double dt);    // v_0, input u_0

/// Safe set of one follower: its envelope, velocity left free.
Polyhedron follower_safe_set(const Interval& envelope);

struct DistributedPolicy {
  RciParameterization leader;
  std::vector<RciParameterization> followers;
  Interval leader_box;
  std::vector<Interval> follower_boxes;
  std::vector<Interval> envelopes;
  double beta = 0.5;
  bool shared_follower_synthesis = false;

  int n_followers() const { return static_cast<int>(followers.size()); }
};

struct DistributedOptions {
  double beta = 0.5;
  RciOptions rci;
  /// Synthesize one follower and translate it when all followers see identical boxes.
  bool share_identical_followers = true;
};

struct DistributedSynthesis {
  SynthesisStatus status = SynthesisStatus::SolverFailure;
  std::optional<DistributedPolicy> policy;
  int failed_vehicle = -1;  // 0 = leader, i = follower i
  std::string message;
  double seconds = 0.0;

  bool feasible() const { return status == SynthesisStatus::Feasible; }
};

DistributedSynthesis synthesize_distributed(const PlatoonSpec& spec, const DistributedOptions& options = {});

struct DistributedControlResult {
  Vec u;
  Vec relative_inputs;  // (u~_0, u~_1, ..., u~_N) with u~_0 = u_0
  ControlStatus status = ControlStatus::SolverFailure;
  int failed_vehicle = -1;
  std::string message;

  bool ok() const { return status == ControlStatus::Ok; }
};

/// One 1-D controller for the leader and one 2-D controller per follower.
class DistributedController {
 public:
  explicit DistributedController(std::shared_ptr<const DistributedPolicy> policy,
                                 EffortCost cost = EffortCost::Quadratic, double tol = 1e-7);
  DistributedControlResult compute(const Vec& y);
  bool contains(const Vec& y);
  const DistributedPolicy& policy() const { return *policy_; }

 private:
  std::shared_ptr<const DistributedPolicy> policy_;
  std::unique_ptr<CentralizedController> leader_;
  std::vector<std::unique_ptr<CentralizedController>> followers_;
  std::unique_ptr<MembershipOracle> leader_oracle_;
  std::vector<std::unique_ptr<MembershipOracle>> follower_oracles_;
};

DistributedControlResult distributed_control(const DistributedPolicy& policy, const Vec& y,
                                             EffortCost cost = EffortCost::Quadratic);

/// Largest lambda for which every per-vehicle synthesis is feasible.
LambdaSearchResult<DistributedPolicy> find_lambda_star_distributed(const PlatoonSpec& spec,
                                                                   const DistributedOptions& options = {},
                                                                   const LambdaSearchOptions& search = {});

struct DensityPoint {
  int n_followers = 1;
  double length_bound = 5.0;
  double density() const { return n_followers / length_bound; }
};

struct ComparisonRow {
  DensityPoint point;
  LambdaSearchResult<RciParameterization> centralized;
  LambdaSearchResult<DistributedPolicy> distributed;
};

/// Rebuilds `base` (leader entries from index 0, follower entries from index 1)
/// for N followers and length bound L.
PlatoonSpec resize_spec(const PlatoonSpec& base, int n_followers, double length_bound);

std::vector<ComparisonRow> compare_architectures(const PlatoonSpec& base, const std::vector<DensityPoint>& grid,
                                                 const DistributedOptions& options = {},
                                                 const LambdaSearchOptions& search = {});

/// CSV: rho,N,L,lambda_centralized,lambda_distributed
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

}  // namespace platoon
