#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "platoon/distributed.hpp"

namespace platoon {

/// With probability `boundary_bias` a uniformly chosen vertex of W, otherwise uniform in W.
Vec sample_disturbance(const Box& W, double boundary_bias, std::mt19937_64& rng);

/// y+ = A y + B u + E w.
inline Vec step(const LinearSystem& system, const Vec& y, const Vec& u, const Vec& w) { return system.step(y, u, w); }

/// Monitor flags and margins (positive = inside). A headway of exactly zero
/// is not a collision but raises `zero_headway`.
struct SafetyReport {
  bool collision = false;
  bool length_violation = false;
  bool speed_violation = false;
  bool actuator_violation = false;
  bool zero_headway = false;
  Vec headways;
  double headway_margin = 0.0;   // min_i h_i
  double length_margin = 0.0;    // L - x~_N
  double speed_margin = 0.0;     // min(v_0 - v_min, v_max - v_0)
  double actuator_margin = 0.0;  // min distance of u to the bounds of U (+inf without input)

  bool any_violation() const { return collision || length_violation || speed_violation || actuator_violation; }
};

/// `u` may be empty, in which case actuator limits are not checked.
SafetyReport monitor(const PlatoonSpec& spec, const Vec& y, const Vec& u);

struct PolicyOutput {
  Vec u;
  ControlStatus status = ControlStatus::SolverFailure;
  std::string message;
};

/// Closed-loop control law acting on the full platoon state.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string descriptor() const = 0;
  virtual bool accepts(const Vec& y) = 0;
  virtual PolicyOutput act(const Vec& y) = 0;
};

class CentralizedPolicy final : public Policy {
 public:
  explicit CentralizedPolicy(std::shared_ptr<const RciParameterization> param, EffortCost cost = EffortCost::Quadratic,
                             double tol = 1e-7);
  std::string descriptor() const override;
  bool accepts(const Vec& y) override { return oracle_.contains(y); }
  PolicyOutput act(const Vec& y) override;

 private:
  CentralizedController controller_;
  MembershipOracle oracle_;
};

class DistributedPolicyRunner final : public Policy {
 public:
  explicit DistributedPolicyRunner(std::shared_ptr<const DistributedPolicy> policy,
                                   EffortCost cost = EffortCost::Quadratic, double tol = 1e-7);
  std::string descriptor() const override;
  bool accepts(const Vec& y) override { return controller_.contains(y); }
  PolicyOutput act(const Vec& y) override;

 private:
  DistributedController controller_;
};

/// One row of a trace. The final record carries the state only (u, w empty).
struct StepRecord {
  int t = 0;
  Vec y;
  Vec u;
  Vec w;
  SafetyReport safety;
};

struct SimulationTrace {
  std::vector<StepRecord> records;
  std::uint64_t seed = 0;
  double boundary_bias = 0.0;
  int horizon = 0;
  std::string policy;
  bool completed = false;
  std::string failure;  // controller failure that truncated the run

  int violation_count() const;
  double min_headway() const;
  double max_abs_input() const;
};

/// Simulates `horizon` steps from y0 with disturbances sampled from the
/// spec's disturbance box. Throws SpecError when y0 is not accepted by the policy.
SimulationTrace run_simulation(Policy& policy, const PlatoonSpec& spec, const Vec& y0, int horizon,
                               double boundary_bias, std::uint64_t seed);

/// Columns: t, x1, v1, ..., xN, vN, v0, u0..uN, w0x, w0v, ..., wNx, wNv,
/// h1..hN, length, collision, length_violation, speed_violation, actuator_violation.
void write_trace_csv(std::ostream& os, const SimulationTrace& trace);

nlohmann::json trace_summary(const SimulationTrace& trace);

}  // namespace platoon
