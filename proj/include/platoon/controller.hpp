#pragma once

#include <memory>
#include <string>

#include "platoon/rci.hpp"

namespace platoon {

enum class EffortCost { Quadratic, L1, Linf };
std::string to_string(EffortCost c);
EffortCost parse_effort_cost(const std::string& name);

enum class ControlStatus { Ok, OutsideInvariantSet, SolverFailure };
std::string to_string(ControlStatus s);

struct ControlResult {
  Vec u;
  Decomposition decomposition;
  double objective_value = 0.0;  // ||u||^2, ||u||_1 or ||u||_inf of the returned u
  ControlStatus status = ControlStatus::SolverFailure;
  std::string message;

  bool ok() const { return status == ControlStatus::Ok; }
};

/// Minimum-effort decomposition controller over an implicit RCI set:
///   min cost(u)  s.t.  u = u_bar + s sum_i M_i E d_i,  y = x_bar + s sum_i Phi_i E d_i,  d_i in W.
/// The equality on y is first imposed exactly; if the effort program gives up
/// there, an exact decomposition from the simplex side is used (effort not
/// minimized). Only then is the equality relaxed to the membership tolerance,
/// so accepted states never get stuck on round-off while the closed loop does
/// not drift along the tolerance band.
class CentralizedController {
 public:
  explicit CentralizedController(std::shared_ptr<const RciParameterization> param,
                                 EffortCost cost = EffortCost::Quadratic, double tol = 1e-7,
                                 std::shared_ptr<const lp::Backend> backend = lp::default_backend());

  ControlResult compute(const Vec& y);
  const RciParameterization& parameterization() const { return *param_; }
  EffortCost cost() const { return cost_; }

 private:
  std::shared_ptr<const RciParameterization> param_;
  EffortCost cost_;
  double tol_;
  std::shared_ptr<const lp::Backend> backend_;
  lp::Model model_;
  std::unique_ptr<lp::Session> session_;
  std::unique_ptr<MembershipOracle> exact_;
  std::unique_ptr<MembershipOracle> feasibility_;
  int d_offset_ = 0;
  int u_offset_ = 0;
  int state_row_ = 0;

  void set_target(const Vec& offset, double band);
  ControlResult extract(const Vec& y, const lp::Solution& sol, double limit) const;
};

ControlResult centralized_control(const RciParameterization& param, const Vec& y,
                                  EffortCost cost = EffortCost::Quadratic, double tol = 1e-7);

double effort(EffortCost cost, const Vec& u);

}  // namespace platoon
