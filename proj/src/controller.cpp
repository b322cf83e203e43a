#include "platoon/controller.hpp"

namespace platoon {

using lp::LinearExpr;

std::string to_string(EffortCost c) {
  switch (c) {
    case EffortCost::Quadratic: return "quadratic";
    case EffortCost::L1: return "l1";
    case EffortCost::Linf: return "linf";
  }
  return "unknown";
}

EffortCost parse_effort_cost(const std::string& name) {
  if (name == "quadratic") return EffortCost::Quadratic;
  if (name == "l1") return EffortCost::L1;
  if (name == "linf") return EffortCost::Linf;
  throw SpecError("unknown effort cost '" + name + "' (expected quadratic, l1 or linf)");
}

std::string to_string(ControlStatus s) {
  switch (s) {
    case ControlStatus::Ok: return "ok";
    case ControlStatus::OutsideInvariantSet: return "outside_invariant_set";
    case ControlStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

double effort(EffortCost cost, const Vec& u) {
  switch (cost) {
    case EffortCost::Quadratic: return u.squaredNorm();
    case EffortCost::L1: return u.cwiseAbs().sum();
    case EffortCost::Linf: return u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  }
  return 0.0;
}

CentralizedController::CentralizedController(std::shared_ptr<const RciParameterization> param, EffortCost cost,
                                             double tol, std::shared_ptr<const lp::Backend> backend)
    : param_(std::move(param)), cost_(cost), tol_(tol), backend_(std::move(backend)) {
  const auto& P = *param_;
  const int n = P.state_dim();
  const int m = P.input_dim();
  const int p = P.dist_dim();
  const double s = P.scale();
  const Vec r = P.disturbance.half_width();

  d_offset_ = model_.num_variables();
  for (int i = 0; i < P.kappa; ++i)
    for (int j = 0; j < p; ++j) model_.add_variable(-r(j), r(j));
  u_offset_ = model_.add_variables(m);

  for (int k = 0; k < m; ++k) {
    LinearExpr e = LinearExpr::var(u_offset_ + k);
    for (int i = 0; i < P.kappa; ++i)
      for (int j = 0; j < p; ++j) e.add_term(d_offset_ + i * p + j, -s * P.input_generators[static_cast<size_t>(i)](k, j));
    model_.add_equality(e, P.u_bar(k));
  }
  state_row_ = model_.num_rows();
  for (int a = 0; a < n; ++a) {
    LinearExpr e;
    for (int i = 0; i < P.kappa; ++i)
      for (int j = 0; j < p; ++j) e.add_term(d_offset_ + i * p + j, s * P.state_generators[static_cast<size_t>(i)](a, j));
    model_.add_equality(e, 0.0);
  }

  switch (cost_) {
    case EffortCost::Quadratic:
      for (int k = 0; k < m; ++k) model_.add_hessian(u_offset_ + k, u_offset_ + k, 2.0);
      break;
    case EffortCost::L1:
      for (int k = 0; k < m; ++k) model_.set_cost(model_.add_abs_bound(LinearExpr::var(u_offset_ + k)), 1.0);
      break;
    case EffortCost::Linf: {
      const int t = model_.add_variable(0.0, lp::kInf, 1.0);
      for (int k = 0; k < m; ++k) {
        model_.add_le(LinearExpr::var(u_offset_ + k) - LinearExpr::var(t), 0.0);
        model_.add_ge(LinearExpr::var(u_offset_ + k) + LinearExpr::var(t), 0.0);
      }
      break;
    }
  }
  session_ = backend_->open(model_);
}

void CentralizedController::set_target(const Vec& offset, double band) {
  for (int a = 0; a < offset.size(); ++a) session_->set_row_bounds(state_row_ + a, offset(a) - band, offset(a) + band);
}

ControlResult CentralizedController::extract(const Vec& y, const lp::Solution& sol, double limit) const {
  const auto& P = *param_;
  const int p = P.dist_dim();
  ControlResult out;
  out.decomposition.resize(static_cast<size_t>(P.kappa));
  for (int i = 0; i < P.kappa; ++i) {
    Vec block(p);
    for (int j = 0; j < p; ++j) block(j) = sol.x[static_cast<size_t>(d_offset_ + i * p + j)];
    out.decomposition[static_cast<size_t>(i)] = block.cwiseMax(P.disturbance.lower).cwiseMin(P.disturbance.upper);
  }
  // The input is recomputed from the clamped decomposition so the invariance
  // certificate refers to exactly the returned u.
  out.u = P.input_of(out.decomposition);
  out.objective_value = effort(cost_, out.u);
  out.status = ControlStatus::Ok;
  const double residual = (y - P.state_of(out.decomposition)).cwiseAbs().maxCoeff();
  if (residual > limit) {
    out.status = ControlStatus::SolverFailure;
    out.message = "decomposition residual " + std::to_string(residual) + " exceeds tolerance";
  }
  return out;
}

ControlResult CentralizedController::compute(const Vec& y) {
  const auto& P = *param_;
  if (y.size() != P.state_dim()) throw SpecError("controller: state dimension mismatch");
  const Vec offset = y - P.x_bar;

  set_target(offset, 0.0);
  lp::Solution sol = session_->solve();
  if (sol.status == lp::Status::Optimal) {
    ControlResult res = extract(y, sol, tol_);
    if (res.ok()) return res;
  }
  if (!exact_) exact_ = std::make_unique<MembershipOracle>(param_, 0.0, backend_);
  try {
    if (auto d = exact_->decompose(y)) {
      ControlResult res;
      res.decomposition = std::move(*d);
      res.u = P.input_of(res.decomposition);
      res.objective_value = effort(cost_, res.u);
      if ((y - P.state_of(res.decomposition)).cwiseAbs().maxCoeff() <= tol_) {
        res.status = ControlStatus::Ok;
        res.message = "exact decomposition, effort not minimized";
        return res;
      }
    }
  } catch (const SolverError&) {
  }
  set_target(offset, tol_);
  sol = session_->solve();
  // Clamping onto W may move the solver's point by its bound tolerance.
  if (sol.status == lp::Status::Optimal) return extract(y, sol, tol_ + 1e-9);

  // Separate a certified "outside" from a solver that merely gave up.
  if (!feasibility_) feasibility_ = std::make_unique<MembershipOracle>(param_, tol_, backend_);
  ControlResult out;
  out.u = Vec::Zero(P.input_dim());
  try {
    if (!feasibility_->contains(y)) {
      out.status = ControlStatus::OutsideInvariantSet;
      out.message = "state admits no decomposition";
      return out;
    }
    out.status = ControlStatus::SolverFailure;
    out.message = "control program failed on a member state: " + sol.message;
  } catch (const SolverError& e) {
    out.status = ControlStatus::SolverFailure;
    out.message = e.what();
  }
  return out;
}

ControlResult centralized_control(const RciParameterization& param, const Vec& y, EffortCost cost, double tol) {
  CentralizedController controller(std::make_shared<const RciParameterization>(param), cost, tol);
  return controller.compute(y);
}

}  // namespace platoon
