#pragma once

#include "platoon/lp.hpp"

namespace platoon::lp {

/// Dense proximal interior-point backend (PIQP). Meant for the small convex
/// QPs of the online controllers, where active-set methods stall on the
/// heavily degenerate decomposition problems.
class PiqpBackend final : public Backend {
 public:
  std::string name() const override { return "piqp"; }
  std::unique_ptr<Session> open(const Model& model, const SolverOptions& options = {}) const override;
};

/// Sends quadratic models to one backend and linear ones to another. When
/// the qp backend cannot decide a solve (iteration limit and the like), the
/// constraints alone go to the lp backend, which certifies infeasibility far
/// more reliably on small degenerate models; a feasible answer there leaves
/// the outcome a failure.
class RoutingBackend final : public Backend {
 public:
  RoutingBackend(std::shared_ptr<const Backend> lp, std::shared_ptr<const Backend> qp)
      : lp_(std::move(lp)), qp_(std::move(qp)) {}
  std::string name() const override { return lp_->name() + "+" + qp_->name(); }
  std::unique_ptr<Session> open(const Model& model, const SolverOptions& options = {}) const override;

 private:
  std::shared_ptr<const Backend> lp_;
  std::shared_ptr<const Backend> qp_;
};

}  // namespace platoon::lp
