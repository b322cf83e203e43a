#pragma once

#include "platoon/lp.hpp"

namespace platoon::lp {

/// Backend over the HiGHS simplex (LP) and active-set (QP) solvers.
class HighsBackend final : public Backend {
 public:
  std::string name() const override { return "highs"; }
  std::unique_ptr<Session> open(const Model& model, const SolverOptions& options = {}) const override;
};

}  // namespace platoon::lp
