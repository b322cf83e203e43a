#include "platoon/verification.hpp"

#include <chrono>
#include <random>

namespace platoon {

VerificationReport verify_invariance(const RciParameterization& param, const VerificationOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  auto shared = std::make_shared<const RciParameterization>(param);
  CentralizedController controller(shared, options.cost, options.tol);
  MembershipOracle oracle(shared, options.tol);

  const Box raw(param.disturbance.lower + param.disturbance_center, param.disturbance.upper + param.disturbance_center);
  const std::vector<Vec> vertices = enumerate_vertices(raw, options.max_vertices);
  std::mt19937_64 rng(options.seed);

  VerificationReport report;
  for (int k = 0; k < options.sample_count; ++k) {
    const Decomposition d = random_decomposition(param, rng, options.vertex_fraction);
    const Vec y = param.state_of(d);
    ++report.samples;
    const ControlResult ctrl = controller.compute(y);
    if (!ctrl.ok()) {
      ++report.controller_failures;
      report.checks += static_cast<long long>(vertices.size());
      report.failed += static_cast<long long>(vertices.size());
      continue;
    }
    const Vec drift = param.system.A * y + param.system.B * ctrl.u;
    for (const Vec& w : vertices) {
      ++report.checks;
      const Vec next = drift + param.system.E * w;
      const Decomposition witness = param.successor_decomposition(ctrl.decomposition, w);
      const double res = decomposition_residual(param, next, witness, 1e-9);
      report.worst_residual = std::max(report.worst_residual, res);
      if (!options.force_lp && res <= options.tol) {
        ++report.passed;
        ++report.decided_by_witness;
        continue;
      }
      ++report.decided_by_lp;
      bool inside = false;
      try {
        inside = oracle.contains(next);
      } catch (const SolverError&) {
        inside = false;
      }
      if (inside)
        ++report.passed;
      else
        ++report.failed;
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace platoon
