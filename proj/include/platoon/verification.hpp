#pragma once

#include <cstdint>

#include "platoon/controller.hpp"
#include "platoon/set_calculus.hpp"

namespace platoon {

struct VerificationOptions {
  int sample_count = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-7;
  EffortCost cost = EffortCost::Quadratic;
  /// Skip the shifted-decomposition witness and decide every successor by LP.
  bool force_lp = false;
  int max_vertices = kDefaultVertexCap;
  double vertex_fraction = 0.5;
};

struct VerificationReport {
  int samples = 0;
  long long checks = 0;  // samples x disturbance vertices
  long long passed = 0;
  long long failed = 0;
  long long decided_by_witness = 0;
  long long decided_by_lp = 0;
  int controller_failures = 0;
  /// Largest |y+ - state_of(d')| over all checks for the shifted witness d'.
  double worst_residual = 0.0;
  double seconds = 0.0;

  bool all_passed() const { return failed == 0 && controller_failures == 0 && checks > 0; }
  double pass_rate() const { return checks ? static_cast<double>(passed) / static_cast<double>(checks) : 0.0; }
};

/// Samples states of Omega by random decompositions, applies the centralized
/// controller and checks that every successor under every vertex of the raw
/// disturbance box is again in Omega.
VerificationReport verify_invariance(const RciParameterization& param, const VerificationOptions& options = {});

}  // namespace platoon
