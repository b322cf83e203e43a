#include "platoon/lambda_search.hpp"

#include <cstdio>

namespace platoon {

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Capped: return "capped";
    case SearchStatus::Infeasible: return "infeasible";
    case SearchStatus::Failure: return "failure";
  }
  return "unknown";
}

LambdaSearchResult<RciParameterization> find_lambda_star(const LinearSystem& system, const Polyhedron& S,
                                                         const Box& U, const Box& W0, const RciOptions& rci,
                                                         const LambdaSearchOptions& options) {
  if (W0.dim() != system.dist_dim() || !(W0.lower.array() <= W0.upper.array()).all())
    throw SpecError("find_lambda_star: W0 must be a nonempty box of the disturbance dimension");
  auto probe = [&](double lambda) {
    ProbeOutcome<RciParameterization> out;
    SynthesisResult res = synthesize_rci(system, S, U, W0.scaled(lambda), rci);
    out.status = res.status;
    out.message = res.message;
    if (res.parameterization) out.value = std::move(*res.parameterization);
    return out;
  };
  return grid_bisection<RciParameterization>(probe, options);
}

LambdaSearchResult<RciParameterization> find_lambda_star(const PlatoonSpec& spec, const RciOptions& rci,
                                                         const LambdaSearchOptions& options) {
  spec.validate();
  return find_lambda_star(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                          build_disturbance_box(spec), rci, options);
}

void write_probe_log(std::ostream& os, const std::vector<LambdaProbe>& probes) {
  os << "lambda,status,seconds\n";
  char buf[64];
  for (const auto& p : probes) {
    std::snprintf(buf, sizeof buf, "%.6g", p.lambda);
    os << buf << ',' << to_string(p.status) << ',';
    std::snprintf(buf, sizeof buf, "%.6f", p.seconds);
    os << buf << '\n';
  }
}

}  // namespace platoon
