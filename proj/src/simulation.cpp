#include "platoon/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace platoon {

Vec sample_disturbance(const Box& W, double boundary_bias, std::mt19937_64& rng) {
  if (!(boundary_bias >= 0.0 && boundary_bias <= 1.0)) throw SpecError("sample_disturbance: bias must lie in [0, 1]");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec w(W.dim());
  if (unit(rng) < boundary_bias) {
    for (int k = 0; k < W.dim(); ++k) w(k) = unit(rng) < 0.5 ? W.lower(k) : W.upper(k);
  } else {
    for (int k = 0; k < W.dim(); ++k) w(k) = W.lower(k) + unit(rng) * (W.upper(k) - W.lower(k));
  }
  return w;
}

SafetyReport monitor(const PlatoonSpec& spec, const Vec& y, const Vec& u) {
  if (y.size() != spec.state_dim()) throw SpecError("monitor: state dimension mismatch");
  SafetyReport r;
  const int N = spec.n_followers;
  r.headways = headways(spec, y);
  r.headway_margin = r.headways.size() ? r.headways.minCoeff() : std::numeric_limits<double>::infinity();
  r.collision = r.headway_margin < 0.0;
  r.zero_headway = r.headway_margin == 0.0;
  r.length_margin = spec.length_bound - y(2 * (N - 1));
  r.length_violation = r.length_margin < 0.0;
  const double v0 = y(2 * N);
  r.speed_margin = std::min(v0 - spec.speed_min, spec.speed_max - v0);
  r.speed_violation = r.speed_margin < 0.0;
  r.actuator_margin = std::numeric_limits<double>::infinity();
  if (u.size() != 0) {
    if (u.size() != spec.input_dim()) throw SpecError("monitor: input dimension mismatch");
    for (int i = 0; i <= N; ++i) {
      const Interval& b = spec.control_bounds[static_cast<size_t>(i)];
      r.actuator_margin = std::min({r.actuator_margin, u(i) - b.lo, b.hi - u(i)});
    }
    r.actuator_violation = r.actuator_margin < 0.0;
  }
  return r;
}

CentralizedPolicy::CentralizedPolicy(std::shared_ptr<const RciParameterization> param, EffortCost cost, double tol)
    : controller_(param, cost, tol), oracle_(param, tol) {}

std::string CentralizedPolicy::descriptor() const {
  const auto& p = controller_.parameterization();
  return "centralized(kappa=" + std::to_string(p.kappa) + ",alpha=" + std::to_string(p.alpha) +
         ",cost=" + to_string(controller_.cost()) + ")";
}

PolicyOutput CentralizedPolicy::act(const Vec& y) {
  ControlResult r = controller_.compute(y);
  return {std::move(r.u), r.status, std::move(r.message)};
}

DistributedPolicyRunner::DistributedPolicyRunner(std::shared_ptr<const DistributedPolicy> policy, EffortCost cost,
                                                 double tol)
    : controller_(std::move(policy), cost, tol) {}

std::string DistributedPolicyRunner::descriptor() const {
  const auto& p = controller_.policy();
  return "distributed(N=" + std::to_string(p.n_followers()) + ",beta=" + std::to_string(p.beta) + ")";
}

PolicyOutput DistributedPolicyRunner::act(const Vec& y) {
  DistributedControlResult r = controller_.compute(y);
  return {std::move(r.u), r.status, std::move(r.message)};
}

int SimulationTrace::violation_count() const {
  int n = 0;
  for (const auto& r : records) n += r.safety.any_violation() ? 1 : 0;
  return n;
}

double SimulationTrace::min_headway() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& r : records) h = std::min(h, r.safety.headway_margin);
  return h;
}

double SimulationTrace::max_abs_input() const {
  double m = 0.0;
  for (const auto& r : records)
    if (r.u.size()) m = std::max(m, r.u.cwiseAbs().maxCoeff());
  return m;
}

SimulationTrace run_simulation(Policy& policy, const PlatoonSpec& spec, const Vec& y0, int horizon,
                               double boundary_bias, std::uint64_t seed) {
  spec.validate();
  if (horizon < 0) throw SpecError("run_simulation: negative horizon");
  if (y0.size() != spec.state_dim()) throw SpecError("run_simulation: initial state dimension mismatch");
  if (!policy.accepts(y0)) throw SpecError("run_simulation: initial state is outside the policy's invariant set");
  const LinearSystem system = build_platoon_system(spec);
  const Box W = build_disturbance_box(spec);
  std::mt19937_64 rng(seed);

  SimulationTrace trace;
  trace.seed = seed;
  trace.boundary_bias = boundary_bias;
  trace.horizon = horizon;
  trace.policy = policy.descriptor();
  Vec y = y0;
  for (int t = 0; t < horizon; ++t) {
    StepRecord rec;
    rec.t = t;
    rec.y = y;
    PolicyOutput out = policy.act(y);
    if (out.status != ControlStatus::Ok) {
      rec.safety = monitor(spec, y, Vec());
      trace.records.push_back(std::move(rec));
      trace.failure = "step " + std::to_string(t) + ": " + to_string(out.status) +
                      (out.message.empty() ? "" : " (" + out.message + ")");
      return trace;
    }
    rec.u = std::move(out.u);
    rec.w = sample_disturbance(W, boundary_bias, rng);
    rec.safety = monitor(spec, y, rec.u);
    y = step(system, y, rec.u, rec.w);
    trace.records.push_back(std::move(rec));
  }
  StepRecord last;
  last.t = horizon;
  last.y = y;
  last.safety = monitor(spec, y, Vec());
  trace.records.push_back(std::move(last));
  trace.completed = true;
  return trace;
}

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << ',' << buf;
}

void put_or_blank(std::ostream& os, const Vec& v, int size) {
  for (int k = 0; k < size; ++k) {
    if (v.size())
      put(os, v(k));
    else
      os << ',';
  }
}

}  // namespace

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  if (trace.records.empty()) return;
  const int n = static_cast<int>(trace.records.front().y.size());
  const int N = (n - 1) / 2;
  os << 't';
  for (int i = 1; i <= N; ++i) os << ",x" << i << ",v" << i;
  os << ",v0";
  for (int i = 0; i <= N; ++i) os << ",u" << i;
  for (int i = 0; i <= N; ++i) os << ",w" << i << "x,w" << i << 'v';
  for (int i = 1; i <= N; ++i) os << ",h" << i;
  os << ",length,collision,length_violation,speed_violation,actuator_violation\n";
  for (const auto& r : trace.records) {
    os << r.t;
    put_or_blank(os, r.y, n);
    put_or_blank(os, r.u, N + 1);
    put_or_blank(os, r.w, 2 * N + 2);
    put_or_blank(os, r.safety.headways, N);
    put(os, r.y(2 * (N - 1)));
    os << ',' << r.safety.collision << ',' << r.safety.length_violation << ',' << r.safety.speed_violation << ','
       << r.safety.actuator_violation << '\n';
  }
}

nlohmann::json trace_summary(const SimulationTrace& trace) {
  nlohmann::json j;
  int collisions = 0, length = 0, speed = 0, actuator = 0, zero = 0;
  for (const auto& r : trace.records) {
    collisions += r.safety.collision;
    length += r.safety.length_violation;
    speed += r.safety.speed_violation;
    actuator += r.safety.actuator_violation;
    zero += r.safety.zero_headway;
  }
  j["policy"] = trace.policy;
  j["seed"] = trace.seed;
  j["boundary_bias"] = trace.boundary_bias;
  j["horizon"] = trace.horizon;
  j["records"] = trace.records.size();
  j["completed"] = trace.completed;
  j["failure"] = trace.failure;
  j["violations"] = {{"collision", collisions},
                     {"length", length},
                     {"speed", speed},
                     {"actuator", actuator},
                     {"total_steps_with_violation", trace.violation_count()}};
  j["zero_headway_warnings"] = zero;
  j["min_headway"] = trace.min_headway();
  j["max_abs_input"] = trace.max_abs_input();
  return j;
}

}  // namespace platoon
