#include "platoon/distributed.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace platoon {

ControlSplit split_control_box(const Box& U, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw SpecError("split_control_box: beta must lie in [0, 1]");
  if (U.dim() < 1) throw SpecError("split_control_box: empty control box");
  ControlSplit split;
  const Interval u0 = U.interval(0);
  split.leader = u0.scaled(beta);
  if (!u0.contains(split.leader.lo, 1e-12) || !u0.contains(split.leader.hi, 1e-12))
    throw SpecError("split_control_box: leader interval must contain 0 for beta scaling");
  for (int i = 1; i < U.dim(); ++i) {
    const Interval ui = U.interval(i);
    const Interval f{split.leader.hi - ui.hi, split.leader.lo - ui.lo};
    if (f.empty())
      throw SpecError("split_control_box: beta = " + std::to_string(beta) + " leaves follower " + std::to_string(i) +
                      " no admissible input");
    split.followers.push_back(f);
  }
  return split;
}

RelativeDisturbance relative_disturbance_box(const Box& W) {
  if (W.dim() < 2 || W.dim() % 2 != 0) throw SpecError("relative_disturbance_box: expected (w_0x, w_0v, ...) ordering");
  RelativeDisturbance out;
  out.leader = W.interval(1);
  for (int i = 1; i < W.dim() / 2; ++i) {
    Vec lo(2), hi(2);
    for (int s = 0; s < 2; ++s) {
      lo(s) = W.lower(s) - W.upper(2 * i + s);
      hi(s) = W.upper(s) - W.lower(2 * i + s);
    }
    out.followers.emplace_back(lo, hi);
  }
  return out;
}

std::vector<Interval> build_envelopes(const PlatoonSpec& spec) {
  const int N = spec.n_followers;
  if (N < 1 || static_cast<int>(spec.vehicle_lengths.size()) != N + 1)
    throw SpecError("build_envelopes: need at least one follower and N+1 vehicle lengths");
  const double l = spec.vehicle_lengths[0];
  for (int i = 0; i < N; ++i)
    if (std::abs(spec.vehicle_lengths[static_cast<size_t>(i)] - l) > 1e-12)
      throw SpecError("build_envelopes: the distributed architecture requires identical vehicle lengths");
  const double gap = (spec.length_bound - N * l) / N;
  if (!(gap > 0.0)) throw SpecError("build_envelopes: L must exceed N * l");
  std::vector<Interval> env;
  for (int i = 1; i <= N; ++i) {
    Interval e{i * l + (i - 1) * gap + spec.collision_margin, i * l + i * gap};
    if (!(e.lo < e.hi)) throw SpecError("build_envelopes: collision margin leaves no room");
    env.push_back(e);
  }
  return env;
}

LinearSystem follower_system(double dt) {
  LinearSystem sys;
  sys.A = Mat{{1.0, dt}, {0.0, 1.0}};
  sys.B = Mat{{0.5 * dt * dt}, {dt}};
  sys.E = Mat::Identity(2, 2);
  return sys;
}

LinearSystem leader_system(double dt) {
  LinearSystem sys;
  sys.A = Mat::Identity(1, 1);
  sys.B = Mat::Constant(1, 1, dt);
  sys.E = Mat::Identity(1, 1);
  return sys;
}

Polyhedron follower_safe_set(const Interval& envelope) {
  Polyhedron S;
  S.H = Mat{{1.0, 0.0}, {-1.0, 0.0}};
  S.h = Vec{{envelope.hi, -envelope.lo}};
  return S;
}

namespace {

Box interval_box(const Interval& i) { return Box(Vec::Constant(1, i.lo), Vec::Constant(1, i.hi)); }

bool same_box(const Box& a, const Box& b) { return a.lower == b.lower && a.upper == b.upper; }

RciOptions sub_options(const RciOptions& base, Vec anchor) {
  RciOptions o = base;
  o.cost = CostProfile::anchored(std::move(anchor));
  return o;
}

}  // namespace

DistributedSynthesis synthesize_distributed(const PlatoonSpec& spec, const DistributedOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  spec.validate();
  const int N = spec.n_followers;
  const ControlSplit split = split_control_box(build_control_box(spec), options.beta);
  const RelativeDisturbance rel = relative_disturbance_box(build_disturbance_box(spec));
  const std::vector<Interval> env = build_envelopes(spec);

  DistributedSynthesis out;
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  auto fail = [&](const SynthesisResult& r, int vehicle) {
    out.status = r.status;
    out.failed_vehicle = vehicle;
    out.message = (vehicle == 0 ? std::string("leader") : "follower " + std::to_string(vehicle)) + ": " +
                  to_string(r.status) + (r.message.empty() ? "" : " (" + r.message + ")");
    out.seconds = elapsed();
    return out;
  };

  DistributedPolicy policy;
  policy.beta = options.beta;
  policy.leader_box = split.leader;
  policy.follower_boxes = split.followers;
  policy.envelopes = env;

  // Offsets are pulled toward the middle of each safe interval.
  Polyhedron S0;
  S0.H = Mat{{1.0}, {-1.0}};
  S0.h = Vec{{spec.speed_max, -spec.speed_min}};
  const SynthesisResult leader =
      synthesize_rci(leader_system(spec.dt), S0, interval_box(split.leader), interval_box(rel.leader),
                     sub_options(options.rci, Vec::Constant(1, 0.5 * (spec.speed_min + spec.speed_max))));
  if (!leader.feasible()) return fail(leader, 0);
  policy.leader = *leader.parameterization;

  bool identical = options.share_identical_followers;
  for (int i = 1; i < N && identical; ++i)
    identical = split.followers[static_cast<size_t>(i)].lo == split.followers[0].lo &&
                split.followers[static_cast<size_t>(i)].hi == split.followers[0].hi &&
                same_box(rel.followers[static_cast<size_t>(i)], rel.followers[0]) &&
                env[static_cast<size_t>(i)].width() == env[0].width();
  policy.shared_follower_synthesis = identical && N > 1;

  const LinearSystem fsys = follower_system(spec.dt);
  for (int i = 0; i < N; ++i) {
    if (i > 0 && identical) {
      RciParameterization shifted = policy.followers[0];
      shifted.x_bar(0) += env[static_cast<size_t>(i)].lo - env[0].lo;
      policy.followers.push_back(std::move(shifted));
      continue;
    }
    const Interval& e = env[static_cast<size_t>(i)];
    const SynthesisResult r =
        synthesize_rci(fsys, follower_safe_set(e), interval_box(split.followers[static_cast<size_t>(i)]),
                       rel.followers[static_cast<size_t>(i)], sub_options(options.rci, Vec{{e.center(), 0.0}}));
    if (!r.feasible()) return fail(r, i + 1);
    policy.followers.push_back(*r.parameterization);
  }
  out.status = SynthesisStatus::Feasible;
  out.policy = std::move(policy);
  out.seconds = elapsed();
  return out;
}

DistributedController::DistributedController(std::shared_ptr<const DistributedPolicy> policy, EffortCost cost,
                                             double tol)
    : policy_(std::move(policy)) {
  std::shared_ptr<const RciParameterization> leader(policy_, &policy_->leader);
  leader_ = std::make_unique<CentralizedController>(leader, cost, tol);
  leader_oracle_ = std::make_unique<MembershipOracle>(leader, tol);
  for (const auto& f : policy_->followers) {
    std::shared_ptr<const RciParameterization> p(policy_, &f);
    followers_.push_back(std::make_unique<CentralizedController>(p, cost, tol));
    follower_oracles_.push_back(std::make_unique<MembershipOracle>(p, tol));
  }
}

DistributedControlResult DistributedController::compute(const Vec& y) {
  const int N = policy_->n_followers();
  if (y.size() != 2 * N + 1) throw SpecError("distributed controller: state dimension mismatch");
  DistributedControlResult out;
  out.u = Vec::Zero(N + 1);
  out.relative_inputs = Vec::Zero(N + 1);
  auto bad = [&](const ControlResult& r, int vehicle) {
    out.status = r.status;
    out.failed_vehicle = vehicle;
    out.message = (vehicle == 0 ? std::string("leader") : "follower " + std::to_string(vehicle)) + ": " +
                  to_string(r.status) + (r.message.empty() ? "" : " (" + r.message + ")");
    return out;
  };
  const ControlResult lead = leader_->compute(Vec::Constant(1, y(2 * N)));
  if (!lead.ok()) return bad(lead, 0);
  out.relative_inputs(0) = lead.u(0);
  out.u(0) = lead.u(0);
  for (int i = 0; i < N; ++i) {
    const ControlResult r = followers_[static_cast<size_t>(i)]->compute(y.segment(2 * i, 2));
    if (!r.ok()) return bad(r, i + 1);
    out.relative_inputs(i + 1) = r.u(0);
    out.u(i + 1) = lead.u(0) - r.u(0);
  }
  out.status = ControlStatus::Ok;
  return out;
}

bool DistributedController::contains(const Vec& y) {
  const int N = policy_->n_followers();
  if (y.size() != 2 * N + 1) throw SpecError("distributed controller: state dimension mismatch");
  if (!leader_oracle_->contains(Vec::Constant(1, y(2 * N)))) return false;
  for (int i = 0; i < N; ++i)
    if (!follower_oracles_[static_cast<size_t>(i)]->contains(y.segment(2 * i, 2))) return false;
  return true;
}

DistributedControlResult distributed_control(const DistributedPolicy& policy, const Vec& y, EffortCost cost) {
  DistributedController controller(std::make_shared<const DistributedPolicy>(policy), cost);
  return controller.compute(y);
}

LambdaSearchResult<DistributedPolicy> find_lambda_star_distributed(const PlatoonSpec& spec,
                                                                   const DistributedOptions& options,
                                                                   const LambdaSearchOptions& search) {
  spec.validate();
  auto probe = [&](double lambda) {
    ProbeOutcome<DistributedPolicy> out;
    DistributedSynthesis res = synthesize_distributed(spec.with_disturbance_scale(lambda), options);
    out.status = res.status;
    out.message = res.message;
    if (res.policy) out.value = std::move(*res.policy);
    return out;
  };
  return grid_bisection<DistributedPolicy>(probe, search);
}

PlatoonSpec resize_spec(const PlatoonSpec& base, int n_followers, double length_bound) {
  if (n_followers < 1) throw SpecError("resize_spec: need at least one follower");
  if (base.vehicle_lengths.empty() || base.control_bounds.empty() || base.disturbance_bounds.empty())
    throw SpecError("resize_spec: base spec has no per-vehicle entries");
  auto follower_entry = [](const auto& v) { return v.size() > 1 ? v[1] : v[0]; };
  PlatoonSpec out = base;
  out.n_followers = n_followers;
  out.length_bound = length_bound;
  const auto count = static_cast<size_t>(n_followers + 1);
  out.vehicle_lengths.assign(count, follower_entry(base.vehicle_lengths));
  out.vehicle_lengths[0] = base.vehicle_lengths[0];
  out.control_bounds.assign(count, follower_entry(base.control_bounds));
  out.control_bounds[0] = base.control_bounds[0];
  out.disturbance_bounds.assign(count, follower_entry(base.disturbance_bounds));
  out.disturbance_bounds[0] = base.disturbance_bounds[0];
  return out;
}

std::vector<ComparisonRow> compare_architectures(const PlatoonSpec& base, const std::vector<DensityPoint>& grid,
                                                 const DistributedOptions& options,
                                                 const LambdaSearchOptions& search) {
  RciOptions central = options.rci;
  central.cost = CostProfile::feasibility();
  std::vector<ComparisonRow> rows;
  for (const auto& point : grid) {
    const PlatoonSpec spec = resize_spec(base, point.n_followers, point.length_bound);
    ComparisonRow row;
    row.point = point;
    row.centralized = find_lambda_star(spec, central, search);
    row.distributed = find_lambda_star_distributed(spec, options, search);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "rho,N,L,lambda_centralized,lambda_distributed\n";
  char buf[160];
  for (const auto& r : rows) {
    const double lc = r.centralized.status != SearchStatus::Failure ? r.centralized.lambda : std::nan("");
    const double ld = r.distributed.status != SearchStatus::Failure ? r.distributed.lambda : std::nan("");
    std::snprintf(buf, sizeof buf, "%.6g,%d,%.6g,%.6g,%.6g\n", r.point.density(), r.point.n_followers,
                  r.point.length_bound, lc, ld);
    os << buf;
  }
}

}  // namespace platoon
