// Acceptance criteria. `platoon_acceptance <k>` runs criterion k (1..8); no
// argument runs all of them. Each criterion prints one PASS/FAIL line and the
// process exits nonzero when any selected criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "platoon/distributed.hpp"
#include "platoon/fixed_point_oracle.hpp"
#include "platoon/simulation.hpp"
#include "platoon/verification.hpp"

using namespace platoon;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and targets.
constexpr double kTableTolerance = 0.03;
constexpr double kTable[] = {0.17, 0.23, 0.28, 0.29};
constexpr int kTableN[] = {1, 2, 4, 6};
constexpr double kTableBudgetSeconds = 600.0;
constexpr double kMembershipTol = 1e-7;
constexpr int kInvarianceSamples = 1000;
constexpr double kTerminalTol = 1e-6;
constexpr double kRecurrenceTol = 1e-10;
constexpr int kSimulationSteps = 120;
constexpr double kSimulationBudgetSeconds = 30.0;
constexpr double kBias = 0.8;
constexpr std::uint64_t kSeed = 2024;
constexpr double kPrecision = 0.01;
constexpr double kLeaderGap = 2 * kPrecision;
constexpr long long kGridCap = 60LL * 60 * 60;
constexpr int kOracleSamples = 10000;
constexpr double kOracleFraction = 0.99;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Per-vehicle profile: position channel `px`, velocity channel `pv`.
PlatoonSpec platoon_spec(int N, double L, double px = 0.25, double pv = 1.0) {
  return PlatoonSpec::uniform(N, 4.5, L, 13.0, 17.0, 0.5, {-3.0, 3.0}, {{-px, px}, {-pv, pv}});
}

bool report(int k, bool pass, const std::string& summary) {
  std::printf("criterion %d: %s  %s\n", k, pass ? "PASS" : "FAIL", summary.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Lambda* table at density 0.2 for both channel assignments.
bool criterion1() {
  struct Reading {
    const char* name;
    double px, pv;
  };
  const Reading readings[] = {{"position +-0.25 m, velocity +-1 m/s", 0.25, 1.0},
                              {"position +-1 m, velocity +-0.25 m/s", 1.0, 0.25}};
  const auto t0 = Clock::now();
  bool any_match = false, all_monotone = true;
  std::string matched = "none";
  for (const Reading& r : readings) {
    std::vector<double> values;
    bool match = true, monotone = true, ok = true;
    for (size_t i = 0; i < 4; ++i) {
      const int N = kTableN[i];
      const auto res = find_lambda_star(platoon_spec(N, 5.0 * N, r.px, r.pv));
      ok = ok && res.ok();
      values.push_back(res.lambda);
      match = match && std::abs(res.lambda - kTable[i]) <= kTableTolerance + 1e-12;
      if (i > 0 && values[i] < values[i - 1]) monotone = false;
      std::printf("  [%s] N=%d L=%g lambda*=%.2f target %.2f ratio %.3f (%s, %.2f s)\n", r.name, N, 5.0 * N,
                  res.lambda, kTable[i], res.lambda / kTable[i], to_string(res.status).c_str(), res.seconds);
    }
    std::printf("  [%s] %s table, %s in N\n", r.name, match && ok ? "matches" : "does not match",
                monotone ? "non-decreasing" : "NOT non-decreasing");
    all_monotone = all_monotone && monotone;
    if (match && ok) {
      any_match = true;
      matched = r.name;
    }
  }
  const double secs = since(t0);
  return report(1, any_match && all_monotone && secs <= kTableBudgetSeconds,
                "matching assignment: " + matched + "; monotone: " + (all_monotone ? "yes" : "no") +
                    "; runtime " + fmt("%.1f s", secs));
}

bool verify_block(const std::string& label, const RciParameterization& p) {
  VerificationOptions o;
  o.sample_count = kInvarianceSamples;
  o.tol = kMembershipTol;
  const VerificationReport r = verify_invariance(p, o);
  std::printf("  %s: %lld/%lld successors inside (witness %lld, lp %lld, controller failures %d), %.2f s\n",
              label.c_str(), r.passed, r.checks, r.decided_by_witness, r.decided_by_lp, r.controller_failures,
              r.seconds);
  return r.all_passed();
}

// 2. Sampled invariance with every disturbance vertex.
bool criterion2() {
  bool pass = true;
  for (int N : {1, 2, 3}) {
    const auto res = find_lambda_star(platoon_spec(N, 5.0 * N));
    if (!res.value) {
      std::printf("  centralized N=%d: no parameterization (%s)\n", N, to_string(res.status).c_str());
      pass = false;
      continue;
    }
    pass = verify_block("centralized N=" + std::to_string(N) + " lambda=" + fmt("%.2f", res.lambda), *res.value) &&
           pass;
  }
  for (int N : {1, 2, 6}) {
    const auto res = find_lambda_star_distributed(platoon_spec(N, 5.0 * N));
    if (!res.value) {
      std::printf("  distributed N=%d: no policy (%s)\n", N, to_string(res.status).c_str());
      pass = false;
      continue;
    }
    const std::string tag = "distributed N=" + std::to_string(N) + " lambda=" + fmt("%.2f", res.lambda);
    pass = verify_block(tag + " leader", res.value->leader) && pass;
    for (int i = 0; i < res.value->n_followers(); ++i)
      pass = verify_block(tag + " follower " + std::to_string(i + 1), res.value->followers[static_cast<size_t>(i)]) &&
             pass;
  }
  return report(2, pass, "100% of successors must be members at tolerance 1e-7");
}

// 3. Terminal and recurrence identities on every alpha = 0 synthesis.
bool criterion3() {
  double worst_terminal = 0.0, worst_recurrence = 0.0;
  int count = 0;
  auto check = [&](const std::string& label, const RciParameterization& p, const Polyhedron& S, const Box& U) {
    const IdentityResiduals r = check_identities(p, S, U);
    std::printf("  %s: terminal %.3g, recurrence %.3g\n", label.c_str(), r.terminal, r.recurrence);
    worst_terminal = std::max(worst_terminal, r.terminal);
    worst_recurrence = std::max(worst_recurrence, r.recurrence);
    ++count;
  };
  bool complete = true;
  for (int N : {1, 2, 3, 4, 6}) {
    const PlatoonSpec base = platoon_spec(N, 5.0 * N);
    const auto res = find_lambda_star(base);
    if (!res.value) {
      complete = false;
      continue;
    }
    const PlatoonSpec spec = base.with_disturbance_scale(res.lambda);
    check("centralized N=" + std::to_string(N), *res.value, build_safe_set(spec), build_control_box(spec));
  }
  for (int N : {2, 6}) {
    const auto res = find_lambda_star_distributed(platoon_spec(N, 5.0 * N));
    if (!res.value) {
      complete = false;
      continue;
    }
    const DistributedPolicy& p = *res.value;
    Polyhedron S0;
    S0.H = Mat{{1.0}, {-1.0}};
    S0.h = Vec{{17.0, -13.0}};
    check("distributed N=" + std::to_string(N) + " leader", p.leader, S0,
          Box(Vec::Constant(1, p.leader_box.lo), Vec::Constant(1, p.leader_box.hi)));
    for (int i = 0; i < N; ++i)
      check("distributed N=" + std::to_string(N) + " follower " + std::to_string(i + 1),
            p.followers[static_cast<size_t>(i)], follower_safe_set(p.envelopes[static_cast<size_t>(i)]),
            Box(Vec::Constant(1, p.follower_boxes[static_cast<size_t>(i)].lo),
                Vec::Constant(1, p.follower_boxes[static_cast<size_t>(i)].hi)));
  }
  const bool pass = complete && worst_terminal <= kTerminalTol && worst_recurrence <= kRecurrenceTol;
  return report(3, pass,
                std::to_string(count) + " syntheses; worst terminal " + fmt("%.3g", worst_terminal) +
                    " (<= 1e-6), worst recurrence " + fmt("%.3g", worst_recurrence) + " (<= 1e-10)");
}

// 4. Six followers, L = 30, lambda = lambda*, 120 steps from the interval centers.
bool criterion4() {
  const PlatoonSpec base = platoon_spec(6, 30.0);
  const auto search = find_lambda_star(base);
  if (!search.ok()) return report(4, false, "lambda search failed: " + search.message);
  const PlatoonSpec spec = base.with_disturbance_scale(search.lambda);
  RciOptions o;
  o.cost = CostProfile::anchored(nominal_state(spec));
  const SynthesisResult syn = synthesize_rci(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                                             build_disturbance_box(spec), o);
  if (!syn.feasible()) return report(4, false, "synthesis at lambda* failed: " + syn.message);
  std::printf("  lambda* = %.2f (search %.1f s, synthesis %.2f s)\n", search.lambda, search.seconds, syn.seconds);

  const auto t0 = Clock::now();
  CentralizedPolicy policy(std::make_shared<const RciParameterization>(*syn.parameterization));
  const SimulationTrace t = run_simulation(policy, spec, nominal_state(spec), kSimulationSteps, kBias, kSeed);
  const double secs = since(t0);
  int collision = 0, length = 0, speed = 0, actuator = 0;
  for (const auto& r : t.records) {
    collision += r.safety.collision;
    length += r.safety.length_violation;
    speed += r.safety.speed_violation;
    actuator += r.safety.actuator_violation;
  }
  std::printf("  steps %zu, collisions %d, length %d, speed %d, actuator %d, min headway %.3g, max |u| %.3f\n",
              t.records.size() - 1, collision, length, speed, actuator, t.min_headway(), t.max_abs_input());
  const bool pass = t.completed && t.violation_count() == 0 && t.min_headway() > 0.0 && secs <= kSimulationBudgetSeconds;
  return report(4, pass,
                std::string(t.completed ? "completed" : "truncated: " + t.failure) + ", " +
                    std::to_string(t.violation_count()) + " violating steps, min headway " +
                    fmt("%.3g", t.min_headway()) + ", run " + fmt("%.2f s", secs) + " (<= 30 s)");
}

// 5. Distributed never tolerates more than centralized over a density grid.
bool criterion5() {
  const std::vector<DensityPoint> grid{{1, 5.0}, {2, 10.0}, {2, 12.0}, {3, 15.0}, {3, 20.0}, {4, 24.0}};
  const auto rows = compare_architectures(platoon_spec(1, 5.0), grid);
  bool pass = rows.size() >= 4;
  for (const auto& r : rows) {
    const bool ok = r.centralized.ok() && r.distributed.ok() && r.distributed.lambda <= r.centralized.lambda + 1e-12;
    std::printf("  rho=%.4f N=%d L=%g centralized %.2f distributed %.2f %s\n", r.point.density(),
                r.point.n_followers, r.point.length_bound, r.centralized.lambda, r.distributed.lambda,
                ok ? "ok" : "VIOLATED");
    pass = pass && ok;
  }
  return report(5, pass, std::to_string(rows.size()) + " density points, distributed <= centralized at each");
}

// 6. Perfect leader: no leader disturbance, leader keeps no control authority.
bool criterion6() {
  bool pass = true;
  double worst = 0.0;
  for (int N : {1, 2, 3, 4, 6}) {
    PlatoonSpec spec = platoon_spec(N, 5.0 * N);
    spec.disturbance_bounds[0] = {{0.0, 0.0}, {0.0, 0.0}};
    LambdaSearchOptions search;
    search.precision = kPrecision;
    DistributedOptions o;
    o.beta = 0.0;
    const auto c = find_lambda_star(spec, {}, search);
    const auto d = find_lambda_star_distributed(spec, o, search);
    const double gap = std::abs(c.lambda - d.lambda);
    worst = std::max(worst, gap);
    std::printf("  N=%d centralized %.2f (%s) distributed %.2f (%s) gap %.2f\n", N, c.lambda,
                to_string(c.status).c_str(), d.lambda, to_string(d.status).c_str(), gap);
    pass = pass && c.ok() && d.ok() && gap <= kLeaderGap + 1e-12;
  }
  return report(6, pass, "worst |centralized - distributed| " + fmt("%.2f", worst) + " (<= 0.02)");
}

// 7. Gridded fixed-point outer approximation contains the synthesized set (one follower).
bool criterion7() {
  const PlatoonSpec base = platoon_spec(1, 5.0);
  const auto search = find_lambda_star(base);
  if (!search.value) return report(7, false, "lambda search failed");
  const RciParameterization& p = *search.value;
  const PlatoonSpec spec = base.with_disturbance_scale(search.lambda);

  // Positions and speed from the safe set; relative speed from Omega's hull, widened.
  const Box hull = p.bounding_box();
  const double vr = 0.5 * (hull.upper(1) - hull.lower(1));
  FixedPointOptions o;
  o.grid = Box((Vec(3) << 4.5, hull.lower(1) - vr, 13.0).finished(),
               (Vec(3) << 5.0, hull.upper(1) + vr, 17.0).finished());
  o.cells = {60, 60, 60};
  o.cell_cap = kGridCap;
  const auto t0 = Clock::now();
  const GriddedSet g = fixed_point_rci_oracle(build_platoon_system(spec), build_safe_set(spec),
                                              build_control_box(spec), build_disturbance_box(spec), o);
  std::printf("  lambda*=%.2f grid 60^3, %s after %d iterations, %lld of %lld cells alive, %.1f s\n", search.lambda,
              g.converged ? "converged" : "NOT converged", g.iterations, g.alive_count(), g.size(), since(t0));

  std::mt19937_64 rng(kSeed);
  int inside = 0;
  for (int k = 0; k < kOracleSamples; ++k) inside += g.contains(p.state_of(random_decomposition(p, rng)));
  const double frac = static_cast<double>(inside) / kOracleSamples;
  return report(7, g.converged && frac >= kOracleFraction,
                fmt("%.4f", frac) + " of 10^4 sampled points inside the surviving grid (>= 0.99)");
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PLATOON_CLI) + " " + args + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 8. Repeated simulate runs with a fixed seed give identical CSV bytes.
bool criterion8() {
  const fs::path dir = fs::temp_directory_path() / ("platoon_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const std::string base = std::string("simulate --config ") + PLATOON_CONFIG_DIR +
                           "/fig2.json --lambda 0.3 --seed 77 --out ";
  const int a = run_cli(base + (dir / "a").string());
  const int b = run_cli(base + (dir / "b").string());
  const std::string ta = slurp(dir / "a" / "trace.csv"), tb = slurp(dir / "b" / "trace.csv");
  const bool same = !ta.empty() && ta == tb && slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json");
  std::printf("  exit codes %d, %d; trace sizes %zu, %zu bytes\n", a, b, ta.size(), tb.size());
  fs::remove_all(dir);
  return report(8, a == 0 && b == 0 && same, same ? "traces are bit-identical" : "traces differ");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7, criterion8};
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > 8) {
      std::fprintf(stderr, "usage: %s [criterion 1..8]...\n", argv[0]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= 8; ++k) selected.push_back(k);
  bool all = true;
  for (int k : selected) {
    try {
      all = criteria[static_cast<size_t>(k - 1)]() && all;
    } catch (const std::exception& e) {
      all = report(k, false, std::string("exception: ") + e.what()) && all;
    }
  }
  return all ? 0 : 1;
}
