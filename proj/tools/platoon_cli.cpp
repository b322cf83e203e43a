// platoon: synthesis, lambda search, sweeps and closed-loop simulation.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>

#include "platoon/io.hpp"
#include "platoon/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace platoon;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kInfeasible = 3, kSolverFailure = 4, kSafetyViolation = 5 };

struct Flags {
  std::string config;
  std::string out = ".";
  std::optional<int> kappa;
  std::optional<double> alpha, precision, beta, bias, lambda;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers, horizon;
  std::string arch;
  std::string policy;
  std::string effort;
  std::vector<int> n_list;
};

// Flags override config entries before validation, so both go through the same checks.
ExperimentConfig effective_config(const Flags& f) {
  json j;
  try {
    j = read_json_file(f.config);
  } catch (const json::exception& e) {
    throw ConfigError(f.config + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  if (f.kappa) j["kappa"] = *f.kappa;
  if (f.alpha) j["alpha"] = *f.alpha;
  if (f.precision) j["precision"] = *f.precision;
  if (f.beta) j["beta"] = *f.beta;
  if (f.bias) j["bias"] = *f.bias;
  if (f.lambda) j["lambda"] = *f.lambda;
  if (f.seed) j["seed"] = *f.seed;
  if (f.workers) j["workers"] = *f.workers;
  if (f.horizon) j["horizon"] = *f.horizon;
  if (!f.arch.empty()) j["architecture"] = f.arch;
  if (!f.effort.empty()) j["effort"] = f.effort;
  if (!f.n_list.empty()) j["n_list"] = f.n_list;
  return parse_config(j);
}

fs::path prepare_out(const Flags& f, const ExperimentConfig& c) {
  fs::path dir(f.out);
  fs::create_directories(dir);
  write_json_file((dir / "config.json").string(), config_to_json(c));
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

int exit_for(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Feasible: return kOk;
    case SynthesisStatus::Infeasible: return kInfeasible;
    default: return kSolverFailure;
  }
}

int exit_for(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found:
    case SearchStatus::Capped: return kOk;
    case SearchStatus::Infeasible: return kInfeasible;
    default: return kSolverFailure;
  }
}

// Offset chosen as close as possible to the interval centers so that the
// nominal configuration is a member of the synthesized set.
RciOptions centered(RciOptions o, const PlatoonSpec& spec) {
  o.cost = CostProfile::anchored(nominal_state(spec));
  return o;
}

int cmd_synth(const Flags& f) {
  ExperimentConfig c = effective_config(f);
  const fs::path dir = prepare_out(f, c);
  const PlatoonSpec spec = c.scaled_spec();
  json report;
  report["architecture"] = c.architecture;
  report["lambda"] = c.lambda;
  report["kappa"] = c.kappa;
  report["alpha"] = c.alpha;
  SynthesisStatus status;
  if (c.architecture == "centralized") {
    const SynthesisResult r = synthesize_rci(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                                             build_disturbance_box(spec), centered(c.rci_options(), spec));
    status = r.status;
    report["lp"] = {{"variables", r.lp_variables}, {"rows", r.lp_rows}, {"nonzeros", r.lp_nonzeros}};
    report["seconds"] = r.seconds;
    report["message"] = r.message;
    if (r.feasible()) write_json_file((dir / "parameterization.json").string(), to_json(*r.parameterization));
  } else {
    const DistributedSynthesis r = synthesize_distributed(spec, c.distributed_options());
    status = r.status;
    report["seconds"] = r.seconds;
    report["message"] = r.message;
    report["failed_vehicle"] = r.failed_vehicle;
    if (r.feasible()) write_json_file((dir / "parameterization.json").string(), to_json(*r.policy));
  }
  report["status"] = to_string(status);
  write_json_file((dir / "report.json").string(), report);
  std::cout << c.architecture << " synthesis at lambda " << c.lambda << ": " << to_string(status) << '\n';
  return exit_for(status);
}

template <class T>
json search_report(const LambdaSearchResult<T>& r) {
  json j;
  j["status"] = to_string(r.status);
  j["lambda_star"] = r.lambda;
  j["lambda_above"] = r.lambda_above;
  j["probes"] = r.probes.size();
  j["seconds"] = r.seconds;
  j["warnings"] = r.warnings;
  j["message"] = r.message;
  return j;
}

int cmd_lambda(const Flags& f) {
  ExperimentConfig c = effective_config(f);
  const fs::path dir = prepare_out(f, c);
  std::ostringstream probes;
  json report;
  SearchStatus status;
  if (c.architecture == "centralized") {
    const auto r = find_lambda_star(c.spec, c.rci_options(), c.search_options());
    status = r.status;
    report = search_report(r);
    write_probe_log(probes, r.probes);
    if (r.value) write_json_file((dir / "parameterization.json").string(), to_json(*r.value));
    std::cout << "lambda* = " << r.lambda << " (" << to_string(r.status) << ", " << r.seconds << " s)\n";
  } else {
    const auto r = find_lambda_star_distributed(c.spec, c.distributed_options(), c.search_options());
    status = r.status;
    report = search_report(r);
    write_probe_log(probes, r.probes);
    if (r.value) write_json_file((dir / "parameterization.json").string(), to_json(*r.value));
    std::cout << "lambda* = " << r.lambda << " (" << to_string(r.status) << ", " << r.seconds << " s)\n";
  }
  report["architecture"] = c.architecture;
  report["precision"] = c.precision;
  write_json_file((dir / "report.json").string(), report);
  write_text(dir / "probes.csv", probes.str());
  return exit_for(status);
}

// Sweeps N at the density of the template platoon.
int cmd_table1(const Flags& f) {
  ExperimentConfig c = effective_config(f);
  const fs::path dir = prepare_out(f, c);
  const double density = c.spec.n_followers / c.spec.length_bound;
  LambdaSearchOptions search = c.search_options();
  search.workers = 1;
  const RciOptions rci = c.rci_options();

  using Row = LambdaSearchResult<RciParameterization>;
  std::vector<Row> rows(c.n_list.size());
  std::vector<double> lengths(c.n_list.size());
  const size_t batch = static_cast<size_t>(std::max(1, c.workers));
  for (size_t start = 0; start < c.n_list.size(); start += batch) {
    std::vector<std::future<Row>> jobs;
    for (size_t i = start; i < std::min(c.n_list.size(), start + batch); ++i) {
      lengths[i] = c.n_list[i] / density;
      const PlatoonSpec spec = resize_spec(c.spec, c.n_list[i], lengths[i]);
      jobs.push_back(std::async(std::launch::async, [spec, rci, search] { return find_lambda_star(spec, rci, search); }));
    }
    for (size_t i = 0; i < jobs.size(); ++i) rows[start + i] = jobs[i].get();
  }

  std::ostringstream csv;
  csv << "N,L,lambda_star,seconds\n";
  int code = kOk;
  for (size_t i = 0; i < rows.size(); ++i) {
    csv << c.n_list[i] << ',' << lengths[i] << ',';
    if (rows[i].status == SearchStatus::Failure)
      csv << "nan";
    else
      csv << rows[i].lambda;
    csv << ',' << rows[i].seconds << '\n';
    std::cout << "N=" << c.n_list[i] << " L=" << lengths[i] << " lambda*=" << rows[i].lambda << " ("
              << to_string(rows[i].status) << ", " << rows[i].seconds << " s)\n";
    if (exit_for(rows[i].status) != kOk && code == kOk) code = exit_for(rows[i].status);
  }
  write_text(dir / "table1.csv", csv.str());
  return code;
}

Vec invariant_center(const DistributedPolicy& p) {
  const int N = p.n_followers();
  Vec y(2 * N + 1);
  for (int i = 0; i < N; ++i) y.segment(2 * i, 2) = p.followers[static_cast<size_t>(i)].x_bar;
  y(2 * N) = p.leader.x_bar(0);
  return y;
}

int cmd_simulate(const Flags& f) {
  ExperimentConfig c = effective_config(f);
  const fs::path dir = prepare_out(f, c);
  const PlatoonSpec spec = c.scaled_spec();

  std::unique_ptr<Policy> policy;
  Vec center;
  json policy_json;
  if (!f.policy.empty()) {
    policy_json = read_json_file(f.policy);
  } else if (c.architecture == "centralized") {
    const SynthesisResult r = synthesize_rci(build_platoon_system(spec), build_safe_set(spec), build_control_box(spec),
                                             build_disturbance_box(spec), centered(c.rci_options(), spec));
    if (!r.feasible()) {
      std::cerr << "synthesis " << to_string(r.status) << ": " << r.message << '\n';
      return exit_for(r.status);
    }
    policy_json = to_json(*r.parameterization);
  } else {
    const DistributedSynthesis r = synthesize_distributed(spec, c.distributed_options());
    if (!r.feasible()) {
      std::cerr << "synthesis " << to_string(r.status) << ": " << r.message << '\n';
      return exit_for(r.status);
    }
    policy_json = to_json(*r.policy);
  }
  write_json_file((dir / "parameterization.json").string(), policy_json);

  if (policy_json.value("format", "") == "platoon-distributed") {
    auto p = std::make_shared<const DistributedPolicy>(distributed_policy_from_json(policy_json));
    center = invariant_center(*p);
    policy = std::make_unique<DistributedPolicyRunner>(p, c.effort);
  } else {
    auto p = std::make_shared<const RciParameterization>(parameterization_from_json(policy_json));
    center = p->x_bar;
    policy = std::make_unique<CentralizedPolicy>(p, c.effort);
  }
  if (center.size() != spec.state_dim()) throw ConfigError("policy does not match the configured platoon");

  Vec y0 = c.initial_state ? *c.initial_state : nominal_state(spec);
  if (!policy->accepts(y0)) {
    if (c.initial_state) throw ConfigError("initial_state lies outside the policy's invariant set");
    std::cerr << "interval centers lie outside the invariant set; starting from its center instead\n";
    y0 = center;
  }
  const SimulationTrace trace = run_simulation(*policy, spec, y0, c.horizon, c.bias, c.seed);
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  write_text(dir / "trace.csv", csv.str());
  write_json_file((dir / "summary.json").string(), trace_summary(trace));
  std::cout << trace.policy << ": " << trace.records.size() - 1 << " steps, " << trace.violation_count()
            << " violating steps, min headway " << trace.min_headway() << '\n';
  if (!trace.completed) {
    std::cerr << trace.failure << '\n';
    return kSolverFailure;
  }
  return trace.violation_count() > 0 ? kSafetyViolation : kOk;
}

int cmd_compare(const Flags& f) {
  ExperimentConfig c = effective_config(f);
  const fs::path dir = prepare_out(f, c);
  const auto rows = compare_architectures(c.spec, c.density_grid, c.distributed_options(), c.search_options());
  std::ostringstream csv;
  write_comparison_csv(csv, rows);
  write_text(dir / "compare.csv", csv.str());
  int code = kOk;
  for (const auto& r : rows) {
    std::cout << "rho=" << r.point.density() << " N=" << r.point.n_followers << " centralized "
              << r.centralized.lambda << " distributed " << r.distributed.lambda << '\n';
    for (SearchStatus s : {r.centralized.status, r.distributed.status})
      if (exit_for(s) != kOk && code == kOk) code = exit_for(s);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe platoon cruise control via robust control invariant sets"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "Output directory")->capture_default_str();
    sub->add_option("--kappa", f.kappa, "Parameterization length (default 10)");
    sub->add_option("--alpha", f.alpha, "Terminal contraction in [0, 1) (default 0)");
    sub->add_option("--precision", f.precision, "Lambda grid step (default 0.01)");
    sub->add_option("--beta", f.beta, "Leader share of the control box (default 0.5)");
    sub->add_option("--bias", f.bias, "Probability of a box-vertex disturbance (default 0.8)");
    sub->add_option("--seed", f.seed, "Random seed (default 1)");
    sub->add_option("--workers", f.workers, "Concurrent probes or sweep rows (default 1)");
    sub->add_option("--arch", f.arch, "centralized | distributed");
  };

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a policy at the configured lambda");
  common(synth);
  synth->add_option("--lambda", f.lambda, "Disturbance scale");
  CLI::App* lambda = app.add_subcommand("lambda", "Search the largest tolerable disturbance scale");
  common(lambda);
  CLI::App* table = app.add_subcommand("table1", "Lambda* versus platoon size at constant density");
  common(table);
  table->add_option("--n", f.n_list, "Follower counts (overrides n_list)")->delimiter(',');
  CLI::App* sim = app.add_subcommand("simulate", "Closed-loop simulation");
  common(sim);
  sim->add_option("--lambda", f.lambda, "Disturbance scale");
  sim->add_option("--policy", f.policy, "Policy file from synth or lambda")->check(CLI::ExistingFile);
  sim->add_option("--horizon", f.horizon, "Steps (default 120)");
  sim->add_option("--effort", f.effort, "quadratic | l1 | linf");
  CLI::App* compare = app.add_subcommand("compare", "Centralized versus distributed over a density grid");
  common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(f);
    if (lambda->parsed()) return cmd_lambda(f);
    if (table->parsed()) return cmd_table1(f);
    if (sim->parsed()) return cmd_simulate(f);
    if (compare->parsed()) return cmd_compare(f);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kParse;
  } catch (const SpecError& e) {
    std::cerr << "invalid platoon: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}
