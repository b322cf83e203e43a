#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "platoon/rci.hpp"

namespace platoon {

struct LambdaSearchOptions {
  double precision = 0.01;
  double lambda_cap = 8.0;
  /// Concurrent probes during the bracketing phase.
  int workers = 1;
};

struct LambdaProbe {
  double lambda = 0.0;
  SynthesisStatus status = SynthesisStatus::SolverFailure;
  double seconds = 0.0;
  std::string message;
};

enum class SearchStatus {
  Found,       // lambda is feasible, lambda + precision infeasible
  Capped,      // feasible all the way up to lambda_cap
  Infeasible,  // not even lambda = 0 is feasible
  Failure,     // a probe failed numerically; bracket reported
};
std::string to_string(SearchStatus s);

template <class T>
struct LambdaSearchResult {
  SearchStatus status = SearchStatus::Failure;
  double lambda = 0.0;         // largest certified-feasible grid point
  double lambda_above = 0.0;   // smallest certified-infeasible grid point (or cap)
  std::optional<T> value;      // artifact synthesized at lambda
  std::vector<LambdaProbe> probes;
  std::vector<std::string> warnings;
  double seconds = 0.0;
  std::string message;

  bool ok() const { return status == SearchStatus::Found || status == SearchStatus::Capped; }
};

/// Outcome of one probe: feasibility verdict plus the artifact when feasible.
template <class T>
struct ProbeOutcome {
  SynthesisStatus status = SynthesisStatus::SolverFailure;
  std::optional<T> value;
  std::string message;
};

/// Grid-snapped bisection for the largest feasible multiple of `precision`.
/// The bracket doubles from one grid step until infeasible or the cap, then
/// bisects on integer grid indices. `probe(lambda)` returns ProbeOutcome<T>.
template <class T, class Probe>
LambdaSearchResult<T> grid_bisection(Probe probe, const LambdaSearchOptions& options) {
  if (!(options.precision > 0.0)) throw SpecError("lambda search: precision must be positive");
  if (!(options.lambda_cap >= options.precision)) throw SpecError("lambda search: cap below precision");
  const auto t0 = std::chrono::steady_clock::now();
  const long cap_k = static_cast<long>(std::floor(options.lambda_cap / options.precision + 1e-9));
  auto lambda_of = [&](long k) { return k == cap_k ? options.lambda_cap : static_cast<double>(k) * options.precision; };

  LambdaSearchResult<T> result;
  std::map<long, SynthesisStatus> verdicts;
  std::map<long, T> artifacts;

  auto record = [&](long k, ProbeOutcome<T> out, double seconds) {
    result.probes.push_back({lambda_of(k), out.status, seconds, out.message});
    verdicts[k] = out.status;
    if (out.status == SynthesisStatus::Feasible && out.value) artifacts.insert_or_assign(k, std::move(*out.value));
  };
  auto run = [&](long k) {
    const auto s0 = std::chrono::steady_clock::now();
    ProbeOutcome<T> out = probe(lambda_of(k));
    return std::make_pair(std::move(out), std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count());
  };
  auto finish = [&](SearchStatus status, long lo, long hi) {
    result.status = status;
    result.lambda = lo >= 0 ? lambda_of(lo) : 0.0;
    result.lambda_above = lambda_of(hi);
    if (lo >= 0) {
      auto it = artifacts.find(lo);
      if (it != artifacts.end()) result.value = std::move(it->second);
    }
    long lowest_infeasible = cap_k + 1;
    for (const auto& [k, v] : verdicts)
      if (v == SynthesisStatus::Infeasible) lowest_infeasible = std::min(lowest_infeasible, k);
    for (const auto& [k, v] : verdicts)
      if (v == SynthesisStatus::Feasible && k > lowest_infeasible)
        result.warnings.push_back("non-monotone feasibility: lambda " + std::to_string(lambda_of(k)) +
                                  " feasible above infeasible " + std::to_string(lambda_of(lowest_infeasible)));
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::move(result);
  };

  // Bracketing: grid indices 1, 2, 4, ... (cap), issued in batches of `workers`.
  std::vector<long> ladder;
  for (long k = 1; k < cap_k; k *= 2) ladder.push_back(k);
  ladder.push_back(cap_k);
  long lo = 0, hi = -1;
  const size_t batch = static_cast<size_t>(std::max(1, options.workers));
  for (size_t start = 0; start < ladder.size() && hi < 0; start += batch) {
    const size_t end = std::min(ladder.size(), start + batch);
    std::vector<std::pair<ProbeOutcome<T>, double>> outs;
    if (end - start == 1) {
      outs.push_back(run(ladder[start]));
    } else {
      std::vector<std::future<std::pair<ProbeOutcome<T>, double>>> futures;
      for (size_t i = start; i < end; ++i) futures.push_back(std::async(std::launch::async, run, ladder[i]));
      for (auto& f : futures) outs.push_back(f.get());
    }
    for (size_t i = start; i < end; ++i) {
      const long k = ladder[i];
      const SynthesisStatus st = outs[i - start].first.status;
      record(k, std::move(outs[i - start].first), outs[i - start].second);
      if (hi >= 0) continue;  // speculative probes past the bracket are logged only
      if (st == SynthesisStatus::SolverFailure) {
        result.message = "solver failure at lambda " + std::to_string(lambda_of(k));
        return finish(SearchStatus::Failure, lo > 0 ? lo : -1, k);
      }
      if (st == SynthesisStatus::Feasible)
        lo = k;
      else
        hi = k;
    }
  }
  if (hi < 0) return finish(SearchStatus::Capped, cap_k, cap_k);

  if (lo == 0) {
    // Even one grid step is too much; settle whether any disturbance is tolerable.
    auto [out, secs] = run(0);
    const SynthesisStatus st = out.status;
    record(0, std::move(out), secs);
    if (st == SynthesisStatus::Feasible) return finish(SearchStatus::Found, 0, hi);
    if (st == SynthesisStatus::Infeasible) return finish(SearchStatus::Infeasible, -1, 0);
    result.message = "solver failure at lambda 0";
    return finish(SearchStatus::Failure, -1, hi);
  }

  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    auto [out, secs] = run(mid);
    const SynthesisStatus st = out.status;
    record(mid, std::move(out), secs);
    if (st == SynthesisStatus::SolverFailure) {
      result.message = "solver failure at lambda " + std::to_string(lambda_of(mid));
      return finish(SearchStatus::Failure, lo, hi);
    }
    if (st == SynthesisStatus::Feasible)
      lo = mid;
    else
      hi = mid;
  }
  return finish(SearchStatus::Found, lo, hi);
}

/// Largest lambda on the precision grid for which an RCI set exists for
/// disturbances in lambda * W0.
LambdaSearchResult<RciParameterization> find_lambda_star(const LinearSystem& system, const Polyhedron& S,
                                                         const Box& U, const Box& W0,
                                                         const RciOptions& rci = {},
                                                         const LambdaSearchOptions& options = {});

/// Convenience overload building the model from a platoon description.
LambdaSearchResult<RciParameterization> find_lambda_star(const PlatoonSpec& spec, const RciOptions& rci = {},
                                                         const LambdaSearchOptions& options = {});

/// CSV: lambda,status,seconds
void write_probe_log(std::ostream& os, const std::vector<LambdaProbe>& probes);

}  // namespace platoon
