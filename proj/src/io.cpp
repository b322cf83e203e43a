#include "platoon/io.hpp"

#include <fstream>

namespace platoon {

using nlohmann::json;

namespace {

Interval interval_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(what + ": expected [lo, hi]");
  Interval i{j[0].get<double>(), j[1].get<double>()};
  if (i.empty()) throw ConfigError(what + ": empty interval");
  return i;
}

json interval_to(const Interval& i) { return json::array({i.lo, i.hi}); }

VehicleDisturbance disturbance_from(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("position") || !j.contains("velocity"))
    throw ConfigError(what + ": expected {\"position\": [lo, hi], \"velocity\": [lo, hi]}");
  return {interval_from(j["position"], what + ".position"), interval_from(j["velocity"], what + ".velocity")};
}

template <class T>
T number(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return j[key].get<T>();
}

Vec vec_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ConfigError(what + ": expected numbers");
    v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
  }
  return v;
}

json vec_to(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json system_to(const LinearSystem& s) {
  return {{"A", matrix_to_json(s.A)}, {"B", matrix_to_json(s.B)}, {"E", matrix_to_json(s.E)}};
}

LinearSystem system_from(const json& j) {
  LinearSystem s{matrix_from_json(j.at("A")), matrix_from_json(j.at("B")), matrix_from_json(j.at("E"))};
  s.check_dimensions();
  return s;
}

}  // namespace

PlatoonSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("platoon: expected an object");
  PlatoonSpec spec;
  if (!j.contains("followers") || !j["followers"].is_number_integer()) throw ConfigError("platoon.followers: required integer");
  spec.n_followers = j["followers"].get<int>();
  if (spec.n_followers < 1) throw ConfigError("platoon.followers: must be at least 1");
  const auto count = static_cast<size_t>(spec.n_followers + 1);

  if (j.contains("vehicle_lengths")) {
    const Vec l = vec_from(j["vehicle_lengths"], "platoon.vehicle_lengths");
    spec.vehicle_lengths.assign(l.data(), l.data() + l.size());
  } else if (j.contains("vehicle_length")) {
    spec.vehicle_lengths.assign(count, number<double>(j, "vehicle_length", 0.0));
  } else {
    throw ConfigError("platoon: vehicle_length or vehicle_lengths required");
  }
  if (!j.contains("length_bound")) throw ConfigError("platoon.length_bound: required");
  spec.length_bound = number<double>(j, "length_bound", 0.0);
  if (!j.contains("speed")) throw ConfigError("platoon.speed: required [vmin, vmax]");
  const Interval speed = interval_from(j["speed"], "platoon.speed");
  spec.speed_min = speed.lo;
  spec.speed_max = speed.hi;
  spec.dt = number<double>(j, "dt", 0.5);
  spec.collision_margin = number<double>(j, "collision_margin", 0.0);

  if (j.contains("controls")) {
    if (!j["controls"].is_array()) throw ConfigError("platoon.controls: expected an array");
    for (size_t k = 0; k < j["controls"].size(); ++k)
      spec.control_bounds.push_back(interval_from(j["controls"][k], "platoon.controls[" + std::to_string(k) + "]"));
  } else if (j.contains("control")) {
    spec.control_bounds.assign(count, interval_from(j["control"], "platoon.control"));
  } else {
    throw ConfigError("platoon: control or controls required");
  }

  if (j.contains("disturbances")) {
    if (!j["disturbances"].is_array()) throw ConfigError("platoon.disturbances: expected an array");
    for (size_t k = 0; k < j["disturbances"].size(); ++k)
      spec.disturbance_bounds.push_back(
          disturbance_from(j["disturbances"][k], "platoon.disturbances[" + std::to_string(k) + "]"));
  } else if (j.contains("disturbance")) {
    spec.disturbance_bounds.assign(count, disturbance_from(j["disturbance"], "platoon.disturbance"));
  } else {
    throw ConfigError("platoon: disturbance or disturbances required");
  }
  try {
    spec.validate();
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

json to_json(const PlatoonSpec& spec) {
  json controls = json::array(), dist = json::array();
  for (const auto& c : spec.control_bounds) controls.push_back(interval_to(c));
  for (const auto& d : spec.disturbance_bounds)
    dist.push_back({{"position", interval_to(d.position)}, {"velocity", interval_to(d.velocity)}});
  return {{"followers", spec.n_followers},
          {"vehicle_lengths", spec.vehicle_lengths},
          {"length_bound", spec.length_bound},
          {"speed", json::array({spec.speed_min, spec.speed_max})},
          {"dt", spec.dt},
          {"collision_margin", spec.collision_margin},
          {"controls", controls},
          {"disturbances", dist}};
}

RciOptions ExperimentConfig::rci_options() const {
  RciOptions o;
  o.kappa = kappa;
  o.alpha = alpha;
  return o;
}

DistributedOptions ExperimentConfig::distributed_options() const {
  DistributedOptions o;
  o.beta = beta;
  o.rci = rci_options();
  return o;
}

LambdaSearchOptions ExperimentConfig::search_options() const {
  LambdaSearchOptions o;
  o.precision = precision;
  o.lambda_cap = lambda_cap;
  o.workers = workers;
  return o;
}

ExperimentConfig parse_config(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    if (!j.contains("platoon")) throw ConfigError("config: \"platoon\" section required");
    ExperimentConfig c;
    c.spec = spec_from_json(j["platoon"]);
    c.lambda = number<double>(j, "lambda", c.lambda);
    c.kappa = number<int>(j, "kappa", c.kappa);
    c.alpha = number<double>(j, "alpha", c.alpha);
    c.precision = number<double>(j, "precision", c.precision);
    c.lambda_cap = number<double>(j, "lambda_cap", c.lambda_cap);
    c.beta = number<double>(j, "beta", c.beta);
    c.bias = number<double>(j, "bias", c.bias);
    c.seed = number<std::uint64_t>(j, "seed", c.seed);
    c.horizon = number<int>(j, "horizon", c.horizon);
    c.workers = number<int>(j, "workers", c.workers);
    if (j.contains("architecture")) c.architecture = j["architecture"].get<std::string>();
    if (c.architecture != "centralized" && c.architecture != "distributed")
      throw ConfigError("architecture: expected centralized or distributed");
    if (j.contains("effort")) c.effort = parse_effort_cost(j["effort"].get<std::string>());
    if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<int>>();
    if (j.contains("density_grid")) {
      for (const auto& p : j["density_grid"]) {
        if (!p.is_object() || !p.contains("N") || !p.contains("L")) throw ConfigError("density_grid: expected {\"N\", \"L\"}");
        c.density_grid.push_back({p["N"].get<int>(), p["L"].get<double>()});
      }
    }
    if (j.contains("initial_state")) c.initial_state = vec_from(j["initial_state"], "initial_state");
    if (c.lambda < 0) throw ConfigError("lambda: must be nonnegative");
    if (c.kappa < 1) throw ConfigError("kappa: must be positive");
    if (c.alpha < 0 || c.alpha >= 1) throw ConfigError("alpha: must lie in [0, 1)");
    if (c.precision <= 0) throw ConfigError("precision: must be positive");
    if (c.bias < 0 || c.bias > 1) throw ConfigError("bias: must lie in [0, 1]");
    if (c.beta < 0 || c.beta > 1) throw ConfigError("beta: must lie in [0, 1]");
    if (c.horizon < 0) throw ConfigError("horizon: must be nonnegative");
    if (c.workers < 1) throw ConfigError("workers: must be positive");
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j = {{"platoon", to_json(c.spec)},
            {"lambda", c.lambda},
            {"kappa", c.kappa},
            {"alpha", c.alpha},
            {"precision", c.precision},
            {"lambda_cap", c.lambda_cap},
            {"beta", c.beta},
            {"bias", c.bias},
            {"seed", c.seed},
            {"horizon", c.horizon},
            {"workers", c.workers},
            {"architecture", c.architecture},
            {"effort", to_string(c.effort)},
            {"n_list", c.n_list}};
  json grid = json::array();
  for (const auto& p : c.density_grid) grid.push_back({{"N", p.n_followers}, {"L", p.length_bound}});
  j["density_grid"] = grid;
  if (c.initial_state) j["initial_state"] = vec_to(*c.initial_state);
  return j;
}

json matrix_to_json(const Mat& m) {
  std::vector<double> data;
  data.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ConfigError("matrix: data size does not match rows x cols");
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<size_t>(r * cols + c)];
  return m;
}

json to_json(const RciParameterization& p) {
  json M = json::array();
  for (const auto& Mi : p.M) M.push_back(matrix_to_json(Mi));
  return {{"format", "platoon-rci"},
          {"version", 1},
          {"kappa", p.kappa},
          {"alpha", p.alpha},
          {"state_dim", p.state_dim()},
          {"input_dim", p.input_dim()},
          {"dist_dim", p.dist_dim()},
          {"system", system_to(p.system)},
          {"x_bar", vec_to(p.x_bar)},
          {"u_bar", vec_to(p.u_bar)},
          {"M", M},
          {"disturbance_half_width", vec_to(p.disturbance.half_width())},
          {"disturbance_center", vec_to(p.disturbance_center)},
          {"terminal_map", matrix_to_json(p.terminal_map)}};
}

RciParameterization parameterization_from_json(const json& j) {
  try {
    if (j.value("format", "") != "platoon-rci") throw ConfigError("parameterization: unknown format");
    RciParameterization p;
    p.kappa = j.at("kappa").get<int>();
    p.alpha = j.at("alpha").get<double>();
    p.system = system_from(j.at("system"));
    p.x_bar = vec_from(j.at("x_bar"), "x_bar");
    p.u_bar = vec_from(j.at("u_bar"), "u_bar");
    for (const auto& Mi : j.at("M")) p.M.push_back(matrix_from_json(Mi));
    p.disturbance = Box::symmetric(vec_from(j.at("disturbance_half_width"), "disturbance_half_width"));
    p.disturbance_center = vec_from(j.at("disturbance_center"), "disturbance_center");
    p.terminal_map = matrix_from_json(j.at("terminal_map"));
    if (j.at("state_dim").get<int>() != p.state_dim() || j.at("input_dim").get<int>() != p.input_dim() ||
        j.at("dist_dim").get<int>() != p.dist_dim())
      throw ConfigError("parameterization: dimension header does not match matrices");
    if (static_cast<int>(p.M.size()) != p.kappa) throw ConfigError("parameterization: expected kappa blocks of M");
    for (const auto& Mi : p.M)
      if (Mi.rows() != p.input_dim() || Mi.cols() != p.state_dim()) throw ConfigError("parameterization: M block shape");
    if (p.x_bar.size() != p.state_dim() || p.u_bar.size() != p.input_dim() || p.disturbance.dim() != p.dist_dim() ||
        p.disturbance_center.size() != p.dist_dim() || p.terminal_map.rows() != p.dist_dim() ||
        p.terminal_map.cols() != p.dist_dim())
      throw ConfigError("parameterization: vector sizes do not match the header");
    p.finalize();
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parameterization: ") + e.what());
  }
}

json to_json(const DistributedPolicy& policy) {
  json followers = json::array(), boxes = json::array(), env = json::array();
  for (const auto& f : policy.followers) followers.push_back(to_json(f));
  for (const auto& b : policy.follower_boxes) boxes.push_back(interval_to(b));
  for (const auto& e : policy.envelopes) env.push_back(interval_to(e));
  return {{"format", "platoon-distributed"},
          {"version", 1},
          {"beta", policy.beta},
          {"shared_follower_synthesis", policy.shared_follower_synthesis},
          {"leader", to_json(policy.leader)},
          {"followers", followers},
          {"leader_box", interval_to(policy.leader_box)},
          {"follower_boxes", boxes},
          {"envelopes", env}};
}

DistributedPolicy distributed_policy_from_json(const json& j) {
  try {
    if (j.value("format", "") != "platoon-distributed") throw ConfigError("distributed policy: unknown format");
    DistributedPolicy p;
    p.beta = j.at("beta").get<double>();
    p.shared_follower_synthesis = j.value("shared_follower_synthesis", false);
    p.leader = parameterization_from_json(j.at("leader"));
    for (const auto& f : j.at("followers")) p.followers.push_back(parameterization_from_json(f));
    p.leader_box = interval_from(j.at("leader_box"), "leader_box");
    for (const auto& b : j.at("follower_boxes")) p.follower_boxes.push_back(interval_from(b, "follower_boxes"));
    for (const auto& e : j.at("envelopes")) p.envelopes.push_back(interval_from(e, "envelopes"));
    if (p.follower_boxes.size() != p.followers.size() || p.envelopes.size() != p.followers.size())
      throw ConfigError("distributed policy: per-follower lists differ in length");
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("distributed policy: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace platoon
