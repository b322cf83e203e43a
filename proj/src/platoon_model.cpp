#include "platoon/platoon_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace platoon {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw SpecError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

double PlatoonSpec::minimum_length() const {
  // x~_N measures leader front to follower-N front: lengths of vehicles 0..N-1.
  double total = 0.0;
  for (int i = 0; i < n_followers && i < static_cast<int>(vehicle_lengths.size()); ++i)
    total += vehicle_lengths[i];
  return total;
}

void PlatoonSpec::validate() const {
  require(n_followers >= 1, "n_followers must be positive");
  const auto count = static_cast<size_t>(vehicle_count());
  require(vehicle_lengths.size() == count, "vehicle_lengths must have N+1 entries");
  require(control_bounds.size() == count, "control_bounds must have N+1 entries");
  require(disturbance_bounds.size() == count, "disturbance_bounds must have N+1 entries");
  for (double l : vehicle_lengths) require(finite(l) && l >= 0.0, "vehicle lengths must be nonnegative");
  require(finite(length_bound), "length_bound must be finite");
  require(length_bound > minimum_length(), "length_bound must exceed the sum of vehicle lengths ahead of the last follower");
  require(finite(speed_min) && finite(speed_max) && speed_min < speed_max, "speed_min < speed_max required");
  require(finite(dt) && dt > 0.0, "dt must be positive");
  require(finite(collision_margin) && collision_margin >= 0.0, "collision_margin must be nonnegative");
  for (size_t i = 0; i < count; ++i) {
    const auto& u = control_bounds[i];
    require(finite(u.lo) && finite(u.hi) && !u.empty(), "empty control interval for vehicle " + std::to_string(i));
    const auto& w = disturbance_bounds[i];
    for (const Interval* iv : {&w.position, &w.velocity}) {
      require(finite(iv->lo) && finite(iv->hi) && !iv->empty(),
              "empty disturbance interval for vehicle " + std::to_string(i));
      require(iv->contains(0.0), "disturbance intervals must contain 0 (vehicle " + std::to_string(i) + ")");
    }
  }
}

PlatoonSpec PlatoonSpec::uniform(int n_followers, double vehicle_length, double length_bound, double speed_min,
                                 double speed_max, double dt, Interval control, VehicleDisturbance disturbance) {
  PlatoonSpec spec;
  spec.n_followers = n_followers;
  const auto count = static_cast<size_t>(std::max(n_followers + 1, 0));
  spec.vehicle_lengths.assign(count, vehicle_length);
  spec.length_bound = length_bound;
  spec.speed_min = speed_min;
  spec.speed_max = speed_max;
  spec.dt = dt;
  spec.control_bounds.assign(count, control);
  spec.disturbance_bounds.assign(count, disturbance);
  return spec;
}

PlatoonSpec PlatoonSpec::with_disturbance_scale(double lambda) const {
  if (!(lambda >= 0.0)) throw SpecError("disturbance scale must be nonnegative");
  PlatoonSpec out = *this;
  for (auto& w : out.disturbance_bounds) {
    w.position = w.position.scaled(lambda);
    w.velocity = w.velocity.scaled(lambda);
  }
  return out;
}

Vec LinearSystem::step(const Vec& y, const Vec& u, const Vec& w) const {
  if (y.size() != A.cols() || u.size() != B.cols() || w.size() != E.cols())
    throw SpecError("step: dimension mismatch");
  return A * y + B * u + E * w;
}

void LinearSystem::check_dimensions() const {
  if (A.rows() != A.cols() || B.rows() != A.rows() || E.rows() != A.rows())
    throw SpecError("linear system: inconsistent matrix dimensions");
}

Box::Box(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw SpecError("box: bound dimensions differ");
  for (Eigen::Index k = 0; k < lower.size(); ++k)
    if (!(lower(k) <= upper(k))) throw SpecError("box: lower bound exceeds upper bound");
}

Box Box::symmetric(const Vec& half_widths) { return Box(-half_widths, half_widths); }

Box Box::from_intervals(const std::vector<Interval>& intervals) {
  Vec lo(static_cast<Eigen::Index>(intervals.size()));
  Vec hi(lo.size());
  for (size_t k = 0; k < intervals.size(); ++k) {
    lo(static_cast<Eigen::Index>(k)) = intervals[k].lo;
    hi(static_cast<Eigen::Index>(k)) = intervals[k].hi;
  }
  return Box(lo, hi);
}

bool Box::contains(const Vec& x, double tol) const {
  if (x.size() != lower.size()) throw SpecError("box: dimension mismatch");
  return ((x.array() >= lower.array() - tol) && (x.array() <= upper.array() + tol)).all();
}

bool Box::is_symmetric(double tol) const { return ((lower + upper).array().abs() <= tol).all(); }

Box Box::scaled(double lambda) const {
  if (lambda < 0) throw SpecError("box: negative scale");
  return Box(lambda * lower, lambda * upper);
}

double Polyhedron::max_violation(const Vec& y) const {
  if (y.size() != H.cols()) throw SpecError("polyhedron: dimension mismatch");
  if (H.rows() == 0) return -std::numeric_limits<double>::infinity();
  return (H * y - h).maxCoeff();
}

void Polyhedron::check() const {
  if (H.rows() != h.size()) throw SpecError("polyhedron: H and h row counts differ");
  for (Eigen::Index k = 0; k < H.rows(); ++k)
    if (H.row(k).cwiseAbs().maxCoeff() == 0.0) throw SpecError("polyhedron: all-zero row");
}

LinearSystem build_platoon_system(const PlatoonSpec& spec) {
  spec.validate();
  const int N = spec.n_followers;
  const int n = spec.state_dim();
  const int m = spec.input_dim();
  const int p = spec.disturbance_dim();
  const double dt = spec.dt;
  const double half_dt2 = 0.5 * dt * dt;

  LinearSystem sys{Mat::Identity(n, n), Mat::Zero(n, m), Mat::Zero(n, p)};
  for (int i = 1; i <= N; ++i) {
    const int xr = 2 * (i - 1);
    const int vr = xr + 1;
    sys.A(xr, vr) = dt;
    sys.B(xr, 0) = half_dt2;
    sys.B(xr, i) = -half_dt2;
    sys.B(vr, 0) = dt;
    sys.B(vr, i) = -dt;
    sys.E(xr, 0) = 1.0;
    sys.E(xr, 2 * i) = -1.0;
    sys.E(vr, 1) = 1.0;
    sys.E(vr, 2 * i + 1) = -1.0;
  }
  sys.B(n - 1, 0) = dt;
  sys.E(n - 1, 1) = 1.0;
  return sys;
}

Polyhedron build_safe_set(const PlatoonSpec& spec) {
  spec.validate();
  const int N = spec.n_followers;
  const int n = spec.state_dim();
  Polyhedron S{Mat::Zero(N + 3, n), Vec::Zero(N + 3)};
  // -(x~_i - x~_{i-1}) <= -(l_{i-1} + margin)
  for (int i = 1; i <= N; ++i) {
    const int r = i - 1;
    S.H(r, 2 * (i - 1)) = -1.0;
    if (i > 1) S.H(r, 2 * (i - 2)) = 1.0;
    S.h(r) = -(spec.vehicle_lengths[i - 1] + spec.collision_margin);
  }
  S.H(N, 2 * (N - 1)) = 1.0;
  S.h(N) = spec.length_bound;
  S.H(N + 1, n - 1) = 1.0;
  S.h(N + 1) = spec.speed_max;
  S.H(N + 2, n - 1) = -1.0;
  S.h(N + 2) = -spec.speed_min;
  return S;
}

Box build_control_box(const PlatoonSpec& spec) {
  spec.validate();
  return Box::from_intervals(spec.control_bounds);
}

Box build_disturbance_box(const PlatoonSpec& spec) {
  spec.validate();
  std::vector<Interval> stacked;
  stacked.reserve(static_cast<size_t>(spec.disturbance_dim()));
  for (const auto& w : spec.disturbance_bounds) {
    stacked.push_back(w.position);
    stacked.push_back(w.velocity);
  }
  return Box::from_intervals(stacked);
}

Vec nominal_state(const PlatoonSpec& spec) {
  spec.validate();
  const int N = spec.n_followers;
  Vec y = Vec::Zero(spec.state_dim());
  const double slot = (spec.length_bound - spec.minimum_length()) / N;
  double ahead = 0.0;
  for (int i = 1; i <= N; ++i) {
    ahead += spec.vehicle_lengths[i - 1];
    y(2 * (i - 1)) = ahead + (i - 0.5) * slot;
  }
  y(2 * N) = 0.5 * (spec.speed_min + spec.speed_max);
  return y;
}

Vec headways(const PlatoonSpec& spec, const Vec& y) {
  const int N = spec.n_followers;
  if (y.size() != spec.state_dim()) throw SpecError("headways: dimension mismatch");
  Vec h(N);
  double prev = 0.0;
  for (int i = 1; i <= N; ++i) {
    const double xi = y(2 * (i - 1));
    h(i - 1) = xi - prev - spec.vehicle_lengths[i - 1];
    prev = xi;
  }
  return h;
}

}  // namespace platoon
