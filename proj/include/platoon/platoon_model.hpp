#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace platoon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when a platoon description or a set argument is malformed.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double center() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
  double width() const { return hi - lo; }
  bool empty() const { return !(lo <= hi); }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  Interval scaled(double s) const { return s >= 0 ? Interval{s * lo, s * hi} : Interval{s * hi, s * lo}; }
};

/// Per-vehicle additive disturbance bounds: position channel (m), velocity channel (m/s).
struct VehicleDisturbance {
  Interval position;
  Interval velocity;
};

/// User-level description of a platoon of N+1 vehicles (index 0 is the leader).
struct PlatoonSpec {
  int n_followers = 1;
  std::vector<double> vehicle_lengths;  // N+1 entries, meters
  double length_bound = 0.0;            // L, meters
  double speed_min = 0.0;               // leader speed band, m/s
  double speed_max = 0.0;
  double dt = 0.5;                      // sampling time, s
  std::vector<Interval> control_bounds;                // N+1 entries, m/s^2
  std::vector<VehicleDisturbance> disturbance_bounds;  // N+1 entries
  double collision_margin = 0.0;  // tightens every collision row of the safe set

  int vehicle_count() const { return n_followers + 1; }
  int state_dim() const { return 2 * n_followers + 1; }
  int input_dim() const { return n_followers + 1; }
  int disturbance_dim() const { return 2 * (n_followers + 1); }

  /// Minimum front-to-front distance between leader and last follower.
  double minimum_length() const;

  /// Throws SpecError when any invariant is violated.
  void validate() const;

  /// Identical vehicles, symmetric per-vehicle control bounds and one
  /// disturbance profile repeated for every vehicle.
  static PlatoonSpec uniform(int n_followers, double vehicle_length, double length_bound,
                             double speed_min, double speed_max, double dt, Interval control,
                             VehicleDisturbance disturbance);

  /// Copy with every disturbance interval multiplied by `lambda`.
  PlatoonSpec with_disturbance_scale(double lambda) const;
};

/// y+ = A y + B u + E w.
/// State:       (x~_1, v~_1, ..., x~_N, v~_N, v_0)
/// Input:       (u_0, ..., u_N)
/// Disturbance: (w_{0,x}, w_{0,v}, ..., w_{N,x}, w_{N,v})
struct LinearSystem {
  Mat A;
  Mat B;
  Mat E;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  int dist_dim() const { return static_cast<int>(E.cols()); }

  Vec step(const Vec& y, const Vec& u, const Vec& w) const;
  void check_dimensions() const;
};

/// Axis-aligned box {x : lower <= x <= upper}.
struct Box {
  Vec lower;
  Vec upper;

  Box() = default;
  Box(Vec lo, Vec hi);

  static Box symmetric(const Vec& half_widths);
  static Box from_intervals(const std::vector<Interval>& intervals);

  int dim() const { return static_cast<int>(lower.size()); }
  Vec center() const { return 0.5 * (lower + upper); }
  Vec half_width() const { return 0.5 * (upper - lower); }
  Interval interval(int k) const { return {lower(k), upper(k)}; }
  bool contains(const Vec& x, double tol = 0.0) const;
  bool is_symmetric(double tol = 1e-12) const;
  Box scaled(double lambda) const;
  /// Origin-symmetric part: this box equals center() + symmetric_part().
  Box symmetric_part() const { return symmetric(half_width()); }
};

/// H-representation {y : H y <= h}.
struct Polyhedron {
  Mat H;
  Vec h;

  int rows() const { return static_cast<int>(H.rows()); }
  int dim() const { return static_cast<int>(H.cols()); }
  /// Largest row violation max_k (H_k y - h_k); nonpositive iff y is inside.
  double max_violation(const Vec& y) const;
  bool contains(const Vec& y, double tol = 0.0) const { return max_violation(y) <= tol; }
  void check() const;
};

LinearSystem build_platoon_system(const PlatoonSpec& spec);

/// Collision rows x~_i - x~_{i-1} >= l_{i-1} (+ margin), length row x~_N <= L
/// and the leader speed band, in that order.
Polyhedron build_safe_set(const PlatoonSpec& spec);

Box build_control_box(const PlatoonSpec& spec);
Box build_disturbance_box(const PlatoonSpec& spec);

/// Vehicles at the centers of their equally split position slots, zero
/// relative velocity and the leader at mid speed band.
Vec nominal_state(const PlatoonSpec& spec);

/// Headways h_i = x~_i - x~_{i-1} - l_{i-1} with x~_0 = 0.
Vec headways(const PlatoonSpec& spec, const Vec& y);

}  // namespace platoon
