#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoon/lp.hpp"
#include "platoon/platoon_model.hpp"

namespace platoon {

/// Raised when the LP backend fails numerically (as opposed to certifying infeasibility).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One disturbance-coordinate vector per parameter block: d_0, ..., d_{kappa-1}.
using Decomposition = std::vector<Vec>;

/// Implicit RCI set
///   Omega = x_bar (+) s * sum_i Phi_i E W,   Phi_i = A^i + xi_i M,   s = 1/(1-alpha)
/// with the invariance-inducing feedback u = u_bar + s * sum_i M_i E d_i.
/// W is the origin-symmetric part of the disturbance box; its center is
/// absorbed into the offsets (x_bar = A x_bar + B u_bar + E w_center).
struct RciParameterization {
  int kappa = 0;
  double alpha = 0.0;
  LinearSystem system;
  Vec x_bar;
  Vec u_bar;
  std::vector<Mat> M;       // kappa blocks, each input_dim x state_dim
  Box disturbance;          // symmetric part, disturbance coordinates
  Vec disturbance_center;
  Mat terminal_map;         // Gamma with Phi_kappa E = E Gamma, Gamma W in alpha W

  // Derived by finalize().
  std::vector<Mat> state_generators;  // Phi_i E, i = 0..kappa-1
  std::vector<Mat> input_generators;  // M_i E

  void finalize();

  int state_dim() const { return system.state_dim(); }
  int input_dim() const { return system.input_dim(); }
  int dist_dim() const { return system.dist_dim(); }
  double scale() const { return 1.0 / (1.0 - alpha); }

  /// Phi_i = A^i + xi_i M, by the recurrence Phi_{i+1} = A Phi_i + B M_i.
  Mat phi(int i) const;
  Mat terminal() const { return phi(kappa); }

  Vec state_of(const Decomposition& d) const;
  Vec input_of(const Decomposition& d) const;

  /// Decomposition of A y + B u(d) + E w obtained by shifting the blocks of d.
  Decomposition successor_decomposition(const Decomposition& d, const Vec& w_raw) const;

  /// Axis-aligned hull of Omega (exact support along coordinate axes).
  Box bounding_box() const;
  /// Range of u(d) over all decompositions.
  Box input_range() const;
};

/// Objective used when several parameterizations are feasible.
struct CostProfile {
  enum class Kind { Feasibility, Linear, Anchor };
  Kind kind = Kind::Feasibility;
  Vec x_bar_cost;  // Linear: x_bar_cost . x_bar + u_bar_cost . u_bar
  Vec u_bar_cost;
  Vec anchor;      // Anchor: minimize ||x_bar - anchor||_1 over finite entries

  static CostProfile feasibility() { return {}; }
  static CostProfile linear(Vec x_cost, Vec u_cost) { return {Kind::Linear, std::move(x_cost), std::move(u_cost), {}}; }
  static CostProfile anchored(Vec target) { return {Kind::Anchor, {}, {}, std::move(target)}; }
};

struct RciOptions {
  int kappa = 10;
  double alpha = 0.0;
  CostProfile cost;
  /// Rows of S and U are tightened by this amount so that LP round-off
  /// never places a reconstructed state or input outside the true sets.
  /// Input rows use at most half their interval width.
  double containment_margin = 1e-7;
  lp::SolverOptions solver;
};

/// Smallest l with rank [B, AB, ..., A^{l-1} B] = n, or -1 if uncontrollable.
int controllability_index(const Mat& A, const Mat& B, double tol = 1e-9);

/// xi_i = (A^{i-1} B, ..., A B, B, 0, ..., 0), n x kappa*m. xi_0 = 0.
Mat build_xi(const Mat& A, const Mat& B, int i, int kappa);

/// Variable layout of the synthesis LP.
struct RciLpLayout {
  int n = 0, m = 0, p = 0, kappa = 0;
  int x_bar = 0;      // n variables
  int u_bar = 0;      // m variables
  int M = 0;          // kappa*m*n variables, M_i(a, b) at M + (i*m + a)*n + b
  int phi = 0;        // (kappa-1)*n*n variables, Phi_i(a, b) at phi + ((i-1)*n + a)*n + b
  int gamma = -1;     // p*p variables when alpha > 0
  struct Counts {
    int directions = 0;  // distinct S row directions up to sign
    int recurrence_rows = 0;
    int terminal_rows = 0;
    int state_abs_vars = 0;
    int state_rows = 0;
    int input_abs_vars = 0;
    int input_rows = 0;
    int fixed_point_rows = 0;
    int terminal_abs_vars = 0;
    int anchor_vars = 0;
  } counts;

  int M_index(int i, int a, int b) const { return M + (i * m + a) * n + b; }
  int phi_index(int i, int a, int b) const { return phi + ((i - 1) * n + a) * n + b; }
};

struct RciLp {
  lp::Model model;
  RciLpLayout layout;
};

/// Builds the single LP whose feasibility certifies an RCI set inside S with
/// inputs inside U for disturbances in W (raw, possibly off-center box).
RciLp assemble_rci_lp(const LinearSystem& system, const Polyhedron& S, const Box& U, const Box& W,
                      const RciOptions& options = {});

enum class SynthesisStatus { Feasible, Infeasible, SolverFailure };
std::string to_string(SynthesisStatus s);

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::SolverFailure;
  std::optional<RciParameterization> parameterization;
  int lp_variables = 0;
  int lp_rows = 0;
  size_t lp_nonzeros = 0;
  double seconds = 0.0;
  std::string message;

  bool feasible() const { return status == SynthesisStatus::Feasible; }
};

SynthesisResult synthesize_rci(const LinearSystem& system, const Polyhedron& S, const Box& U, const Box& W,
                               const RciOptions& options = {},
                               const lp::Backend& backend = *lp::default_backend());

/// Identity residuals of a parameterization.
struct IdentityResiduals {
  double terminal = 0.0;       // max |Phi_kappa E - E Gamma|
  double recurrence = 0.0;     // max |A (A^i + xi_i M) + B M_i - (A^{i+1} + xi_{i+1} M)|
  double offset = 0.0;         // max |x_bar - A x_bar - B u_bar - E w_center|
  double state_containment = 0.0;  // worst support of Omega over rows of S (minus h)
  double input_containment = 0.0;  // worst excess of the input range over U
};
IdentityResiduals check_identities(const RciParameterization& param, const Polyhedron& S, const Box& U);

/// Largest |y - state_of(d)| entry, or +inf if d leaves the disturbance box by more than tol.
double decomposition_residual(const RciParameterization& param, const Vec& y, const Decomposition& d,
                              double box_tol = 1e-9);

/// Decides y in Omega by an LP over decompositions; the loaded LP is reused
/// across queries. One instance per thread.
class MembershipOracle {
 public:
  explicit MembershipOracle(std::shared_ptr<const RciParameterization> param, double tol = 1e-7,
                            std::shared_ptr<const lp::Backend> backend = lp::default_backend());

  /// Throws SolverError when the backend fails to decide.
  std::optional<Decomposition> decompose(const Vec& y);
  bool contains(const Vec& y) { return decompose(y).has_value(); }
  double tolerance() const { return tol_; }

 private:
  std::shared_ptr<const RciParameterization> param_;
  double tol_;
  std::shared_ptr<const lp::Backend> backend_;
  lp::Model model_;
  std::unique_ptr<lp::Session> session_;
};

bool membership(const RciParameterization& param, const Vec& y, double tol = 1e-7);

/// Uniform-or-vertex random decomposition (vertex with probability `vertex_fraction` per block).
template <class Rng>
Decomposition random_decomposition(const RciParameterization& param, Rng& rng, double vertex_fraction = 0.5);

}  // namespace platoon

#include "platoon/detail/random_decomposition.hpp"
