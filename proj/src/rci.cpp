#include "platoon/rci.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "platoon/set_calculus.hpp"

namespace platoon {

using lp::LinearExpr;

namespace {

struct Nonzero {
  int index;
  double value;
};

/// Column-wise nonzero lists of a dense matrix.
std::vector<std::vector<Nonzero>> column_nonzeros(const Mat& X) {
  std::vector<std::vector<Nonzero>> cols(static_cast<size_t>(X.cols()));
  for (int j = 0; j < X.cols(); ++j)
    for (int i = 0; i < X.rows(); ++i)
      if (X(i, j) != 0.0) cols[static_cast<size_t>(j)].push_back({i, X(i, j)});
  return cols;
}

std::vector<std::vector<Nonzero>> row_nonzeros(const Mat& X) { return column_nonzeros(X.transpose()); }

Vec clamp_to(const Vec& x, const Box& box) { return x.cwiseMax(box.lower).cwiseMin(box.upper); }

}  // namespace

// ---------------------------------------------------------------------------
// RciParameterization

void RciParameterization::finalize() {
  const Mat& E = system.E;
  state_generators.clear();
  input_generators.clear();
  Mat phi_i = Mat::Identity(state_dim(), state_dim());
  for (int i = 0; i < kappa; ++i) {
    state_generators.push_back(phi_i * E);
    input_generators.push_back(M[static_cast<size_t>(i)] * E);
    phi_i = system.A * phi_i + system.B * M[static_cast<size_t>(i)];
  }
  if (terminal_map.size() == 0) terminal_map = Mat::Zero(dist_dim(), dist_dim());
}

Mat RciParameterization::phi(int i) const {
  if (i < 0 || i > kappa) throw SpecError("phi: index out of range");
  Mat out = Mat::Identity(state_dim(), state_dim());
  for (int k = 0; k < i; ++k) out = system.A * out + system.B * M[static_cast<size_t>(k)];
  return out;
}

Vec RciParameterization::state_of(const Decomposition& d) const {
  if (static_cast<int>(d.size()) != kappa) throw SpecError("state_of: wrong number of blocks");
  Vec acc = Vec::Zero(state_dim());
  for (int i = 0; i < kappa; ++i) acc += state_generators[static_cast<size_t>(i)] * d[static_cast<size_t>(i)];
  return x_bar + scale() * acc;
}

Vec RciParameterization::input_of(const Decomposition& d) const {
  if (static_cast<int>(d.size()) != kappa) throw SpecError("input_of: wrong number of blocks");
  Vec acc = Vec::Zero(input_dim());
  for (int i = 0; i < kappa; ++i) acc += input_generators[static_cast<size_t>(i)] * d[static_cast<size_t>(i)];
  return u_bar + scale() * acc;
}

Decomposition RciParameterization::successor_decomposition(const Decomposition& d, const Vec& w_raw) const {
  Decomposition next(d.size());
  for (size_t i = d.size() - 1; i >= 1; --i) next[i] = d[i - 1];
  next[0] = terminal_map * d.back() + (1.0 - alpha) * (w_raw - disturbance_center);
  return next;
}

Box RciParameterization::bounding_box() const {
  Vec reach = Vec::Zero(state_dim());
  const Vec r = disturbance.half_width();
  for (const auto& G : state_generators) reach += G.cwiseAbs() * r;
  reach *= scale();
  return Box(x_bar - reach, x_bar + reach);
}

Box RciParameterization::input_range() const {
  Vec reach = Vec::Zero(input_dim());
  const Vec r = disturbance.half_width();
  for (const auto& G : input_generators) reach += G.cwiseAbs() * r;
  reach *= scale();
  return Box(u_bar - reach, u_bar + reach);
}

// ---------------------------------------------------------------------------
// Structural helpers

int controllability_index(const Mat& A, const Mat& B, double tol) {
  const auto n = A.rows();
  Mat K(n, 0);
  Mat block = B;
  for (int l = 1; l <= n; ++l) {
    Mat next(n, K.cols() + block.cols());
    next << K, block;
    K = std::move(next);
    Eigen::FullPivLU<Mat> lu(K);
    lu.setThreshold(tol);
    if (lu.rank() == n) return l;
    block = A * block;
  }
  return -1;
}

Mat build_xi(const Mat& A, const Mat& B, int i, int kappa) {
  if (i < 0 || i > kappa) throw SpecError("build_xi: index out of range");
  const auto n = A.rows();
  const auto m = B.cols();
  Mat xi = Mat::Zero(n, kappa * m);
  Mat power = B;  // A^{i-1-j} B for block j, filled right to left
  for (int j = i - 1; j >= 0; --j) {
    xi.block(0, j * m, n, m) = power;
    power = A * power;
  }
  return xi;
}

std::string to_string(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Feasible: return "feasible";
    case SynthesisStatus::Infeasible: return "infeasible";
    case SynthesisStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// LP assembly

RciLp assemble_rci_lp(const LinearSystem& system, const Polyhedron& S, const Box& U, const Box& W,
                      const RciOptions& options) {
  system.check_dimensions();
  S.check();
  const int n = system.state_dim();
  const int m = system.input_dim();
  const int p = system.dist_dim();
  const int kappa = options.kappa;
  const double alpha = options.alpha;
  if (S.dim() != n) throw SpecError("assemble_rci_lp: safe set dimension mismatch");
  if (U.dim() != m) throw SpecError("assemble_rci_lp: control box dimension mismatch");
  if (W.dim() != p) throw SpecError("assemble_rci_lp: disturbance box dimension mismatch");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw SpecError("assemble_rci_lp: alpha must lie in [0, 1)");
  const int ctrb = controllability_index(system.A, system.B);
  if (ctrb < 0) throw SpecError("assemble_rci_lp: (A, B) is not controllable");
  if (kappa <= ctrb)
    throw SpecError("assemble_rci_lp: kappa must exceed the controllability index (" + std::to_string(ctrb) + ")");

  const double s = 1.0 / (1.0 - alpha);
  const Vec r = W.half_width();
  const Vec center = W.center();
  const double margin = options.containment_margin;

  RciLp out;
  lp::Model& model = out.model;
  RciLpLayout& L = out.layout;
  L.n = n;
  L.m = m;
  L.p = p;
  L.kappa = kappa;
  L.x_bar = model.add_variables(n);
  L.u_bar = model.add_variables(m);
  L.M = model.add_variables(kappa * m * n);
  L.phi = model.add_variables((kappa - 1) * n * n);

  const auto A_rows = row_nonzeros(system.A);
  const auto B_rows = row_nonzeros(system.B);
  const auto E_cols = column_nonzeros(system.E);

  // Phi_i(a, b) for i < kappa as expressions (Phi_0 = I is constant).
  auto phi_expr = [&](int i, int a, int b) {
    if (i == 0) return LinearExpr(a == b ? 1.0 : 0.0);
    return LinearExpr::var(L.phi_index(i, a, b));
  };
  // (A Phi_i + B M_i)(a, b) = Phi_{i+1}(a, b)
  auto next_phi_expr = [&](int i, int a, int b) {
    LinearExpr e;
    for (const auto& [c, v] : A_rows[static_cast<size_t>(a)]) e.add(phi_expr(i, c, b), v);
    for (const auto& [k, v] : B_rows[static_cast<size_t>(a)]) e.add_term(L.M_index(i, k, b), v);
    return e;
  };

  // Recurrence Phi_{i+1} = A Phi_i + B M_i for the lifted variables.
  for (int i = 1; i < kappa; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        model.add_equality(LinearExpr::var(L.phi_index(i, a, b)) - next_phi_expr(i - 1, a, b));
        ++L.counts.recurrence_rows;
      }

  // Terminal condition.
  if (alpha == 0.0) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        model.add_equality(next_phi_expr(kappa - 1, a, b));
        ++L.counts.terminal_rows;
      }
  } else {
    L.gamma = model.add_variables(p * p);
    std::vector<std::vector<LinearExpr>> gamma(static_cast<size_t>(p), std::vector<LinearExpr>(static_cast<size_t>(p)));
    for (int k = 0; k < p; ++k)
      for (int j = 0; j < p; ++j) gamma[static_cast<size_t>(k)][static_cast<size_t>(j)] = LinearExpr::var(L.gamma + k * p + j);
    // Phi_kappa E = E Gamma
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < p; ++j) {
        LinearExpr e;
        for (const auto& [b, v] : E_cols[static_cast<size_t>(j)]) e.add(next_phi_expr(kappa - 1, a, b), v);
        for (int k = 0; k < p; ++k)
          if (system.E(a, k) != 0.0) e.add_term(L.gamma + k * p + j, -system.E(a, k));
        model.add_equality(e);
        ++L.counts.terminal_rows;
      }
    const int before = model.num_variables();
    const Box Wsym = W.symmetric_part();
    add_box_in_scaled_box(model, gamma, Wsym, alpha, Wsym);
    L.counts.terminal_abs_vars = model.num_variables() - before;
  }

  // Generator entry (h Phi_i E)_j for a sparse row direction h.
  auto generator_expr = [&](const std::vector<Nonzero>& h, int i, int j) {
    LinearExpr e;
    for (const auto& [a, ha] : h)
      for (const auto& [b, eb] : E_cols[static_cast<size_t>(j)]) e.add(phi_expr(i, a, b), ha * eb);
    e.compress();
    return e;
  };

  // Omega inside S. Rows that differ only in sign share their |.| variables.
  std::vector<int> dir_of_row(static_cast<size_t>(S.rows()), -1);
  std::vector<double> sign_of_row(static_cast<size_t>(S.rows()), 1.0);
  std::vector<int> dir_rep;
  for (int k = 0; k < S.rows(); ++k) {
    for (size_t d = 0; d < dir_rep.size(); ++d) {
      const auto hk = S.H.row(k);
      const auto hd = S.H.row(dir_rep[d]);
      if (hk == hd || hk == -hd) {
        dir_of_row[static_cast<size_t>(k)] = static_cast<int>(d);
        sign_of_row[static_cast<size_t>(k)] = hk == hd ? 1.0 : -1.0;
        break;
      }
    }
    if (dir_of_row[static_cast<size_t>(k)] < 0) {
      dir_of_row[static_cast<size_t>(k)] = static_cast<int>(dir_rep.size());
      dir_rep.push_back(k);
    }
  }
  L.counts.directions = static_cast<int>(dir_rep.size());

  std::vector<LinearExpr> dir_reach(dir_rep.size());  // sum_{i,j} |(h Phi_i E)_j| r_j
  for (size_t d = 0; d < dir_rep.size(); ++d) {
    std::vector<Nonzero> h;
    for (int a = 0; a < n; ++a)
      if (S.H(dir_rep[d], a) != 0.0) h.push_back({a, S.H(dir_rep[d], a)});
    for (int i = 0; i < kappa; ++i)
      for (int j = 0; j < p; ++j) {
        if (r(j) == 0.0) continue;
        LinearExpr g = generator_expr(h, i, j);
        if (g.is_constant()) {
          dir_reach[d].add_constant(std::abs(g.constant()) * r(j));
        } else {
          dir_reach[d].add_term(model.add_abs_bound(g), r(j));
          ++L.counts.state_abs_vars;
        }
      }
  }
  for (int k = 0; k < S.rows(); ++k) {
    LinearExpr row;
    for (int a = 0; a < n; ++a) row.add_term(L.x_bar + a, S.H(k, a));
    row.add(dir_reach[static_cast<size_t>(dir_of_row[static_cast<size_t>(k)])], s);
    model.add_le(row, S.h(k) - margin);
    ++L.counts.state_rows;
  }

  // Inputs inside U: u_bar +- s sum |(M_i E)_kj| r_j.
  for (int k = 0; k < m; ++k) {
    LinearExpr reach;
    for (int i = 0; i < kappa; ++i)
      for (int j = 0; j < p; ++j) {
        if (r(j) == 0.0) continue;
        LinearExpr g;
        for (const auto& [b, eb] : E_cols[static_cast<size_t>(j)]) g.add_term(L.M_index(i, k, b), eb);
        reach.add_term(model.add_abs_bound(g), r(j));
        ++L.counts.input_abs_vars;
      }
    // A degenerate input interval (e.g. a leader without authority) admits no margin.
    const double mk = std::min(margin, 0.5 * (U.upper(k) - U.lower(k)));
    model.add_le(LinearExpr::var(L.u_bar + k) + s * reach, U.upper(k) - mk);
    model.add_ge(LinearExpr::var(L.u_bar + k) - s * reach, U.lower(k) + mk);
    L.counts.input_rows += 2;
  }

  // Offsets form an equilibrium under the disturbance center.
  const Vec Ec = system.E * center;
  for (int a = 0; a < n; ++a) {
    LinearExpr e = LinearExpr::var(L.x_bar + a);
    for (const auto& [c, v] : A_rows[static_cast<size_t>(a)]) e.add_term(L.x_bar + c, -v);
    for (const auto& [k, v] : B_rows[static_cast<size_t>(a)]) e.add_term(L.u_bar + k, -v);
    model.add_equality(e, Ec(a));
    ++L.counts.fixed_point_rows;
  }

  const auto& cost = options.cost;
  switch (cost.kind) {
    case CostProfile::Kind::Feasibility:
      break;
    case CostProfile::Kind::Linear:
      if (cost.x_bar_cost.size() != 0 && cost.x_bar_cost.size() != n) throw SpecError("linear cost: x_bar dimension");
      if (cost.u_bar_cost.size() != 0 && cost.u_bar_cost.size() != m) throw SpecError("linear cost: u_bar dimension");
      for (Eigen::Index a = 0; a < cost.x_bar_cost.size(); ++a) model.set_cost(L.x_bar + static_cast<int>(a), cost.x_bar_cost(a));
      for (Eigen::Index k = 0; k < cost.u_bar_cost.size(); ++k) model.set_cost(L.u_bar + static_cast<int>(k), cost.u_bar_cost(k));
      break;
    case CostProfile::Kind::Anchor:
      if (cost.anchor.size() != n) throw SpecError("anchor cost: dimension mismatch");
      for (int a = 0; a < n; ++a) {
        if (!std::isfinite(cost.anchor(a))) continue;
        const int t = model.add_abs_bound(LinearExpr::var(L.x_bar + a) - LinearExpr(cost.anchor(a)));
        model.set_cost(t, 1.0);
        ++L.counts.anchor_vars;
      }
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthesis

IdentityResiduals check_identities(const RciParameterization& param, const Polyhedron& S, const Box& U) {
  IdentityResiduals res;
  const Mat& A = param.system.A;
  const Mat& B = param.system.B;
  const Mat& E = param.system.E;
  const int kappa = param.kappa;
  const int m = param.input_dim();

  Mat stacked(kappa * m, param.state_dim());
  for (int i = 0; i < kappa; ++i) stacked.block(i * m, 0, m, param.state_dim()) = param.M[static_cast<size_t>(i)];

  // Closed form A^i + xi_i M against the one-step recurrence.
  Mat power = Mat::Identity(A.rows(), A.cols());
  std::vector<Mat> closed;
  for (int i = 0; i <= kappa; ++i) {
    closed.push_back(power + build_xi(A, B, i, kappa) * stacked);
    power = A * power;
  }
  for (int i = 0; i < kappa; ++i) {
    const Mat lhs = A * closed[static_cast<size_t>(i)] + B * param.M[static_cast<size_t>(i)];
    res.recurrence = std::max(res.recurrence, (lhs - closed[static_cast<size_t>(i) + 1]).cwiseAbs().maxCoeff());
  }
  const Mat& term = closed.back();
  if (param.alpha == 0.0)
    res.terminal = term.cwiseAbs().maxCoeff();
  else
    res.terminal = (term * E - E * param.terminal_map).cwiseAbs().maxCoeff();

  res.offset = (param.x_bar - A * param.x_bar - B * param.u_bar - E * param.disturbance_center).cwiseAbs().maxCoeff();

  const Vec r = param.disturbance.half_width();
  res.state_containment = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < S.rows(); ++k) {
    const Vec h = S.H.row(k).transpose();
    double reach = 0.0;
    for (const auto& G : param.state_generators) reach += (h.transpose() * G).cwiseAbs().dot(r);
    res.state_containment = std::max(res.state_containment, h.dot(param.x_bar) + param.scale() * reach - S.h(k));
  }
  const Box range = param.input_range();
  res.input_containment = std::max((range.upper - U.upper).maxCoeff(), (U.lower - range.lower).maxCoeff());
  return res;
}

SynthesisResult synthesize_rci(const LinearSystem& system, const Polyhedron& S, const Box& U, const Box& W,
                               const RciOptions& options, const lp::Backend& backend) {
  const auto t0 = std::chrono::steady_clock::now();
  RciLp lp_problem = assemble_rci_lp(system, S, U, W, options);
  SynthesisResult result;
  result.lp_variables = lp_problem.model.num_variables();
  result.lp_rows = lp_problem.model.num_rows();
  result.lp_nonzeros = lp_problem.model.num_nonzeros();

  const lp::Solution sol = backend.solve(lp_problem.model, options.solver);
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  result.message = sol.message;
  if (sol.status == lp::Status::Infeasible) {
    result.status = SynthesisStatus::Infeasible;
    result.seconds = elapsed();
    return result;
  }
  if (sol.status != lp::Status::Optimal) {
    result.status = SynthesisStatus::SolverFailure;
    result.seconds = elapsed();
    return result;
  }

  const RciLpLayout& L = lp_problem.layout;
  RciParameterization param;
  param.kappa = options.kappa;
  param.alpha = options.alpha;
  param.system = system;
  param.x_bar = Vec(L.n);
  param.u_bar = Vec(L.m);
  for (int a = 0; a < L.n; ++a) param.x_bar(a) = sol.x[static_cast<size_t>(L.x_bar + a)];
  for (int k = 0; k < L.m; ++k) param.u_bar(k) = sol.x[static_cast<size_t>(L.u_bar + k)];
  for (int i = 0; i < L.kappa; ++i) {
    Mat Mi(L.m, L.n);
    for (int a = 0; a < L.m; ++a)
      for (int b = 0; b < L.n; ++b) Mi(a, b) = sol.x[static_cast<size_t>(L.M_index(i, a, b))];
    param.M.push_back(std::move(Mi));
  }
  param.terminal_map = Mat::Zero(L.p, L.p);
  if (L.gamma >= 0)
    for (int k = 0; k < L.p; ++k)
      for (int j = 0; j < L.p; ++j) param.terminal_map(k, j) = sol.x[static_cast<size_t>(L.gamma + k * L.p + j)];
  param.disturbance = W.symmetric_part();
  param.disturbance_center = W.center();
  param.finalize();

  const IdentityResiduals res = check_identities(param, S, U);
  constexpr double kIdentityTol = 1e-6;
  if (res.terminal > kIdentityTol || res.offset > kIdentityTol || res.state_containment > kIdentityTol ||
      res.input_containment > kIdentityTol) {
    result.status = SynthesisStatus::SolverFailure;
    result.message = "solution failed post-solve identity checks (terminal " + std::to_string(res.terminal) +
                     ", offset " + std::to_string(res.offset) + ", state " +
                     std::to_string(res.state_containment) + ", input " + std::to_string(res.input_containment) + ")";
    result.seconds = elapsed();
    return result;
  }
  result.status = SynthesisStatus::Feasible;
  result.parameterization = std::move(param);
  result.seconds = elapsed();
  return result;
}

// ---------------------------------------------------------------------------
// Membership

double decomposition_residual(const RciParameterization& param, const Vec& y, const Decomposition& d,
                              double box_tol) {
  if (static_cast<int>(d.size()) != param.kappa) return std::numeric_limits<double>::infinity();
  for (const auto& block : d)
    if (!param.disturbance.contains(block, box_tol)) return std::numeric_limits<double>::infinity();
  return (y - param.state_of(d)).cwiseAbs().maxCoeff();
}

MembershipOracle::MembershipOracle(std::shared_ptr<const RciParameterization> param, double tol,
                                   std::shared_ptr<const lp::Backend> backend)
    : param_(std::move(param)), tol_(tol), backend_(std::move(backend)) {
  const auto& P = *param_;
  const int n = P.state_dim();
  const int p = P.dist_dim();
  const Vec r = P.disturbance.half_width();
  for (int i = 0; i < P.kappa; ++i)
    for (int j = 0; j < p; ++j) model_.add_variable(-r(j), r(j));
  for (int a = 0; a < n; ++a) {
    LinearExpr e;
    for (int i = 0; i < P.kappa; ++i)
      for (int j = 0; j < p; ++j)
        e.add_term(i * p + j, P.scale() * P.state_generators[static_cast<size_t>(i)](a, j));
    model_.add_row(e, -tol_, tol_);
  }
  session_ = backend_->open(model_);
}

std::optional<Decomposition> MembershipOracle::decompose(const Vec& y) {
  const auto& P = *param_;
  if (y.size() != P.state_dim()) throw SpecError("membership: dimension mismatch");
  const Vec offset = y - P.x_bar;
  for (int a = 0; a < P.state_dim(); ++a) session_->set_row_bounds(a, offset(a) - tol_, offset(a) + tol_);
  const lp::Solution sol = session_->solve();
  if (sol.status == lp::Status::Infeasible) return std::nullopt;
  if (sol.status != lp::Status::Optimal) throw SolverError("membership LP: " + sol.message);
  const int p = P.dist_dim();
  Decomposition d(static_cast<size_t>(P.kappa));
  for (int i = 0; i < P.kappa; ++i) {
    Vec block(p);
    for (int j = 0; j < p; ++j) block(j) = sol.x[static_cast<size_t>(i * p + j)];
    d[static_cast<size_t>(i)] = clamp_to(block, P.disturbance);
  }
  return d;
}

bool membership(const RciParameterization& param, const Vec& y, double tol) {
  MembershipOracle oracle(std::make_shared<const RciParameterization>(param), tol);
  return oracle.contains(y);
}

}  // namespace platoon
