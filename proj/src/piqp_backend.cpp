#include "platoon/piqp_backend.hpp"

#include <chrono>
#include <cmath>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <piqp/piqp.hpp>

#include "platoon/highs_backend.hpp"

namespace platoon::lp {

namespace {

using DVec = Eigen::VectorXd;
using DMat = Eigen::MatrixXd;

class PiqpSession final : public Session {
 public:
  PiqpSession(const Model& model, const SolverOptions& options) : options_(options) {
    const int n = model.num_variables();
    P_ = DMat::Zero(n, n);
    for (const auto& [i, j, q] : model.hessian()) {
      P_(i, j) += q;
      if (i != j) P_(j, i) += q;
    }
    c_ = Eigen::Map<const DVec>(model.cost().data(), n);
    x_l_ = Eigen::Map<const DVec>(model.col_lower().data(), n);
    x_u_ = Eigen::Map<const DVec>(model.col_upper().data(), n);
    rows_ = DMat::Zero(model.num_rows(), n);
    row_l_.resize(model.num_rows());
    row_u_.resize(model.num_rows());
    for (int r = 0; r < model.num_rows(); ++r) {
      const Row& row = model.rows()[static_cast<size_t>(r)];
      for (const auto& [col, coef] : row.terms) rows_(r, col) += coef;
      row_l_(r) = row.lower;
      row_u_(r) = row.upper;
    }
  }

  Solution solve() override {
    const auto t0 = std::chrono::steady_clock::now();
    // Rows with equal bounds become equalities; the split is rebuilt whenever it changes.
    std::vector<int> eq, ineq;
    for (int r = 0; r < rows_.rows(); ++r) (row_l_(r) == row_u_(r) ? eq : ineq).push_back(r);
    const bool structural = !solver_ || eq != eq_rows_;
    eq_rows_ = eq;
    ineq_rows_ = ineq;
    DMat A(static_cast<Eigen::Index>(eq.size()), rows_.cols());
    DVec b(static_cast<Eigen::Index>(eq.size()));
    for (size_t k = 0; k < eq.size(); ++k) {
      A.row(static_cast<Eigen::Index>(k)) = rows_.row(eq[k]);
      b(static_cast<Eigen::Index>(k)) = row_l_(eq[k]);
    }
    DMat G(static_cast<Eigen::Index>(ineq.size()), rows_.cols());
    DVec h_l(static_cast<Eigen::Index>(ineq.size())), h_u(static_cast<Eigen::Index>(ineq.size()));
    for (size_t k = 0; k < ineq.size(); ++k) {
      G.row(static_cast<Eigen::Index>(k)) = rows_.row(ineq[k]);
      h_l(static_cast<Eigen::Index>(k)) = row_l_(ineq[k]);
      h_u(static_cast<Eigen::Index>(k)) = row_u_(ineq[k]);
    }

    Solution out;
    try {
      if (structural) {
        solver_ = std::make_unique<piqp::DenseSolver<double>>();
        auto& s = solver_->settings();
        s.verbose = options_.verbose;
        s.eps_abs = options_.primal_feasibility_tolerance;
        s.eps_rel = 0.1 * options_.primal_feasibility_tolerance;
        s.eps_duality_gap_abs = s.eps_abs;
        s.eps_duality_gap_rel = s.eps_rel;
        s.max_iter = 500;
        solver_->setup(P_, c_, A, b, G, h_l, h_u, x_l_, x_u_);
      } else {
        solver_->update(piqp::nullopt, piqp::nullopt, piqp::nullopt, b, piqp::nullopt, h_l, h_u, x_l_, x_u_);
      }
      const piqp::Status st = solver_->solve();
      out.message = piqp::status_to_string(st);
      switch (st) {
        case piqp::Status::PIQP_SOLVED:
          out.status = Status::Optimal;
          out.x.assign(solver_->result().x.data(), solver_->result().x.data() + solver_->result().x.size());
          out.objective = solver_->result().info.primal_obj;
          break;
        case piqp::Status::PIQP_PRIMAL_INFEASIBLE:
          out.status = Status::Infeasible;
          break;
        case piqp::Status::PIQP_DUAL_INFEASIBLE:
          out.status = Status::Unbounded;
          break;
        default:
          out.status = Status::Failure;
          solver_.reset();  // start cold next time
          break;
      }
    } catch (const std::exception& e) {
      out.status = Status::Failure;
      out.message = e.what();
      solver_.reset();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  void set_row_bounds(int row, double lower, double upper) override {
    row_l_(row) = lower;
    row_u_(row) = upper;
  }
  void set_column_bounds(int col, double lower, double upper) override {
    x_l_(col) = lower;
    x_u_(col) = upper;
  }

 private:
  SolverOptions options_;
  DMat P_;
  DVec c_, x_l_, x_u_;
  DMat rows_;
  DVec row_l_, row_u_;
  std::vector<int> eq_rows_, ineq_rows_;
  std::unique_ptr<piqp::DenseSolver<double>> solver_;
};

// Primary session with a lazily opened infeasibility certifier. Bound edits
// are kept so the certifier sees the same constraints when first needed.
class FallbackSession final : public Session {
 public:
  FallbackSession(const Model& model, SolverOptions options, std::unique_ptr<Session> primary,
                  std::shared_ptr<const Backend> certifier)
      : constraints_(model.feasibility_model()),
        options_(options),
        primary_(std::move(primary)),
        certifier_backend_(std::move(certifier)) {}

  Solution solve() override {
    Solution s = primary_->solve();
    if (s.status != Status::Failure) return s;
    if (!fallback_) {
      fallback_ = certifier_backend_->open(constraints_, options_);
      for (const auto& [row, lo, hi] : row_edits_) fallback_->set_row_bounds(row, lo, hi);
      for (const auto& [col, lo, hi] : col_edits_) fallback_->set_column_bounds(col, lo, hi);
      row_edits_.clear();
      col_edits_.clear();
    }
    const Solution f = fallback_->solve();
    s.seconds += f.seconds;
    if (f.status == Status::Infeasible) {
      s.status = Status::Infeasible;
      s.message = "infeasibility certified by " + certifier_backend_->name();
    } else {
      s.message += "; constraints " + to_string(f.status);
    }
    return s;
  }

  void set_row_bounds(int row, double lower, double upper) override {
    primary_->set_row_bounds(row, lower, upper);
    if (fallback_)
      fallback_->set_row_bounds(row, lower, upper);
    else
      row_edits_.emplace_back(row, lower, upper);
  }
  void set_column_bounds(int col, double lower, double upper) override {
    primary_->set_column_bounds(col, lower, upper);
    if (fallback_)
      fallback_->set_column_bounds(col, lower, upper);
    else
      col_edits_.emplace_back(col, lower, upper);
  }

 private:
  Model constraints_;
  SolverOptions options_;
  std::unique_ptr<Session> primary_;
  std::shared_ptr<const Backend> certifier_backend_;
  std::unique_ptr<Session> fallback_;
  std::vector<std::tuple<int, double, double>> row_edits_, col_edits_;
};

}  // namespace

std::unique_ptr<Session> RoutingBackend::open(const Model& model, const SolverOptions& options) const {
  if (!model.is_quadratic()) return lp_->open(model, options);
  return std::make_unique<FallbackSession>(model, options, qp_->open(model, options), lp_);
}

std::unique_ptr<Session> PiqpBackend::open(const Model& model, const SolverOptions& options) const {
  return std::make_unique<PiqpSession>(model, options);
}

std::shared_ptr<const Backend> default_backend() {
  static const auto backend =
      std::make_shared<const RoutingBackend>(std::make_shared<const HighsBackend>(), std::make_shared<const PiqpBackend>());
  return backend;
}

}  // namespace platoon::lp
