#include "platoon/highs_backend.hpp"

#include <chrono>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "Highs.h"

namespace platoon::lp {

namespace {

HighsModel to_highs(const Model& model) {
  HighsModel hm;
  HighsLp& lp = hm.lp_;
  const int n = model.num_variables();
  const int m = model.num_rows();
  lp.num_col_ = n;
  lp.num_row_ = m;
  lp.col_cost_ = model.cost();
  lp.col_lower_ = model.col_lower();
  lp.col_upper_ = model.col_upper();
  lp.row_lower_.resize(static_cast<size_t>(m));
  lp.row_upper_.resize(static_cast<size_t>(m));
  lp.sense_ = ObjSense::kMinimize;

  // Row-wise storage maps directly onto the model's rows.
  lp.a_matrix_.format_ = MatrixFormat::kRowwise;
  lp.a_matrix_.num_col_ = n;
  lp.a_matrix_.num_row_ = m;
  auto& start = lp.a_matrix_.start_;
  auto& index = lp.a_matrix_.index_;
  auto& value = lp.a_matrix_.value_;
  start.assign(1, 0);
  start.reserve(static_cast<size_t>(m) + 1);
  index.reserve(model.num_nonzeros());
  value.reserve(model.num_nonzeros());
  for (int r = 0; r < m; ++r) {
    const auto& row = model.rows()[static_cast<size_t>(r)];
    lp.row_lower_[static_cast<size_t>(r)] = row.lower;
    lp.row_upper_[static_cast<size_t>(r)] = row.upper;
    for (const auto& [col, coef] : row.terms) {
      index.push_back(col);
      value.push_back(coef);
    }
    start.push_back(static_cast<HighsInt>(index.size()));
  }

  if (model.is_quadratic()) {
    // Lower triangle, column-wise: column i holds rows j >= i.
    std::map<std::pair<int, int>, double> entries;
    for (const auto& [i, j, q] : model.hessian()) entries[{i, j}] += q;
    HighsHessian& hess = hm.hessian_;
    hess.dim_ = n;
    hess.format_ = HessianFormat::kTriangular;
    hess.start_.assign(1, 0);
    int col = 0;
    for (const auto& [ij, q] : entries) {
      while (col < ij.first) {
        hess.start_.push_back(static_cast<HighsInt>(hess.index_.size()));
        ++col;
      }
      hess.index_.push_back(ij.second);
      hess.value_.push_back(q);
    }
    while (col < n) {
      hess.start_.push_back(static_cast<HighsInt>(hess.index_.size()));
      ++col;
    }
  }
  return hm;
}

class HighsSession final : public Session {
 public:
  HighsSession(const Model& model, const SolverOptions& options) : options_(options) {
    apply_base_options();
    status_ok_ = highs_.passModel(to_highs(model)) != HighsStatus::kError;
  }

  Solution solve() override {
    const auto t0 = std::chrono::steady_clock::now();
    Solution out;
    if (!status_ok_) {
      out.message = "HiGHS rejected the model";
      return out;
    }
    HighsStatus run_status = highs_.run();
    HighsModelStatus ms = highs_.getModelStatus();
    // Undecided outcomes are retried cold with progressively different
    // algorithms before being reported as a failure.
    static const std::vector<std::pair<std::string, std::string>> kRetries = {
        {"presolve", "off"}, {"solver", "ipm"}, {"simplex_strategy", "4"}};
    bool retried = false;
    for (size_t k = 0; k < kRetries.size() && !decided(ms); ++k) {
      retried = true;
      highs_.clearSolver();
      apply_base_options();
      if (kRetries[k].first == "simplex_strategy") {
        highs_.setOptionValue("presolve", "off");
        highs_.setOptionValue("solver", "simplex");
        highs_.setOptionValue("simplex_strategy", 4);
      } else {
        highs_.setOptionValue(kRetries[k].first, kRetries[k].second);
      }
      run_status = highs_.run();
      ms = highs_.getModelStatus();
    }
    if (retried) apply_base_options();
    out.message = highs_.modelStatusToString(ms);
    switch (ms) {
      case HighsModelStatus::kOptimal:
        out.status = run_status == HighsStatus::kError ? Status::Failure : Status::Optimal;
        out.x = highs_.getSolution().col_value;
        out.objective = highs_.getInfo().objective_function_value;
        break;
      case HighsModelStatus::kInfeasible:
        out.status = Status::Infeasible;
        break;
      case HighsModelStatus::kUnbounded:
        out.status = Status::Unbounded;
        break;
      default:
        out.status = Status::Failure;
        break;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  void set_row_bounds(int row, double lower, double upper) override { highs_.changeRowBounds(row, lower, upper); }
  void set_column_bounds(int col, double lower, double upper) override { highs_.changeColBounds(col, lower, upper); }

 private:
  static bool decided(HighsModelStatus ms) {
    return ms == HighsModelStatus::kOptimal || ms == HighsModelStatus::kInfeasible || ms == HighsModelStatus::kUnbounded;
  }

  void apply_base_options() {
    highs_.setOptionValue("output_flag", options_.verbose);
    highs_.setOptionValue("threads", 1);
    highs_.setOptionValue("primal_feasibility_tolerance", options_.primal_feasibility_tolerance);
    highs_.setOptionValue("dual_feasibility_tolerance", options_.dual_feasibility_tolerance);
    if (options_.time_limit < kInf) highs_.setOptionValue("time_limit", options_.time_limit);
    highs_.setOptionValue("presolve", options_.presolve ? "on" : "off");
    highs_.setOptionValue("solver", options_.method);
    highs_.setOptionValue("simplex_strategy", 1);
    if (options_.qp_iteration_limit > 0)
      highs_.setOptionValue("qp_iteration_limit", static_cast<HighsInt>(options_.qp_iteration_limit));
  }

  Highs highs_;
  SolverOptions options_;
  bool status_ok_ = false;
};

}  // namespace

std::unique_ptr<Session> HighsBackend::open(const Model& model, const SolverOptions& options) const {
  return std::make_unique<HighsSession>(model, options);
}

}  // namespace platoon::lp
