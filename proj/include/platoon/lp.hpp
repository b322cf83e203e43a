#pragma once

#include <limits>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace platoon::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sparse affine expression sum_k coef_k * x_{var_k} + constant.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(double constant) : constant_(constant) {}

  static LinearExpr var(int index, double coef = 1.0) {
    LinearExpr e;
    e.add_term(index, coef);
    return e;
  }

  LinearExpr& add_term(int index, double coef) {
    if (coef != 0.0) terms_.emplace_back(index, coef);
    return *this;
  }
  LinearExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, double scale = 1.0);
  LinearExpr& operator+=(const LinearExpr& other) { return add(other, 1.0); }
  LinearExpr& operator-=(const LinearExpr& other) { return add(other, -1.0); }
  LinearExpr& operator*=(double s);

  /// Merges duplicate indices and drops zero coefficients.
  void compress();

  const std::vector<std::pair<int, double>>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }
  double evaluate(const std::vector<double>& x) const;

 private:
  std::vector<std::pair<int, double>> terms_;
  double constant_ = 0.0;
};

inline LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
inline LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
inline LinearExpr operator*(double s, LinearExpr a) { return a *= s; }

struct Row {
  std::vector<std::pair<int, double>> terms;
  double lower = -kInf;
  double upper = kInf;
};

/// Linear (or convex quadratic) program:
///   minimize c'x + 1/2 x'Qx   subject to   row_lo <= a_r'x <= row_hi,  col_lo <= x <= col_hi.
class Model {
 public:
  int add_variable(double lower = -kInf, double upper = kInf, double cost = 0.0);
  /// Returns the first index of `count` consecutive variables.
  int add_variables(int count, double lower = -kInf, double upper = kInf);

  /// Adds lower <= expr <= upper (the expression constant is moved to the bounds).
  int add_row(const LinearExpr& expr, double lower, double upper);
  int add_equality(const LinearExpr& expr, double value = 0.0) { return add_row(expr, value, value); }
  int add_le(const LinearExpr& expr, double upper) { return add_row(expr, -kInf, upper); }
  int add_ge(const LinearExpr& expr, double lower) { return add_row(expr, lower, kInf); }

  /// t >= |expr| via two rows; returns the index of the new variable t.
  int add_abs_bound(const LinearExpr& expr);

  void set_cost(int var, double c) { cost_.at(static_cast<size_t>(var)) = c; }
  void set_row_bounds(int row, double lower, double upper);
  /// Adds q to the symmetric Hessian entry (i, j) (and (j, i)).
  void add_hessian(int i, int j, double q);

  int num_variables() const { return static_cast<int>(col_lower_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  size_t num_nonzeros() const;
  bool is_quadratic() const { return !hessian_.empty(); }
  /// Same variables and rows, no objective.
  Model feasibility_model() const;

  const std::vector<double>& col_lower() const { return col_lower_; }
  const std::vector<double>& col_upper() const { return col_upper_; }
  const std::vector<double>& cost() const { return cost_; }
  const std::vector<Row>& rows() const { return rows_; }
  /// Upper-triangular (i <= j) Hessian triplets.
  const std::vector<std::tuple<int, int, double>>& hessian() const { return hessian_; }

  double row_activity(int row, const std::vector<double>& x) const;
  /// Largest bound violation over rows and columns.
  double max_violation(const std::vector<double>& x) const;

 private:
  std::vector<double> col_lower_, col_upper_, cost_;
  std::vector<Row> rows_;
  std::vector<std::tuple<int, int, double>> hessian_;
};

enum class Status {
  Optimal,     // optimal (or feasible, for zero cost) point returned
  Infeasible,  // infeasibility certified by the solver
  Unbounded,
  Failure,     // numerical trouble, limits hit, or an uncertified outcome
};

std::string to_string(Status s);

struct Solution {
  Status status = Status::Failure;
  std::vector<double> x;
  double objective = 0.0;
  double seconds = 0.0;
  std::string message;

  bool ok() const { return status == Status::Optimal; }
};

struct SolverOptions {
  double primal_feasibility_tolerance = 1e-9;
  double dual_feasibility_tolerance = 1e-9;
  double time_limit = kInf;
  bool presolve = true;
  bool verbose = false;
  /// Backend-specific solver selection ("choose" lets the backend decide).
  std::string method = "choose";
  /// Iteration cap for QP solves (0 = backend default).
  long qp_iteration_limit = 0;
};

/// A loaded model that can be re-solved after bound changes (warm started
/// where the backend supports it). Not thread-safe; use one per thread.
class Session {
 public:
  virtual ~Session() = default;
  virtual Solution solve() = 0;
  virtual void set_row_bounds(int row, double lower, double upper) = 0;
  virtual void set_column_bounds(int col, double lower, double upper) = 0;
};

/// Solver contract: anything that can load a Model and report
/// {optimal, certified infeasible, failure}.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Session> open(const Model& model, const SolverOptions& options = {}) const = 0;

  Solution solve(const Model& model, const SolverOptions& options = {}) const { return open(model, options)->solve(); }
};

/// Process-wide default backend (HiGHS).
std::shared_ptr<const Backend> default_backend();

}  // namespace platoon::lp
