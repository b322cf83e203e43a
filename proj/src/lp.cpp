#include "platoon/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace platoon::lp {

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
  if (scale == 0.0) return *this;
  terms_.reserve(terms_.size() + other.terms_.size());
  for (const auto& [i, c] : other.terms_) terms_.emplace_back(i, scale * c);
  constant_ += scale * other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double s) {
  for (auto& t : terms_) t.second *= s;
  constant_ *= s;
  return *this;
}

void LinearExpr::compress() {
  std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, double>> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().first == t.first)
      merged.back().second += t.second;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  terms_ = std::move(merged);
}

double LinearExpr::evaluate(const std::vector<double>& x) const {
  double v = constant_;
  for (const auto& [i, c] : terms_) v += c * x.at(static_cast<size_t>(i));
  return v;
}

int Model::add_variable(double lower, double upper, double cost) {
  if (lower > upper) throw std::invalid_argument("lp: variable lower bound exceeds upper bound");
  col_lower_.push_back(lower);
  col_upper_.push_back(upper);
  cost_.push_back(cost);
  return num_variables() - 1;
}

int Model::add_variables(int count, double lower, double upper) {
  const int first = num_variables();
  for (int k = 0; k < count; ++k) add_variable(lower, upper);
  return first;
}

int Model::add_row(const LinearExpr& expr, double lower, double upper) {
  LinearExpr e = expr;
  e.compress();
  for (const auto& [i, c] : e.terms())
    if (i < 0 || i >= num_variables()) throw std::out_of_range("lp: row references unknown variable");
  Row r;
  r.terms = e.terms();
  r.lower = lower - e.constant();
  r.upper = upper - e.constant();
  rows_.push_back(std::move(r));
  return num_rows() - 1;
}

int Model::add_abs_bound(const LinearExpr& expr) {
  const int t = add_variable(0.0, kInf);
  add_le(expr - LinearExpr::var(t), 0.0);
  add_le(-1.0 * expr - LinearExpr::var(t), 0.0);
  return t;
}

void Model::set_row_bounds(int row, double lower, double upper) {
  auto& r = rows_.at(static_cast<size_t>(row));
  r.lower = lower;
  r.upper = upper;
}

void Model::add_hessian(int i, int j, double q) {
  if (i > j) std::swap(i, j);
  hessian_.emplace_back(i, j, q);
}

Model Model::feasibility_model() const {
  Model m = *this;
  std::fill(m.cost_.begin(), m.cost_.end(), 0.0);
  m.hessian_.clear();
  return m;
}

size_t Model::num_nonzeros() const {
  size_t nz = 0;
  for (const auto& r : rows_) nz += r.terms.size();
  return nz;
}

double Model::row_activity(int row, const std::vector<double>& x) const {
  double a = 0.0;
  for (const auto& [i, c] : rows_.at(static_cast<size_t>(row)).terms) a += c * x.at(static_cast<size_t>(i));
  return a;
}

double Model::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    const auto u = static_cast<size_t>(j);
    worst = std::max({worst, col_lower_[u] - x[u], x[u] - col_upper_[u]});
  }
  for (int r = 0; r < num_rows(); ++r) {
    const double a = row_activity(r, x);
    const auto& row = rows_[static_cast<size_t>(r)];
    worst = std::max({worst, row.lower - a, a - row.upper});
  }
  return worst;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::Failure: return "failure";
  }
  return "unknown";
}

}  // namespace platoon::lp
