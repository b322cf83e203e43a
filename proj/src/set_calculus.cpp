#include "platoon/set_calculus.hpp"

#include <cmath>

namespace platoon {

namespace {

void require_symmetric(const Box& b, const char* what) {
  if (!b.is_symmetric(1e-12 * (1.0 + b.upper.cwiseAbs().maxCoeff())))
    throw SpecError(std::string(what) + " must be origin-symmetric; recentre it first");
}

}  // namespace

double support(const Box& box, const Vec& direction) {
  if (direction.size() != box.dim()) throw SpecError("support: dimension mismatch");
  return direction.dot(box.center()) + direction.cwiseAbs().dot(box.half_width());
}

Vec box_vertex(const Box& box, unsigned long long index) {
  Vec v(box.dim());
  for (int j = 0; j < box.dim(); ++j) v(j) = ((index >> j) & 1ULL) ? box.upper(j) : box.lower(j);
  return v;
}

std::vector<Vec> enumerate_vertices(const Box& box, int cap) {
  const int n = box.dim();
  if (n > cap || n > 62) throw SpecError("enumerate_vertices: dimension " + std::to_string(n) + " exceeds cap");
  const unsigned long long count = 1ULL << n;
  std::vector<Vec> out;
  out.reserve(count);
  for (unsigned long long k = 0; k < count; ++k) out.push_back(box_vertex(box, k));
  return out;
}

Box linear_image_bbox(const Mat& T, const Box& box) {
  if (T.cols() != box.dim()) throw SpecError("linear_image_bbox: dimension mismatch");
  const Vec c = T * box.center();
  const Vec r = T.cwiseAbs() * box.half_width();
  return Box(c - r, c + r);
}

bool box_in_scaled_box(const Mat& G, const Box& box, double alpha, const Box& target, double tol) {
  if (G.cols() != box.dim() || G.rows() != target.dim()) throw SpecError("box_in_scaled_box: dimension mismatch");
  if (alpha < 0.0) throw SpecError("box_in_scaled_box: alpha must be nonnegative");
  require_symmetric(box, "box");
  require_symmetric(target, "target");
  const Vec reach = G.cwiseAbs() * box.half_width();
  return (reach.array() <= alpha * target.half_width().array() + tol).all();
}

void add_box_in_scaled_box(lp::Model& model, const std::vector<std::vector<lp::LinearExpr>>& G, const Box& box,
                           double alpha, const Box& target) {
  require_symmetric(box, "box");
  require_symmetric(target, "target");
  if (static_cast<int>(G.size()) != target.dim()) throw SpecError("add_box_in_scaled_box: row count mismatch");
  const Vec r = box.half_width();
  const Vec t = target.half_width();
  for (size_t k = 0; k < G.size(); ++k) {
    if (static_cast<int>(G[k].size()) != box.dim()) throw SpecError("add_box_in_scaled_box: column count mismatch");
    lp::LinearExpr reach;
    for (size_t j = 0; j < G[k].size(); ++j) {
      const double rj = r(static_cast<Eigen::Index>(j));
      if (rj == 0.0) continue;
      const auto& entry = G[k][j];
      if (entry.is_constant())
        reach.add_constant(std::abs(entry.constant()) * rj);
      else
        reach.add_term(model.add_abs_bound(entry), rj);
    }
    model.add_le(reach, alpha * t(static_cast<Eigen::Index>(k)));
  }
}

}  // namespace platoon
