#pragma once

#include <vector>

#include "platoon/lp.hpp"
#include "platoon/platoon_model.hpp"

namespace platoon {

inline constexpr int kDefaultVertexCap = 22;

/// max_{x in box} direction . x
double support(const Box& box, const Vec& direction);

/// All 2^n corners. Corner k takes upper(j) when bit j of k is set, lower(j)
/// otherwise. Degenerate coordinates still produce 2^n (duplicated) entries.
std::vector<Vec> enumerate_vertices(const Box& box, int cap = kDefaultVertexCap);

/// Corner selected by the bits of `index` (same ordering as enumerate_vertices).
Vec box_vertex(const Box& box, unsigned long long index);

/// Smallest axis-aligned box containing T * box.
Box linear_image_bbox(const Mat& T, const Box& box);

/// Whether G * box lies in alpha * target, both origin-symmetric:
/// sum_j |G_kj| r_j <= alpha * t_k for every row k.
bool box_in_scaled_box(const Mat& G, const Box& box, double alpha, const Box& target, double tol = 0.0);

/// The same containment for a matrix whose entries are affine in LP
/// variables. Adds one |G_kj| bound variable per nonconstant entry and one
/// weighted row sum per row of G. `G` is row-major, rows x cols.
void add_box_in_scaled_box(lp::Model& model, const std::vector<std::vector<lp::LinearExpr>>& G, const Box& box,
                           double alpha, const Box& target);

}  // namespace platoon
