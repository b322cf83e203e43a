#pragma once

#include <cstdint>
#include <vector>

#include "platoon/platoon_model.hpp"

namespace platoon {

/// Thrown when the requested grid exceeds the cell budget.
class GridCapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FixedPointOptions {
  Box grid;                       // bounded region to grid (must contain the sets of interest)
  std::vector<int> cells;         // cells per state axis
  int input_points = 13;          // grid points per input axis, endpoints included
  int max_iters = 500;
  long long cell_cap = 60LL * 60 * 60;
};

/// Cells of a regular grid that survive Omega_{k+1} = Omega_k /\ rPre(Omega_k).
/// A cell survives when one gridded input sends its center, under every
/// vertex of the disturbance box, into a box of radius
///   rho = |A| h / 2 + |B| du / 2
/// that touches a surviving cell. The dilation covers every point of the cell
/// and every admissible input, so the surviving union contains the maximal
/// RCI set restricted to the grid region.
struct GriddedSet {
  Box grid;
  std::vector<int> cells;
  std::vector<std::uint8_t> alive;
  int iterations = 0;
  bool converged = false;

  int dim() const { return static_cast<int>(cells.size()); }
  long long size() const { return static_cast<long long>(alive.size()); }
  long long alive_count() const;
  double cell_width(int axis) const;
  Vec cell_center(long long index) const;
  /// Flat index of the cell containing y, or -1 outside the grid.
  long long locate(const Vec& y) const;
  bool contains(const Vec& y) const;
};

GriddedSet fixed_point_rci_oracle(const LinearSystem& system, const Polyhedron& S, const Box& U, const Box& W,
                                  const FixedPointOptions& options);

}  // namespace platoon
