#include "platoon/fixed_point_oracle.hpp"

#include <array>
#include <cmath>

#include "platoon/set_calculus.hpp"

namespace platoon {

namespace {

constexpr int kMaxDim = 3;

/// Inclusive-prefix counts over a grid of up to three axes, padded by one.
class SummedArea {
 public:
  SummedArea(const std::vector<int>& cells, const std::vector<std::uint8_t>& alive) : dim_(static_cast<int>(cells.size())) {
    for (int k = 0; k < kMaxDim; ++k) ext_[k] = k < dim_ ? cells[static_cast<size_t>(k)] + 1 : 1;
    table_.assign(static_cast<size_t>(ext_[0]) * ext_[1] * ext_[2], 0);
    for (int c = 0; c < ext_[2]; ++c)
      for (int b = 0; b < ext_[1]; ++b)
        for (int a = 0; a < ext_[0]; ++a) {
          if ((dim_ >= 1 && a == 0) || (dim_ >= 2 && b == 0) || (dim_ >= 3 && c == 0)) continue;
          const int ia = dim_ >= 1 ? a - 1 : a;
          const int ib = dim_ >= 2 ? b - 1 : b;
          const int ic = dim_ >= 3 ? c - 1 : c;
          long long v = alive[static_cast<size_t>(flat_cell(cells, ia, ib, ic))];
          v += at(a - 1, b, c) + (dim_ >= 2 ? at(a, b - 1, c) : 0) + (dim_ >= 3 ? at(a, b, c - 1) : 0);
          if (dim_ >= 2) v -= at(a - 1, b - 1, c);
          if (dim_ >= 3) v -= at(a - 1, b, c - 1) + at(a, b - 1, c - 1) - at(a - 1, b - 1, c - 1);
          table_[idx(a, b, c)] = v;
        }
  }

  /// Alive cells with lo_k <= i_k <= hi_k on every axis.
  long long count(const std::array<int, kMaxDim>& lo, const std::array<int, kMaxDim>& hi) const {
    long long total = 0;
    const int corners = 1 << dim_;
    for (int mask = 0; mask < corners; ++mask) {
      std::array<int, kMaxDim> q{0, 0, 0};
      int sign = 1;
      for (int k = 0; k < dim_; ++k) {
        if (mask & (1 << k)) {
          q[static_cast<size_t>(k)] = lo[static_cast<size_t>(k)];
          sign = -sign;
        } else {
          q[static_cast<size_t>(k)] = hi[static_cast<size_t>(k)] + 1;
        }
      }
      total += sign * at(q[0], q[1], q[2]);
    }
    return total;
  }

  static long long flat_cell(const std::vector<int>& cells, int a, int b, int c) {
    long long index = a;
    if (cells.size() >= 2) index += static_cast<long long>(cells[0]) * b;
    if (cells.size() >= 3) index += static_cast<long long>(cells[0]) * cells[1] * c;
    return index;
  }

 private:
  int dim_;
  std::array<int, kMaxDim> ext_{};
  std::vector<long long> table_;

  size_t idx(int a, int b, int c) const {
    return static_cast<size_t>(a) + static_cast<size_t>(ext_[0]) * (static_cast<size_t>(b) + static_cast<size_t>(ext_[1]) * static_cast<size_t>(c));
  }
  long long at(int a, int b, int c) const {
    if (a < 0 || b < 0 || c < 0) return 0;
    return table_[idx(a, b, c)];
  }
};

}  // namespace

long long GriddedSet::alive_count() const {
  long long n = 0;
  for (auto a : alive) n += a;
  return n;
}

double GriddedSet::cell_width(int axis) const {
  return (grid.upper(axis) - grid.lower(axis)) / cells[static_cast<size_t>(axis)];
}

Vec GriddedSet::cell_center(long long index) const {
  Vec c(dim());
  for (int k = 0; k < dim(); ++k) {
    const long long i = index % cells[static_cast<size_t>(k)];
    index /= cells[static_cast<size_t>(k)];
    c(k) = grid.lower(k) + (static_cast<double>(i) + 0.5) * cell_width(k);
  }
  return c;
}

long long GriddedSet::locate(const Vec& y) const {
  if (y.size() != dim()) throw SpecError("gridded set: dimension mismatch");
  long long index = 0;
  long long stride = 1;
  for (int k = 0; k < dim(); ++k) {
    if (y(k) < grid.lower(k) || y(k) > grid.upper(k)) return -1;
    int i = static_cast<int>(std::floor((y(k) - grid.lower(k)) / cell_width(k)));
    i = std::min(i, cells[static_cast<size_t>(k)] - 1);
    index += stride * i;
    stride *= cells[static_cast<size_t>(k)];
  }
  return index;
}

bool GriddedSet::contains(const Vec& y) const {
  const long long i = locate(y);
  return i >= 0 && alive[static_cast<size_t>(i)] != 0;
}

GriddedSet fixed_point_rci_oracle(const LinearSystem& system, const Polyhedron& S, const Box& U, const Box& W,
                                  const FixedPointOptions& options) {
  system.check_dimensions();
  const int n = system.state_dim();
  const int m = system.input_dim();
  if (n > kMaxDim) throw SpecError("fixed-point oracle: state dimension must be at most 3");
  if (options.grid.dim() != n || static_cast<int>(options.cells.size()) != n)
    throw SpecError("fixed-point oracle: grid dimension mismatch");
  if (options.input_points < 1) throw SpecError("fixed-point oracle: input_points must be positive");
  long long total = 1;
  for (int c : options.cells) {
    if (c < 1) throw SpecError("fixed-point oracle: cell counts must be positive");
    total *= c;
    if (total > options.cell_cap)
      throw GridCapacityError("fixed-point oracle: grid exceeds cap of " + std::to_string(options.cell_cap) + " cells");
  }

  GriddedSet set;
  set.grid = options.grid;
  set.cells = options.cells;
  set.alive.assign(static_cast<size_t>(total), 0);

  Vec h(n);
  for (int k = 0; k < n; ++k) h(k) = set.cell_width(k);

  // Input grid and its rounding radius.
  Vec du(m);
  for (int k = 0; k < m; ++k)
    du(k) = options.input_points > 1 ? (U.upper(k) - U.lower(k)) / (options.input_points - 1) : U.upper(k) - U.lower(k);
  long long input_count = 1;
  for (int k = 0; k < m; ++k) input_count *= options.input_points;
  std::vector<Vec> Bu;
  Bu.reserve(static_cast<size_t>(input_count));
  for (long long q = 0; q < input_count; ++q) {
    Vec u(m);
    long long rest = q;
    for (int k = 0; k < m; ++k) {
      const long long t = rest % options.input_points;
      rest /= options.input_points;
      u(k) = options.input_points > 1 ? U.lower(k) + static_cast<double>(t) * du(k) : U.center()(k);
    }
    Bu.push_back(system.B * u);
  }
  const Vec rho = 0.5 * (system.A.cwiseAbs() * h + system.B.cwiseAbs() * du) + Vec::Constant(n, 1e-12);

  std::vector<Vec> Ew;
  for (const Vec& w : enumerate_vertices(W)) Ew.push_back(system.E * w);

  // Cells meeting S.
  const Mat Habs = S.H.cwiseAbs();
  for (long long c = 0; c < total; ++c) {
    const Vec x = set.cell_center(c);
    set.alive[static_cast<size_t>(c)] = ((S.H * x - 0.5 * Habs * h - S.h).array() <= 1e-12).all() ? 1 : 0;
  }

  std::vector<long long> last_good(static_cast<size_t>(total), 0);
  std::vector<Vec> Ac(static_cast<size_t>(total));
  for (long long c = 0; c < total; ++c) Ac[static_cast<size_t>(c)] = system.A * set.cell_center(c);

  for (set.iterations = 0; set.iterations < options.max_iters;) {
    const SummedArea sat(set.cells, set.alive);
    auto touches_alive = [&](const Vec& z) {
      std::array<int, kMaxDim> lo{0, 0, 0}, hi{0, 0, 0};
      for (int k = 0; k < n; ++k) {
        const double a = std::floor((z(k) - rho(k) - set.grid.lower(k)) / h(k));
        const double b = std::floor((z(k) + rho(k) - set.grid.lower(k)) / h(k));
        const double top = set.cells[static_cast<size_t>(k)] - 1;
        if (b < 0 || a > top) return false;
        lo[static_cast<size_t>(k)] = static_cast<int>(std::max(a, 0.0));
        hi[static_cast<size_t>(k)] = static_cast<int>(std::min(b, top));
      }
      return sat.count(lo, hi) > 0;
    };
    auto input_works = [&](long long c, long long q) {
      const Vec base = Ac[static_cast<size_t>(c)] + Bu[static_cast<size_t>(q)];
      for (const Vec& e : Ew)
        if (!touches_alive(base + e)) return false;
      return true;
    };

    std::vector<std::uint8_t> next = set.alive;
    bool changed = false;
    for (long long c = 0; c < total; ++c) {
      if (!set.alive[static_cast<size_t>(c)]) continue;
      bool ok = input_works(c, last_good[static_cast<size_t>(c)]);
      for (long long q = 0; !ok && q < input_count; ++q) {
        if (q == last_good[static_cast<size_t>(c)]) continue;
        if (input_works(c, q)) {
          last_good[static_cast<size_t>(c)] = q;
          ok = true;
        }
      }
      if (!ok) {
        next[static_cast<size_t>(c)] = 0;
        changed = true;
      }
    }
    set.alive = std::move(next);
    ++set.iterations;
    if (!changed) {
      set.converged = true;
      break;
    }
  }
  return set;
}

}  // namespace platoon
