#include <gtest/gtest.h>

#include "platoon/distributed.hpp"
#include "platoon/fixed_point_oracle.hpp"

using namespace platoon;

namespace {

Polyhedron interval_set(double lo, double hi) {
  Polyhedron P;
  P.H = (Mat(2, 1) << 1, -1).finished();
  P.h = (Vec(2) << hi, -lo).finished();
  return P;
}

Box interval_box(double lo, double hi) { return Box(Vec::Constant(1, lo), Vec::Constant(1, hi)); }

FixedPointOptions grid1(double lo, double hi, int cells) {
  FixedPointOptions o;
  o.grid = interval_box(lo, hi);
  o.cells = {cells};
  return o;
}

}  // namespace

TEST(FixedPoint, NoDisturbanceKeepsEverything) {
  LinearSystem s{Mat::Identity(1, 1), Mat::Identity(1, 1), Mat::Identity(1, 1)};
  const GriddedSet g = fixed_point_rci_oracle(s, interval_set(-10, 10), interval_box(-100, 100), interval_box(0, 0),
                                              grid1(-10, 10, 50));
  EXPECT_TRUE(g.converged);
  EXPECT_LE(g.iterations, 2);
  EXPECT_EQ(g.alive_count(), 50);
}

// From v = 17 the input -3 gives v+ in [15.25, 15.75], so the band is invariant.
TEST(FixedPoint, LeaderSpeedBandSurvives) {
  const GriddedSet g = fixed_point_rci_oracle(leader_system(0.5), interval_set(13, 17), interval_box(-3, 3),
                                              interval_box(-0.25, 0.25), grid1(13, 17, 80));
  EXPECT_TRUE(g.converged);
  EXPECT_EQ(g.alive_count(), 80);
  EXPECT_TRUE(g.contains(Vec::Constant(1, 13.0)));
  EXPECT_TRUE(g.contains(Vec::Constant(1, 17.0)));
  EXPECT_FALSE(g.contains(Vec::Constant(1, 17.5)));
}

// |w| = 2.5 exceeds half the band even with a perfect input, so nothing is invariant.
TEST(FixedPoint, OverwhelmingDisturbanceEmptiesTheGrid) {
  const GriddedSet g = fixed_point_rci_oracle(leader_system(0.5), interval_set(13, 17), interval_box(-3, 3),
                                              interval_box(-2.5, 2.5), grid1(12, 18, 120));
  EXPECT_TRUE(g.converged);
  EXPECT_EQ(g.alive_count(), 0);
}

TEST(FixedPoint, GridGeometry) {
  const GriddedSet g = fixed_point_rci_oracle(leader_system(0.5), interval_set(13, 17), interval_box(-3, 3),
                                              interval_box(-0.25, 0.25), grid1(13, 17, 8));
  EXPECT_DOUBLE_EQ(g.cell_width(0), 0.5);
  EXPECT_DOUBLE_EQ(g.cell_center(0)(0), 13.25);
  EXPECT_EQ(g.locate(Vec::Constant(1, 16.9)), 7);
  EXPECT_EQ(g.locate(Vec::Constant(1, 12.9)), -1);
}

TEST(FixedPoint, RejectsOversizedGrids) {
  const LinearSystem f = follower_system(0.5);
  Polyhedron S;
  S.H = (Mat(2, 2) << 1, 0, -1, 0).finished();
  S.h = (Vec(2) << 5, -4.5).finished();
  FixedPointOptions o;
  o.grid = Box((Vec(2) << 4.5, -2).finished(), (Vec(2) << 5, 2).finished());
  o.cells = {1000, 1000};
  EXPECT_THROW(fixed_point_rci_oracle(f, S, interval_box(-1.5, 1.5), Box::symmetric(Vec::Constant(2, 0.1)), o),
               GridCapacityError);
  o.cells = {10};
  EXPECT_THROW(fixed_point_rci_oracle(f, S, interval_box(-1.5, 1.5), Box::symmetric(Vec::Constant(2, 0.1)), o),
               SpecError);
}
