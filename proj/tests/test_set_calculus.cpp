#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "platoon/set_calculus.hpp"

using namespace platoon;

namespace {

Box box2(double a, double b, double c, double d) { return Box((Vec(2) << a, c).finished(), (Vec(2) << b, d).finished()); }

double brute_support(const Box& b, const Vec& c) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : enumerate_vertices(b)) best = std::max(best, c.dot(v));
  return best;
}

}  // namespace

TEST(Support, HandValues) {
  EXPECT_DOUBLE_EQ(support(Box::symmetric(Vec::Ones(2)), (Vec(2) << 1, 1).finished()), 2.0);
  EXPECT_DOUBLE_EQ(support(box2(0, 2, -1, 0), (Vec(2) << 1, -1).finished()), 3.0);
  EXPECT_THROW(support(Box::symmetric(Vec::Ones(2)), Vec::Ones(3)), SpecError);
}

TEST(Support, MatchesVertexMaximum) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    Vec lo(4), hi(4), c(4);
    for (int k = 0; k < 4; ++k) {
      const double a = g(rng), b = g(rng);
      lo(k) = std::min(a, b);
      hi(k) = std::max(a, b);
      c(k) = g(rng);
    }
    const Box b(lo, hi);
    EXPECT_NEAR(support(b, c), brute_support(b, c), 1e-12);
  }
}

TEST(Support, HomogeneousAndSubadditive) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    Vec c(3), r1(3), r2(3), c1(3), c2(3);
    for (int k = 0; k < 3; ++k) {
      c(k) = g(rng);
      r1(k) = std::abs(g(rng));
      r2(k) = std::abs(g(rng));
      c1(k) = g(rng);
      c2(k) = g(rng);
    }
    const Box a(c1 - r1, c1 + r1), b(c2 - r2, c2 + r2), sum(c1 + c2 - r1 - r2, c1 + c2 + r1 + r2);
    const double lambda = std::abs(g(rng));
    EXPECT_NEAR(support(a, lambda * c), lambda * support(a, c), 1e-12);
    EXPECT_LE(support(sum, c), support(a, c) + support(b, c) + 1e-12);
  }
}

TEST(Vertices, SmallCases) {
  const auto one = enumerate_vertices(Box(Vec::Zero(1), Vec::Ones(1)));
  ASSERT_EQ(one.size(), 2u);
  EXPECT_DOUBLE_EQ(one[0](0), 0.0);
  EXPECT_DOUBLE_EQ(one[1](0), 1.0);

  const auto sq = enumerate_vertices(Box::symmetric(Vec::Ones(2)));
  ASSERT_EQ(sq.size(), 4u);
  EXPECT_EQ(sq[1], (Vec(2) << 1, -1).finished());
  EXPECT_EQ(sq[2], (Vec(2) << -1, 1).finished());

  const auto flat = enumerate_vertices(box2(0, 1, 2, 2));
  ASSERT_EQ(flat.size(), 4u);
  EXPECT_EQ(flat[0], flat[2]);

  EXPECT_THROW(enumerate_vertices(Box::symmetric(Vec::Ones(23))), SpecError);
  EXPECT_EQ(enumerate_vertices(Box::symmetric(Vec::Ones(5)), 5).size(), 32u);
  EXPECT_EQ(box_vertex(Box::symmetric(Vec::Ones(3)), 5), (Vec(3) << 1, -1, 1).finished());
}

TEST(ImageBox, HandValues) {
  const Box d = linear_image_bbox((Mat(1, 2) << 1, -1).finished(), Box::symmetric(Vec::Ones(2)));
  EXPECT_DOUBLE_EQ(d.lower(0), -2.0);
  EXPECT_DOUBLE_EQ(d.upper(0), 2.0);

  const Box b = box2(-1, 2, 3, 5);
  const Box same = linear_image_bbox(Mat::Identity(2, 2), b);
  EXPECT_EQ(same.lower, b.lower);
  EXPECT_EQ(same.upper, b.upper);
}

// Difference map of the distributed relative disturbances, one follower.
TEST(ImageBox, RelativeDisturbanceMapMatchesVertices) {
  Mat T(2, 4);
  T << 1, 0, -1, 0, 0, 1, 0, -1;
  const Box W = Box::symmetric(Vec::Constant(4, 3.0));
  const Box img = linear_image_bbox(T, W);
  Vec lo = Vec::Constant(2, 1e300), hi = Vec::Constant(2, -1e300);
  for (const Vec& v : enumerate_vertices(W)) {
    lo = lo.cwiseMin(T * v);
    hi = hi.cwiseMax(T * v);
  }
  EXPECT_EQ(img.lower, lo);
  EXPECT_EQ(img.upper, hi);
  EXPECT_DOUBLE_EQ(img.upper(0), 6.0);
}

TEST(ImageBox, ContainsEveryVertexImageAndIsTight) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    Mat T(3, 4);
    for (auto& x : T.reshaped()) x = g(rng);
    Vec lo(4), hi(4);
    for (int k = 0; k < 4; ++k) {
      lo(k) = g(rng);
      hi(k) = lo(k) + std::abs(g(rng));
    }
    const Box b(lo, hi);
    const Box img = linear_image_bbox(T, b);
    Vec vlo = Vec::Constant(3, 1e300), vhi = Vec::Constant(3, -1e300);
    for (const Vec& v : enumerate_vertices(b)) {
      EXPECT_TRUE(img.contains(T * v, 1e-12));
      vlo = vlo.cwiseMin(T * v);
      vhi = vhi.cwiseMax(T * v);
    }
    EXPECT_LE((img.lower - vlo).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((img.upper - vhi).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ScaledContainment, HandValues) {
  const Box D = Box::symmetric(Vec::Ones(2));
  EXPECT_TRUE(box_in_scaled_box(Mat::Zero(2, 2), D, 0.0, D));
  EXPECT_TRUE(box_in_scaled_box(Mat::Identity(2, 2), D, 1.0, D));
  EXPECT_FALSE(box_in_scaled_box(0.5 * Mat::Identity(2, 2), D, 0.4, D));
  EXPECT_THROW(box_in_scaled_box(Mat::Identity(2, 2), box2(0, 1, -1, 1), 1.0, D), SpecError);
}

TEST(ScaledContainment, ImpliesSampledContainment) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const Box D((Vec(3) << -1, -2, -0.5).finished(), (Vec(3) << 1, 2, 0.5).finished());
  int positives = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Mat G(3, 3);
    for (auto& x : G.reshaped()) x = 0.3 * g(rng);
    const double alpha = 0.9;
    if (!box_in_scaled_box(G, D, alpha, D)) continue;
    ++positives;
    for (int s = 0; s < 1000; ++s) EXPECT_TRUE(D.scaled(alpha).contains(G * platoon::testing::uniform_in(D, rng), 1e-12));
  }
  EXPECT_GT(positives, 10);
}

TEST(ScaledContainment, LinearizedRowsBindAtTheScaledBound) {
  // max g subject to [g] [-1,1] in 0.5 [-1,1]  =>  g = 0.5
  lp::Model m;
  const int g = m.add_variable(-lp::kInf, lp::kInf, -1.0);
  add_box_in_scaled_box(m, {{lp::LinearExpr::var(g)}}, Box::symmetric(Vec::Ones(1)), 0.5,
                        Box::symmetric(Vec::Ones(1)));
  const lp::Solution s = lp::default_backend()->solve(m);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.x[static_cast<size_t>(g)], 0.5, 1e-9);
}
