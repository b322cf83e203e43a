#pragma once

#include <random>

#include "platoon/platoon_model.hpp"

namespace platoon::testing {

// Example platoon: l = 4.5 m, speeds [13, 17] m/s, dt = 0.5 s, U = [-3, 3].
// Position channel +-0.25 m, velocity channel +-1 m/s.
inline PlatoonSpec example_spec(int n, double length_bound) {
  return PlatoonSpec::uniform(n, 4.5, length_bound, 13.0, 17.0, 0.5, {-3.0, 3.0}, {{-0.25, 0.25}, {-1.0, 1.0}});
}

// The other channel assignment: position +-1 m, velocity +-0.25 m/s.
inline PlatoonSpec swapped_spec(int n, double length_bound) {
  return PlatoonSpec::uniform(n, 4.5, length_bound, 13.0, 17.0, 0.5, {-3.0, 3.0}, {{-1.0, 1.0}, {-0.25, 0.25}});
}

inline Vec uniform_in(const Box& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(b.dim());
  for (int k = 0; k < b.dim(); ++k) x(k) = b.lower(k) + u(rng) * (b.upper(k) - b.lower(k));
  return x;
}

// Independent model: every vehicle is a discretized double integrator in
// absolute coordinates; relative states are formed afterwards.
struct AbsolutePlatoon {
  Vec p, v;  // N+1 positions and speeds, index 0 is the leader

  void step(double dt, const Vec& u, const Vec& w) {
    for (int i = 0; i < p.size(); ++i) {
      p(i) += dt * v(i) + 0.5 * dt * dt * u(i) + w(2 * i);
      v(i) += dt * u(i) + w(2 * i + 1);
    }
  }

  Vec relative() const {
    const int N = static_cast<int>(p.size()) - 1;
    Vec y(2 * N + 1);
    for (int i = 1; i <= N; ++i) {
      y(2 * (i - 1)) = p(0) - p(i);
      y(2 * (i - 1) + 1) = v(0) - v(i);
    }
    y(2 * N) = v(0);
    return y;
  }
};

}  // namespace platoon::testing
