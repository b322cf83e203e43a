#pragma once

#include <random>

namespace platoon {

template <class Rng>
Decomposition random_decomposition(const RciParameterization& param, Rng& rng, double vertex_fraction) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution at_vertex(vertex_fraction);
  std::bernoulli_distribution coin(0.5);
  const Vec r = param.disturbance.half_width();
  Decomposition d(static_cast<size_t>(param.kappa), Vec::Zero(param.dist_dim()));
  for (auto& block : d) {
    const bool vertex = at_vertex(rng);
    for (Eigen::Index j = 0; j < block.size(); ++j)
      block(j) = r(j) * (vertex ? (coin(rng) ? 1.0 : -1.0) : unit(rng));
  }
  return d;
}

}  // namespace platoon
