#pragma once

#include "rsp/network.hpp"

#include <random>

namespace rsp::testing {

/// Random column-stochastic matrix with a guaranteed Hamiltonian cycle, hence irreducible.
inline Matrix random_irreducible(int n, std::mt19937_64& gen, double density = 0.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix w = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (u(gen) < density) w(j, k) = u(gen);
  for (int j = 0; j < n; ++j) w(j, (j + 1) % n) += 0.1 + u(gen);
  for (int k = 0; k < n; ++k) w.col(k) /= w.col(k).sum();
  return w;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace rsp::testing
