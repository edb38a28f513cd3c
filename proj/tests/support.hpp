#pragma once

// Small helpers shared by the test binaries.

#include <algorithm>
#include <vector>

#include "qlim/random.hpp"

namespace qlim::testing {

inline ComplexMatrix randomHermitian(Eigen::Index dim, SeededRng& rng) {
  const ComplexMatrix g = complexGinibre(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

inline DensityMatrix randomMixedState(Eigen::Index dim, SeededRng& rng) {
  const ComplexMatrix g = complexGinibre(dim, dim, rng);
  return DensityMatrix::normalize(g * g.adjoint());
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Dense Phi(X) = sum_j K_j X K_j^*, used as a representation-free reference.
inline ComplexMatrix krausApply(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(ops.front().rows(), ops.front().rows());
  for (const auto& k : ops) out += k * x * k.adjoint();
  return out;
}

}  // namespace qlim::testing
