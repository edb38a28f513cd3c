// Monte-Carlo checks at moderate dimension. Slower than the unit suites.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qlim/geometry.hpp"
#include "qlim/oracles.hpp"

using namespace qlim;

TEST_CASE("top eigenvalue law is invariant under Weyl conjugation of the probe") {
  // Flat weights: relabelling and rephasing the i.i.d. Haar unitaries leaves
  // the channel law unchanged, so lambda_1 for A and W A W^* has equal law.
  SeededRng probeRng(2024, 1000);
  const DensityMatrix a = DensityMatrix::pure(samplePureState(3, probeRng));
  const ComplexMatrix w = weylOperator(1, 1, 3);
  const DensityMatrix b = DensityMatrix::fromMatrix(ComplexMatrix(w * a.matrix() * w.adjoint()));
  std::vector<double> diffs;
  for (int s = 0; s < 50; ++s) {
    SeededRng rng(2024, static_cast<std::uint64_t>(s));
    const Channel ch = sampleMixedUnitaryChannel(3, 600, WeightVector::flat(3), rng);
    diffs.push_back(cmProbe(ch, a, 1).topEigenvalues[0] - cmProbe(ch, b, 1).topEigenvalues[0]);
  }
  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= static_cast<double>(diffs.size());
  double var = 0.0;
  for (double d : diffs) var += (d - mean) * (d - mean);
  const double se = std::sqrt(var / static_cast<double>(diffs.size() - 1) / static_cast<double>(diffs.size()));
  MESSAGE("mean difference " << mean << ", standard error " << se);
  CHECK(std::abs(mean) <= 5.0 * se);
}

TEST_CASE("norm ascent approaches psi*^2 for random mixed-unitary channels") {
  SeededRng rng(77, 0);
  const Channel ch = sampleMixedUnitaryChannel(3, 400, WeightVector::flat(3), rng);
  const NormEstimate est = estimateNormOneInf(ch, 3, 60, rng);
  MESSAGE("estimate " << est.value << " vs limit " << 8.0 / 9.0);
  CHECK(std::abs(est.value - 8.0 / 9.0) <= 0.1 * 8.0 / 9.0);
}
