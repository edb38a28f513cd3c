#pragma once

// Seeded samplers: Haar unitaries and isometries, random mixed-unitary and
// Stinespring channels, uniformly random pure states.

#include <cstdint>
#include <vector>

#include "qlim/channels.hpp"

namespace qlim {

/// Counter-based generator: the i-th draw of stream s under master seed m is
/// a pure function of (m, s, i), so every trial can own a private stream and
/// results never depend on scheduling.
class SeededRng {
 public:
  SeededRng(std::uint64_t masterSeed, std::uint64_t streamIndex);

  std::uint64_t masterSeed() const { return masterSeed_; }
  std::uint64_t streamIndex() const { return streamIndex_; }

  std::uint64_t nextU64();
  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform();
  /// Standard normal via Box-Muller; the second variate is cached.
  double gaussian();
  /// Real and imaginary parts independent N(0, 1/2), so E|z|^2 = 1.
  Complex complexGaussian();

 private:
  std::uint64_t masterSeed_;
  std::uint64_t streamIndex_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix complexGinibre(Eigen::Index rows, Eigen::Index cols, SeededRng& rng);

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal moved into Q.
ComplexMatrix haarUnitary(Eigen::Index n, SeededRng& rng);

/// First `cols` columns of a Haar unitary of size `rows`. Throws
/// DimensionMismatch when cols > rows.
ComplexMatrix haarIsometry(Eigen::Index rows, Eigen::Index cols, SeededRng& rng);

/// Uniform unit vector in C^dim.
ComplexVector samplePureState(Eigen::Index dim, SeededRng& rng);

/// k i.i.d. Haar unitaries of size n weighted by w. Throws BadWeights when
/// w.size() != k or k < 2.
MixedUnitaryChannel sampleMixedUnitaryChannel(Eigen::Index k, Eigen::Index n, const WeightVector& w,
                                              SeededRng& rng);

/// Regime N(n) ~ t n k for random Stinespring channels.
struct StinespringRegime {
  Eigen::Index k;
  double t;
  std::vector<Eigen::Index> nGrid;

  /// max(1, round(t n k)); throws OutOfRange if that exceeds k n.
  Eigen::Index inputDim(Eigen::Index n) const;
};

/// Channel C^N -> M_k built from a Haar isometry C^N -> C^k (x) C^n.
StinespringChannel sampleStinespringChannel(Eigen::Index k, Eigen::Index n, Eigen::Index inputDim, SeededRng& rng);

}  // namespace qlim
