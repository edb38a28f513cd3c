#pragma once

// Closed-form limit values.
//
//  * psi(a): operator norm of sum_i a_i u_i for free Haar unitaries u_i,
//    given by a one-dimensional convex minimisation.
//  * psiStar(w): sup of psi(a . sqrt(w)) over the unit sphere, solved exactly
//    by enumerating the support sets J of the stationary points.
//  * limits of the 1 -> infinity norm for entanglement-breaking, mixed-unitary
//    and random Stinespring channels.

#include <optional>
#include <string>
#include <vector>

#include "qlim/channels.hpp"

namespace qlim {

/// min_{x >= 0} (2 - k) x + sum_i sqrt(x^2 + |a_i|^2), k = a.size().
/// Throws ZeroVector when a == 0.
double psi(const ComplexVector& a);
double psi(const RealVector& a);

struct DerivativeRoot {
  double x = 0.0;
  /// F(0) >= 0: the minimiser sits on the boundary x = 0.
  bool boundary = false;
};

/// Root of F(x) = 2 - k + sum_i x / sqrt(x^2 + b_i) on x > 0, where
/// b_i = |a_i|^2 w_i. F is strictly increasing, so bisection is exact up to
/// the 1e-14 bracket width. Throws DegenerateInput if every b_i is 0.
DerivativeRoot psiDerivativeRoot(const RealVector& b);

/// Support set of a stationary point of a -> psi(a . sqrt(w)) on the sphere.
struct SubsetEvaluation {
  std::vector<int> indices;  // sorted, zero-based
  double beta = 0.0;         // sum_{j in J} w_j
  double gamma = 0.0;        // (sum_{j in J} 1/w_j)^{-1}
  bool valid = false;        // min_{j in J} w_j >= gamma |#J - 2|
  double hValue = 0.0;       // sqrt(beta - gamma (#J - 2)^2)
  /// Unit vector supported on J; present exactly when valid.
  std::optional<RealVector> candidateA;
};

/// Throws EmptySubset for an empty J, OutOfRange for an index outside w.
SubsetEvaluation evaluateSubset(const std::vector<int>& indices, const WeightVector& w);

struct PsiStarResult {
  double value = 0.0;
  std::vector<int> argmaxSubset;
  RealVector argmaxA;
  std::vector<SubsetEvaluation> allEvaluations;
};

inline constexpr int kPsiStarMaxK = 20;

/// Maximum of hValue over valid subsets. If the full index set is valid it is
/// the answer (h is monotone under inclusion) and nothing else is evaluated;
/// otherwise all 2^k - 1 subsets are enumerated. Ties go to the
/// lexicographically smallest subset. Throws CapacityExceeded for k > 20,
/// BadWeights for k < 2.
PsiStarResult psiStar(const WeightVector& w);

/// max_i Tr[A sigma_i]. Throws DimensionMismatch.
double ebLimitF(const ComplexMatrix& a, const std::vector<DensityMatrix>& states);

/// f_w(aa^*) = psi(a . sqrt(w))^2 for a unit vector a in C^k. Throws
/// NotUnitVector unless | ||a|| - 1 | <= 1e-12.
double fwRankOne(const ComplexVector& a, const WeightVector& w);

/// Limit of the 1 -> infinity norm of random mixed-unitary channels: psiStar(w)^2.
double mixedUnitaryNormLimit(const WeightVector& w);

/// Largest eigenvalue of the entropy minimiser (a, b, ..., b) of the limit
/// output set of random Stinespring channels with N ~ t n k. Equals 1 when
/// t + 1/k >= 1. Throws OutOfRange unless t in (0, 1) and k >= 2.
double stinespringPeakEigenvalue(int k, double t);

/// Human-readable one-based rendering, e.g. "{2,3,4}".
std::string formatSubset(const std::vector<int>& indices);

}  // namespace qlim
