#pragma once

// Empirical probes of channel output sets and of the limit set
//   K = { B in D_k : Tr[BA] <= f(A) for all A in D_k }.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qlim/channels.hpp"
#include "qlim/random.hpp"

namespace qlim {

/// Top m eigenvalues of P (A (x) I) P, read off Phi^*(A) which shares its
/// nonzero spectrum.
struct CmProbe {
  DensityMatrix a;
  int m = 1;
  RealVector topEigenvalues;  // non-increasing, length m
  double spread = 0.0;        // lambda_1 - lambda_m
  std::optional<double> target;
};

/// Throws DimensionMismatch unless 1 <= m <= input dimension and A is k x k.
CmProbe cmProbe(const Channel& ch, const DensityMatrix& a, int m, std::optional<double> target = std::nullopt);

/// Outputs of `count` independent uniformly random pure inputs.
std::vector<DensityMatrix> sampleOutputs(const Channel& ch, int count, SeededRng& rng);

using LimitFunction = std::function<double(const DensityMatrix&)>;

struct MembershipViolation {
  DensityMatrix direction;
  double margin;  // Tr[BA] - f(A)
};

struct MembershipVerdict {
  DensityMatrix b;
  std::vector<MembershipViolation> violations;  // margins above kMembershipTolerance
  double maxMargin = 0.0;
  bool inK = true;  // no violation found; a finite direction set cannot prove membership
};

inline constexpr double kMembershipTolerance = 1e-9;

/// One-sided test of Tr[BA] <= f(A) + 1e-9 over the supplied directions.
/// Throws EmptySample for an empty direction set, DimensionMismatch for
/// directions of the wrong size.
MembershipVerdict membership(const DensityMatrix& b, const LimitFunction& f, const std::vector<DensityMatrix>& directions);

/// Deterministic rank-one directions aa^* from a Halton sequence pushed
/// through Box-Muller onto the unit sphere of C^k.
std::vector<DensityMatrix> sphereGridDirections(Eigen::Index k, int count);

/// Local pattern search on the unit sphere maximising a^*Ba - f(aa^*) from a
/// starting vector, moving one coordinate at a time additively or by phase.
/// Returns the improved rank-one direction.
DensityMatrix refineDirection(const DensityMatrix& b, const LimitFunction& f, const ComplexVector& start,
                              int maxIterations = 200);

/// Full direction strategy: the sphere grid, B itself, and pattern-search
/// refinement of the worst grid directions.
MembershipVerdict membershipSearch(const DensityMatrix& b, const LimitFunction& f, int gridSize = 256,
                                   int refinements = 4);

struct NormEstimate {
  double value = 0.0;          // best a^* Phi(xx^*) a over all restarts
  ComplexVector input;         // maximising input x
  ComplexVector direction;     // maximising output eigenvector a
  ComplexMatrix output;        // Phi(xx^*) at the maximiser
  std::vector<double> trace;   // objective after every half step of the best restart
};

/// Alternating ascent for ||Phi||_{1,inf}: with a fixed, x becomes the top
/// eigenvector of Phi^*(aa^*); with x fixed, a becomes the top eigenvector of
/// Phi(xx^*). Each half step is an exact maximisation, so the objective never
/// decreases. The result is a lower bound on the true norm. Throws
/// OutOfRange for restarts < 1 or iterCap < 1.
NormEstimate estimateNormOneInf(const Channel& ch, int restarts, int iterCap, SeededRng& rng);

/// W_{a,b} = X^a Y^b with X e_l = e_{l+1 mod k}, Y e_l = exp(2 pi i l / k) e_l,
/// zero-based l. Throws OutOfRange unless 0 <= a, b < k.
ComplexMatrix weylOperator(int a, int b, int k);

/// (1/k^2) sum_{a,b} W_{a,b} A W_{a,b}^*.
DensityMatrix weylTwirl(const DensityMatrix& a);

/// Minimum von Neumann entropy over a sample. Throws EmptySample.
double estimateSmin(const std::vector<DensityMatrix>& outputs);
/// log k - S_min.
double holevoFromSmin(Eigen::Index k, double smin);
/// S(sum_i p_i X_i) - sum_i p_i S(X_i). Throws EmptySample for no members,
/// BadEnsemble for negative weights, weights not summing to 1 within 1e-12,
/// or members of different dimension.
double holevoLowerBound(const std::vector<std::pair<double, DensityMatrix>>& ensemble);

/// Unit x in span(W) whose right Schmidt vectors are all orthogonal to T.
/// W is a (k n) x dim W basis, T an n x dim T basis (dim T may be 0).
/// Throws DimensionObstruction unless dim W > k dim T.
ComplexVector orthogonalSchmidtVector(const ComplexMatrix& w, const ComplexMatrix& t, Eigen::Index k,
                                      Eigen::Index n);

}  // namespace qlim
