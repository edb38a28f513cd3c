#include "qlim/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qlim {

namespace {

double derivative(const RealVector& b, double x) {
  const auto k = static_cast<double>(b.size());
  double f = 2.0 - k;
  for (double bi : b) f += bi == 0.0 ? 1.0 : x / std::sqrt(x * x + bi);
  return f;
}

double objective(const RealVector& b, double x) {
  const auto k = static_cast<double>(b.size());
  double g = (2.0 - k) * x;
  for (double bi : b) g += std::sqrt(x * x + bi);
  return g;
}

// Absolute band within which two h values count as tied.
constexpr double kTieTolerance = 1e-13;
// Relative slack in the validity test, absorbing rounding when
// min_j w_j == gamma |#J - 2| holds exactly in real arithmetic.
constexpr double kValiditySlack = 1e-12;

}  // namespace

DerivativeRoot psiDerivativeRoot(const RealVector& b) {
  require(b.size() >= 1 && b.allFinite() && (b.array() >= 0.0).all(), ErrorKind::DegenerateInput,
          "psiDerivativeRoot needs finite non-negative b");
  require(b.maxCoeff() > 0.0, ErrorKind::DegenerateInput, "all b_i are zero");
  // F(0+) = 2 - k + #{i : b_i = 0}; at or above zero the minimiser is x = 0.
  if (derivative(b, 0.0) >= 0.0) return {0.0, true};

  double lo = 0.0;
  double hi = static_cast<double>(b.size()) * std::sqrt(b.maxCoeff());
  while (derivative(b, hi) <= 0.0) hi *= 2.0;
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (derivative(b, mid) < 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

double psi(const RealVector& a) {
  require(a.size() >= 1 && a.allFinite(), ErrorKind::ZeroVector, "psi needs a finite non-empty vector");
  require(a.cwiseAbs().maxCoeff() > 0.0, ErrorKind::ZeroVector, "psi of the zero vector");
  const RealVector b = a.cwiseAbs2();
  return objective(b, psiDerivativeRoot(b).x);
}

double psi(const ComplexVector& a) { return psi(RealVector(a.cwiseAbs())); }

SubsetEvaluation evaluateSubset(const std::vector<int>& indices, const WeightVector& w) {
  require(!indices.empty(), ErrorKind::EmptySubset, "subset J is empty");
  SubsetEvaluation ev;
  ev.indices = indices;
  std::sort(ev.indices.begin(), ev.indices.end());
  require(std::adjacent_find(ev.indices.begin(), ev.indices.end()) == ev.indices.end(), ErrorKind::OutOfRange,
          "subset has repeated indices");
  require(ev.indices.front() >= 0 && ev.indices.back() < w.size(), ErrorKind::OutOfRange,
          "subset index outside the weight vector");

  double inv = 0.0;
  double wmin = 1.0;
  for (int j : ev.indices) {
    ev.beta += w[j];
    inv += 1.0 / w[j];
    wmin = std::min(wmin, w[j]);
  }
  ev.gamma = 1.0 / inv;
  const double excess = static_cast<double>(ev.indices.size()) - 2.0;
  ev.valid = wmin >= ev.gamma * std::abs(excess) * (1.0 - kValiditySlack);
  const double radicand = ev.beta - ev.gamma * excess * excess;
  ev.hValue = std::sqrt(std::max(0.0, radicand));

  if (ev.valid) {
    RealVector a = RealVector::Zero(w.size());
    if (ev.indices.size() == 1) {
      a[ev.indices.front()] = 1.0;
    } else {
      const double shift = ev.gamma * ev.gamma * excess * excess;
      for (int j : ev.indices) a[j] = std::max(0.0, (w[j] - shift / w[j]) / radicand);
      a = (a / a.sum()).cwiseSqrt();
    }
    ev.candidateA = std::move(a);
  }
  return ev;
}

PsiStarResult psiStar(const WeightVector& w) {
  const Eigen::Index k = w.size();
  require(k >= 2, ErrorKind::BadWeights, "psiStar needs k >= 2");
  require(k <= kPsiStarMaxK, ErrorKind::CapacityExceeded,
          "psiStar enumerates 2^k subsets; k = " + std::to_string(k) + " exceeds " + std::to_string(kPsiStarMaxK));

  PsiStarResult result;
  std::vector<int> full(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) full[static_cast<std::size_t>(i)] = i;
  SubsetEvaluation whole = evaluateSubset(full, w);
  if (whole.valid) {
    result.value = whole.hValue;
    result.argmaxSubset = whole.indices;
    result.argmaxA = *whole.candidateA;
    result.allEvaluations.push_back(std::move(whole));
    return result;
  }

  // Keeping every evaluation is only affordable for moderate k.
  const bool keepAll = k <= 16;
  const std::uint32_t count = 1u << k;
  std::optional<SubsetEvaluation> best;
  std::vector<int> indices;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    indices.clear();
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) indices.push_back(i);
    SubsetEvaluation ev = evaluateSubset(indices, w);
    if (ev.valid) {
      const bool better = !best || ev.hValue > best->hValue + kTieTolerance;
      const bool tie = best && std::abs(ev.hValue - best->hValue) <= kTieTolerance &&
                       std::lexicographical_compare(ev.indices.begin(), ev.indices.end(), best->indices.begin(),
                                                    best->indices.end());
      if (better || tie) best = ev;
    }
    if (keepAll) result.allEvaluations.push_back(std::move(ev));
  }
  // Every pair is valid, so best is always set for k >= 2.
  result.value = best->hValue;
  result.argmaxSubset = best->indices;
  result.argmaxA = *best->candidateA;
  return result;
}

double ebLimitF(const ComplexMatrix& a, const std::vector<DensityMatrix>& states) {
  require(!states.empty(), ErrorKind::DimensionMismatch, "no states");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : states) {
    require(s.dim() == a.rows() && a.rows() == a.cols(), ErrorKind::DimensionMismatch,
            "ebLimitF: A and sigma_i differ in dimension");
    best = std::max(best, traceProduct(a, s.matrix()));
  }
  return best;
}

double fwRankOne(const ComplexVector& a, const WeightVector& w) {
  require(a.size() == w.size(), ErrorKind::DimensionMismatch, "fwRankOne: a and w differ in length");
  require(std::abs(a.norm() - 1.0) <= 1e-12, ErrorKind::NotUnitVector, "fwRankOne needs a unit vector");
  const double p = psi(RealVector(a.cwiseAbs().cwiseProduct(w.sqrtEntries())));
  return p * p;
}

double mixedUnitaryNormLimit(const WeightVector& w) {
  const double v = psiStar(w).value;
  return v * v;
}

double stinespringPeakEigenvalue(int k, double t) {
  require(k >= 2 && t > 0.0 && t < 1.0, ErrorKind::OutOfRange, "need k >= 2 and t in (0, 1)");
  const double kd = k;
  if (t + 1.0 / kd >= 1.0) return 1.0;
  return t + 1.0 / kd - 2.0 * t / kd + 2.0 * std::sqrt(t * (1.0 - t) * (kd - 1.0)) / kd;
}

std::string formatSubset(const std::vector<int>& indices) {
  std::string out = "{";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices[i] + 1);
  }
  return out + "}";
}

}  // namespace qlim
