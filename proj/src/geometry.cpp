#include "qlim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

namespace qlim {

CmProbe cmProbe(const Channel& ch, const DensityMatrix& a, int m, std::optional<double> target) {
  require(a.dim() == outputDim(ch), ErrorKind::DimensionMismatch, "cmProbe: A must be k x k");
  require(m >= 1 && m <= inputDim(ch), ErrorKind::DimensionMismatch,
          "cmProbe: m = " + std::to_string(m) + " outside [1, N]");
  const RealVector spectrum = hermitianEigenvalues(adjointApply(ch, a));
  CmProbe probe{a, m, spectrum.head(m), 0.0, target};
  probe.spread = probe.topEigenvalues[0] - probe.topEigenvalues[m - 1];
  return probe;
}

std::vector<DensityMatrix> sampleOutputs(const Channel& ch, int count, SeededRng& rng) {
  require(count >= 1, ErrorKind::EmptySample, "sampleOutputs needs count >= 1");
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out.push_back(DensityMatrix::normalize(applyToPure(ch, samplePureState(inputDim(ch), rng))));
  return out;
}

MembershipVerdict membership(const DensityMatrix& b, const LimitFunction& f,
                             const std::vector<DensityMatrix>& directions) {
  require(!directions.empty(), ErrorKind::EmptySample, "membership needs at least one direction");
  MembershipVerdict verdict{b, {}, -std::numeric_limits<double>::infinity(), true};
  for (const auto& a : directions) {
    require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "direction and B differ in dimension");
    const double margin = traceProduct(b.matrix(), a.matrix()) - f(a);
    verdict.maxMargin = std::max(verdict.maxMargin, margin);
    if (margin > kMembershipTolerance) verdict.violations.push_back({a, margin});
  }
  verdict.inK = verdict.violations.empty();
  return verdict;
}

namespace {

double radicalInverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double scale = inv;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return result;
}

std::vector<std::uint64_t> firstPrimes(std::size_t count) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t c = 2; primes.size() < count; ++c)
    if (std::none_of(primes.begin(), primes.end(), [c](std::uint64_t p) { return c % p == 0; })) primes.push_back(c);
  return primes;
}

double rankOneObjective(const DensityMatrix& b, const LimitFunction& f, const ComplexVector& a) {
  const DensityMatrix dir = DensityMatrix::pure(a);
  return traceProduct(b.matrix(), dir.matrix()) - f(dir);
}

}  // namespace

std::vector<DensityMatrix> sphereGridDirections(Eigen::Index k, int count) {
  require(k >= 1 && count >= 1, ErrorKind::EmptySample, "sphere grid needs k >= 1 and count >= 1");
  const auto primes = firstPrimes(static_cast<std::size_t>(2 * k));
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    ComplexVector v(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double u1 = radicalInverse(static_cast<std::uint64_t>(i), primes[static_cast<std::size_t>(2 * j)]);
      const double u2 = radicalInverse(static_cast<std::uint64_t>(i), primes[static_cast<std::size_t>(2 * j + 1)]);
      v[j] = std::polar(std::sqrt(-2.0 * std::log(u1)), 2.0 * std::numbers::pi * u2);
    }
    out.push_back(DensityMatrix::pure(v));
  }
  return out;
}

DensityMatrix refineDirection(const DensityMatrix& b, const LimitFunction& f, const ComplexVector& start,
                              int maxIterations) {
  require(start.size() == b.dim(), ErrorKind::DimensionMismatch, "refineDirection: start has the wrong length");
  ComplexVector a = start.normalized();
  double value = rankOneObjective(b, f, a);
  double step = 0.25;
  const Complex moves[] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  for (int iter = 0; iter < maxIterations && step > 1e-7; ++iter) {
    ComplexVector bestA = a;
    double bestValue = value;
    for (Eigen::Index j = 0; j < a.size(); ++j)
      for (int m = 0; m < 6; ++m) {
        ComplexVector trial = a;
        if (m < 4) {
          trial[j] += step * moves[m];
          trial.normalize();
        } else {
          // Pure phase moves keep every modulus, which walks along kinks of f.
          trial[j] *= std::polar(1.0, (m == 4 ? step : -step) * std::numbers::pi);
        }
        const double v = rankOneObjective(b, f, trial);
        if (v > bestValue) {
          bestValue = v;
          bestA = trial;
        }
      }
    if (bestValue > value) {
      a = bestA;
      value = bestValue;
    } else {
      step *= 0.5;
    }
  }
  return DensityMatrix::pure(a);
}

MembershipVerdict membershipSearch(const DensityMatrix& b, const LimitFunction& f, int gridSize, int refinements) {
  std::vector<DensityMatrix> directions = sphereGridDirections(b.dim(), gridSize);
  directions.push_back(b);

  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < directions.size(); ++i)
    ranked.emplace_back(traceProduct(b.matrix(), directions[i].matrix()) - f(directions[i]), i);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  const std::size_t count = std::min(ranked.size(), static_cast<std::size_t>(std::max(refinements, 0)));
  for (std::size_t r = 0; r < count; ++r) {
    const EigenSystem es = hermitianEigs(directions[ranked[r].second].matrix());
    directions.push_back(refineDirection(b, f, es.eigenvectors.col(0)));
  }
  return membership(b, f, directions);
}

namespace {

constexpr Eigen::Index kDenseAdjointMaxDim = 64;

}  // namespace

NormEstimate estimateNormOneInf(const Channel& ch, int restarts, int iterCap, SeededRng& rng) {
  require(restarts >= 1 && iterCap >= 1, ErrorKind::OutOfRange, "need restarts >= 1 and iterCap >= 1");
  const Eigen::Index k = outputDim(ch);
  const Eigen::Index big = inputDim(ch);

  NormEstimate best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    ComplexVector a = samplePureState(k, rng);
    ComplexVector x = samplePureState(big, rng);
    ComplexMatrix out;
    std::vector<double> trace;
    double value = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < iterCap; ++it) {
      const ComplexMatrix aa = a * a.adjoint();
      double xValue;
      if (big <= kDenseAdjointMaxDim) {
        const EigenSystem es = hermitianEigs(adjointApply(ch, aa));
        x = es.eigenvectors.col(0);
        xValue = es.eigenvalues[0];
      } else {
        // Warm start from the previous x: the top Ritz value then dominates x^*Hx.
        const TopEigenpair top = topEigenpairLanczos(adjointOperator(ch, aa), x);
        x = top.vector;
        xValue = top.value;
      }
      trace.push_back(xValue);

      out = applyToPure(ch, x);
      const EigenSystem es = hermitianEigs(out);
      a = es.eigenvectors.col(0);
      const double next = es.eigenvalues[0];
      trace.push_back(next);
      const bool stalled = next - value <= 1e-13 * std::max(1.0, std::abs(next));
      value = std::max(value, next);
      if (stalled) break;
    }
    if (value > best.value) {
      best.value = value;
      best.input = x;
      best.direction = a;
      best.output = out;
      best.trace = std::move(trace);
    }
  }
  return best;
}

ComplexMatrix weylOperator(int a, int b, int k) {
  require(k >= 1 && a >= 0 && a < k && b >= 0 && b < k, ErrorKind::OutOfRange,
          "Weyl indices must lie in [0, k)");
  ComplexMatrix w = ComplexMatrix::Zero(k, k);
  // X^a Y^b e_l = exp(2 pi i b l / k) e_{l + a mod k}
  for (int l = 0; l < k; ++l)
    w((l + a) % k, l) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(b * l % k) / k);
  return w;
}

DensityMatrix weylTwirl(const DensityMatrix& a) {
  const int k = static_cast<int>(a.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(k, k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      const ComplexMatrix w = weylOperator(x, y, k);
      sum += w * a.matrix() * w.adjoint();
    }
  return DensityMatrix::normalize(sum / static_cast<double>(k * k));
}

double estimateSmin(const std::vector<DensityMatrix>& outputs) {
  require(!outputs.empty(), ErrorKind::EmptySample, "estimateSmin on an empty sample");
  double smin = std::numeric_limits<double>::infinity();
  for (const auto& x : outputs) smin = std::min(smin, vonNeumannEntropy(x));
  return smin;
}

double holevoFromSmin(Eigen::Index k, double smin) { return std::log(static_cast<double>(k)) - smin; }

double holevoLowerBound(const std::vector<std::pair<double, DensityMatrix>>& ensemble) {
  require(!ensemble.empty(), ErrorKind::EmptySample, "empty ensemble");
  const Eigen::Index dim = ensemble.front().second.dim();
  double total = 0.0;
  double mixed = 0.0;
  ComplexMatrix avg = ComplexMatrix::Zero(dim, dim);
  for (const auto& [p, x] : ensemble) {
    require(p >= 0.0, ErrorKind::BadEnsemble, "negative ensemble weight");
    require(x.dim() == dim, ErrorKind::BadEnsemble, "ensemble members differ in dimension");
    total += p;
    avg += p * x.matrix();
    mixed += p * vonNeumannEntropy(x);
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::BadEnsemble, "ensemble weights sum to " + std::to_string(total));
  return vonNeumannEntropy(DensityMatrix::normalize(avg)) - mixed;
}

ComplexVector orthogonalSchmidtVector(const ComplexMatrix& w, const ComplexMatrix& t, Eigen::Index k,
                                      Eigen::Index n) {
  require(w.rows() == k * n && (t.cols() == 0 || t.rows() == n), ErrorKind::DimensionMismatch,
          "W must have k*n rows and T must have n rows");
  require(w.cols() > k * t.cols(), ErrorKind::DimensionObstruction,
          "need dim W > k dim T, got " + std::to_string(w.cols()) + " <= " + std::to_string(k * t.cols()));

  Eigen::HouseholderQR<ComplexMatrix> qr(w);
  const ComplexMatrix basis = qr.householderQ() * ComplexMatrix::Identity(w.rows(), w.cols());
  if (t.cols() == 0) return basis.col(0);

  // x = basis c must be orthogonal to e_i (x) t_j for all i, j.
  const ComplexMatrix lifted = kron(ComplexMatrix::Identity(k, k), t);
  const ComplexMatrix constraint = lifted.adjoint() * basis;
  const EigenSystem es = hermitianEigs(constraint.adjoint() * constraint);
  const ComplexVector c = es.eigenvectors.col(es.eigenvectors.cols() - 1);
  return (basis * c).normalized();
}

}  // namespace qlim
