#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qlim/geometry.hpp"
#include "qlim/oracles.hpp"
#include "support.hpp"

using namespace qlim;
using qlim::testing::randomMixedState;

namespace {

ErrorKind kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no qlim::Error thrown");
  return ErrorKind::IoError;
}

DensityMatrix basisState(Eigen::Index k, Eigen::Index i) { return DensityMatrix::pure(ComplexVector::Unit(k, i)); }

}  // namespace

TEST_CASE("cmProbe on depolarizing and EB channels") {
  SeededRng rng(1, 0);
  const Channel dep = makeDepolarizing(4, 9);
  const CmProbe p = cmProbe(dep, randomMixedState(4, rng), 9);
  CHECK((p.topEigenvalues.array() - 0.25).abs().maxCoeff() <= 1e-14);
  CHECK(p.spread <= 1e-14);
  CHECK((kindOf([&] { cmProbe(dep, randomMixedState(4, rng), 10); }) == ErrorKind::DimensionMismatch));
  CHECK((kindOf([&] { cmProbe(dep, randomMixedState(3, rng), 1); }) == ErrorKind::DimensionMismatch));

  // Projective POVM with ranks 2 and 3 on C^5.
  const ComplexMatrix u = haarUnitary(5, rng);
  const ComplexMatrix m1 = u.leftCols(2) * u.leftCols(2).adjoint();
  const ComplexMatrix m2 = u.rightCols(3) * u.rightCols(3).adjoint();
  const std::vector<DensityMatrix> states = {randomMixedState(3, rng), randomMixedState(3, rng)};
  const Channel eb = makeEB({m1, m2}, states);
  for (int rep = 0; rep < 5; ++rep) {
    const DensityMatrix a = randomMixedState(3, rng);
    const CmProbe probe = cmProbe(eb, a, 2, ebLimitF(a.matrix(), states));
    CHECK(probe.topEigenvalues[0] == doctest::Approx(*probe.target).epsilon(1e-10));
    CHECK(probe.spread <= 1e-10);
  }
}

TEST_CASE("sampled outputs") {
  SeededRng rng(2, 0);
  for (const auto& x : sampleOutputs(makeDepolarizing(3, 4), 5, rng))
    CHECK(maxAbs(x.matrix() - ComplexMatrix::Identity(3, 3) / 3.0) <= 1e-14);
  for (const auto& x : sampleOutputs(StinespringChannel::identity(3), 5, rng))
    CHECK(vonNeumannEntropy(x) <= 1e-10);
  for (const auto& x : sampleOutputs(sampleStinespringChannel(3, 3, 4, rng), 20, rng)) {
    CHECK(x.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hermitianEigenvalues(x.matrix()).minCoeff() >= 0.0);
  }
  CHECK((kindOf([&] { sampleOutputs(makePinching(2), 0, rng); }) == ErrorKind::EmptySample));
}

TEST_CASE("membership against an EB limit function") {
  std::vector<DensityMatrix> basis = {basisState(3, 0), basisState(3, 1), basisState(3, 2)};
  const LimitFunction f = [&](const DensityMatrix& a) { return ebLimitF(a.matrix(), basis); };
  const auto grid = sphereGridDirections(3, 128);
  CHECK(membership(DensityMatrix::maximallyMixed(3), f, grid).inK);
  CHECK(membership(basis[0], f, grid).inK);
  CHECK(membershipSearch(DensityMatrix::maximallyMixed(3), f).inK);

  // |+> lies outside the hull of the basis states; B itself is a violating direction.
  const DensityMatrix plus = DensityMatrix::pure(ComplexVector::Ones(3));
  const MembershipVerdict direct = membership(plus, f, {plus});
  CHECK(!direct.inK);
  CHECK(direct.maxMargin == doctest::Approx(1.0 - 1.0 / 3.0).epsilon(1e-12));
  const MembershipVerdict searched = membershipSearch(plus, f);
  CHECK(!searched.inK);
  CHECK(searched.maxMargin >= direct.maxMargin - 1e-12);
  CHECK((kindOf([&] { membership(plus, f, {}); }) == ErrorKind::EmptySample));
}

TEST_CASE("pattern search improves a poor starting direction") {
  std::vector<DensityMatrix> basis = {basisState(2, 0), basisState(2, 1)};
  const LimitFunction f = [&](const DensityMatrix& a) { return ebLimitF(a.matrix(), basis); };
  ComplexVector b(2);
  b << 1.0, Complex(0.0, 1.0);
  const DensityMatrix target = DensityMatrix::pure(b);
  const DensityMatrix refined = refineDirection(target, f, ComplexVector::Unit(2, 0));
  const double margin = traceProduct(target.matrix(), refined.matrix()) - f(refined);
  // Best direction is B itself with margin 1 - 1/2.
  CHECK(margin == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("sphere grid is deterministic and well spread") {
  const auto a = sphereGridDirections(4, 64);
  const auto b = sphereGridDirections(4, 64);
  REQUIRE(a.size() == 64);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(maxAbs(a[i].matrix() - b[i].matrix()) == 0.0);
  // Average of the grid directions should be close to I/4.
  ComplexMatrix avg = ComplexMatrix::Zero(4, 4);
  for (const auto& d : sphereGridDirections(4, 4096)) avg += d.matrix();
  CHECK(maxAbs(avg / 4096.0 - ComplexMatrix::Identity(4, 4) / 4.0) <= 0.02);
}

TEST_CASE("norm ascent") {
  SeededRng rng(3, 0);
  CHECK(estimateNormOneInf(makeDepolarizing(3, 5), 2, 1, rng).value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(estimateNormOneInf(StinespringChannel::identity(4), 1, 5, rng).value == doctest::Approx(1.0).epsilon(1e-12));

  const Channel st = sampleStinespringChannel(3, 6, 8, rng);
  const NormEstimate est = estimateNormOneInf(st, 3, 50, rng);
  for (std::size_t i = 1; i < est.trace.size(); ++i) CHECK(est.trace[i] >= est.trace[i - 1] - 1e-12);
  // The reported maximiser reproduces the value.
  const ComplexMatrix out = applyToPure(st, est.input);
  CHECK(est.direction.dot(out * est.direction).real() == doctest::Approx(est.value).epsilon(1e-10));
  // Lower bound: no sampled output has a larger top eigenvalue.
  for (const auto& x : sampleOutputs(st, 200, rng)) CHECK(hermitianEigenvalues(x.matrix())[0] <= est.value + 1e-10);

  // Large input dimension exercises the Lanczos half step; it must agree with dense solves.
  const Channel big = sampleMixedUnitaryChannel(3, 120, WeightVector::flat(3), rng);
  SeededRng r1(7, 0);
  const NormEstimate viaOperator = estimateNormOneInf(big, 1, 30, r1);
  for (std::size_t i = 1; i < viaOperator.trace.size(); ++i)
    CHECK(viaOperator.trace[i] >= viaOperator.trace[i - 1] - 1e-10);
  // Replay the first draw of the same stream: the first half step is a Lanczos solve.
  SeededRng r2(7, 0);
  const ComplexVector a0 = samplePureState(3, r2);
  const ComplexMatrix dense = adjointApply(big, ComplexMatrix(a0 * a0.adjoint()));
  CHECK(viaOperator.trace.front() == doctest::Approx(hermitianEigenvalues(dense)[0]).epsilon(1e-10));
  CHECK((kindOf([&] { estimateNormOneInf(st, 0, 5, rng); }) == ErrorKind::OutOfRange));
}

TEST_CASE("Weyl operators") {
  for (int k = 2; k <= 6; ++k) {
    CHECK(maxAbs(weylOperator(0, 0, k) - ComplexMatrix::Identity(k, k)) == 0.0);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const ComplexMatrix w = weylOperator(a, b, k);
        CHECK(maxAbs(w.adjoint() * w - ComplexMatrix::Identity(k, k)) <= 1e-12);
      }
  }
  // k = 2: the four operators are pairwise Hilbert-Schmidt orthogonal.
  std::vector<ComplexMatrix> ws;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) ws.push_back(weylOperator(a, b, 2));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs((ws[i].adjoint() * ws[j]).trace() - (i == j ? 2.0 : 0.0)) <= 1e-14);
  // X e_l = e_{l+1}, Y e_l = omega^l e_l.
  const ComplexMatrix x = weylOperator(1, 0, 3);
  CHECK(std::abs(x(1, 0) - 1.0) <= 1e-15);
  const ComplexMatrix y = weylOperator(0, 1, 3);
  CHECK(std::abs(y(2, 2) - std::polar(1.0, 4.0 * M_PI / 3.0)) <= 1e-15);
  CHECK((kindOf([] { weylOperator(3, 0, 3); }) == ErrorKind::OutOfRange));

  SeededRng rng(4, 0);
  for (int k = 2; k <= 6; ++k) {
    CHECK(maxAbs(weylTwirl(randomMixedState(k, rng)).matrix() - ComplexMatrix::Identity(k, k) / k) <= 1e-12);
    CHECK(maxAbs(weylTwirl(DensityMatrix::maximallyMixed(k)).matrix() - ComplexMatrix::Identity(k, k) / k) <= 1e-12);
  }
}

TEST_CASE("entropy and Holevo estimators") {
  std::vector<DensityMatrix> flat(3, DensityMatrix::maximallyMixed(3));
  CHECK(estimateSmin(flat) == doctest::Approx(std::log(3.0)).epsilon(1e-13));
  CHECK(holevoFromSmin(3, estimateSmin(flat)) == doctest::Approx(0.0).epsilon(1e-13));
  flat.push_back(basisState(3, 1));
  CHECK(estimateSmin(flat) == doctest::Approx(0.0));
  CHECK(holevoFromSmin(3, estimateSmin(flat)) == doctest::Approx(std::log(3.0)).epsilon(1e-13));
  CHECK((kindOf([] { estimateSmin({}); }) == ErrorKind::EmptySample));

  CHECK(holevoLowerBound({{0.5, basisState(2, 0)}, {0.5, basisState(2, 1)}}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK((kindOf([] { holevoLowerBound({{0.7, basisState(2, 0)}, {0.4, basisState(2, 1)}}); }) ==
        ErrorKind::BadEnsemble));
  CHECK((kindOf([] { holevoLowerBound({{1.2, basisState(2, 0)}, {-0.2, basisState(2, 1)}}); }) ==
        ErrorKind::BadEnsemble));
  CHECK((kindOf([] { holevoLowerBound({}); }) == ErrorKind::EmptySample));

  // Sandwich on a sampled output set.
  SeededRng rng(5, 0);
  const auto outs = sampleOutputs(sampleStinespringChannel(3, 4, 5, rng), 30, rng);
  std::vector<std::pair<double, DensityMatrix>> ensemble;
  for (const auto& x : outs) ensemble.emplace_back(1.0 / 30.0, x);
  const double chi = holevoLowerBound(ensemble);
  CHECK(chi >= -1e-12);
  CHECK(chi <= holevoFromSmin(3, estimateSmin(outs)) + 1e-9);
}

TEST_CASE("orthogonal Schmidt vector") {
  SeededRng rng(6, 0);
  const Eigen::Index k = 2;
  const Eigen::Index n = 4;
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix w = complexGinibre(k * n, 3, rng);
    const ComplexMatrix t = complexGinibre(n, 1, rng);
    const ComplexVector x = orthogonalSchmidtVector(w, t, k, n);
    CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // x lies in span(W): the residual after projecting onto W vanishes.
    const ComplexVector coeff = w.colPivHouseholderQr().solve(x);
    CHECK((w * coeff - x).norm() <= 1e-9);
    const SchmidtDecomposition s = schmidt(x, k, n);
    for (Eigen::Index i = 0; i < s.rightVectors.cols(); ++i)
      CHECK(std::abs(t.col(0).normalized().dot(s.rightVectors.col(i))) <= 1e-9);
  }
  const ComplexMatrix w = complexGinibre(k * n, 2, rng);
  const ComplexVector any = orthogonalSchmidtVector(w, ComplexMatrix(n, 0), k, n);
  CHECK(any.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((kindOf([&] { orthogonalSchmidtVector(w, complexGinibre(n, 1, rng), k, n); }) ==
        ErrorKind::DimensionObstruction));
}
