#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qlim/tensor_lab.hpp"
#include "support.hpp"

using namespace qlim;
using qlim::testing::krausApply;
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

// Permutation taking C^k (x) C^q to C^q (x) C^k.
ComplexMatrix swapFactors(Eigen::Index k, Eigen::Index q) {
  ComplexMatrix s = ComplexMatrix::Zero(k * q, k * q);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < q; ++j) s(j * k + i, i * q + j) = 1.0;
  return s;
}

// (Xi (x) Psi)(bb^*) from the Kraus operators K_a (x) L_b of Psi (x) Xi, with
// the output factors swapped into Xi-first order.
ComplexMatrix directTensorOutput(const EBChannel& xi, const Channel& psi, const ComplexVector& b) {
  std::vector<ComplexMatrix> ops;
  for (const auto& kp : krausOperators(psi))
    for (const auto& kx : krausOperators(Channel(xi))) ops.push_back(kron(kp, kx));
  const ComplexMatrix s = swapFactors(outputDim(psi), xi.outputDim());
  return s * krausApply(ops, b * b.adjoint()) * s.adjoint();
}

EBChannel projectiveEB(Eigen::Index p, Eigen::Index q, int l, SeededRng& rng) {
  const ComplexMatrix u = haarUnitary(p, rng);
  std::vector<ComplexMatrix> povm(static_cast<std::size_t>(l), ComplexMatrix::Zero(p, p));
  for (Eigen::Index c = 0; c < p; ++c) povm[static_cast<std::size_t>(c % l)] += u.col(c) * u.col(c).adjoint();
  std::vector<DensityMatrix> states;
  for (int i = 0; i < l; ++i) states.push_back(randomMixedState(q, rng));
  return makeEB(std::move(povm), std::move(states));
}

RealVector diag2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("closed-form output matches the direct tensor evaluation") {
  SeededRng rng(1, 0);
  for (int rep = 0; rep < 6; ++rep) {
    const EBChannel xi = projectiveEB(3, 2, 2 + rep % 2, rng);
    const Channel psi = sampleStinespringChannel(2, 3, 4, rng);
    const ComplexVector b = samplePureState(4 * 3, rng);
    const DensityMatrix out = ebTensorOutput(xi, psi, b);
    CHECK(maxAbs(out.matrix() - directTensorOutput(xi, psi, b)) <= 1e-12);
    CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // A non-projective POVM goes through the same closed form.
  const ComplexMatrix u = haarUnitary(2, rng);
  const ComplexMatrix m1 = u * diag2(0.35, 0.2).cast<Complex>().asDiagonal() * u.adjoint();
  const EBChannel xi = makeEB({m1, ComplexMatrix::Identity(2, 2) - m1}, {randomMixedState(3, rng), randomMixedState(3, rng)});
  const Channel psi = sampleMixedUnitaryChannel(2, 3, WeightVector::flat(2), rng);
  const ComplexVector b = samplePureState(3 * 2, rng);
  CHECK(maxAbs(ebTensorOutput(xi, psi, b).matrix() - directTensorOutput(xi, psi, b)) <= 1e-12);
  CHECK((kindOf([&] { ebTensorOutput(xi, psi, samplePureState(5, rng)); }) == ErrorKind::DimensionMismatch));
}

TEST_CASE("pinching with identity Psi gives weighted diagonal blocks") {
  SeededRng rng(2, 0);
  const EBChannel pinch = pinchingAsEB(3);
  const Channel id = StinespringChannel::identity(2);
  const ComplexVector b = samplePureState(2 * 3, rng);
  const ComplexMatrix bm = reshapeBipartite(b, 2, 3);
  const DensityMatrix out = ebTensorOutput(pinch, id, b);
  CHECK(offBlockDiagonalMax(out.matrix(), 3, 2) <= 1e-12);
  CHECK(maxAbs(out.matrix() - directTensorOutput(pinch, id, b)) <= 1e-12);
  for (Eigen::Index i = 0; i < 3; ++i) {
    // Block i is B E_ii B^* = |column i of B|^2 times the normalised column.
    const ComplexMatrix expected = bm.col(i) * bm.col(i).adjoint();
    CHECK(maxAbs(out.matrix().block(i * 2, i * 2, 2, 2) - expected) <= 1e-12);
  }
}

TEST_CASE("product inputs factorise") {
  SeededRng rng(3, 0);
  const EBChannel xi = projectiveEB(3, 2, 3, rng);
  const Channel psi = sampleStinespringChannel(2, 2, 3, rng);
  const ComplexVector u = samplePureState(3, rng);
  const ComplexVector v = samplePureState(3, rng);
  const ComplexVector b = kron(ComplexMatrix(u), ComplexMatrix(v));
  ComplexMatrix left = ComplexMatrix::Zero(2, 2);
  for (std::size_t i = 0; i < 3; ++i)
    left += v.dot(xi.povm()[i] * v).real() * xi.states()[i].matrix();
  const ComplexMatrix expected = kron(left, applyChannel(psi, DensityMatrix::pure(u)).matrix());
  CHECK(maxAbs(ebTensorOutput(xi, psi, b).matrix() - expected) <= 1e-12);
}

TEST_CASE("decomposition reconstructs the output") {
  SeededRng rng(4, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const int l = 2 + rep % 3;
    const EBChannel xi = projectiveEB(4, 2, l, rng);
    const Channel psi = sampleStinespringChannel(3, 2, 3, rng);
    const ComplexVector b = samplePureState(3 * 4, rng);
    const ComplexMatrix bm = reshapeBipartite(b, 3, 4);
    const EBTensorDecomposition d = ebTensorDecompose(xi, psi, bm);
    double total = 0.0;
    for (double r : d.weights) {
      CHECK(r >= 0.0);
      total += r;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t t = 0; t < d.ensembles.size(); ++t) CHECK(d.ensembles[t] == RealVector::Unit(l, static_cast<Eigen::Index>(t)));
    CHECK(maxAbs(reconstruct(d, xi, psi) - ebTensorOutput(xi, psi, b).matrix()) <= 1e-10);
  }
}

TEST_CASE("decomposition special cases") {
  SeededRng rng(5, 0);
  const Channel psi = sampleStinespringChannel(2, 3, 3, rng);
  const EBChannel single = makeEB({ComplexMatrix::Identity(2, 2)}, {randomMixedState(2, rng)});
  const ComplexVector b = samplePureState(3 * 2, rng);
  const ComplexMatrix bm = reshapeBipartite(b, 3, 2);
  const EBTensorDecomposition d = ebTensorDecompose(single, psi, bm);
  REQUIRE(d.weights.size() == 1);
  CHECK(d.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(maxAbs(d.states[0].matrix() - bm * bm.adjoint()) <= 1e-12);

  // Pinching reproduces the direct sum a_1 K (+) ... (+) a_l K.
  const EBChannel pinch = pinchingAsEB(2);
  const EBTensorDecomposition dp = ebTensorDecompose(pinch, psi, bm);
  const ComplexMatrix out = reconstruct(dp, pinch, psi);
  CHECK(offBlockDiagonalMax(out, 2, 2) <= 1e-12);
  for (Eigen::Index i = 0; i < 2; ++i) {
    CHECK(dp.weights[static_cast<std::size_t>(i)] == doctest::Approx(bm.col(i).squaredNorm()).epsilon(1e-12));
    CHECK(maxAbs(out.block(i * 2, i * 2, 2, 2) -
                 dp.weights[static_cast<std::size_t>(i)] * applyChannel(psi, dp.states[static_cast<std::size_t>(i)]).matrix()) <= 1e-12);
  }

  // A zero weight keeps the placeholder and drops out of the reconstruction.
  ComplexMatrix onlyFirst = ComplexMatrix::Zero(3, 2);
  onlyFirst.col(0) = samplePureState(3, rng);
  const EBTensorDecomposition dz = ebTensorDecompose(pinch, psi, onlyFirst);
  CHECK(dz.weights[1] == 0.0);
  CHECK(maxAbs(dz.states[1].matrix() - ComplexMatrix::Identity(3, 3) / 3.0) <= 1e-15);
  CHECK(maxAbs(reconstruct(dz, pinch, psi) - ebTensorOutput(pinch, psi, flattenBipartite(onlyFirst)).matrix()) <= 1e-12);

  const EBChannel soft = makeEB({ComplexMatrix::Identity(2, 2) * 0.5, ComplexMatrix::Identity(2, 2) * 0.5},
                                {randomMixedState(2, rng), randomMixedState(2, rng)});
  CHECK((kindOf([&] { ebTensorDecompose(soft, psi, bm); }) == ErrorKind::HypothesisViolated));
}

TEST_CASE("positivity probe") {
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) * 0.5;
  const PositivityProbe flat = matrixEqPositivityProbe({half, half}, 0.4);
  CHECK(flat.flat);
  CHECK(!flat.negativeBlock);
  for (const auto& block : flat.blocks) CHECK(maxAbs(block) <= 1e-15);

  ComplexMatrix m1 = ComplexMatrix::Zero(2, 2);
  m1(0, 0) = 1.0;
  m1(1, 1) = 0.3;
  const ComplexMatrix m2 = ComplexMatrix::Identity(2, 2) - m1;
  const PositivityProbe p = matrixEqPositivityProbe({m1, m2}, 1.0);
  CHECK(!p.flat);
  CHECK(p.negativeBlock);
  CHECK(p.blockMinEigenvalues[0] == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(p.blockMinEigenvalues[1] == doctest::Approx(-0.5).epsilon(1e-14));
  // At lambda = 1, P = I and the exact inverse leaves M_i^T untouched.
  CHECK(p.exactBlockMinEigenvalues[0] == doctest::Approx(0.3).epsilon(1e-14));
  const PositivityProbe scaled = matrixEqPositivityProbe({m1, m2}, 0.25);
  CHECK(scaled.blockMinEigenvalues[0] == doctest::Approx(-0.8).epsilon(1e-14));

  SeededRng rng(6, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const int l = 2 + rep % 3;
    const EBChannel xi = projectiveEB(5, 2, l, rng);
    const PositivityProbe probe = matrixEqPositivityProbe(xi.povm(), 0.1 + 0.09 * rep);
    CHECK(probe.negativeBlock);
    CHECK(*std::min_element(probe.blockMinEigenvalues.begin(), probe.blockMinEigenvalues.end()) < -1e-8);
  }

  CHECK((kindOf([&] { matrixEqPositivityProbe({m1, m2}, 0.0); }) == ErrorKind::SingularP));
  CHECK((kindOf([&] { matrixEqPositivityProbe({m1, m2}, 1.5); }) == ErrorKind::OutOfRange));
  CHECK((kindOf([&] { matrixEqPositivityProbe({m1, m1}, 0.5); }) == ErrorKind::InvalidPOVM));
}
