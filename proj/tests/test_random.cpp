#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qlim/random.hpp"
#include "support.hpp"

using namespace qlim;

namespace {

struct Moments {
  double mean = 0.0;
  double stderror = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
  SeededRng a(42, 3);
  SeededRng b(42, 3);
  SeededRng c(42, 4);
  SeededRng d(43, 3);
  bool differsStream = false;
  bool differsSeed = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.nextU64();
    CHECK(x == b.nextU64());
    differsStream = differsStream || x != c.nextU64();
    differsSeed = differsSeed || x != d.nextU64();
  }
  CHECK(differsStream);
  CHECK(differsSeed);

  SeededRng u(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }
}

TEST_CASE("Gaussian moments") {
  SeededRng rng(9, 0);
  std::vector<double> re;
  std::vector<double> abs2;
  for (int i = 0; i < 20000; ++i) {
    const Complex z = rng.complexGaussian();
    re.push_back(z.real());
    abs2.push_back(std::norm(z));
  }
  const Moments m1 = moments(re);
  const Moments m2 = moments(abs2);
  CHECK(std::abs(m1.mean) <= 4.0 * m1.stderror);
  CHECK(std::abs(m2.mean - 1.0) <= 4.0 * m2.stderror);
}

TEST_CASE("Haar unitaries and isometries are exact isometries") {
  SeededRng rng(10, 0);
  const ComplexMatrix one = haarUnitary(1, rng);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) <= 1e-15);
  for (Eigen::Index n : {2, 5, 30}) {
    const ComplexMatrix u = haarUnitary(n, rng);
    CHECK(maxAbs(u.adjoint() * u - ComplexMatrix::Identity(n, n)) <= 1e-10);
  }
  const ComplexMatrix v = haarIsometry(12, 5, rng);
  CHECK(maxAbs(v.adjoint() * v - ComplexMatrix::Identity(5, 5)) <= 1e-10);
  try {
    haarIsometry(3, 4, rng);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::DimensionMismatch));
  }
}

TEST_CASE("Haar moments E|U11|^2 = 1/n and E|Tr U|^2 = 1") {
  SeededRng rng(11, 0);
  for (Eigen::Index n : {5, 10, 20}) {
    std::vector<double> entry;
    std::vector<double> trace;
    for (int s = 0; s < 2000; ++s) {
      const ComplexMatrix u = haarUnitary(n, rng);
      entry.push_back(std::norm(u(0, 0)));
      trace.push_back(std::norm(u.trace()));
    }
    const Moments e = moments(entry);
    const Moments t = moments(trace);
    CHECK(std::abs(e.mean - 1.0 / static_cast<double>(n)) <= 3.0 * e.stderror);
    CHECK(std::abs(t.mean - 1.0) <= 3.0 * t.stderror);
  }
}

TEST_CASE("isometry statistics are invariant under conjugation of the probe") {
  SeededRng rng(12, 0);
  const ComplexMatrix a = qlim::testing::randomMixedState(2, rng).matrix();
  const ComplexMatrix w = haarUnitary(2, rng);
  const ComplexMatrix b = w * a * w.adjoint();
  std::vector<double> xs;
  std::vector<double> ys;
  for (int s = 0; s < 500; ++s) {
    const StinespringChannel st = sampleStinespringChannel(2, 3, 3, rng);
    xs.push_back(hermitianEigenvalues(adjointApply(Channel(st), a))[0]);
    ys.push_back(hermitianEigenvalues(adjointApply(Channel(st), b))[0]);
  }
  const Moments mx = moments(xs);
  const Moments my = moments(ys);
  CHECK(std::abs(mx.mean - my.mean) <= 4.0 * std::hypot(mx.stderror, my.stderror));
}

TEST_CASE("pure states") {
  SeededRng rng(13, 0);
  const ComplexVector one = samplePureState(1, rng);
  CHECK(std::abs(std::abs(one[0]) - 1.0) <= 1e-15);
  std::vector<double> first;
  for (int s = 0; s < 4000; ++s) {
    const ComplexVector x = samplePureState(8, rng);
    REQUIRE(std::abs(x.norm() - 1.0) <= 1e-12);
    first.push_back(std::norm(x[0]));
  }
  const Moments m = moments(first);
  CHECK(std::abs(m.mean - 0.125) <= 3.0 * m.stderror);
}

TEST_CASE("mixed-unitary sampler") {
  const WeightVector w = WeightVector::flat(3);
  SeededRng a(14, 2);
  SeededRng b(14, 2);
  const MixedUnitaryChannel x = sampleMixedUnitaryChannel(3, 6, w, a);
  const MixedUnitaryChannel y = sampleMixedUnitaryChannel(3, 6, w, b);
  for (std::size_t i = 0; i < 3; ++i) CHECK(maxAbs(x.unitaries()[i] - y.unitaries()[i]) == 0.0);

  SeededRng rng(15, 0);
  const DensityMatrix rho = qlim::testing::randomMixedState(6, rng);
  const ComplexMatrix out = applyChannel(Channel(x), rho).matrix();
  CHECK(out.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) CHECK(out(i, i).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  try {
    sampleMixedUnitaryChannel(1, 4, WeightVector::flat(1), rng);
    FAIL("expected BadWeights");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::BadWeights));
  }
}

TEST_CASE("Stinespring regime") {
  const StinespringRegime regime{2, 0.3, {400}};
  CHECK(regime.inputDim(400) == 240);
  CHECK(StinespringRegime{3, 0.01, {}}.inputDim(2) == 1);
  CHECK_THROWS_AS(StinespringRegime({2, 1.5, {}}).inputDim(10), Error);
}
