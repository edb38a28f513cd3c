#include "qlim/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qlim {

namespace {

// SplitMix64 finaliser; a bijective avalanche mix on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

SeededRng::SeededRng(std::uint64_t masterSeed, std::uint64_t streamIndex)
    : masterSeed_(masterSeed), streamIndex_(streamIndex), key_(mix64(mix64(masterSeed + kGolden) ^ streamIndex)) {}

std::uint64_t SeededRng::nextU64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double SeededRng::uniform() {
  // 53 random bits, shifted by half an ulp so the result lies in (0, 1).
  return (static_cast<double>(nextU64() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededRng::gaussian() {
  if (hasSpare_) {
    hasSpare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(phi);
  hasSpare_ = true;
  return r * std::cos(phi);
}

Complex SeededRng::complexGaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix complexGinibre(Eigen::Index rows, Eigen::Index cols, SeededRng& rng) {
  ComplexMatrix g(rows, cols);
  // Fill column by column so the draw order is fixed independent of storage.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.complexGaussian();
  return g;
}

ComplexMatrix haarIsometry(Eigen::Index rows, Eigen::Index cols, SeededRng& rng) {
  require(rows >= 1 && cols >= 1 && cols <= rows, ErrorKind::DimensionMismatch,
          "haarIsometry needs 1 <= cols <= rows, got " + std::to_string(rows) + "x" + std::to_string(cols));
  const ComplexMatrix g = complexGinibre(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

ComplexMatrix haarUnitary(Eigen::Index n, SeededRng& rng) { return haarIsometry(n, n, rng); }

ComplexVector samplePureState(Eigen::Index dim, SeededRng& rng) {
  require(dim >= 1, ErrorKind::DimensionMismatch, "samplePureState needs dim >= 1");
  ComplexVector x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = rng.complexGaussian();
  double nrm = x.norm();
  while (nrm == 0.0) {
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = rng.complexGaussian();
    nrm = x.norm();
  }
  return x / nrm;
}

MixedUnitaryChannel sampleMixedUnitaryChannel(Eigen::Index k, Eigen::Index n, const WeightVector& w,
                                              SeededRng& rng) {
  require(k >= 2 && w.size() == k, ErrorKind::BadWeights, "need k >= 2 weights matching the unitary count");
  require(n >= 1, ErrorKind::DimensionMismatch, "n must be positive");
  std::vector<ComplexMatrix> us;
  us.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) us.push_back(haarUnitary(n, rng));
  return MixedUnitaryChannel::createUnchecked(w, std::move(us));
}

Eigen::Index StinespringRegime::inputDim(Eigen::Index n) const {
  require(t > 0.0 && t < 1.0 && k >= 1 && n >= 1, ErrorKind::OutOfRange, "Stinespring regime needs t in (0,1)");
  const auto big = std::max<Eigen::Index>(1, std::llround(t * static_cast<double>(n * k)));
  require(big <= k * n, ErrorKind::OutOfRange, "N(n) exceeds k*n");
  return big;
}

StinespringChannel sampleStinespringChannel(Eigen::Index k, Eigen::Index n, Eigen::Index inputDim, SeededRng& rng) {
  return StinespringChannel::create(haarIsometry(k * n, inputDim, rng), k, n);
}

}  // namespace qlim
