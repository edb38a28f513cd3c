#include "qlim/tensor_lab.hpp"

#include <cmath>
#include <string>

namespace qlim {

namespace {

// Psi(C C^*) as a sum over the columns of C; exact and linear, unlike
// applyChannel which renormalises.
ComplexMatrix applyToFactor(const Channel& psi, const ComplexMatrix& c) {
  const Eigen::Index k = outputDim(psi);
  ComplexMatrix out = ComplexMatrix::Zero(k, k);
  for (Eigen::Index j = 0; j < c.cols(); ++j) out += applyToPure(psi, c.col(j));
  return out;
}

// B sqrt(M^T), so that its Gram matrix C C^* is B M^T B^*.
ComplexMatrix factorThrough(const ComplexMatrix& b, const ComplexMatrix& m) {
  const EigenSystem es = hermitianEigs(m.transpose());
  const RealVector roots = es.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return b * es.eigenvectors * roots.asDiagonal();
}

void checkShapes(const EBChannel& xi, const Channel& psi, const ComplexMatrix& b) {
  require(b.rows() == inputDim(psi) && b.cols() == xi.inputDim(), ErrorKind::DimensionMismatch,
          "B must be N x p with N = " + std::to_string(inputDim(psi)) + ", p = " + std::to_string(xi.inputDim()));
  require(std::abs(b.squaredNorm() - 1.0) <= 1e-12, ErrorKind::NotUnitVector, "Tr[BB^*] must be 1");
}

}  // namespace

DensityMatrix ebTensorOutput(const EBChannel& xi, const Channel& psi, const ComplexVector& b) {
  require(b.size() == inputDim(psi) * xi.inputDim(), ErrorKind::DimensionMismatch, "b must lie in C^N (x) C^p");
  const ComplexMatrix bm = reshapeBipartite(b, inputDim(psi), xi.inputDim());
  checkShapes(xi, psi, bm);
  const Eigen::Index k = outputDim(psi);
  const Eigen::Index q = xi.outputDim();
  ComplexMatrix out = ComplexMatrix::Zero(q * k, q * k);
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    out += kron(xi.states()[ii].matrix(), applyToFactor(psi, factorThrough(bm, xi.povm()[ii])));
  }
  return DensityMatrix::normalize(out);
}

EBTensorDecomposition ebTensorDecompose(const EBChannel& xi, const Channel& psi, const ComplexMatrix& b) {
  checkShapes(xi, psi, b);
  for (const auto& m : xi.povm()) {
    const double top = hermitianEigenvalues(m)[0];
    require(std::abs(top - 1.0) <= 1e-10, ErrorKind::HypothesisViolated,
            "every POVM element needs operator norm 1, found " + std::to_string(top));
  }
  EBTensorDecomposition d;
  const Eigen::Index l = xi.size();
  for (Eigen::Index i = 0; i < l; ++i) {
    const ComplexMatrix gamma = b * xi.povm()[static_cast<std::size_t>(i)].transpose() * b.adjoint();
    const double r = gamma.trace().real();
    d.weights.push_back(r);
    d.ensembles.push_back(RealVector::Unit(l, i));
    d.states.push_back(r > 0.0 ? DensityMatrix::normalize(gamma) : DensityMatrix::maximallyMixed(b.rows()));
  }
  return d;
}

ComplexMatrix reconstruct(const EBTensorDecomposition& d, const EBChannel& xi, const Channel& psi) {
  const Eigen::Index k = outputDim(psi);
  const Eigen::Index q = xi.outputDim();
  ComplexMatrix out = ComplexMatrix::Zero(q * k, q * k);
  for (std::size_t t = 0; t < d.weights.size(); ++t) {
    if (d.weights[t] <= 0.0) continue;
    ComplexMatrix left = ComplexMatrix::Zero(q, q);
    for (Eigen::Index i = 0; i < xi.size(); ++i) left += d.ensembles[t][i] * xi.states()[static_cast<std::size_t>(i)].matrix();
    out += d.weights[t] * kron(left, applyChannel(psi, d.states[t]).matrix());
  }
  return out;
}

double offBlockDiagonalMax(const ComplexMatrix& x, Eigen::Index q, Eigen::Index m) {
  require(x.rows() == q * m && x.cols() == q * m, ErrorKind::DimensionMismatch, "matrix is not qm x qm");
  double worst = 0.0;
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index c = 0; c < q; ++c)
      if (r != c) worst = std::max(worst, maxAbs(x.block(r * m, c * m, m, m)));
  return worst;
}

PositivityProbe matrixEqPositivityProbe(const std::vector<ComplexMatrix>& povm, double lambda) {
  require(lambda != 0.0, ErrorKind::SingularP, "P is singular at lambda = 0");
  require(lambda > 0.0 && lambda <= 1.0, ErrorKind::OutOfRange, "lambda must lie in (0, 1]");
  require(!povm.empty(), ErrorKind::InvalidPOVM, "empty POVM");
  const Eigen::Index d = povm.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (const auto& m : povm) {
    require(m.rows() == d && m.cols() == d, ErrorKind::InvalidPOVM, "POVM elements differ in size");
    require(maxAbs(m - m.adjoint()) <= 1e-10, ErrorKind::InvalidPOVM, "POVM element is not Hermitian");
    require(hermitianEigenvalues(m).minCoeff() >= -1e-10, ErrorKind::InvalidPOVM, "POVM element is not PSD");
    total += m;
  }
  require(maxAbs(total - ComplexMatrix::Identity(d, d)) <= 1e-10, ErrorKind::InvalidPOVM, "POVM does not sum to I");

  const double l = static_cast<double>(povm.size());
  const ComplexMatrix centre = ComplexMatrix::Identity(d, d) / l;
  PositivityProbe probe;
  probe.lambda = lambda;
  probe.flat = true;
  for (const auto& m : povm) {
    ComplexMatrix block = (m.transpose() - centre) / lambda;
    const double lo = hermitianEigenvalues(block).minCoeff();
    probe.blockMinEigenvalues.push_back(lo);
    probe.exactBlockMinEigenvalues.push_back(hermitianEigenvalues(block + centre).minCoeff());
    probe.flat = probe.flat && maxAbs(m - centre) <= 1e-10;
    probe.negativeBlock = probe.negativeBlock || lo < -1e-12;
    probe.blocks.push_back(std::move(block));
  }
  return probe;
}

}  // namespace qlim
