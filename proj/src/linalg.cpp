#include "qlim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qlim {

std::string_view toString(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotUnitVector: return "NotUnitVector";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidPOVM: return "InvalidPOVM";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::RepresentationUnavailable: return "RepresentationUnavailable";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DimensionObstruction: return "DimensionObstruction";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::BadEnsemble: return "BadEnsemble";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::SingularP: return "SingularP";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::EmptyResults: return "EmptyResults";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

double maxAbs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool allFinite(const ComplexMatrix& m) { return m.allFinite(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

void checkHermitian(const ComplexMatrix& m) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch,
          "expected a square matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  require(m.allFinite(), ErrorKind::NonFinite, "matrix has NaN or Inf entries");
  const double scale = std::max(1.0, maxAbs(m));
  const double asym = maxAbs(m - m.adjoint());
  require(asym <= 1e-10 * scale, ErrorKind::NonHermitian,
          "||M - M^*||_max = " + std::to_string(asym));
}

ComplexMatrix hermitianPart(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Stable descending reorder of an ascending or unordered spectrum.
EigenSystem sortDescending(const RealVector& values, const ComplexMatrix& vectors) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });
  EigenSystem out;
  out.eigenvalues.resize(values.size());
  out.eigenvectors.resize(vectors.rows(), vectors.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto dst = static_cast<Eigen::Index>(i);
    out.eigenvalues[dst] = values[order[i]];
    out.eigenvectors.col(dst) = vectors.col(order[i]);
  }
  return out;
}

double offDiagonalNorm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

EigenSystem jacobiUnchecked(ComplexMatrix a) {
  const Eigen::Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double frob = a.norm();
  if (frob == 0.0 || n == 1) return sortDescending(a.diagonal().real(), v);

  const double threshold = kJacobiOffTolerance * frob;
  int sweep = 0;
  while (offDiagonalNorm(a) > threshold) {
    if (++sweep > kJacobiMaxSweeps)
      fail(ErrorKind::NoConvergence, "Jacobi did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        // Phase d makes the (p, q) entry real, then a real rotation annihilates it.
        const Complex d = std::conj(apq) / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex sd = s * d;
        const Complex cd = c * d;
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex xp = a(r, p);
          const Complex xq = a(r, q);
          a(r, p) = c * xp - sd * xq;
          a(r, q) = s * xp + cd * xq;
        }
        const Complex sdc = std::conj(sd);
        const Complex cdc = std::conj(cd);
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex xp = a(p, r);
          const Complex xq = a(q, r);
          a(p, r) = c * xp - sdc * xq;
          a(q, r) = s * xp + cdc * xq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex xp = v(r, p);
          const Complex xq = v(r, q);
          v(r, p) = c * xp - sd * xq;
          v(r, q) = s * xp + cd * xq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  return sortDescending(a.diagonal().real(), v);
}

}  // namespace

EigenSystem jacobiEigs(const ComplexMatrix& m) {
  checkHermitian(m);
  return jacobiUnchecked(hermitianPart(m));
}

EigenSystem hermitianEigs(const ComplexMatrix& m) {
  checkHermitian(m);
  if (m.rows() <= kJacobiMaxDim) return jacobiUnchecked(hermitianPart(m));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitianPart(m));
  if (solver.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "tridiagonal QR failed");
  return sortDescending(solver.eigenvalues(), solver.eigenvectors());
}

RealVector hermitianEigenvalues(const ComplexMatrix& m) {
  checkHermitian(m);
  if (m.rows() <= kJacobiMaxDim) return jacobiUnchecked(hermitianPart(m)).eigenvalues;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitianPart(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "tridiagonal QR failed");
  return solver.eigenvalues().reverse();
}

TopEigenpair topEigenpairLanczos(const HermitianOperator& apply, const ComplexVector& start, int maxSteps,
                                 double tolerance) {
  const Eigen::Index dim = start.size();
  require(dim > 0, ErrorKind::DimensionMismatch, "empty start vector");
  ComplexVector q = start;
  if (q.norm() == 0.0) q = ComplexVector::Ones(dim);
  q.normalize();

  const Eigen::Index steps = std::min<Eigen::Index>(maxSteps, dim);
  ComplexMatrix basis(dim, steps);
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.col(0) = q;

  TopEigenpair best;
  Eigen::VectorXd ritz;
  for (Eigen::Index j = 0; j < steps; ++j) {
    ComplexVector w = apply(basis.col(j));
    alpha.push_back(basis.col(j).dot(w).real());
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const auto active = basis.leftCols(j + 1);
      w -= active * (active.adjoint() * w);
    }
    const double b = w.norm();

    const auto size = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), size);
    Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), size - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()[size - 1];
    const Eigen::VectorXd s = tri.eigenvectors().col(size - 1);
    const double residual = b * std::abs(s[size - 1]);

    const bool done = residual <= tolerance * std::max(1.0, std::abs(theta)) || b <= 1e-14 || j + 1 == steps;
    if (done) {
      best.value = theta;
      best.vector = basis.leftCols(size) * s.cast<Complex>();
      best.vector.normalize();
      return best;
    }
    beta.push_back(b);
    basis.col(j + 1) = w / b;
  }
  return best;
}

ComplexMatrix partialTraceRight(const ComplexMatrix& m, Eigen::Index k, Eigen::Index n) {
  require(m.rows() == k * n && m.cols() == k * n, ErrorKind::DimensionMismatch,
          "partialTraceRight: matrix is not (kn)x(kn)");
  ComplexMatrix out = ComplexMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index ip = 0; ip < k; ++ip) {
      Complex s = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) s += m(i * n + j, ip * n + j);
      out(i, ip) = s;
    }
  return out;
}

ComplexMatrix partialTraceLeft(const ComplexMatrix& m, Eigen::Index k, Eigen::Index n) {
  require(m.rows() == k * n && m.cols() == k * n, ErrorKind::DimensionMismatch,
          "partialTraceLeft: matrix is not (kn)x(kn)");
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < k; ++i) out += m.block(i * n, i * n, n, n);
  return out;
}

ComplexMatrix reshapeBipartite(const ComplexVector& x, Eigen::Index k, Eigen::Index n) {
  require(x.size() == k * n, ErrorKind::DimensionMismatch, "reshapeBipartite: length is not k*n");
  ComplexMatrix out(k, n);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = x[i * n + j];
  return out;
}

ComplexVector flattenBipartite(const ComplexMatrix& x) {
  ComplexVector out(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out[i * x.cols() + j] = x(i, j);
  return out;
}

SchmidtDecomposition schmidt(const ComplexVector& x, Eigen::Index k, Eigen::Index n) {
  require(x.size() == k * n, ErrorKind::DimensionMismatch, "schmidt: length is not k*n");
  require(std::abs(x.norm() - 1.0) <= 1e-12, ErrorKind::NotUnitVector,
          "schmidt: ||x||_2 = " + std::to_string(x.norm()));
  Eigen::JacobiSVD<ComplexMatrix> svd(reshapeBipartite(x, k, n), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > 1e-13) ++rank;
  return {sv.head(rank), svd.matrixU().leftCols(rank), svd.matrixV().conjugate().leftCols(rank)};
}

DensityMatrix DensityMatrix::fromMatrix(const ComplexMatrix& m) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::InvalidState, "density matrix must be square");
  require(m.allFinite(), ErrorKind::InvalidState, "density matrix has NaN or Inf entries");
  require(maxAbs(m - m.adjoint()) <= 1e-12, ErrorKind::InvalidState, "density matrix is not Hermitian");
  const Complex tr = m.trace();
  require(std::abs(tr - 1.0) <= 1e-12, ErrorKind::InvalidState,
          "density matrix trace " + std::to_string(tr.real()) + " != 1");
  ComplexMatrix h = hermitianPart(m);
  const double lo = hermitianEigenvalues(h).minCoeff();
  require(lo >= -1e-10, ErrorKind::InvalidState, "density matrix has eigenvalue " + std::to_string(lo));
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::normalize(const ComplexMatrix& m) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::InvalidState, "density matrix must be square");
  require(m.allFinite(), ErrorKind::InvalidState, "density matrix has NaN or Inf entries");
  ComplexMatrix h = hermitianPart(m);
  const double tr = h.trace().real();
  require(tr > 0.0, ErrorKind::InvalidState, "non-positive trace");
  h /= tr;
  EigenSystem es = hermitianEigs(h);
  const double lo = es.eigenvalues.minCoeff();
  require(lo >= -1e-10, ErrorKind::InvalidState, "eigenvalue " + std::to_string(lo) + " below -1e-10");
  if (lo < 0.0) {
    RealVector clipped = es.eigenvalues.cwiseMax(0.0);
    clipped /= clipped.sum();
    h = es.eigenvectors * clipped.cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
    h = hermitianPart(h);
    h /= h.trace().real();
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& x) {
  const double nrm = x.norm();
  require(nrm > 0.0 && std::isfinite(nrm), ErrorKind::ZeroVector, "pure state from a zero vector");
  const ComplexVector u = x / nrm;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximallyMixed(Eigen::Index dim) {
  require(dim > 0, ErrorKind::InvalidState, "dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& p) {
  require(p.size() > 0 && (p.array() >= 0.0).all() && std::abs(p.sum() - 1.0) <= 1e-12, ErrorKind::InvalidState,
          "diagonal state needs a probability vector");
  return DensityMatrix(p.cast<Complex>().asDiagonal());
}

double traceProduct(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

double vonNeumannEntropy(const RealVector& spectrum) {
  double s = 0.0;
  for (double l : spectrum)
    if (l > 0.0) s -= l * std::log(l);
  return s;
}

double vonNeumannEntropy(const DensityMatrix& rho) { return vonNeumannEntropy(hermitianEigenvalues(rho.matrix())); }

double renyiEntropy(const RealVector& spectrum, double p) {
  require(p >= 1.0, ErrorKind::InvalidOrder, "Renyi order must be >= 1, got " + std::to_string(p));
  if (p == 1.0) return vonNeumannEntropy(spectrum);
  if (std::isinf(p)) return -std::log(spectrum.maxCoeff());
  double s = 0.0;
  for (double l : spectrum)
    if (l > 0.0) s += std::pow(l, p);
  return std::log(s) / (1.0 - p);
}

double renyiEntropy(const DensityMatrix& rho, double p) {
  return renyiEntropy(hermitianEigenvalues(rho.matrix()), p);
}

}  // namespace qlim
