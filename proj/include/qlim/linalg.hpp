#pragma once

// Dense complex linear algebra used by every other part of qlim.
//
// Tensor index convention: a vector of C^k (x) C^n is stored with the pair
// (i, j) at flat position i * n + j, i.e. the left factor is major. The
// partial traces, the Schmidt decomposition and the b <-> B reshaping in
// tensor_lab all rely on this.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qlim/error.hpp"

namespace qlim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest absolute entry; 0 for an empty matrix.
double maxAbs(const ComplexMatrix& m);
bool allFinite(const ComplexMatrix& m);

/// Kronecker product a (x) b in the left-major convention above.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenSystem {
  RealVector eigenvalues;      // non-increasing
  ComplexMatrix eigenvectors;  // orthonormal columns, column i pairs with eigenvalues[i]
};

/// Hermitian eigendecomposition. Dimensions up to kJacobiMaxDim use cyclic
/// Jacobi rotations; larger matrices go through Householder tridiagonalisation
/// and implicit QR (Eigen::SelfAdjointEigenSolver).
///
/// Throws NonHermitian when ||M - M^*||_max > 1e-10 * max(1, ||M||_max),
/// NonFinite for NaN/Inf entries and NoConvergence if Jacobi exhausts its
/// sweep cap.
EigenSystem hermitianEigs(const ComplexMatrix& m);

/// Eigenvalues only, non-increasing. Cheaper than hermitianEigs above the
/// Jacobi cut-off since no eigenvectors are accumulated.
RealVector hermitianEigenvalues(const ComplexMatrix& m);

/// Cyclic Jacobi on its own, regardless of dimension. Exposed so the two
/// solver routes can be checked against each other.
EigenSystem jacobiEigs(const ComplexMatrix& m);

inline constexpr Eigen::Index kJacobiMaxDim = 64;
inline constexpr double kJacobiOffTolerance = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

/// Largest eigenpair of a Hermitian operator given only through its action
/// x -> Hx. Lanczos with full reorthogonalisation, started from `start`
/// (random-free; pass a previous eigenvector to warm start).
struct TopEigenpair {
  double value = 0.0;
  ComplexVector vector;
};
using HermitianOperator = std::function<ComplexVector(const ComplexVector&)>;
TopEigenpair topEigenpairLanczos(const HermitianOperator& apply, const ComplexVector& start,
                                 int maxSteps = 200, double tolerance = 1e-12);

// -- tensor structure ---------------------------------------------------------

/// Tr_n on an operator of C^k (x) C^n; result is k x k.
ComplexMatrix partialTraceRight(const ComplexMatrix& m, Eigen::Index k, Eigen::Index n);
/// Tr_k on an operator of C^k (x) C^n; result is n x n.
ComplexMatrix partialTraceLeft(const ComplexMatrix& m, Eigen::Index k, Eigen::Index n);

/// Reshape x in C^k (x) C^n to the k x n matrix X with X(i, j) = x[i * n + j].
ComplexMatrix reshapeBipartite(const ComplexVector& x, Eigen::Index k, Eigen::Index n);
ComplexVector flattenBipartite(const ComplexMatrix& x);

struct SchmidtDecomposition {
  RealVector coefficients;     // sqrt(lambda_i), non-increasing, strictly positive
  ComplexMatrix leftVectors;   // k x r, orthonormal columns
  ComplexMatrix rightVectors;  // n x r, orthonormal columns
};

/// x = sum_i coefficients[i] * left_i (x) right_i. Coefficients <= 1e-13
/// are dropped. Throws NotUnitVector unless | ||x||_2 - 1 | <= 1e-12.
SchmidtDecomposition schmidt(const ComplexVector& x, Eigen::Index k, Eigen::Index n);

// -- states -------------------------------------------------------------------

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  /// Strict validation: Hermitian within 1e-12, trace 1 within 1e-12,
  /// minimum eigenvalue >= -1e-10. Throws InvalidState otherwise.
  static DensityMatrix fromMatrix(const ComplexMatrix& m);

  /// Floating-point hygiene for computed states: hermitise, clip eigenvalues
  /// in [-1e-10, 0) to zero and rescale to unit trace. Larger negative
  /// eigenvalues, or a trace that is not positive, raise InvalidState.
  static DensityMatrix normalize(const ComplexMatrix& m);

  /// xx^* / ||x||^2 for a nonzero vector.
  static DensityMatrix pure(const ComplexVector& x);
  static DensityMatrix maximallyMixed(Eigen::Index dim);
  /// diag(p) for a probability vector.
  static DensityMatrix diagonal(const RealVector& p);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Trace of A*B for Hermitian arguments (real part only).
double traceProduct(const ComplexMatrix& a, const ComplexMatrix& b);

/// Von Neumann entropy in nats; eigenvalues <= 0 contribute nothing.
double vonNeumannEntropy(const DensityMatrix& rho);
double vonNeumannEntropy(const RealVector& spectrum);

/// Renyi entropy of order p >= 1 in nats. p == 1 gives the von Neumann
/// entropy, p == +infinity gives -log(lambda_max). Throws InvalidOrder for p < 1.
double renyiEntropy(const DensityMatrix& rho, double p);
double renyiEntropy(const RealVector& spectrum, double p);

}  // namespace qlim
