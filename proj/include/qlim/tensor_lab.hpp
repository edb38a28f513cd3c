#pragma once

// Tensor products Xi (x) Psi with an entanglement-breaking left factor.
//
// Ordering: the input b lives in C^N (x) C^p with Psi acting on the left
// factor (dimension N) and Xi on the right one (dimension p). It is reshaped
// to B in M_{N,p}, so Tr_p[bb^* (I_N (x) M_i)] = B M_i^T B^* with a plain
// transpose. The output lives in C^q (x) C^{k_Psi}, Xi's output first.

#include <vector>

#include "qlim/channels.hpp"

namespace qlim {

/// (Xi (x) Psi)(bb^*) = sum_i sigma_i (x) Psi(B M_i^T B^*), evaluated without
/// forming the product channel. Throws DimensionMismatch, NotUnitVector when
/// | ||b|| - 1 | > 1e-12.
DensityMatrix ebTensorOutput(const EBChannel& xi, const Channel& psi, const ComplexVector& b);

struct EBTensorDecomposition {
  std::vector<double> weights;             // r_k = Tr[B M_k^T B^*]
  std::vector<RealVector> ensembles;       // p^(k), here the k-th basis distribution
  std::vector<DensityMatrix> states;       // rho^(k); I/N placeholder where r_k = 0
};

/// Decomposition of the single output (Xi (x) Psi)(bb^*) into simple tensors
/// of the form (sum_i p_i sigma_i) (x) Psi(rho). B is N x p with Tr[BB^*] = 1.
/// Throws HypothesisViolated unless every M_i has top eigenvalue 1 within 1e-10.
EBTensorDecomposition ebTensorDecompose(const EBChannel& xi, const Channel& psi, const ComplexMatrix& b);

/// sum_k r_k (sum_i p_i^(k) sigma_i) (x) Psi(rho^(k)), as a raw matrix.
ComplexMatrix reconstruct(const EBTensorDecomposition& d, const EBChannel& xi, const Channel& psi);

/// Largest |entry| outside the q diagonal blocks of size m x m.
double offBlockDiagonalMax(const ComplexMatrix& x, Eigen::Index q, Eigen::Index m);

struct PositivityProbe {
  double lambda = 1.0;
  /// (1/lambda)(M_i^T - I/l): the centred blocks from the (1/lambda)(I - psi psi^*) inverse.
  std::vector<ComplexMatrix> blocks;
  std::vector<double> blockMinEigenvalues;
  /// Blocks of the true inverse (1/lambda)(I - psi psi^*) + psi psi^*, i.e. the
  /// centred blocks shifted by I/l.
  std::vector<double> exactBlockMinEigenvalues;
  bool flat = false;           // every M_i equals I/l within 1e-10
  bool negativeBlock = false;  // some centred block has min eigenvalue < -1e-12
};

/// P = lambda I + (1 - lambda) psi psi^* with psi = (1, ..., 1)/sqrt(l), applied
/// inversely to the stacked blocks M_i^T. Throws SingularP for lambda = 0,
/// OutOfRange for lambda outside (0, 1], InvalidPOVM for a bad POVM.
PositivityProbe matrixEqPositivityProbe(const std::vector<ComplexMatrix>& povm, double lambda);

}  // namespace qlim
