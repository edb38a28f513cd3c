#pragma once

// Quantum channels M_N -> M_k and the maps derived from them.
//
// A Channel is a tagged union over the representations qlim works with. Each
// alternative keeps the most structured data it has (a mixed-unitary channel
// keeps its weights and unitaries, not a dense kn x N isometry); the
// Stinespring isometry and Kraus operators are materialised on demand.

#include <variant>
#include <vector>

#include "qlim/linalg.hpp"

namespace qlim {

/// Strictly positive probability vector.
class WeightVector {
 public:
  /// Throws BadWeights unless every entry is > 0 and |sum - 1| <= 1e-12.
  static WeightVector create(RealVector entries);
  static WeightVector flat(Eigen::Index k);

  Eigen::Index size() const { return w_.size(); }
  double operator[](Eigen::Index i) const { return w_[i]; }
  const RealVector& entries() const { return w_; }
  RealVector sqrtEntries() const { return w_.cwiseSqrt(); }

 private:
  explicit WeightVector(RealVector w) : w_(std::move(w)) {}
  RealVector w_;
};

/// Phi(X) = Tr_n[V X V^*] with V : C^N -> C^k (x) C^n an isometry.
class StinespringChannel {
 public:
  /// Throws DimensionMismatch for a V that is not (k*n) x N with N <= k*n,
  /// NotUnitary if ||V^*V - I||_max > 1e-10.
  static StinespringChannel create(ComplexMatrix isometry, Eigen::Index k, Eigen::Index n);
  static StinespringChannel identity(Eigen::Index k);

  Eigen::Index outputDim() const { return k_; }
  Eigen::Index envDim() const { return n_; }
  Eigen::Index inputDim() const { return v_.cols(); }
  const ComplexMatrix& isometry() const { return v_; }

 private:
  StinespringChannel(ComplexMatrix v, Eigen::Index k, Eigen::Index n) : v_(std::move(v)), k_(k), n_(n) {}
  ComplexMatrix v_;
  Eigen::Index k_;
  Eigen::Index n_;
};

/// Phi(X) = sum_j K_j X K_j^*.
class KrausChannel {
 public:
  /// Throws DimensionMismatch for ragged operators, NotUnitary when
  /// sum_j K_j^* K_j differs from I by more than 1e-10.
  static KrausChannel create(std::vector<ComplexMatrix> ops);

  Eigen::Index outputDim() const { return ops_.front().rows(); }
  Eigen::Index inputDim() const { return ops_.front().cols(); }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }

 private:
  explicit KrausChannel(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {}
  std::vector<ComplexMatrix> ops_;
};

/// rho -> Tr[rho] I_k / k, from M_N.
struct DepolarizingChannel {
  Eigen::Index k;
  Eigen::Index n;  // input dimension N
};

/// m_ij -> delta_ij m_ij on M_l.
struct PinchingChannel {
  Eigen::Index l;
};

/// Holevo form Xi(X) = sum_i Tr[X M_i] sigma_i.
class EBChannel {
 public:
  /// Throws InvalidPOVM unless each M_i is Hermitian PSD (min eigenvalue
  /// >= -1e-10) and sum_i M_i = I within 1e-10; DimensionMismatch for
  /// inconsistent sizes.
  static EBChannel create(std::vector<ComplexMatrix> povm, std::vector<DensityMatrix> states);

  Eigen::Index size() const { return static_cast<Eigen::Index>(povm_.size()); }
  Eigen::Index inputDim() const { return povm_.front().rows(); }
  Eigen::Index outputDim() const { return states_.front().dim(); }
  const std::vector<ComplexMatrix>& povm() const { return povm_; }
  const std::vector<DensityMatrix>& states() const { return states_; }

 private:
  EBChannel(std::vector<ComplexMatrix> povm, std::vector<DensityMatrix> states)
      : povm_(std::move(povm)), states_(std::move(states)) {}
  std::vector<ComplexMatrix> povm_;
  std::vector<DensityMatrix> states_;
};

/// Channel M_n -> M_k with output entries sqrt(w_i w_j) Tr[U_i X U_j^*]. Its
/// Stinespring isometry is the block column whose i-th block is sqrt(w_i) U_i,
/// and the complementary channel is X -> sum_i w_i U_i X U_i^*.
class MixedUnitaryChannel {
 public:
  /// Throws NotUnitary if some ||U^*U - I||_max > 1e-10, DimensionMismatch
  /// for ragged sizes or a weight count that differs from the unitary count.
  static MixedUnitaryChannel create(WeightVector w, std::vector<ComplexMatrix> unitaries);
  /// Skips the O(k n^3) unitarity check; for samplers that produce unitaries
  /// by construction.
  static MixedUnitaryChannel createUnchecked(WeightVector w, std::vector<ComplexMatrix> unitaries);

  Eigen::Index k() const { return w_.size(); }
  Eigen::Index n() const { return us_.front().rows(); }
  const WeightVector& weights() const { return w_; }
  const std::vector<ComplexMatrix>& unitaries() const { return us_; }

 private:
  MixedUnitaryChannel(WeightVector w, std::vector<ComplexMatrix> us) : w_(std::move(w)), us_(std::move(us)) {}
  WeightVector w_;
  std::vector<ComplexMatrix> us_;
};

using Channel =
    std::variant<StinespringChannel, KrausChannel, DepolarizingChannel, PinchingChannel, EBChannel, MixedUnitaryChannel>;

Channel makeDepolarizing(Eigen::Index k, Eigen::Index inputDim);
Channel makePinching(Eigen::Index l);
EBChannel makeEB(std::vector<ComplexMatrix> povm, std::vector<DensityMatrix> states);
MixedUnitaryChannel makeMixedUnitary(const WeightVector& w, std::vector<ComplexMatrix> unitaries);

/// The pinching map written in Holevo form: M_i = sigma_i = e_i e_i^*.
EBChannel pinchingAsEB(Eigen::Index l);

Eigen::Index inputDim(const Channel& ch);
Eigen::Index outputDim(const Channel& ch);

/// Phi(rho). Throws DimensionMismatch when rho is not N x N.
DensityMatrix applyChannel(const Channel& ch, const DensityMatrix& rho);

/// Phi(xx^*) for a (not necessarily normalised) input vector, as a raw matrix.
/// Cheap path used by samplers and the norm ascent.
ComplexMatrix applyToPure(const Channel& ch, const ComplexVector& x);

/// Phi^*(A) for any k x k matrix A. Throws DimensionMismatch.
ComplexMatrix adjointApply(const Channel& ch, const ComplexMatrix& a);
inline ComplexMatrix adjointApply(const Channel& ch, const DensityMatrix& a) { return adjointApply(ch, a.matrix()); }

/// x -> Phi^*(A) x without materialising Phi^*(A) where the representation
/// allows it (Stinespring, mixed-unitary).
HermitianOperator adjointOperator(const Channel& ch, const ComplexMatrix& a);

std::vector<ComplexMatrix> krausOperators(const Channel& ch);
StinespringChannel toStinespring(const Channel& ch);

/// Tr_k instead of Tr_n: output dimension n, environment dimension k.
StinespringChannel complementary(const StinespringChannel& ch);
/// Throws RepresentationUnavailable unless ch stores an isometry.
StinespringChannel complementary(const Channel& ch);

/// P = VV^*, the projection onto the range of the isometry.
ComplexMatrix stinespringProjection(const StinespringChannel& ch);

}  // namespace qlim
