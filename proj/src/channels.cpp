#include "qlim/channels.hpp"

#include <cmath>
#include <string>

namespace qlim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void checkIsometry(const ComplexMatrix& v, const char* what) {
  const auto eye = ComplexMatrix::Identity(v.cols(), v.cols());
  const double err = maxAbs(v.adjoint() * v - eye);
  require(err <= 1e-10, ErrorKind::NotUnitary, std::string(what) + ": ||V^*V - I||_max = " + std::to_string(err));
}

void checkSquare(const ComplexMatrix& a, Eigen::Index dim, const char* what) {
  require(a.rows() == dim && a.cols() == dim, ErrorKind::DimensionMismatch,
          std::string(what) + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
              std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

// (A (x) I_n) y for y in C^k (x) C^n.
ComplexVector applyLeftFactor(const ComplexMatrix& a, const ComplexVector& y, Eigen::Index k, Eigen::Index n) {
  return flattenBipartite(a * reshapeBipartite(y, k, n));
}

}  // namespace

WeightVector WeightVector::create(RealVector entries) {
  require(entries.size() > 0, ErrorKind::BadWeights, "empty weight vector");
  require(entries.allFinite() && (entries.array() > 0.0).all(), ErrorKind::BadWeights,
          "weights must be strictly positive");
  require(std::abs(entries.sum() - 1.0) <= 1e-12, ErrorKind::BadWeights,
          "weights sum to " + std::to_string(entries.sum()));
  return WeightVector(std::move(entries));
}

WeightVector WeightVector::flat(Eigen::Index k) {
  require(k > 0, ErrorKind::BadWeights, "flat weights need k >= 1");
  return WeightVector(RealVector::Constant(k, 1.0 / static_cast<double>(k)));
}

StinespringChannel StinespringChannel::create(ComplexMatrix isometry, Eigen::Index k, Eigen::Index n) {
  require(k > 0 && n > 0 && isometry.rows() == k * n && isometry.cols() >= 1 && isometry.cols() <= k * n,
          ErrorKind::DimensionMismatch, "Stinespring isometry must be (k*n) x N with 1 <= N <= k*n");
  checkIsometry(isometry, "Stinespring isometry");
  return StinespringChannel(std::move(isometry), k, n);
}

StinespringChannel StinespringChannel::identity(Eigen::Index k) {
  return StinespringChannel(ComplexMatrix::Identity(k, k), k, 1);
}

KrausChannel KrausChannel::create(std::vector<ComplexMatrix> ops) {
  require(!ops.empty(), ErrorKind::DimensionMismatch, "no Kraus operators");
  const Eigen::Index rows = ops.front().rows();
  const Eigen::Index cols = ops.front().cols();
  ComplexMatrix sum = ComplexMatrix::Zero(cols, cols);
  for (const auto& k : ops) {
    require(k.rows() == rows && k.cols() == cols, ErrorKind::DimensionMismatch, "ragged Kraus operators");
    sum += k.adjoint() * k;
  }
  const double err = maxAbs(sum - ComplexMatrix::Identity(cols, cols));
  require(err <= 1e-10, ErrorKind::NotUnitary, "Kraus operators are not trace preserving, err " + std::to_string(err));
  return KrausChannel(std::move(ops));
}

EBChannel EBChannel::create(std::vector<ComplexMatrix> povm, std::vector<DensityMatrix> states) {
  require(!povm.empty() && povm.size() == states.size(), ErrorKind::DimensionMismatch,
          "need as many POVM elements as states, and at least one");
  const Eigen::Index n = povm.front().rows();
  const Eigen::Index k = states.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& m : povm) {
    require(m.rows() == n && m.cols() == n, ErrorKind::DimensionMismatch, "ragged POVM");
    require(m.allFinite() && maxAbs(m - m.adjoint()) <= 1e-10, ErrorKind::InvalidPOVM, "POVM element not Hermitian");
    const double lo = hermitianEigenvalues(m).minCoeff();
    require(lo >= -1e-10, ErrorKind::InvalidPOVM, "POVM element has eigenvalue " + std::to_string(lo));
    sum += m;
  }
  const double err = maxAbs(sum - ComplexMatrix::Identity(n, n));
  require(err <= 1e-10, ErrorKind::InvalidPOVM, "POVM does not sum to I, err " + std::to_string(err));
  for (const auto& s : states) require(s.dim() == k, ErrorKind::DimensionMismatch, "states of different dimension");
  return EBChannel(std::move(povm), std::move(states));
}

MixedUnitaryChannel MixedUnitaryChannel::create(WeightVector w, std::vector<ComplexMatrix> unitaries) {
  require(!unitaries.empty(), ErrorKind::DimensionMismatch, "no unitaries");
  for (const auto& u : unitaries) {
    require(u.rows() == u.cols(), ErrorKind::DimensionMismatch, "unitaries must be square");
    checkIsometry(u, "mixed-unitary component");
  }
  return createUnchecked(std::move(w), std::move(unitaries));
}

MixedUnitaryChannel MixedUnitaryChannel::createUnchecked(WeightVector w, std::vector<ComplexMatrix> unitaries) {
  require(!unitaries.empty() && static_cast<Eigen::Index>(unitaries.size()) == w.size(),
          ErrorKind::DimensionMismatch, "weight count must equal unitary count");
  const Eigen::Index n = unitaries.front().rows();
  for (const auto& u : unitaries)
    require(u.rows() == n && u.cols() == n, ErrorKind::DimensionMismatch, "unitaries of different size");
  return MixedUnitaryChannel(std::move(w), std::move(unitaries));
}

Channel makeDepolarizing(Eigen::Index k, Eigen::Index inputDim) {
  require(k > 0 && inputDim > 0, ErrorKind::DimensionMismatch, "depolarizing channel needs positive dimensions");
  return DepolarizingChannel{k, inputDim};
}

Channel makePinching(Eigen::Index l) {
  require(l > 0, ErrorKind::DimensionMismatch, "pinching needs l >= 1");
  return PinchingChannel{l};
}

EBChannel makeEB(std::vector<ComplexMatrix> povm, std::vector<DensityMatrix> states) {
  return EBChannel::create(std::move(povm), std::move(states));
}

MixedUnitaryChannel makeMixedUnitary(const WeightVector& w, std::vector<ComplexMatrix> unitaries) {
  return MixedUnitaryChannel::create(w, std::move(unitaries));
}

EBChannel pinchingAsEB(Eigen::Index l) {
  require(l > 0, ErrorKind::DimensionMismatch, "pinching needs l >= 1");
  std::vector<ComplexMatrix> povm;
  std::vector<DensityMatrix> states;
  for (Eigen::Index i = 0; i < l; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(l, l);
    e(i, i) = 1.0;
    povm.push_back(e);
    states.push_back(DensityMatrix::fromMatrix(e));
  }
  return EBChannel::create(std::move(povm), std::move(states));
}

Eigen::Index inputDim(const Channel& ch) {
  return std::visit(Overloaded{
                        [](const StinespringChannel& c) { return c.inputDim(); },
                        [](const KrausChannel& c) { return c.inputDim(); },
                        [](const DepolarizingChannel& c) { return c.n; },
                        [](const PinchingChannel& c) { return c.l; },
                        [](const EBChannel& c) { return c.inputDim(); },
                        [](const MixedUnitaryChannel& c) { return c.n(); },
                    },
                    ch);
}

Eigen::Index outputDim(const Channel& ch) {
  return std::visit(Overloaded{
                        [](const StinespringChannel& c) { return c.outputDim(); },
                        [](const KrausChannel& c) { return c.outputDim(); },
                        [](const DepolarizingChannel& c) { return c.k; },
                        [](const PinchingChannel& c) { return c.l; },
                        [](const EBChannel& c) { return c.outputDim(); },
                        [](const MixedUnitaryChannel& c) { return c.k(); },
                    },
                    ch);
}

namespace {

ComplexMatrix applyRaw(const Channel& ch, const ComplexMatrix& rho) {
  return std::visit(
      Overloaded{
          [&](const StinespringChannel& c) -> ComplexMatrix {
            const ComplexMatrix& v = c.isometry();
            return partialTraceRight(v * rho * v.adjoint(), c.outputDim(), c.envDim());
          },
          [&](const KrausChannel& c) -> ComplexMatrix {
            ComplexMatrix out = ComplexMatrix::Zero(c.outputDim(), c.outputDim());
            for (const auto& k : c.ops()) out += k * rho * k.adjoint();
            return out;
          },
          [&](const DepolarizingChannel& c) -> ComplexMatrix {
            return rho.trace() * ComplexMatrix::Identity(c.k, c.k) / static_cast<double>(c.k);
          },
          [&](const PinchingChannel&) -> ComplexMatrix { return rho.diagonal().asDiagonal(); },
          [&](const EBChannel& c) -> ComplexMatrix {
            ComplexMatrix out = ComplexMatrix::Zero(c.outputDim(), c.outputDim());
            for (Eigen::Index i = 0; i < c.size(); ++i)
              out += traceProduct(rho, c.povm()[static_cast<std::size_t>(i)]) *
                     c.states()[static_cast<std::size_t>(i)].matrix();
            return out;
          },
          [&](const MixedUnitaryChannel& c) -> ComplexMatrix {
            const RealVector sw = c.weights().sqrtEntries();
            const Eigen::Index k = c.k();
            std::vector<ComplexMatrix> left;
            left.reserve(static_cast<std::size_t>(k));
            for (const auto& u : c.unitaries()) left.push_back(u * rho);
            ComplexMatrix out(k, k);
            // Tr[U_i rho U_j^*] = sum_ab (U_i rho)_ab conj((U_j)_ab)
            for (Eigen::Index i = 0; i < k; ++i)
              for (Eigen::Index j = 0; j < k; ++j)
                out(i, j) = sw[i] * sw[j] *
                            left[static_cast<std::size_t>(i)]
                                .cwiseProduct(c.unitaries()[static_cast<std::size_t>(j)].conjugate())
                                .sum();
            return out;
          },
      },
      ch);
}

}  // namespace

DensityMatrix applyChannel(const Channel& ch, const DensityMatrix& rho) {
  checkSquare(rho.matrix(), inputDim(ch), "applyChannel input");
  return DensityMatrix::normalize(applyRaw(ch, rho.matrix()));
}

ComplexMatrix applyToPure(const Channel& ch, const ComplexVector& x) {
  require(x.size() == inputDim(ch), ErrorKind::DimensionMismatch, "applyToPure: input length mismatch");
  return std::visit(Overloaded{
                        [&](const StinespringChannel& c) -> ComplexMatrix {
                          const ComplexMatrix y = reshapeBipartite(c.isometry() * x, c.outputDim(), c.envDim());
                          return y * y.adjoint();
                        },
                        [&](const MixedUnitaryChannel& c) -> ComplexMatrix {
                          const RealVector sw = c.weights().sqrtEntries();
                          ComplexMatrix y(c.k(), c.n());
                          for (Eigen::Index i = 0; i < c.k(); ++i)
                            y.row(i) = (sw[i] * (c.unitaries()[static_cast<std::size_t>(i)] * x)).transpose();
                          return y * y.adjoint();
                        },
                        [&](const auto&) -> ComplexMatrix { return applyRaw(ch, x * x.adjoint()); },
                    },
                    ch);
}

ComplexMatrix adjointApply(const Channel& ch, const ComplexMatrix& a) {
  checkSquare(a, outputDim(ch), "adjointApply argument");
  return std::visit(
      Overloaded{
          [&](const StinespringChannel& c) -> ComplexMatrix {
            const ComplexMatrix& v = c.isometry();
            ComplexMatrix av(v.rows(), v.cols());
            for (Eigen::Index col = 0; col < v.cols(); ++col)
              av.col(col) = applyLeftFactor(a, v.col(col), c.outputDim(), c.envDim());
            return v.adjoint() * av;
          },
          [&](const KrausChannel& c) -> ComplexMatrix {
            ComplexMatrix out = ComplexMatrix::Zero(c.inputDim(), c.inputDim());
            for (const auto& k : c.ops()) out += k.adjoint() * a * k;
            return out;
          },
          [&](const DepolarizingChannel& c) -> ComplexMatrix {
            return a.trace() * ComplexMatrix::Identity(c.n, c.n) / static_cast<double>(c.k);
          },
          [&](const PinchingChannel&) -> ComplexMatrix { return a.diagonal().asDiagonal(); },
          [&](const EBChannel& c) -> ComplexMatrix {
            ComplexMatrix out = ComplexMatrix::Zero(c.inputDim(), c.inputDim());
            for (Eigen::Index i = 0; i < c.size(); ++i)
              out += traceProduct(a, c.states()[static_cast<std::size_t>(i)].matrix()) *
                     c.povm()[static_cast<std::size_t>(i)];
            return out;
          },
          [&](const MixedUnitaryChannel& c) -> ComplexMatrix {
            // Phi^*(A) = sum_ij sqrt(w_i w_j) A_ij U_i^* U_j. Through the spectral
            // form of A this costs one n x n product per nonzero eigenvalue:
            // for A = aa^*, Phi^*(A) = B^*B with B = sum_j conj(a_j) sqrt(w_j) U_j.
            const RealVector sw = c.weights().sqrtEntries();
            const EigenSystem es = hermitianEigs(0.5 * (a + a.adjoint()));
            const double cutoff = 1e-15 * std::max(1.0, es.eigenvalues.cwiseAbs().maxCoeff());
            ComplexMatrix out = ComplexMatrix::Zero(c.n(), c.n());
            for (Eigen::Index r = 0; r < es.eigenvalues.size(); ++r) {
              const double lambda = es.eigenvalues[r];
              if (std::abs(lambda) <= cutoff) continue;
              ComplexMatrix b = ComplexMatrix::Zero(c.n(), c.n());
              for (Eigen::Index j = 0; j < c.k(); ++j)
                b += (std::conj(es.eigenvectors(j, r)) * sw[j]) * c.unitaries()[static_cast<std::size_t>(j)];
              out.noalias() += lambda * (b.adjoint() * b);
            }
            return 0.5 * (out + out.adjoint());
          },
      },
      ch);
}

HermitianOperator adjointOperator(const Channel& ch, const ComplexMatrix& a) {
  checkSquare(a, outputDim(ch), "adjointOperator argument");
  if (const auto* mu = std::get_if<MixedUnitaryChannel>(&ch)) {
    const RealVector sw = mu->weights().sqrtEntries();
    return [mu = *mu, sw, a](const ComplexVector& x) {
      const auto k = static_cast<std::size_t>(mu.k());
      std::vector<ComplexVector> z(k);
      for (std::size_t j = 0; j < k; ++j) z[j] = sw[static_cast<Eigen::Index>(j)] * (mu.unitaries()[j] * x);
      ComplexVector out = ComplexVector::Zero(mu.n());
      for (std::size_t i = 0; i < k; ++i) {
        ComplexVector u = ComplexVector::Zero(mu.n());
        for (std::size_t j = 0; j < k; ++j) u += a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
        out += sw[static_cast<Eigen::Index>(i)] * (mu.unitaries()[i].adjoint() * u);
      }
      return out;
    };
  }
  if (const auto* st = std::get_if<StinespringChannel>(&ch)) {
    return [st = *st, a](const ComplexVector& x) {
      const ComplexVector y = st.isometry() * x;
      return ComplexVector(st.isometry().adjoint() * applyLeftFactor(a, y, st.outputDim(), st.envDim()));
    };
  }
  ComplexMatrix dense = adjointApply(ch, a);
  return [dense = std::move(dense)](const ComplexVector& x) { return ComplexVector(dense * x); };
}

std::vector<ComplexMatrix> krausOperators(const Channel& ch) {
  return std::visit(
      Overloaded{
          [](const KrausChannel& c) { return c.ops(); },
          [](const DepolarizingChannel& c) {
            std::vector<ComplexMatrix> ops;
            const double s = 1.0 / std::sqrt(static_cast<double>(c.k));
            for (Eigen::Index a = 0; a < c.k; ++a)
              for (Eigen::Index b = 0; b < c.n; ++b) {
                ComplexMatrix op = ComplexMatrix::Zero(c.k, c.n);
                op(a, b) = s;
                ops.push_back(op);
              }
            return ops;
          },
          [](const PinchingChannel& c) {
            std::vector<ComplexMatrix> ops;
            for (Eigen::Index i = 0; i < c.l; ++i) {
              ComplexMatrix op = ComplexMatrix::Zero(c.l, c.l);
              op(i, i) = 1.0;
              ops.push_back(op);
            }
            return ops;
          },
          [](const EBChannel& c) {
            // K_{i,a,b} = sqrt(l_ia) v_ia e_b^* sqrt(M_i), sigma_i = sum_a l_ia v_ia v_ia^*.
            std::vector<ComplexMatrix> ops;
            for (Eigen::Index i = 0; i < c.size(); ++i) {
              const auto idx = static_cast<std::size_t>(i);
              const EigenSystem m = hermitianEigs(c.povm()[idx]);
              const ComplexMatrix root = m.eigenvectors *
                                         m.eigenvalues.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal() *
                                         m.eigenvectors.adjoint();
              const EigenSystem s = hermitianEigs(c.states()[idx].matrix());
              for (Eigen::Index a = 0; a < s.eigenvalues.size(); ++a) {
                if (s.eigenvalues[a] <= 0.0) continue;
                for (Eigen::Index b = 0; b < c.inputDim(); ++b)
                  ops.push_back(std::sqrt(s.eigenvalues[a]) * s.eigenvectors.col(a) * root.row(b));
              }
            }
            return ops;
          },
          [&](const auto&) {
            const StinespringChannel st = toStinespring(ch);
            std::vector<ComplexMatrix> ops;
            for (Eigen::Index j = 0; j < st.envDim(); ++j) {
              ComplexMatrix op(st.outputDim(), st.inputDim());
              for (Eigen::Index o = 0; o < st.outputDim(); ++o) op.row(o) = st.isometry().row(o * st.envDim() + j);
              ops.push_back(op);
            }
            return ops;
          },
      },
      ch);
}

StinespringChannel toStinespring(const Channel& ch) {
  if (const auto* st = std::get_if<StinespringChannel>(&ch)) return *st;
  if (const auto* mu = std::get_if<MixedUnitaryChannel>(&ch)) {
    const Eigen::Index k = mu->k();
    const Eigen::Index n = mu->n();
    ComplexMatrix v(k * n, n);
    for (Eigen::Index i = 0; i < k; ++i)
      v.block(i * n, 0, n, n) = std::sqrt(mu->weights()[i]) * mu->unitaries()[static_cast<std::size_t>(i)];
    return StinespringChannel::create(std::move(v), k, n);
  }
  const std::vector<ComplexMatrix> ops = krausOperators(ch);
  const Eigen::Index env = static_cast<Eigen::Index>(ops.size());
  const Eigen::Index k = ops.front().rows();
  ComplexMatrix v(k * env, ops.front().cols());
  for (Eigen::Index j = 0; j < env; ++j)
    for (Eigen::Index o = 0; o < k; ++o) v.row(o * env + j) = ops[static_cast<std::size_t>(j)].row(o);
  return StinespringChannel::create(std::move(v), k, env);
}

StinespringChannel complementary(const StinespringChannel& ch) {
  const Eigen::Index k = ch.outputDim();
  const Eigen::Index n = ch.envDim();
  const ComplexMatrix& v = ch.isometry();
  ComplexMatrix swapped(v.rows(), v.cols());
  for (Eigen::Index o = 0; o < k; ++o)
    for (Eigen::Index e = 0; e < n; ++e) swapped.row(e * k + o) = v.row(o * n + e);
  return StinespringChannel::create(std::move(swapped), n, k);
}

StinespringChannel complementary(const Channel& ch) {
  const auto* st = std::get_if<StinespringChannel>(&ch);
  if (st == nullptr) fail(ErrorKind::RepresentationUnavailable, "complementary needs a stored Stinespring isometry");
  return complementary(*st);
}

ComplexMatrix stinespringProjection(const StinespringChannel& ch) {
  const ComplexMatrix& v = ch.isometry();
  return v * v.adjoint();
}

}  // namespace qlim
