#pragma once

// Dense complex linear algebra for small multi-qubit systems.
//
// Qubit ordering: in a k-qubit register, qubit 0 is the most significant bit
// of the basis-state index, so |q0 q1 ... q(k-1)> has index
// sum_i q_i 2^(k-1-i). tensor(a, b) places a's qubits before b's.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcomm/errors.hpp"
#include "qcomm/tolerances.hpp"

namespace qcomm {

template <typename Real = double>
using CVecT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real = double>
using CMatT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;
using CVec = CVecT<double>;
using CMat = CMatT<double>;
using RVec = Eigen::VectorXd;

namespace linalg {

using Eigen::Index;

/// Number of qubits spanned by a dimension; throws unless dim is 2^k.
inline int qubitCount(Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int k = 0;
  while ((Index{1} << k) < dim) ++k;
  return k;
}

inline Index dimOf(int qubits) { return Index{1} << qubits; }

// Bit of `index` holding qubit q of a k-qubit register.
inline bool qubitBit(Index index, int q, int k) { return (index >> (k - 1 - q)) & 1; }

/// Kronecker product. Two column vectors give a column vector.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  constexpr bool kVectors = DerivedA::ColsAtCompileTime == 1 && DerivedB::ColsAtCompileTime == 1;
  using Out = std::conditional_t<kVectors, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>,
                                 Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>;
  const Index br = b.rows();
  const Index bc = b.cols();
  Out out(a.rows() * br, a.cols() * bc);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real = double>
CMatT<Real> identity(int qubits) {
  return CMatT<Real>::Identity(dimOf(qubits), dimOf(qubits));
}

template <typename Real = double>
CVecT<Real> basisState(int qubits, Index index) {
  if (index < 0 || index >= dimOf(qubits)) {
    throw DimensionError("basis index " + std::to_string(index) + " out of range");
  }
  CVecT<Real> v = CVecT<Real>::Zero(dimOf(qubits));
  v(index) = 1;
  return v;
}

/// Max entrywise deviation of U^dagger U from the identity.
template <typename Derived>
double unitarityDefect(const Eigen::MatrixBase<Derived>& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const auto gram = (u.adjoint() * u).eval();
  return (gram - decltype(gram)::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool isUnitary(const Eigen::MatrixBase<Derived>& u, double tol = tol::kUnitary) {
  return u.rows() == u.cols() && unitarityDefect(u) <= tol;
}

/// Max entrywise deviation of the Gram matrix of the columns from the identity.
template <typename Derived>
double orthonormalityDefect(const Eigen::MatrixBase<Derived>& columns) {
  if (columns.cols() == 0) return 0.0;
  const auto gram = (columns.adjoint() * columns).eval();
  return (gram - decltype(gram)::Identity(columns.cols(), columns.cols())).cwiseAbs().maxCoeff();
}

namespace detail {

inline void checkTargets(std::span<const int> targets, int k) {
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int t : targets) {
    if (t < 0 || t >= k) {
      throw DimensionError("qubit index " + std::to_string(t) + " outside a " +
                           std::to_string(k) + "-qubit register");
    }
    if (seen[static_cast<std::size_t>(t)]) {
      throw DimensionError("qubit index " + std::to_string(t) + " repeated in target list");
    }
    seen[static_cast<std::size_t>(t)] = true;
  }
}

// Offsets of the 2^t basis states of the target qubits inside a k-qubit index,
// with targets[0] as the most significant bit of the local index.
inline std::vector<Index> targetOffsets(std::span<const int> targets, int k) {
  const int t = static_cast<int>(targets.size());
  std::vector<Index> offsets(static_cast<std::size_t>(dimOf(t)), 0);
  for (Index j = 0; j < dimOf(t); ++j) {
    Index off = 0;
    for (int i = 0; i < t; ++i) {
      if ((j >> (t - 1 - i)) & 1) off |= Index{1} << (k - 1 - targets[static_cast<std::size_t>(i)]);
    }
    offsets[static_cast<std::size_t>(j)] = off;
  }
  return offsets;
}

}  // namespace detail

/// Left-multiplies the rows of `m` by `u` embedded on `targets` (identity on
/// the remaining qubits). Works for state vectors and for stacks of columns.
template <typename DerivedU, typename DerivedM>
void applyOnInPlace(const Eigen::MatrixBase<DerivedU>& u, std::span<const int> targets,
                    Eigen::MatrixBase<DerivedM>& m, bool strict = true) {
  const int k = qubitCount(m.rows());
  const int t = static_cast<int>(targets.size());
  if (u.rows() != dimOf(t) || u.cols() != dimOf(t)) {
    throw DimensionError("operator of dimension " + std::to_string(u.rows()) + "x" +
                         std::to_string(u.cols()) + " cannot act on " + std::to_string(t) +
                         " qubits");
  }
  detail::checkTargets(targets, k);
  if (strict && !isUnitary(u)) throw NotUnitaryError("applyOn: operator is not unitary");

  const auto offsets = detail::targetOffsets(targets, k);
  Index mask = 0;
  for (auto off : offsets) mask |= off;

  using Scalar = typename DerivedM::Scalar;
  const Index d = dimOf(t);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> uu = u.template cast<Scalar>();
  std::vector<Index> bases;
  bases.reserve(static_cast<std::size_t>(m.rows() / d));
  for (Index base = 0; base < m.rows(); ++base) {
    if (!(base & mask)) bases.push_back(base);
  }
  // Column by column keeps the gathers inside one contiguous column.
  std::vector<Scalar> in(static_cast<std::size_t>(d));
  std::vector<Scalar> out(static_cast<std::size_t>(d));
  const Scalar* up = uu.data();  // column-major: entry (r, j) at up[j * d + r]
  const Index* off = offsets.data();
  auto& mm = m.derived();
  for (Index c = 0; c < mm.cols(); ++c) {
    Scalar* col = &mm.coeffRef(0, c);
    for (Index base : bases) {
      for (Index j = 0; j < d; ++j) in[j] = col[base | off[j]];
      for (Index r = 0; r < d; ++r) out[r] = Scalar(0);
      for (Index j = 0; j < d; ++j) {
        const Scalar v = in[j];
        for (Index r = 0; r < d; ++r) out[r] += up[j * d + r] * v;
      }
      for (Index j = 0; j < d; ++j) col[base | off[j]] = out[j];
    }
  }
}

/// (u on targets, identity elsewhere) * s.
template <typename DerivedU, typename DerivedS>
typename DerivedS::PlainObject applyOn(const Eigen::MatrixBase<DerivedU>& u,
                                        std::span<const int> targets,
                                        const Eigen::MatrixBase<DerivedS>& s,
                                        bool strict = true) {
  typename DerivedS::PlainObject out = s;
  applyOnInPlace(u, targets, out, strict);
  return out;
}

template <typename DerivedU, typename DerivedS>
typename DerivedS::PlainObject applyOn(const Eigen::MatrixBase<DerivedU>& u,
                                        std::initializer_list<int> targets,
                                        const Eigen::MatrixBase<DerivedS>& s,
                                        bool strict = true) {
  return applyOn(u, std::span<const int>(targets.begin(), targets.size()), s, strict);
}

/// Reorders the qubits indexing the rows: qubit i of the result is qubit
/// order[i] of the input. This materializes a relabeling.
template <typename Derived>
typename Derived::PlainObject permuteQubits(const Eigen::MatrixBase<Derived>& m,
                                             std::span<const int> order) {
  const int k = qubitCount(m.rows());
  if (static_cast<int>(order.size()) != k) {
    throw DimensionError("permutation of " + std::to_string(order.size()) + " qubits applied to " +
                         std::to_string(k) + " qubits");
  }
  detail::checkTargets(order, k);
  typename Derived::PlainObject out(m.rows(), m.cols());
  for (Index idx = 0; idx < m.rows(); ++idx) {
    Index src = 0;
    for (int i = 0; i < k; ++i) {
      if (qubitBit(idx, i, k)) src |= Index{1} << (k - 1 - order[static_cast<std::size_t>(i)]);
    }
    out.row(idx) = m.row(src);
  }
  return out;
}

namespace detail {

inline std::vector<int> keepThenRest(std::span<const int> keep, int k) {
  checkTargets(keep, k);
  std::vector<int> order(keep.begin(), keep.end());
  for (int q = 0; q < k; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) order.push_back(q);
  }
  return order;
}

}  // namespace detail

/// Reduced density matrix of a pure state on `keep` (in the given order).
template <typename Real>
CMatT<Real> partialTrace(const CVecT<Real>& psi, std::span<const int> keep) {
  const int k = qubitCount(psi.size());
  const auto order = detail::keepThenRest(keep, k);
  const CVecT<Real> permuted = permuteQubits(psi, order);
  const Index rest = dimOf(k - static_cast<int>(keep.size()));
  const Index kept = dimOf(static_cast<int>(keep.size()));
  // Column-major map: entry (j, i) is amplitude i*rest + j.
  Eigen::Map<const CMatT<Real>> cols(permuted.data(), rest, kept);
  return cols.transpose() * cols.conjugate();
}

/// Reduced density matrix of a mixed state on `keep` (in the given order).
template <typename Real>
CMatT<Real> partialTrace(const CMatT<Real>& rho, std::span<const int> keep) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  const int k = qubitCount(rho.rows());
  const auto order = detail::keepThenRest(keep, k);
  const CMatT<Real> rowsDone = permuteQubits(rho, order);
  const CMatT<Real> both = permuteQubits(CMatT<Real>(rowsDone.transpose()), order).transpose();
  const Index rest = dimOf(k - static_cast<int>(keep.size()));
  const Index kept = dimOf(static_cast<int>(keep.size()));
  CMatT<Real> out = CMatT<Real>::Zero(kept, kept);
  for (Index i = 0; i < kept; ++i) {
    for (Index j = 0; j < kept; ++j) {
      out(i, j) = both.block(i * rest, j * rest, rest, rest).trace();
    }
  }
  return out;
}

inline CMat partialTrace(const CVec& psi, std::initializer_list<int> keep) {
  return partialTrace<double>(psi, std::span<const int>(keep.begin(), keep.size()));
}

/// Schmidt form of a bipartite pure state: sum_i coeffs[i] |left_i>|right_i>.
/// Bases are stored as columns.
struct SchmidtForm {
  RVec coeffs;
  CMat left;
  CMat right;

  CVec reconstruct() const;
  double lambdaSum() const { return coeffs.squaredNorm(); }
};

/// Schmidt decomposition across the cut after the first `cutAfter` qubits.
SchmidtForm schmidt(const CVec& s, int cutAfter);

/// Hermitian square root of the pseudo-inverse of a PSD matrix: eigenvalues
/// below relTol * max eigenvalue are treated as zero.
CMat pgmSqrtInv(const CMat& rho, double relTol = tol::kPseudoInverse);

/// Projector onto the eigenspaces of a PSD matrix above relTol * max eigenvalue.
CMat supportProjector(const CMat& rho, double relTol = tol::kPseudoInverse);

/// Smallest eigenvalue of a Hermitian matrix.
double minEigenvalue(const CMat& hermitian);

bool isPsd(const CMat& m, double tol = tol::kPsd);

/// Deterministic, approximately Haar-distributed unitary on k qubits.
CMat randomUnitary(int k, std::uint64_t seed, int cap = tol::kRandomUnitaryCap);

/// Random normalized state on k qubits.
CVec randomState(int k, std::uint64_t seed);

/// A unitary whose first column is the normalized vector psi.
CMat unitaryWithFirstColumn(const CVec& psi);

}  // namespace linalg
}  // namespace qcomm
