#pragma once

// Executable form of the joint-state characterisation for interactive
// protocols. At every round boundary the joint state is
//
//     sum_a |a>_A  Lambda |phi_a>_B,
//
// where Lambda maps qB + 2 mB qubits to qB qubits, depends only on Bob's
// unitaries and satisfies Tr(Lambda Lambda^dagger) = 2^(2 mA), and {phi_a} is
// an orthonormal family of 2^qA states on qB + 2 mB qubits.
//
// Register convention: Alice's register is ordered so that she always sends
// her rightmost qubits and receives on the right; Bob sends his leftmost
// qubits and receives on the left. The joint vector is indexed as
// (Alice register, Bob register), so a send just moves the boundary.

#include <vector>

#include "qcomm/linalg.hpp"
#include "qcomm/model.hpp"

namespace qcomm::cert {

struct Certificate {
  CMat lambda;  // 2^qB x 2^(qB + 2 mB)
  CMat phis;    // column a is phi_a; 2^(qB + 2 mB) x 2^qA
  int qA = 0;
  int qB = 0;
  int mA = 0;
  int mB = 0;

  int domainQubits() const { return qB + 2 * mB; }
  /// sum_a |a> (x) Lambda phi_a in (Alice register, Bob register) order.
  CVec state() const;
  /// Columns Lambda phi_a: Bob's unnormalized conditional states.
  CMat bobStates() const { return lambda * phis; }
  double traceIdentity() const { return lambda.squaredNorm(); }
  /// |Tr(Lambda Lambda^dagger) - 2^(2 mA)| / 2^(2 mA).
  double traceResidual() const;
  double orthonormalityDefect() const { return linalg::orthonormalityDefect(phis); }
};

/// A gate acting on positions of one player's register.
struct LocalGate {
  CMat matrix;
  std::vector<int> positions;
};

/// A local unitary on a k-qubit register: gates applied in order, then an
/// optional qubit reordering (new qubit i = old qubit order[i]).
struct LocalUnitary {
  std::vector<LocalGate> gates;
  std::vector<int> order;

  static LocalUnitary dense(const CMat& u);
  /// Left-multiplies the rows of m (a 2^k-row matrix) by this unitary.
  void applyLeft(CMat& m) const;
  CMat matrix(int k) const;
};

/// Unitary U~ on E' qubits with <phi_a|U~|phi_a'> = <a'|U|a>, chosen as
/// Phi U^T Phi^dagger + (I - Phi Phi^dagger) with Phi = sum_a |phi_a><a|.
CMat liftAliceUnitary(const CMat& u, const CMat& phis);

/// The lifted action on the family itself: U~ Phi = Phi U^T. Equal to
/// liftAliceUnitary(u, phis) * phis without building the E' x E' matrix.
CMat liftedFamily(const LocalUnitary& u, const CMat& phis);

/// Lambda_0 = |0><0| on qB qubits, phi_a = |a>. Needs qA <= qB.
Certificate initCertificate(int qA, int qB);

/// Alice applies u to her register and sends her rightmost p qubits.
Certificate stepAlice(const Certificate& c, const LocalUnitary& u, int p);
Certificate stepAlice(const Certificate& c, const CMat& u, int p);

/// Bob applies v to his register and sends his leftmost p qubits. The phi
/// update is a pure relabeling and never reads v.
Certificate stepBob(const Certificate& c, const LocalUnitary& v, int p);
Certificate stepBob(const Certificate& c, const CMat& v, int p);

struct PrefixCheck {
  int round = 0;  // -1 for the shared-state preparation step
  double reconstructionResidual = 0.0;
  double traceResidual = 0.0;
  double orthonormalityDefect = 0.0;
  // Bob steps only: |Tr after - Tr before| / Tr before.
  double bobTraceDrift = 0.0;
  model::Party actor = model::Party::Bob;
};

struct CertifyResult {
  Certificate certificate;
  double residual = 0.0;             // max over every prefix
  double traceResidual = 0.0;        // max over every prefix
  std::vector<PrefixCheck> prefixes;
  std::vector<int> aliceLayout;      // physical qubit ids, register order
  std::vector<int> bobLayout;
  int padQubits = 0;                 // idle Bob qubits added so that qA <= qB
};

struct CertifyOptions {
  int capQubits = tol::kMaxQubits;
  // Largest Lambda (entries) the engine will build.
  Eigen::Index maxLambdaEntries = Eigen::Index{1} << 22;
  bool checkEveryPrefix = true;
};

/// Folds the rounds of p (inputs resolved against x) through stepAlice and
/// stepBob and compares the reconstruction with the executor after every
/// round. Shared entanglement is produced by a preliminary Bob step that
/// prepares sum_a sqrt(lambda_a)|a>|a> and sends Alice her half.
CertifyResult certifyProtocol(const model::Protocol& p, model::Message x,
                              const CertifyOptions& options = {});

}  // namespace qcomm::cert
