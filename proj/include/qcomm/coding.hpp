#pragma once

// One-way encoding over a shared entangled state. Alice applies V_x to her E
// halves and sends the last m of them; Bob is left with m + E qubits ordered
// (sent qubits, his own halves). Ensembles are built from the closed form of
// Bob's conditional states rather than by simulating Alice's leftover qubits.

#include <cstdint>
#include <vector>

#include "qcomm/linalg.hpp"
#include "qcomm/model.hpp"

namespace qcomm::coding {

struct EncodingScheme {
  int E = 0;
  int m = 0;
  int n = 0;
  std::vector<CMat> encoders;  // V_x on E qubits, indexed by the packed message x
  RVec schmidtCoeffs;          // length 2^E, sums to 1

  bool uniform(double tol = tol::kNorm) const;
  /// Bob's qubit count after the send.
  int bobQubits() const { return E + m; }
  /// Throws ValidationError / NotUnitaryError / DimensionError.
  void validate() const;
};

struct WeightedState {
  double weight = 1.0;
  CVec state;  // may be subnormalized; contributes weight * |state><state|
};

using EnsembleEntry = std::vector<WeightedState>;

struct Ensemble {
  int n = 0;
  int qubits = 0;
  std::vector<EnsembleEntry> entries;  // one per message

  /// Bob's density matrix for message x.
  CMat density(model::Message x) const;
  /// 2^-n sum_x rho_x.
  CMat average() const;
  double totalWeight(model::Message x) const;
};

/// Outcome y is elements[y]; when hasReject is set the last element is an
/// extra outcome that never counts as a correct guess.
struct Povm {
  std::vector<CMat> elements;
  bool hasReject = false;

  double completenessDefect() const;
  double minEigenvalue() const;
};

struct BoundReport {
  double success = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool tight = false;
};

/// Closed-form ensemble for EPR pairs: weights 2^-(E-m) and orthonormal states
/// phi_l = 2^-m/2 sum_r |r> V_x^T |l r>. Throws ValidationError for non-uniform
/// Schmidt coefficients.
EnsembleEntry eprEnsemble(const EncodingScheme& s, model::Message x);
/// Subnormalized states 2^m/2 (I_m (x) Lambda) phi_l with unit weight, where
/// Lambda = diag(sqrt(lambda)).
EnsembleEntry generalEnsemble(const EncodingScheme& s, model::Message x);
/// Every message, through eprEnsemble when the coefficients are uniform.
Ensemble buildEnsemble(const EncodingScheme& s);

EncodingScheme superdenseScheme(int m);
/// Uniform or random Schmidt coefficients, Haar-like random encoders.
EncodingScheme randomScheme(int E, int m, int n, std::uint64_t seed, bool uniform = true);
/// Every message encoded by the identity.
EncodingScheme constantScheme(int E, int m, int n);

/// Alice also holds k ancilla qubits in |0>. The encoders act on (shared,
/// ancilla) = E + k qubits. The ancilla is absorbed into a shared state on
/// E + k qubits whose extra Schmidt coefficients vanish; Bob's matching k
/// qubits stay in |0> and never influence decoding.
EncodingScheme absorbAncilla(int E, int k, int m, int n, const RVec& schmidtCoeffs, std::vector<CMat> encoders);

/// The protocol run by the scheme for one message: Alice applies V_x to ea and
/// sends ea[E-m..E-1]. n is 0 because V_x is fixed.
model::Protocol encodingProtocol(const EncodingScheme& s, model::Message x);

/// Pretty-good measurement with a reject element on the complement of the
/// average state's support.
Povm pgmDecoder(const Ensemble& ens);
/// Projector onto the positive eigenspace of rho0 - rho1 and its complement.
Povm helstromDecoder(const CMat& rho0, const CMat& rho1);
/// Bob applies d then reads `outputs` in the computational basis; outcome y
/// packs the outputs MSB-first.
Povm measurementDecoder(const CMat& d, const std::vector<int>& outputs);
/// Bell measurement for superdenseScheme(m), built from CNOT then H per pair.
Povm bellDecoder(int m);

/// 2^-n sum_x sum_l w_l <phi_l| P_x |phi_l>.
double decodeSuccess(const Ensemble& ens, const Povm& d);
/// min(1, 2^(2 mA) / 2^n).
double boundRhs(int n, int mA);
BoundReport checkEncodingBound(const EncodingScheme& s, const Povm& d);

}  // namespace qcomm::coding
