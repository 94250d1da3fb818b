#pragma once

// Programmatic protocol constructions used by the demos, the CLI and the
// test suites.

#include <cstdint>

#include "qcomm/model.hpp"

namespace qcomm::protocols {

/// Superdense coding of n = 2m bits over m EPR pairs: Alice applies
/// Z^x[2i] X^x[2i+1] to her half of pair i and sends all m halves; Bob
/// undoes the Bell basis with CNOT then H and reads (ea[i], eb[i]).
model::Protocol superdense(int m);

/// Superdense coding of the first 2m bits followed by `guessed` bits that Bob
/// outputs as 0 without any information. Success is exactly 2^(-guessed),
/// which meets the bound 2^(2m) / 2^(2m + guessed) with equality.
model::Protocol superdensePlusGuess(int m, int guessed);

struct RandomOptions {
  int n = 2;
  int maxQubits = 8;
  int rounds = 3;             // interactive rounds before Bob's final decoding round
  int mA = -1;                // Alice -> Bob qubits; -1 picks 0..2
  int maxMB = 3;              // Bob -> Alice qubits, excluding shared-state preparation
  int maxE = 2;
  bool nonUniformSchmidt = false;
  int maxGateQubits = 3;
  // Largest Lambda or phi family (entries) the certificate may need.
  long long certificateBudget = 1LL << 20;
};

/// Deterministic random interactive protocol: random local unitaries,
/// input-conditioned gates on Alice's side, mixed-direction sends and a final
/// Bob round acting as the decoder. Rerolls internally until the protocol is
/// valid and its certificate fits the budget.
model::Protocol randomProtocol(std::uint64_t seed, const RandomOptions& options = {});

/// Largest number of entries of Lambda or of the phi family that certifying p
/// will build (including idle padding and the shared-state preparation).
long long certificatePeakEntries(const model::Protocol& p);

}  // namespace qcomm::protocols
