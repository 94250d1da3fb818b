#pragma once

// Inner product IP_n(x, y) = parity(x AND y): a public-coin protocol, its
// superdense-coded quantum version, the matching lower bound, and the
// compilation of a coherent IP protocol into a transmission protocol for x.

#include <cstdint>
#include <string>

#include "qcomm/model.hpp"

namespace qcomm::ip {

struct IpInstance {
  int n = 0;
  model::Message x = 0;
  model::Message y = 0;
};

int ipValue(const IpInstance& inst);

/// Exact success over the public coins for one input pair, as count / 2^(t+1).
struct CoinCount {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double value() const { return static_cast<double>(correct) / static_cast<double>(total); }
};

struct IpProtocolReport {
  int n = 0;
  double epsilonTarget = 0.0;
  int t = 0;
  int classicalBits = 0;
  int quantumQubits = 0;
  bool paddedBit = false;  // odd classical message padded for superdense coding
  CoinCount worst;         // min over (x, y)
  CoinCount best;          // max over (x, y)
  double successExact = 0.0;
  double quantumSuccess = 0.0;  // min over (x, y) of the simulated quantum protocol
  double lowerBoundQubits = 0.0;
};

/// floor(log2(1 / (1 - 2 eps))); 0 <= eps < 1/2.
int suffixLength(double epsilon);

/// Public coins r in {0,1}^t and g. Alice sends her first n - t bits and the
/// flag [last t bits of x = r]; Bob answers prefix IP xor (r . y_suffix if the
/// flag is set, else g). t = 0 is the exact full-send protocol.
int classicalIpOutput(int n, int t, model::Message x, model::Message y, model::Message r, int g);

/// Exhaustive enumeration over inputs and coins. 0 <= t <= n <= 10.
IpProtocolReport classicalIpProtocol(int n, int t);

/// Same protocol with the message carried by superdense coding, simulated in
/// the executor for every message value.
IpProtocolReport quantumIpProtocol(int n, int t, int capQubits = tol::kMaxQubits);

/// t = suffixLength(eps) clipped to n; epsilonTarget is eps.
IpProtocolReport ipProtocolForEpsilon(int n, double epsilon, int capQubits = tol::kMaxQubits);

/// (1/2)(n - log2(1 / (1 - 2 eps)^2)).
double ipLowerBound(int n, double epsilon);

/// Coherent IP protocols: Bob's register "y" holds y, the answer goes into
/// Bob's one-qubit register "ans". Alice's x enters through conditioned gates.
///
/// Alice writes x into a fresh register, sends it, and Bob adds x_i y_i into
/// the answer with a Toffoli per bit.
model::Protocol trivialIpProtocol(int n);
/// The trivial protocol followed by Bob rotating the answer by +/-theta about
/// X depending on y[0], with sin^2(theta/2) = eps. Every input is answered
/// correctly with probability exactly 1 - eps.
model::Protocol noisyIpProtocol(int n, double epsilon);

struct IpLayout {
  std::string yRegister = "y";
  std::string answerRegister = "ans";
};

struct TransmissionReport {
  model::Protocol transmission;
  double recoveryProbability = 0.0;  // min over x of Pr[Bob reads x]
  double meanRecovery = 0.0;
  double inputError = 0.0;           // max over (x, y) of Pr[answer != IP]
  double productResidual = 0.0;      // max distance of the answer from a product state
  double reversibilityResidual = 0.0;
  int forwardMA = 0;
  int forwardMB = 0;
};

/// Hadamards on y, the IP protocol, Z on the answer, the protocol run
/// backwards, Hadamards on y; Bob then reads y. Throws ValidationError when
/// the answer qubit ends entangled with the other registers for some basis
/// input or when the reverse does not restore the initial state.
TransmissionReport reduceIpToTransmission(const model::Protocol& ip, const IpLayout& layout = {},
                                          int capQubits = tol::kMaxQubits);

/// Rounds that undo p, starting from its final ledger: each send is returned
/// by the receiver, then the actor applies the inverse ops.
std::vector<model::Round> reverseRounds(const model::Protocol& p);

}  // namespace qcomm::ip
