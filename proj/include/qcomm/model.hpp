#pragma once

// Two-party communication model: a joint pure state over every qubit either
// player will ever touch, an ownership ledger, and rounds made of a local
// unitary followed by a qubit transfer. Sending only relabels ownership; the
// amplitudes are never permuted. All measurement is deferred to the end.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcomm/linalg.hpp"

namespace qcomm::model {

enum class Party { Alice, Bob };
enum class Role { Entanglement, Work, Output };

inline Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }
std::string name(Party p);
std::string name(Role r);

/// Message bits are packed MSB-first: bit i of an n-bit message x is
/// (x >> (n - 1 - i)) & 1, matching the qubit ordering.
using Message = std::uint64_t;

inline bool messageBit(Message x, int i, int n) { return (x >> (n - 1 - i)) & 1U; }

struct Register {
  std::string name;
  Party owner = Party::Alice;
  int size = 0;
  int first = 0;  // global index of qubit 0 of the register
  Role role = Role::Work;
};

/// One gate application. When inputBit is set the gate acts only if that bit
/// of Alice's message is 1.
struct GateOp {
  std::string name;  // vocabulary name, or "mat" for an explicit matrix
  CMat matrix;
  std::vector<int> targets;
  std::optional<int> inputBit;
};

/// Local unitary (the product of ops, applied in order) followed by a send.
struct Round {
  Party actor = Party::Alice;
  std::vector<GateOp> ops;
  std::vector<int> send;
};

/// Qubit layout: when E > 0 the registers "ea" (Alice, qubits 0..E-1) and
/// "eb" (Bob, qubits E..2E-1) hold the shared state
/// sum_a sqrt(lambda_a) |a>_ea |a>_eb; every other qubit starts in |0>.
struct Protocol {
  std::string name = "p";
  int n = 0;
  int E = 0;
  std::vector<double> schmidt{1.0};
  std::vector<Register> registers;
  std::vector<Round> rounds;
  std::vector<int> outputs;

  int qubitCount() const;
  const Register* findRegister(const std::string& name) const;
  /// Appends a register after the existing ones and returns its first qubit.
  int addRegister(const std::string& name, Party owner, int size, Role role = Role::Work);
  /// "reg[i]" for a global qubit index.
  std::string qubitName(int q) const;
};

/// Starts a protocol whose shared state has the given Schmidt coefficients
/// (length 2^E). {1.0} means no prior entanglement.
Protocol makeProtocol(std::string name, int n, std::vector<double> schmidt);
/// E shared EPR pairs.
Protocol makeEprProtocol(std::string name, int n, int E);

struct Ledger {
  std::vector<Party> owner;
  std::vector<Role> role;
  int mA = 0;  // qubits sent Alice -> Bob so far
  int mB = 0;  // qubits sent Bob -> Alice so far

  int qA() const;
  int qB() const;
  std::vector<int> held(Party p) const;
};

struct JointState {
  CVec vec;
  Ledger ledger;
};

/// Ledger before any round.
Ledger initialLedger(const Protocol& p);

/// Checks the round against the ledger and returns the ledger after it.
/// Throws ValidationError on gates over non-owned qubits, input-conditioned
/// gates by Bob, or sends of non-owned qubits.
Ledger advanceLedger(const Ledger& l, const Round& r, int n);

/// Ledger after every round (validates each one).
Ledger finalLedger(const Protocol& p);

/// Checks the Schmidt coefficients; throws ValidationError.
void checkSchmidt(const std::vector<double>& lambda, int E);

JointState initialState(const Protocol& p, int capQubits = tol::kMaxQubits);
JointState executeRound(const JointState& s, const Round& r, Message x, int n);
JointState runProtocol(const Protocol& p, Message x, int capQubits = tol::kMaxQubits);

/// Born-rule distribution of the output qubits (output 0 is the MSB of the
/// outcome index). Every output qubit must be held by Bob.
std::vector<double> outputDistribution(const JointState& s, const std::vector<int>& outputs);

/// Exact Pr[Y = X] for X uniform over {0,1}^n.
double successProbability(const Protocol& p, int capQubits = tol::kMaxQubits);

}  // namespace qcomm::model
