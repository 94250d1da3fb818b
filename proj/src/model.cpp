#include "qcomm/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qcomm::model {

std::string name(Party p) { return p == Party::Alice ? "alice" : "bob"; }

std::string name(Role r) {
  switch (r) {
    case Role::Entanglement:
      return "entanglement";
    case Role::Work:
      return "work";
    case Role::Output:
      return "output";
  }
  return "work";
}

int Protocol::qubitCount() const {
  int total = 0;
  for (const auto& r : registers) total = std::max(total, r.first + r.size);
  return total;
}

const Register* Protocol::findRegister(const std::string& regName) const {
  for (const auto& r : registers) {
    if (r.name == regName) return &r;
  }
  return nullptr;
}

int Protocol::addRegister(const std::string& regName, Party owner, int size, Role role) {
  if (findRegister(regName) != nullptr) {
    throw ValidationError("register '" + regName + "' declared twice");
  }
  const int first = qubitCount();
  registers.push_back(Register{regName, owner, size, first, role});
  return first;
}

std::string Protocol::qubitName(int q) const {
  for (const auto& r : registers) {
    if (q >= r.first && q < r.first + r.size) {
      return r.name + "[" + std::to_string(q - r.first) + "]";
    }
  }
  return "q" + std::to_string(q);
}

void checkSchmidt(const std::vector<double>& lambda, int E) {
  const auto size = static_cast<Eigen::Index>(lambda.size());
  if (size == 0 || (size & (size - 1)) != 0) {
    throw ValidationError("Schmidt coefficient list length " + std::to_string(lambda.size()) +
                          " is not a power of two");
  }
  if (size != linalg::dimOf(E)) {
    throw ValidationError("Schmidt coefficient list length " + std::to_string(lambda.size()) +
                          " does not match E = " + std::to_string(E));
  }
  for (double l : lambda) {
    if (!(l >= 0.0)) throw ValidationError("Schmidt coefficients must be non-negative");
  }
  const double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  if (std::abs(sum - 1.0) > tol::kNorm) {
    std::ostringstream msg;
    msg << "Schmidt coefficients sum to " << sum << ", expected 1";
    throw ValidationError(msg.str());
  }
}

Protocol makeProtocol(std::string name, int n, std::vector<double> schmidt) {
  const auto size = static_cast<Eigen::Index>(schmidt.size());
  if (size == 0 || (size & (size - 1)) != 0) {
    throw ValidationError("Schmidt coefficient list length " + std::to_string(schmidt.size()) +
                          " is not a power of two");
  }
  Protocol p;
  p.name = std::move(name);
  p.n = n;
  p.E = linalg::qubitCount(size);
  p.schmidt = std::move(schmidt);
  checkSchmidt(p.schmidt, p.E);
  if (p.E > 0) {
    p.addRegister("ea", Party::Alice, p.E, Role::Entanglement);
    p.addRegister("eb", Party::Bob, p.E, Role::Entanglement);
  }
  return p;
}

Protocol makeEprProtocol(std::string name, int n, int E) {
  const auto d = static_cast<std::size_t>(linalg::dimOf(E));
  return makeProtocol(std::move(name), n, std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

int Ledger::qA() const {
  return static_cast<int>(std::count(owner.begin(), owner.end(), Party::Alice));
}

int Ledger::qB() const {
  return static_cast<int>(std::count(owner.begin(), owner.end(), Party::Bob));
}

std::vector<int> Ledger::held(Party p) const {
  std::vector<int> out;
  for (std::size_t q = 0; q < owner.size(); ++q) {
    if (owner[q] == p) out.push_back(static_cast<int>(q));
  }
  return out;
}

Ledger initialLedger(const Protocol& p) {
  Ledger l;
  const auto total = static_cast<std::size_t>(p.qubitCount());
  l.owner.assign(total, Party::Alice);
  l.role.assign(total, Role::Work);
  for (const auto& r : p.registers) {
    for (int i = 0; i < r.size; ++i) {
      l.owner[static_cast<std::size_t>(r.first + i)] = r.owner;
      l.role[static_cast<std::size_t>(r.first + i)] = r.role;
    }
  }
  for (int q : p.outputs) {
    if (q >= 0 && static_cast<std::size_t>(q) < total) l.role[static_cast<std::size_t>(q)] = Role::Output;
  }
  return l;
}

namespace {

void requireOwned(const Ledger& l, Party actor, int q, const char* what) {
  if (q < 0 || static_cast<std::size_t>(q) >= l.owner.size()) {
    throw ValidationError(std::string(what) + " on unknown qubit " + std::to_string(q));
  }
  if (l.owner[static_cast<std::size_t>(q)] != actor) {
    throw ValidationError(std::string(what) + " by " + name(actor) + " on qubit " +
                          std::to_string(q) + " held by " +
                          name(l.owner[static_cast<std::size_t>(q)]));
  }
}

}  // namespace

Ledger advanceLedger(const Ledger& l, const Round& r, int n) {
  for (const auto& op : r.ops) {
    if (op.inputBit) {
      if (r.actor == Party::Bob) throw ValidationError("input-conditioned gate by Bob");
      if (*op.inputBit < 0 || *op.inputBit >= n) {
        throw ValidationError("gate conditioned on x[" + std::to_string(*op.inputBit) +
                              "] but the message has " + std::to_string(n) + " bits");
      }
    }
    for (int q : op.targets) requireOwned(l, r.actor, q, "gate");
  }
  Ledger next = l;
  for (std::size_t i = 0; i < r.send.size(); ++i) {
    const int q = r.send[i];
    requireOwned(next, r.actor, q, "send");
    next.owner[static_cast<std::size_t>(q)] = other(r.actor);
  }
  const int sent = static_cast<int>(r.send.size());
  (r.actor == Party::Alice ? next.mA : next.mB) += sent;
  return next;
}

Ledger finalLedger(const Protocol& p) {
  Ledger l = initialLedger(p);
  for (const auto& r : p.rounds) l = advanceLedger(l, r, p.n);
  return l;
}

JointState initialState(const Protocol& p, int capQubits) {
  checkSchmidt(p.schmidt, p.E);
  const int total = p.qubitCount();
  const int cap = std::min(capQubits, tol::kMaxQubits);
  if (total > cap) {
    throw CapExceeded("protocol uses " + std::to_string(total) + " qubits, cap is " +
                      std::to_string(cap));
  }
  CVec shared = CVec::Zero(linalg::dimOf(2 * p.E));
  for (Eigen::Index a = 0; a < linalg::dimOf(p.E); ++a) {
    shared(a * linalg::dimOf(p.E) + a) = std::sqrt(p.schmidt[static_cast<std::size_t>(a)]);
  }
  JointState s;
  s.vec = linalg::tensor(shared, linalg::basisState(total - 2 * p.E, 0));
  s.ledger = initialLedger(p);
  return s;
}

JointState executeRound(const JointState& s, const Round& r, Message x, int n) {
  JointState out;
  out.ledger = advanceLedger(s.ledger, r, n);
  out.vec = s.vec;
  for (const auto& op : r.ops) {
    if (op.inputBit && !messageBit(x, *op.inputBit, n)) continue;
    linalg::applyOnInPlace(op.matrix, op.targets, out.vec);
  }
  return out;
}

JointState runProtocol(const Protocol& p, Message x, int capQubits) {
  if (p.n < 64 && x >= (Message{1} << p.n)) {
    throw DimensionError("message does not fit in " + std::to_string(p.n) + " bits");
  }
  JointState s = initialState(p, capQubits);
  for (const auto& r : p.rounds) s = executeRound(s, r, x, p.n);
  return s;
}

std::vector<double> outputDistribution(const JointState& s, const std::vector<int>& outputs) {
  const int k = linalg::qubitCount(s.vec.size());
  for (int q : outputs) {
    if (q < 0 || q >= k) throw ValidationError("output qubit " + std::to_string(q) + " out of range");
    if (s.ledger.owner[static_cast<std::size_t>(q)] != Party::Bob) {
      throw ValidationError("output qubit " + std::to_string(q) + " is not held by Bob");
    }
  }
  linalg::detail::checkTargets(outputs, k);
  const int nOut = static_cast<int>(outputs.size());
  std::vector<double> dist(static_cast<std::size_t>(linalg::dimOf(nOut)), 0.0);
  for (Eigen::Index idx = 0; idx < s.vec.size(); ++idx) {
    std::size_t outcome = 0;
    for (int i = 0; i < nOut; ++i) {
      outcome = (outcome << 1) | (linalg::qubitBit(idx, outputs[static_cast<std::size_t>(i)], k) ? 1U : 0U);
    }
    dist[outcome] += std::norm(s.vec(idx));
  }
  return dist;
}

double successProbability(const Protocol& p, int capQubits) {
  if (p.n > 16) throw CapExceeded("message length " + std::to_string(p.n) + " too large to enumerate");
  if (static_cast<int>(p.outputs.size()) != p.n) {
    throw ValidationError("protocol declares " + std::to_string(p.outputs.size()) +
                          " output qubits for a " + std::to_string(p.n) + "-bit message");
  }
  const Message count = Message{1} << p.n;
  double total = 0.0;
  for (Message x = 0; x < count; ++x) {
    const auto dist = outputDistribution(runProtocol(p, x, capQubits), p.outputs);
    total += dist[static_cast<std::size_t>(x)];
  }
  return total / static_cast<double>(count);
}

}  // namespace qcomm::model
