#include "qcomm/ip.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "qcomm/gates.hpp"
#include "qcomm/protocols.hpp"

namespace qcomm::ip {

using model::GateOp;
using model::Message;
using model::Party;
using model::Protocol;
using model::Round;

namespace {

int parity(Message v) { return std::popcount(v) & 1; }

Message lowBits(int k) { return (Message{1} << k) - 1; }

void checkRange(int n, int t, int maxN) {
  if (n < 1 || n > maxN) throw ValidationError("n = " + std::to_string(n) + " outside 1.." + std::to_string(maxN));
  if (t < 0 || t > n) throw ValidationError("t = " + std::to_string(t) + " outside 0..n");
}

// Alice's classical message: (n - t)-bit prefix then the flag.
Message aliceMessage(int t, Message x, Message r) {
  const Message flag = (x & lowBits(t)) == r ? 1 : 0;
  return ((x >> t) << 1) | flag;
}

int bobAnswer(int t, Message message, Message y, Message r, int g) {
  const Message prefix = message >> 1;
  const bool flag = message & 1U;
  const int head = parity(prefix & (y >> t));
  return head ^ (flag ? parity(r & y & lowBits(t)) : g);
}

GateOp gate(const std::string& name, std::vector<int> targets, std::optional<int> bit = std::nullopt) {
  return GateOp{name, *gates::byName(name), std::move(targets), bit};
}

GateOp inverse(const GateOp& op) {
  GateOp inv = op;
  inv.matrix = op.matrix.adjoint();
  if (!inv.matrix.isApprox(op.matrix, 1e-15)) inv.name = "mat";
  return inv;
}

struct Step {
  Party actor;
  std::vector<GateOp> ops;
  std::vector<int> send;
};

std::vector<Round> pack(const std::vector<Step>& steps) {
  std::vector<Round> rounds;
  for (const auto& s : steps) {
    if (s.ops.empty() && s.send.empty()) continue;
    const bool merge = !rounds.empty() && rounds.back().actor == s.actor && (s.ops.empty() || rounds.back().send.empty());
    if (!merge) rounds.push_back(Round{s.actor, {}, {}});
    auto& r = rounds.back();
    r.ops.insert(r.ops.end(), s.ops.begin(), s.ops.end());
    r.send.insert(r.send.end(), s.send.begin(), s.send.end());
  }
  return rounds;
}

std::vector<Step> forwardSteps(const std::vector<Round>& rounds) {
  std::vector<Step> steps;
  for (const auto& r : rounds) {
    steps.push_back({r.actor, r.ops, {}});
    steps.push_back({r.actor, {}, r.send});
  }
  return steps;
}

std::vector<Step> reverseSteps(const std::vector<Round>& rounds) {
  std::vector<Step> steps;
  for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
    steps.push_back({model::other(it->actor), {}, it->send});
    std::vector<GateOp> ops;
    for (auto op = it->ops.rbegin(); op != it->ops.rend(); ++op) ops.push_back(inverse(*op));
    steps.push_back({it->actor, std::move(ops), {}});
  }
  return steps;
}

const model::Register& bobRegister(const Protocol& p, const std::string& name, int size) {
  const auto* r = p.findRegister(name);
  if (r == nullptr) throw ValidationError("missing register '" + name + "'");
  if (r->owner != Party::Bob) throw ValidationError("register '" + name + "' must start with Bob");
  if (r->size != size) throw ValidationError("register '" + name + "' must have " + std::to_string(size) + " qubits");
  return *r;
}

// Bob loads the basis state |y> into register y.
Round loadY(const model::Register& reg, Message y) {
  Round r{Party::Bob, {}, {}};
  for (int i = 0; i < reg.size; ++i) {
    if (model::messageBit(y, i, reg.size)) r.ops.push_back(gate("X", {reg.first + i}));
  }
  return r;
}

}  // namespace

int ipValue(const IpInstance& inst) {
  if (inst.n < 0 || inst.n > 63) throw ValidationError("n out of range");
  const Message mask = lowBits(inst.n);
  if ((inst.x & ~mask) != 0 || (inst.y & ~mask) != 0) throw ValidationError("input longer than n bits");
  return parity(inst.x & inst.y);
}

int suffixLength(double epsilon) {
  if (!(epsilon >= 0.0) || epsilon >= 0.5) throw ValidationError("epsilon must lie in [0, 1/2)");
  return static_cast<int>(std::floor(std::log2(1.0 / (1.0 - 2.0 * epsilon)) + 1e-12));
}

int classicalIpOutput(int n, int t, Message x, Message y, Message r, int g) {
  checkRange(n, t, 62);
  return bobAnswer(t, aliceMessage(t, x, r), y, r, g);
}

IpProtocolReport classicalIpProtocol(int n, int t) {
  checkRange(n, t, 8);
  IpProtocolReport rep;
  rep.n = n;
  rep.t = t;
  rep.classicalBits = n - t + 1;
  rep.quantumQubits = (rep.classicalBits + 1) / 2;
  rep.paddedBit = rep.classicalBits % 2 == 1;
  const std::uint64_t coins = std::uint64_t{2} << t;
  rep.worst = {coins, coins};
  rep.best = {0, coins};
  for (Message x = 0; x <= lowBits(n); ++x) {
    for (Message y = 0; y <= lowBits(n); ++y) {
      const int truth = parity(x & y);
      std::uint64_t correct = 0;
      for (Message r = 0; r <= lowBits(t); ++r) {
        for (int g = 0; g < 2; ++g) correct += bobAnswer(t, aliceMessage(t, x, r), y, r, g) == truth ? 1 : 0;
      }
      rep.worst.correct = std::min(rep.worst.correct, correct);
      rep.best.correct = std::max(rep.best.correct, correct);
    }
  }
  rep.successExact = rep.worst.value();
  rep.quantumSuccess = std::numeric_limits<double>::quiet_NaN();
  rep.epsilonTarget = 0.5 - std::ldexp(1.0, -t - 1);
  rep.lowerBoundQubits = ipLowerBound(n, rep.epsilonTarget);
  return rep;
}

IpProtocolReport quantumIpProtocol(int n, int t, int capQubits) {
  IpProtocolReport rep = classicalIpProtocol(n, t);
  const int q = rep.quantumQubits;
  if (2 * q > capQubits) {
    throw CapExceeded("superdense channel needs " + std::to_string(2 * q) + " qubits, cap is " +
                      std::to_string(capQubits));
  }
  const int pad = rep.paddedBit ? 1 : 0;
  const Protocol channel = protocols::superdense(q);
  // Bob's decoded message distribution for every transmitted message.
  std::vector<std::vector<std::pair<Message, double>>> received(std::size_t{1} << (2 * q));
  for (Message w = 0; w < received.size(); ++w) {
    const auto dist = model::outputDistribution(model::runProtocol(channel, w, capQubits), channel.outputs);
    for (Message v = 0; v < dist.size(); ++v) {
      if (dist[v] > 0.0) received[w].emplace_back(v, dist[v]);
    }
  }
  double worst = 1.0;
  const double coinWeight = std::ldexp(1.0, -t - 1);
  for (Message x = 0; x <= lowBits(n); ++x) {
    for (Message y = 0; y <= lowBits(n); ++y) {
      const int truth = parity(x & y);
      double success = 0.0;
      for (Message r = 0; r <= lowBits(t); ++r) {
        const Message sent = aliceMessage(t, x, r) << pad;
        for (const auto& [v, prob] : received[sent]) {
          for (int g = 0; g < 2; ++g) {
            if (bobAnswer(t, v >> pad, y, r, g) == truth) success += coinWeight * prob;
          }
        }
      }
      worst = std::min(worst, success);
    }
  }
  rep.quantumSuccess = worst;
  return rep;
}

IpProtocolReport ipProtocolForEpsilon(int n, double epsilon, int capQubits) {
  const int t = std::min(suffixLength(epsilon), n);
  IpProtocolReport rep = quantumIpProtocol(n, t, capQubits);
  rep.epsilonTarget = epsilon;
  rep.lowerBoundQubits = ipLowerBound(n, epsilon);
  return rep;
}

double ipLowerBound(int n, double epsilon) {
  if (!(epsilon >= 0.0) || epsilon >= 0.5) throw ValidationError("epsilon must lie in [0, 1/2)");
  return 0.5 * (n + 2.0 * std::log2(1.0 - 2.0 * epsilon));
}

Protocol trivialIpProtocol(int n) {
  if (n < 1) throw ValidationError("n must be positive");
  Protocol p = model::makeProtocol("ip_trivial_n" + std::to_string(n), n, {1.0});
  const int a = p.addRegister("a", Party::Alice, n);
  const int y = p.addRegister("y", Party::Bob, n);
  const int ans = p.addRegister("ans", Party::Bob, 1, model::Role::Output);
  Round send{Party::Alice, {}, {}};
  for (int i = 0; i < n; ++i) {
    send.ops.push_back(gate("X", {a + i}, i));
    send.send.push_back(a + i);
  }
  Round compute{Party::Bob, {}, {}};
  for (int i = 0; i < n; ++i) compute.ops.push_back(gate("CCX", {a + i, y + i, ans}));
  p.rounds = {send, compute};
  p.outputs = {ans};
  return p;
}

Protocol noisyIpProtocol(int n, double epsilon) {
  if (!(epsilon >= 0.0) || epsilon > 1.0) throw ValidationError("epsilon must lie in [0, 1]");
  Protocol p = trivialIpProtocol(n);
  p.name = "ip_noisy_n" + std::to_string(n);
  const double theta = 2.0 * std::asin(std::sqrt(epsilon));
  CMat u = CMat::Zero(4, 4);
  u.topLeftCorner(2, 2) = gates::RX(theta);
  u.bottomRightCorner(2, 2) = gates::RX(-theta);
  const int y = p.findRegister("y")->first;
  const int ans = p.findRegister("ans")->first;
  p.rounds.back().ops.push_back(GateOp{"mat", u, {y, ans}, std::nullopt});
  return p;
}

std::vector<Round> reverseRounds(const Protocol& p) { return pack(reverseSteps(p.rounds)); }

TransmissionReport reduceIpToTransmission(const Protocol& ip, const IpLayout& layout, int capQubits) {
  const int n = ip.n;
  if (n < 1 || n > 8) throw ValidationError("reduction needs 1 <= n <= 8");
  const auto& yReg = bobRegister(ip, layout.yRegister, n);
  const auto& ansReg = bobRegister(ip, layout.answerRegister, 1);
  const int ans = ansReg.first;
  const auto ledger = model::finalLedger(ip);
  const Party holder = ledger.owner[static_cast<std::size_t>(ans)];

  TransmissionReport rep;
  rep.forwardMA = ledger.mA;
  rep.forwardMB = ledger.mB;

  const int total = ip.qubitCount();
  std::vector<int> ansLast;
  for (int q = 0; q < total; ++q) {
    if (q != ans) ansLast.push_back(q);
  }
  ansLast.push_back(ans);
  const auto backward = reverseRounds(ip);

  for (Message x = 0; x <= lowBits(n); ++x) {
    for (Message y = 0; y <= lowBits(n); ++y) {
      Protocol run = ip;
      run.rounds.insert(run.rounds.begin(), loadY(yReg, y));
      Protocol prep = ip;
      prep.rounds = {loadY(yReg, y)};
      const CVec start = model::runProtocol(prep, x, capQubits).vec;
      const auto after = model::runProtocol(run, x, capQubits);
      const CVec ordered = linalg::permuteQubits(after.vec, ansLast);
      const Eigen::Map<const CMat> split(ordered.data(), 2, ordered.size() / 2);
      const RVec sv = Eigen::JacobiSVD<CMat>(split).singularValues();
      rep.productResidual = std::max(rep.productResidual, sv(1));
      const CMat rhoAns = linalg::partialTrace<double>(after.vec, std::vector<int>{ans});
      const int truth = parity(x & y);
      rep.inputError = std::max(rep.inputError, 1.0 - rhoAns(truth, truth).real());

      model::JointState back = after;
      for (const auto& r : backward) back = model::executeRound(back, r, x, n);
      rep.reversibilityResidual = std::max(rep.reversibilityResidual, (back.vec - start).cwiseAbs().maxCoeff());
    }
  }
  if (rep.productResidual > tol::kCertificate) {
    throw ValidationError("answer qubit is entangled with the other registers (residual " +
                          std::to_string(rep.productResidual) + ")");
  }
  if (rep.reversibilityResidual > tol::kCertificate) {
    throw ValidationError("reverse protocol does not restore the initial state (residual " +
                          std::to_string(rep.reversibilityResidual) + ")");
  }

  std::vector<GateOp> hadamards;
  for (int i = 0; i < n; ++i) hadamards.push_back(gate("H", {yReg.first + i}));
  std::vector<Step> steps{{Party::Bob, hadamards, {}}};
  for (auto& s : forwardSteps(ip.rounds)) steps.push_back(std::move(s));
  steps.push_back({holder, {gate("Z", {ans})}, {}});
  for (auto& s : reverseSteps(ip.rounds)) steps.push_back(std::move(s));
  steps.push_back({Party::Bob, hadamards, {}});

  Protocol& t = rep.transmission;
  t = ip;
  t.name = ip.name + "_transmission";
  t.rounds = pack(steps);
  t.outputs.clear();
  for (int i = 0; i < n; ++i) t.outputs.push_back(yReg.first + i);

  double lo = 1.0;
  double sum = 0.0;
  for (Message x = 0; x <= lowBits(n); ++x) {
    const auto dist = model::outputDistribution(model::runProtocol(t, x, capQubits), t.outputs);
    lo = std::min(lo, dist[x]);
    sum += dist[x];
  }
  rep.recoveryProbability = lo;
  rep.meanRecovery = sum / static_cast<double>(std::size_t{1} << n);
  return rep;
}

}  // namespace qcomm::ip
