#include "qcomm/protocols.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "qcomm/gates.hpp"

namespace qcomm::protocols {

using model::GateOp;
using model::Party;
using model::Protocol;
using model::Round;

namespace {

GateOp gate(const std::string& name, std::vector<int> targets, std::optional<int> inputBit = std::nullopt) {
  return GateOp{name, *gates::byName(name), std::move(targets), inputBit};
}

void addSuperdenseRounds(Protocol& p, int m) {
  const int ea = p.findRegister("ea")->first;
  const int eb = p.findRegister("eb")->first;
  Round encode{Party::Alice, {}, {}};
  for (int i = 0; i < m; ++i) {
    encode.ops.push_back(gate("Z", {ea + i}, 2 * i));
    encode.ops.push_back(gate("X", {ea + i}, 2 * i + 1));
  }
  for (int i = 0; i < m; ++i) encode.send.push_back(ea + i);
  Round decode{Party::Bob, {}, {}};
  for (int i = 0; i < m; ++i) {
    decode.ops.push_back(gate("CNOT", {ea + i, eb + i}));
    decode.ops.push_back(gate("H", {ea + i}));
  }
  p.rounds.push_back(std::move(encode));
  p.rounds.push_back(std::move(decode));
  for (int i = 0; i < m; ++i) {
    p.outputs.push_back(ea + i);
    p.outputs.push_back(eb + i);
  }
}

std::vector<int> sample(const std::vector<int>& pool, int k, std::mt19937_64& rng) {
  std::vector<int> copy = pool;
  std::shuffle(copy.begin(), copy.end(), rng);
  copy.resize(static_cast<std::size_t>(std::min<int>(k, static_cast<int>(copy.size()))));
  return copy;
}

int uniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

GateOp randomGate(const std::vector<int>& held, int maxQubits, std::mt19937_64& rng,
                  std::optional<int> inputBit = std::nullopt) {
  const int k = uniformInt(rng, 1, std::min<int>(maxQubits, static_cast<int>(held.size())));
  return GateOp{"mat", linalg::randomUnitary(k, rng()), sample(held, k, rng), inputBit};
}

std::optional<Protocol> tryBuild(std::uint64_t seed, std::mt19937_64& rng, const RandomOptions& opt) {
  const int n = opt.n;
  const int targetA = opt.mA >= 0 ? opt.mA : uniformInt(rng, 0, 2);
  const int targetB = uniformInt(rng, 0, opt.maxMB);
  const int E = uniformInt(rng, 0, opt.maxE);
  int wa = uniformInt(rng, 0, 2);
  int wb = std::max(0, n - E - targetA + targetB) + uniformInt(rng, 0, 1);
  wa = std::max(wa, targetA - E);
  wb = std::max(wb, targetB - E);
  if (2 * E + wa + wb > opt.maxQubits) return std::nullopt;

  std::vector<double> lambda(static_cast<std::size_t>(linalg::dimOf(E)), 1.0);
  if (opt.nonUniformSchmidt && E > 0) {
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    for (auto& l : lambda) l = weight(rng);
  }
  double sum = 0.0;
  for (double l : lambda) sum += l;
  for (auto& l : lambda) l /= sum;

  Protocol p = model::makeProtocol("random_" + std::to_string(seed), n, lambda);
  if (wa > 0) p.addRegister("a", Party::Alice, wa);
  if (wb > 0) p.addRegister("b", Party::Bob, wb);

  // Spread the sends over the rounds of each party.
  std::vector<Party> actors;
  Party actor = uniformInt(rng, 0, 1) == 0 ? Party::Alice : Party::Bob;
  for (int r = 0; r < opt.rounds; ++r) {
    actors.push_back(actor);
    actor = model::other(actor);
  }
  std::vector<int> sends(actors.size(), 0);
  auto spread = [&](Party who, int count) {
    std::vector<std::size_t> mine;
    for (std::size_t r = 0; r < actors.size(); ++r) {
      if (actors[r] == who) mine.push_back(r);
    }
    if (mine.empty()) return;
    for (int i = 0; i < count; ++i) ++sends[mine[static_cast<std::size_t>(uniformInt(rng, 0, static_cast<int>(mine.size()) - 1))]];
  };
  spread(Party::Alice, targetA);
  spread(Party::Bob, targetB);

  model::Ledger ledger = model::initialLedger(p);
  bool inputsPlaced = false;
  for (std::size_t r = 0; r < actors.size(); ++r) {
    Round round{actors[r], {}, {}};
    const auto held = ledger.held(round.actor);
    if (!held.empty()) {
      const int count = uniformInt(rng, 1, 2);
      for (int g = 0; g < count; ++g) round.ops.push_back(randomGate(held, opt.maxGateQubits, rng));
      if (round.actor == Party::Alice && !inputsPlaced) {
        for (int bit = 0; bit < n; ++bit) round.ops.push_back(randomGate(held, 2, rng, bit));
        inputsPlaced = true;
      }
    }
    round.send = sample(held, sends[r], rng);
    ledger = model::advanceLedger(ledger, round, n);
    p.rounds.push_back(std::move(round));
  }

  Round decode{Party::Bob, {}, {}};
  const auto bobHeld = ledger.held(Party::Bob);
  if (static_cast<int>(bobHeld.size()) < n) return std::nullopt;
  const int count = uniformInt(rng, 1, 3);
  for (int g = 0; g < count; ++g) decode.ops.push_back(randomGate(bobHeld, opt.maxGateQubits, rng));
  p.rounds.push_back(std::move(decode));
  p.outputs = sample(bobHeld, n, rng);
  return p;
}

}  // namespace

Protocol superdense(int m) {
  if (m < 1) throw ValidationError("superdense coding needs m >= 1");
  Protocol p = model::makeEprProtocol("superdense_m" + std::to_string(m), 2 * m, m);
  addSuperdenseRounds(p, m);
  return p;
}

Protocol superdensePlusGuess(int m, int guessed) {
  if (m < 1 || guessed < 0) throw ValidationError("superdensePlusGuess needs m >= 1, guessed >= 0");
  Protocol p = model::makeEprProtocol("superdense_m" + std::to_string(m) + "_guess" + std::to_string(guessed),
                                      2 * m + guessed, m);
  addSuperdenseRounds(p, m);
  if (guessed > 0) {
    const int g = p.addRegister("g", Party::Bob, guessed);
    for (int i = 0; i < guessed; ++i) p.outputs.push_back(g + i);
  }
  return p;
}

Protocol randomProtocol(std::uint64_t seed, const RandomOptions& options) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto p = tryBuild(seed, rng, options);
    if (p && certificatePeakEntries(*p) <= options.certificateBudget) return *p;
  }
  throw InvariantViolation("randomProtocol: no protocol fits the requested options");
}

long long certificatePeakEntries(const Protocol& p) {
  const auto owners = model::initialLedger(p).owner;
  const int total = p.qubitCount();
  int qA = 0;
  for (int q = 2 * p.E; q < total; ++q) {
    if (owners[static_cast<std::size_t>(q)] == Party::Alice) ++qA;
  }
  int qB = total - qA;
  qB += std::max(0, qA - qB);
  int mB = 0;
  long long peak = 0;
  auto update = [&] {
    const int domain = qB + 2 * mB;
    peak = std::max({peak, 1LL << (qB + domain), 1LL << (domain + qA)});
  };
  update();
  if (p.E > 0) {
    qB -= p.E;
    qA += p.E;
    mB += p.E;
    update();
  }
  for (const auto& r : p.rounds) {
    const int sent = static_cast<int>(r.send.size());
    if (r.actor == Party::Alice) {
      qA -= sent;
      qB += sent;
    } else {
      qB -= sent;
      qA += sent;
      mB += sent;
    }
    update();
  }
  return peak;
}

}  // namespace qcomm::protocols
