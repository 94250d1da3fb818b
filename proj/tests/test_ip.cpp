#include <doctest.h>

#include <cmath>

#include "qcomm/certificate.hpp"
#include "qcomm/coding.hpp"
#include "qcomm/gates.hpp"
#include "qcomm/ip.hpp"
#include "test_util.hpp"

using namespace qcomm;
using namespace qcomm::ip;

namespace {

// Oracle: IP from explicit bit lists.
int ipFromBits(const std::vector<int>& x, const std::vector<int>& y) {
  int v = 0;
  for (std::size_t i = 0; i < x.size(); ++i) v ^= x[i] & y[i];
  return v;
}

model::Message pack(const std::vector<int>& bits) {
  model::Message v = 0;
  for (int b : bits) v = (v << 1) | static_cast<model::Message>(b);
  return v;
}

}  // namespace

TEST_CASE("ipValue") {
  CHECK(ipValue({4, 0b0000, 0b1011}) == 0);
  CHECK(ipValue({2, 0b11, 0b11}) == 0);
  CHECK(ipValue({4, 0b1011, 0b1101}) == 0);
  CHECK(ipValue({3, 0b101, 0b100}) == 1);
  for (model::Message x = 0; x < 16; ++x) {
    for (model::Message y = 0; y < 16; ++y) {
      std::vector<int> xb;
      std::vector<int> yb;
      for (int i = 3; i >= 0; --i) {
        xb.push_back(static_cast<int>((x >> i) & 1));
        yb.push_back(static_cast<int>((y >> i) & 1));
      }
      REQUIRE(pack(xb) == x);
      CHECK(ipValue({4, x, y}) == ipFromBits(xb, yb));
    }
  }
  CHECK_THROWS_AS(ipValue({2, 0b100, 0}), ValidationError);
}

TEST_CASE("suffixLength and ipLowerBound") {
  CHECK(suffixLength(0.0) == 0);
  CHECK(suffixLength(0.25) == 1);
  CHECK(suffixLength(0.375) == 2);
  CHECK(suffixLength(0.3) == 1);
  CHECK_THROWS_AS(suffixLength(0.5), ValidationError);

  CHECK(ipLowerBound(4, 0.0) == 2.0);
  CHECK(ipLowerBound(4, 0.25) == 1.0);
  CHECK_THROWS_AS(ipLowerBound(4, 0.5), ValidationError);
  CHECK_THROWS_AS(ipLowerBound(4, 0.7), ValidationError);
}

TEST_CASE("classicalIpProtocol examples") {
  const auto a = classicalIpProtocol(4, 1);
  CHECK(a.worst.correct * 4 == a.worst.total * 3);
  CHECK(a.successExact == 0.75);
  CHECK(a.classicalBits == 4);

  for (int n = 1; n <= 4; ++n) {
    const auto b = classicalIpProtocol(n, n);
    CHECK(b.successExact == 0.5 + std::ldexp(1.0, -n - 1));
    CHECK(b.classicalBits == 1);
  }

  const auto full = classicalIpProtocol(3, 0);
  CHECK(full.successExact == 1.0);
  CHECK(full.classicalBits == 4);

  CHECK_THROWS_AS(classicalIpProtocol(3, 4), ValidationError);
  CHECK_THROWS_AS(classicalIpProtocol(0, 0), ValidationError);
}

TEST_CASE("classicalIpProtocol success is input independent and exact") {
  for (int n = 1; n <= 5; ++n) {
    for (int t = 0; t <= n; ++t) {
      const auto r = classicalIpProtocol(n, t);
      CHECK(r.worst.correct == r.best.correct);
      // 1/2 + 2^-(t+1) as a fraction over 2^(t+1) coins: (2^t + 1) / 2^(t+1).
      CHECK(r.worst.total == (std::uint64_t{2} << t));
      CHECK(r.worst.correct == (std::uint64_t{1} << t) + 1);
      CHECK(r.classicalBits == n - t + 1);
      CHECK(r.successExact >= 1.0 - r.epsilonTarget - 1e-12);
    }
  }
}

TEST_CASE("classicalIpOutput is right whenever the flag is set") {
  for (model::Message x = 0; x < 16; ++x) {
    for (model::Message y = 0; y < 16; ++y) {
      const model::Message r = x & 0b11;
      for (int g = 0; g < 2; ++g) CHECK(classicalIpOutput(4, 2, x, y, r, g) == ipValue({4, x, y}));
    }
  }
}

TEST_CASE("quantumIpProtocol examples") {
  // n - t + 1 = 4 classical bits fit in 2 qubits.
  const auto a = quantumIpProtocol(4, 1);
  CHECK(a.quantumQubits == 2);
  CHECK_FALSE(a.paddedBit);
  CHECK(a.quantumSuccess == doctest::Approx(0.75).epsilon(1e-9));

  const auto odd = quantumIpProtocol(3, 1);
  CHECK(odd.quantumQubits == 2);
  CHECK(odd.paddedBit);
  CHECK(odd.quantumSuccess == doctest::Approx(0.75).epsilon(1e-9));

  const auto b = quantumIpProtocol(2, 1);
  CHECK(b.quantumQubits == 1);
  CHECK_FALSE(b.paddedBit);
  CHECK(b.quantumSuccess == doctest::Approx(0.75).epsilon(1e-9));

  const auto c = quantumIpProtocol(1, 1);
  CHECK(c.quantumQubits == 1);
  CHECK(c.quantumSuccess == doctest::Approx(0.75).epsilon(1e-9));

  CHECK_THROWS_AS(quantumIpProtocol(4, 1, 3), CapExceeded);
}

TEST_CASE("quantum and classical IP protocols agree") {
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t <= n; ++t) {
      const auto r = quantumIpProtocol(n, t);
      CHECK(std::abs(r.quantumSuccess - r.successExact) <= 1e-9);
      CHECK(r.quantumQubits == (n - t + 2) / 2);
    }
  }
}

TEST_CASE("the IP cost is sandwiched between the lower and upper bounds") {
  for (int n = 2; n <= 4; ++n) {
    for (int t = 1; t <= n; ++t) {
      const double eps = 0.5 - std::ldexp(1.0, -t - 1);
      const auto r = ipProtocolForEpsilon(n, eps);
      CHECK(r.t == t);
      const double upper = 0.5 * (n - std::log2(1.0 / (1.0 - 2.0 * eps)) + 1.0) + 0.5;
      CHECK(ipLowerBound(n, eps) <= r.quantumQubits + 1e-12);
      CHECK(r.quantumQubits <= upper + 1e-12);
      CHECK(r.successExact >= 1.0 - eps - 1e-12);
    }
  }
}

TEST_CASE("reduction of the exact trivial protocol") {
  for (int n = 1; n <= 3; ++n) {
    const auto rep = reduceIpToTransmission(trivialIpProtocol(n));
    CHECK(rep.recoveryProbability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.inputError <= 1e-12);
    CHECK(rep.productResidual <= 1e-12);
    CHECK(rep.reversibilityResidual <= 1e-12);
    const auto ledger = model::finalLedger(rep.transmission);
    CHECK(ledger.mA == rep.forwardMA + rep.forwardMB);
    CHECK(ledger.mB == rep.forwardMA + rep.forwardMB);
    CHECK(rep.recoveryProbability <= coding::boundRhs(n, ledger.mA) + 1e-9);
  }
}

TEST_CASE("reduction of the noisy protocol recovers with probability (1 - 2 eps)^2") {
  for (double eps : {0.0, 0.05, 0.1, 0.2}) {
    const auto p = noisyIpProtocol(2, eps);
    const auto rep = reduceIpToTransmission(p);
    CHECK(rep.inputError == doctest::Approx(eps).epsilon(1e-12));
    CHECK(std::abs(rep.recoveryProbability - (1 - 2 * eps) * (1 - 2 * eps)) <= 1e-9);
    CHECK(std::abs(rep.meanRecovery - rep.recoveryProbability) <= 1e-9);
  }
  const auto three = reduceIpToTransmission(noisyIpProtocol(3, 0.1));
  CHECK(std::abs(three.recoveryProbability - 0.64) <= 1e-9);
}

TEST_CASE("reduction outputs pass the certificate check") {
  for (int n = 1; n <= 2; ++n) {
    const auto rep = reduceIpToTransmission(noisyIpProtocol(n, 0.1));
    for (model::Message x = 0; x < (model::Message{1} << n); ++x) {
      const auto c = cert::certifyProtocol(rep.transmission, x);
      CHECK(c.residual <= 1e-8);
    }
  }
}

TEST_CASE("reduction rejects protocols that entangle the answer") {
  auto p = trivialIpProtocol(2);
  const int junk = p.addRegister("junk", model::Party::Bob, 1);
  const int ans = p.findRegister("ans")->first;
  p.rounds.back().ops.push_back(model::GateOp{"H", gates::H(), {junk}, std::nullopt});
  p.rounds.back().ops.push_back(model::GateOp{"CNOT", gates::CNOT(), {junk, ans}, std::nullopt});
  CHECK_THROWS_AS(reduceIpToTransmission(p), ValidationError);

  auto unnamed = trivialIpProtocol(2);
  CHECK_THROWS_AS(reduceIpToTransmission(unnamed, IpLayout{"z", "ans"}), ValidationError);
}

TEST_CASE("reverseRounds undoes a random protocol") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto p = trivialIpProtocol(2);
    const int a = p.findRegister("a")->first;
    p.rounds.front().ops.push_back(model::GateOp{"mat", linalg::randomUnitary(2, seed), {a, a + 1}, std::nullopt});
    p.rounds.front().ops.push_back(model::GateOp{"S", gates::S(), {a}, 1});
    for (model::Message x = 0; x < 4; ++x) {
      auto s = model::runProtocol(p, x);
      for (const auto& r : reverseRounds(p)) s = model::executeRound(s, r, x, p.n);
      CHECK(qcomm::testing::maxDiff(s.vec, model::initialState(p).vec) < 1e-12);
      CHECK(s.ledger.owner == model::initialLedger(p).owner);
    }
  }
}
