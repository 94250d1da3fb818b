#include "qcomm/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcomm::cert {

using linalg::dimOf;
using Eigen::Index;

CVec Certificate::state() const {
  const CMat joint = lambda * phis;  // column a is Lambda phi_a
  return Eigen::Map<const CVec>(joint.data(), joint.size());
}

double Certificate::traceResidual() const {
  const double target = std::ldexp(1.0, 2 * mA);
  return std::abs(traceIdentity() - target) / target;
}

LocalUnitary LocalUnitary::dense(const CMat& u) {
  const int k = linalg::qubitCount(u.rows());
  std::vector<int> all(static_cast<std::size_t>(k));
  std::iota(all.begin(), all.end(), 0);
  return LocalUnitary{{LocalGate{u, all}}, {}};
}

void LocalUnitary::applyLeft(CMat& m) const {
  for (const auto& g : gates) linalg::applyOnInPlace(g.matrix, g.positions, m);
  if (!order.empty()) m = linalg::permuteQubits(m, order);
}

CMat LocalUnitary::matrix(int k) const {
  CMat m = linalg::identity(k);
  applyLeft(m);
  return m;
}

namespace {

void requireFamily(const CMat& phis) {
  linalg::qubitCount(phis.rows());
  linalg::qubitCount(phis.cols());
  if (phis.cols() > phis.rows()) {
    throw DimensionError("family of " + std::to_string(phis.cols()) + " states cannot be orthonormal in dimension " +
                         std::to_string(phis.rows()));
  }
  if (linalg::orthonormalityDefect(phis) > tol::kUnitary) {
    throw DimensionError("family is not orthonormal (Gram defect " +
                         std::to_string(linalg::orthonormalityDefect(phis)) + ")");
  }
}

}  // namespace

CMat liftAliceUnitary(const CMat& u, const CMat& phis) {
  if (!linalg::isUnitary(u)) throw NotUnitaryError("liftAliceUnitary: U is not unitary");
  requireFamily(phis);
  if (phis.cols() != u.rows()) {
    throw DimensionError("family has " + std::to_string(phis.cols()) + " members, U has dimension " +
                         std::to_string(u.rows()));
  }
  const Index d = phis.rows();
  return phis * u.transpose() * phis.adjoint() + (CMat::Identity(d, d) - phis * phis.adjoint());
}

CMat liftedFamily(const LocalUnitary& u, const CMat& phis) {
  CMat rows = phis.transpose();
  u.applyLeft(rows);
  return rows.transpose();
}

Certificate initCertificate(int qA, int qB) {
  if (qA < 0 || qB < 0) throw DimensionError("negative register size");
  if (qA > qB) {
    throw DimensionError("initial certificate needs qA <= qB (got qA = " + std::to_string(qA) +
                         ", qB = " + std::to_string(qB) + ")");
  }
  Certificate c;
  c.qA = qA;
  c.qB = qB;
  c.lambda = CMat::Zero(dimOf(qB), dimOf(qB));
  c.lambda(0, 0) = 1.0;
  c.phis = CMat::Identity(dimOf(qB), dimOf(qA));
  return c;
}

Certificate stepAlice(const Certificate& c, const LocalUnitary& u, int p) {
  if (p < 0 || p > c.qA) {
    throw DimensionError("Alice cannot send " + std::to_string(p) + " of her " + std::to_string(c.qA) +
                         " qubits");
  }
  const Index domain = dimOf(c.domainQubits());
  const Index sent = dimOf(p);
  const Index kept = dimOf(c.qA - p);
  const CMat lifted = liftedFamily(u, c.phis);  // column a is U~ phi_a

  Certificate next;
  next.qA = c.qA - p;
  next.qB = c.qB + p;
  next.mA = c.mA + p;
  next.mB = c.mB;
  // phi'_l = 2^(-p/2) sum_r |r> U~ phi_(lr)
  const double scale = 1.0 / std::sqrt(static_cast<double>(sent));
  next.phis = CMat::Zero(sent * domain, kept);
  for (Index l = 0; l < kept; ++l) {
    for (Index r = 0; r < sent; ++r) {
      next.phis.block(r * domain, l, domain, 1) = scale * lifted.col(l * sent + r);
    }
  }
  // Lambda' = 2^(p/2) (I_p (x) Lambda)
  next.lambda = std::sqrt(static_cast<double>(sent)) * linalg::tensor(CMat::Identity(sent, sent), c.lambda);
  return next;
}

Certificate stepAlice(const Certificate& c, const CMat& u, int p) {
  return stepAlice(c, LocalUnitary::dense(u), p);
}

Certificate stepBob(const Certificate& c, const LocalUnitary& v, int p) {
  if (p < 0 || p > c.qB) {
    throw DimensionError("Bob cannot send " + std::to_string(p) + " of his " + std::to_string(c.qB) +
                         " qubits");
  }
  const Index domain = dimOf(c.domainQubits());
  const Index sent = dimOf(p);
  const Index kept = dimOf(c.qB - p);
  CMat vl = c.lambda;
  v.applyLeft(vl);

  Certificate next;
  next.qA = c.qA + p;
  next.qB = c.qB - p;
  next.mA = c.mA;
  next.mB = c.mB + p;
  // Lambda' = sum_b (<b| (x) I) V Lambda (<b| (x) I_domain)
  next.lambda = CMat::Zero(kept, sent * domain);
  for (Index b = 0; b < sent; ++b) {
    next.lambda.block(0, b * domain, kept, domain) = vl.block(b * kept, 0, kept, domain);
  }
  // phi'_(al) = |l> phi_a
  const Index aliceOld = c.phis.cols();
  next.phis = CMat::Zero(sent * domain, aliceOld * sent);
  for (Index a = 0; a < aliceOld; ++a) {
    for (Index l = 0; l < sent; ++l) {
      next.phis.block(l * domain, a * sent + l, domain, 1) = c.phis.col(a);
    }
  }
  return next;
}

Certificate stepBob(const Certificate& c, const CMat& v, int p) {
  return stepBob(c, LocalUnitary::dense(v), p);
}

namespace {

int positionOf(const std::vector<int>& reg, int q) {
  const auto it = std::find(reg.begin(), reg.end(), q);
  if (it == reg.end()) throw InvariantViolation("qubit " + std::to_string(q) + " missing from register layout");
  return static_cast<int>(it - reg.begin());
}

void checkBudget(Index lambdaEntries, Index phiEntries, const CertifyOptions& options) {
  if (lambdaEntries > options.maxLambdaEntries || phiEntries > options.maxLambdaEntries) {
    throw CapExceeded("certificate would need " + std::to_string(std::max(lambdaEntries, phiEntries)) +
                      " entries, budget is " + std::to_string(options.maxLambdaEntries));
  }
}

double reconstructionResidual(const Certificate& c, const std::vector<int>& aliceLayout,
                              const std::vector<int>& bobLayout, const CVec& executed, int pad) {
  std::vector<int> layout = aliceLayout;
  layout.insert(layout.end(), bobLayout.begin(), bobLayout.end());
  std::vector<int> order(layout.size());
  for (std::size_t pos = 0; pos < layout.size(); ++pos) order[static_cast<std::size_t>(layout[pos])] = static_cast<int>(pos);
  const CVec physical = linalg::permuteQubits(c.state(), order);
  const CVec expected = linalg::tensor(executed, linalg::basisState(pad, 0));
  return (physical - expected).cwiseAbs().maxCoeff();
}

}  // namespace

CertifyResult certifyProtocol(const model::Protocol& p, model::Message x, const CertifyOptions& options) {
  using model::Party;
  model::finalLedger(p);  // validates every round up front

  model::JointState exec = model::initialState(p, options.capQubits);
  const int total = p.qubitCount();
  const int E = p.E;

  CertifyResult result;
  auto& regA = result.aliceLayout;
  auto& regB = result.bobLayout;
  // Shared qubits start on Bob's side; the preparation step hands ea to Alice.
  for (int q = 0; q < 2 * E; ++q) regB.push_back(q);
  for (int q = 2 * E; q < total; ++q) {
    (exec.ledger.owner[static_cast<std::size_t>(q)] == Party::Alice ? regA : regB).push_back(q);
  }
  result.padQubits = std::max(0, static_cast<int>(regA.size()) - static_cast<int>(regB.size()));
  for (int i = 0; i < result.padQubits; ++i) regB.push_back(total + i);

  Certificate c = initCertificate(static_cast<int>(regA.size()), static_cast<int>(regB.size()));

  auto record = [&](int round, Party actor, double drift, bool force) {
    PrefixCheck check;
    check.round = round;
    check.actor = actor;
    check.bobTraceDrift = drift;
    check.traceResidual = c.traceResidual();
    check.orthonormalityDefect = c.orthonormalityDefect();
    if (options.checkEveryPrefix || force) {
      check.reconstructionResidual = reconstructionResidual(c, regA, regB, exec.vec, result.padQubits);
    }
    result.residual = std::max(result.residual, check.reconstructionResidual);
    result.traceResidual = std::max(result.traceResidual, check.traceResidual);
    result.prefixes.push_back(check);
  };

  if (E > 0) {
    CVec shared = CVec::Zero(dimOf(2 * E));
    for (Index a = 0; a < dimOf(E); ++a) shared(a * dimOf(E) + a) = std::sqrt(p.schmidt[static_cast<std::size_t>(a)]);
    std::vector<int> positions(static_cast<std::size_t>(2 * E));
    std::iota(positions.begin(), positions.end(), 0);
    const LocalUnitary prep{{LocalGate{linalg::unitaryWithFirstColumn(shared), positions}}, {}};
    const double before = c.traceIdentity();
    c = stepBob(c, prep, E);
    regA.insert(regA.end(), regB.begin(), regB.begin() + E);
    regB.erase(regB.begin(), regB.begin() + E);
    record(-1, Party::Bob, std::abs(c.traceIdentity() - before) / before, p.rounds.empty());
  } else {
    record(-1, Party::Bob, 0.0, p.rounds.empty());
  }

  for (std::size_t t = 0; t < p.rounds.size(); ++t) {
    const auto& round = p.rounds[t];
    const bool alice = round.actor == Party::Alice;
    std::vector<int>& reg = alice ? regA : regB;

    LocalUnitary u;
    for (const auto& op : round.ops) {
      if (op.inputBit && !model::messageBit(x, *op.inputBit, p.n)) continue;
      LocalGate g{op.matrix, {}};
      for (int q : op.targets) g.positions.push_back(positionOf(reg, q));
      u.gates.push_back(std::move(g));
    }

    std::vector<int> keptIds;
    std::vector<int> keptPos;
    for (std::size_t i = 0; i < reg.size(); ++i) {
      if (std::find(round.send.begin(), round.send.end(), reg[i]) == round.send.end()) {
        keptIds.push_back(reg[i]);
        keptPos.push_back(static_cast<int>(i));
      }
    }
    std::vector<int> sentPos;
    for (int q : round.send) sentPos.push_back(positionOf(reg, q));

    // Move the sent qubits to the boundary: Alice's right edge, Bob's left edge.
    std::vector<int> order = alice ? keptPos : sentPos;
    const auto& tail = alice ? sentPos : keptPos;
    order.insert(order.end(), tail.begin(), tail.end());
    if (!std::is_sorted(order.begin(), order.end())) u.order = order;

    const int sent = static_cast<int>(round.send.size());
    const int domainAfter = c.domainQubits() + sent;
    const int qBAfter = alice ? c.qB + sent : c.qB - sent;
    const int qAAfter = alice ? c.qA - sent : c.qA + sent;
    checkBudget(dimOf(qBAfter) * dimOf(domainAfter), dimOf(domainAfter) * dimOf(qAAfter), options);

    const double before = c.traceIdentity();
    double drift = 0.0;
    if (alice) {
      c = stepAlice(c, u, sent);
      regA = keptIds;
      regB.insert(regB.begin(), round.send.begin(), round.send.end());
    } else {
      c = stepBob(c, u, sent);
      drift = std::abs(c.traceIdentity() - before) / before;
      regB = keptIds;
      regA.insert(regA.end(), round.send.begin(), round.send.end());
    }
    exec = model::executeRound(exec, round, x, p.n);
    record(static_cast<int>(t), round.actor, drift, t + 1 == p.rounds.size());
  }

  result.certificate = c;
  return result;
}

}  // namespace qcomm::cert
