#include "qcomm/coding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "qcomm/gates.hpp"

namespace qcomm::coding {

using Eigen::Index;

namespace {

void checkMessage(const EncodingScheme& s, model::Message x) {
  if (x >= s.encoders.size()) throw DimensionError("message " + std::to_string(x) + " out of range");
}

// phi_l for l in [0, 2^(E-m)), as columns of a (2^(E+m)) x 2^(E-m) matrix.
CMat eprStates(const EncodingScheme& s, model::Message x) {
  checkMessage(s, x);
  const CMat& v = s.encoders[x];
  const Index dE = linalg::dimOf(s.E);
  const Index dm = linalg::dimOf(s.m);
  const Index dl = linalg::dimOf(s.E - s.m);
  const double scale = std::sqrt(std::ldexp(1.0, -s.m));
  CMat out(dm * dE, dl);
  for (Index l = 0; l < dl; ++l) {
    for (Index r = 0; r < dm; ++r) {
      for (Index j = 0; j < dE; ++j) out(r * dE + j, l) = scale * v(l * dm + r, j);
    }
  }
  return out;
}

CMat hermitianPart(const CMat& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

bool EncodingScheme::uniform(double tol) const {
  const double target = 1.0 / static_cast<double>(schmidtCoeffs.size());
  return (schmidtCoeffs.array() - target).abs().maxCoeff() <= tol;
}

void EncodingScheme::validate() const {
  if (E < 0 || m < 0 || n < 0) throw ValidationError("E, m and n must be non-negative");
  if (m > E) throw ValidationError("m = " + std::to_string(m) + " exceeds E = " + std::to_string(E));
  if (E + m > tol::kMaxQubits) throw CapExceeded("Bob would hold " + std::to_string(E + m) + " qubits");
  if (n > 16) throw CapExceeded("n = " + std::to_string(n) + " exceeds 16");
  if (encoders.size() != static_cast<std::size_t>(linalg::dimOf(n))) {
    throw DimensionError("expected 2^n = " + std::to_string(linalg::dimOf(n)) + " encoders");
  }
  for (const auto& v : encoders) {
    if (v.rows() != linalg::dimOf(E) || v.cols() != linalg::dimOf(E)) throw DimensionError("encoder is not 2^E x 2^E");
    if (!linalg::isUnitary(v)) throw NotUnitaryError("encoder is not unitary");
  }
  if (schmidtCoeffs.size() != linalg::dimOf(E)) throw DimensionError("expected 2^E Schmidt coefficients");
  if (schmidtCoeffs.minCoeff() < 0) throw ValidationError("negative Schmidt coefficient");
  const double sum = schmidtCoeffs.sum();
  if (std::abs(sum - 1.0) > tol::kNorm) {
    throw ValidationError("Schmidt coefficients sum to " + std::to_string(sum) + ", expected 1");
  }
}

CMat Ensemble::density(model::Message x) const {
  const Index d = linalg::dimOf(qubits);
  CMat rho = CMat::Zero(d, d);
  for (const auto& ws : entries.at(x)) rho.noalias() += ws.weight * ws.state * ws.state.adjoint();
  return rho;
}

CMat Ensemble::average() const {
  const Index d = linalg::dimOf(qubits);
  CMat rho = CMat::Zero(d, d);
  for (model::Message x = 0; x < entries.size(); ++x) rho += density(x);
  return rho / static_cast<double>(entries.size());
}

double Ensemble::totalWeight(model::Message x) const {
  double total = 0.0;
  for (const auto& ws : entries.at(x)) total += ws.weight * ws.state.squaredNorm();
  return total;
}

double Povm::completenessDefect() const {
  if (elements.empty()) return 0.0;
  CMat sum = CMat::Zero(elements.front().rows(), elements.front().cols());
  for (const auto& e : elements) sum += e;
  return (sum - CMat::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

double Povm::minEigenvalue() const {
  double lo = 0.0;
  for (const auto& e : elements) lo = std::min(lo, linalg::minEigenvalue(hermitianPart(e)));
  return lo;
}

EnsembleEntry eprEnsemble(const EncodingScheme& s, model::Message x) {
  if (!s.uniform()) throw ValidationError("non-uniform Schmidt coefficients: use generalEnsemble");
  const CMat phis = eprStates(s, x);
  const double weight = std::ldexp(1.0, -(s.E - s.m));
  EnsembleEntry entry;
  entry.reserve(static_cast<std::size_t>(phis.cols()));
  for (Index l = 0; l < phis.cols(); ++l) entry.push_back({weight, phis.col(l)});
  return entry;
}

EnsembleEntry generalEnsemble(const EncodingScheme& s, model::Message x) {
  const CMat phis = eprStates(s, x);
  const Index dE = linalg::dimOf(s.E);
  const RVec lambda = s.schmidtCoeffs.cwiseSqrt() * std::sqrt(std::ldexp(1.0, s.m));
  EnsembleEntry entry;
  entry.reserve(static_cast<std::size_t>(phis.cols()));
  for (Index l = 0; l < phis.cols(); ++l) {
    CVec state = phis.col(l);
    for (Index i = 0; i < state.size(); ++i) state(i) *= lambda(i % dE);
    entry.push_back({1.0, std::move(state)});
  }
  return entry;
}

Ensemble buildEnsemble(const EncodingScheme& s) {
  s.validate();
  Ensemble ens{s.n, s.bobQubits(), {}};
  const bool uniform = s.uniform();
  for (model::Message x = 0; x < s.encoders.size(); ++x) {
    ens.entries.push_back(uniform ? eprEnsemble(s, x) : generalEnsemble(s, x));
  }
  return ens;
}

EncodingScheme superdenseScheme(int m) {
  if (m < 1) throw ValidationError("superdense coding needs m >= 1");
  EncodingScheme s;
  s.E = m;
  s.m = m;
  s.n = 2 * m;
  s.schmidtCoeffs = RVec::Constant(linalg::dimOf(m), 1.0 / static_cast<double>(linalg::dimOf(m)));
  for (model::Message x = 0; x < static_cast<model::Message>(linalg::dimOf(s.n)); ++x) {
    CMat v = linalg::identity(m);
    for (int i = 0; i < m; ++i) {
      CMat pair = gates::I();
      if (model::messageBit(x, 2 * i, s.n)) pair = gates::Z() * pair;
      if (model::messageBit(x, 2 * i + 1, s.n)) pair = gates::X() * pair;
      v = linalg::applyOn(pair, {i}, v);
    }
    s.encoders.push_back(std::move(v));
  }
  return s;
}

EncodingScheme randomScheme(int E, int m, int n, std::uint64_t seed, bool uniform) {
  EncodingScheme s;
  s.E = E;
  s.m = m;
  s.n = n;
  const Index dE = linalg::dimOf(E);
  if (uniform) {
    s.schmidtCoeffs = RVec::Constant(dE, 1.0 / static_cast<double>(dE));
  } else {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    s.schmidtCoeffs.resize(dE);
    for (Index a = 0; a < dE; ++a) s.schmidtCoeffs(a) = weight(rng);
    s.schmidtCoeffs /= s.schmidtCoeffs.sum();
  }
  for (Index x = 0; x < linalg::dimOf(n); ++x) {
    s.encoders.push_back(linalg::randomUnitary(E, seed * 1000003ULL + static_cast<std::uint64_t>(x)));
  }
  return s;
}

EncodingScheme constantScheme(int E, int m, int n) {
  EncodingScheme s;
  s.E = E;
  s.m = m;
  s.n = n;
  s.schmidtCoeffs = RVec::Constant(linalg::dimOf(E), 1.0 / static_cast<double>(linalg::dimOf(E)));
  s.encoders.assign(static_cast<std::size_t>(linalg::dimOf(n)), linalg::identity(E));
  return s;
}

EncodingScheme absorbAncilla(int E, int k, int m, int n, const RVec& schmidtCoeffs, std::vector<CMat> encoders) {
  if (k < 0) throw ValidationError("negative ancilla count");
  if (schmidtCoeffs.size() != linalg::dimOf(E)) throw DimensionError("expected 2^E Schmidt coefficients");
  EncodingScheme s;
  s.E = E + k;
  s.m = m;
  s.n = n;
  s.encoders = std::move(encoders);
  // Index a * 2^k + 0 carries lambda_a; the ancilla part is always |0^k>.
  s.schmidtCoeffs = RVec::Zero(linalg::dimOf(E + k));
  for (Index a = 0; a < schmidtCoeffs.size(); ++a) s.schmidtCoeffs(a << k) = schmidtCoeffs(a);
  s.validate();
  return s;
}

model::Protocol encodingProtocol(const EncodingScheme& s, model::Message x) {
  checkMessage(s, x);
  std::vector<double> lambda(s.schmidtCoeffs.data(), s.schmidtCoeffs.data() + s.schmidtCoeffs.size());
  model::Protocol p = model::makeProtocol("encode_" + std::to_string(x), 0, lambda);
  model::Round round{model::Party::Alice, {}, {}};
  std::vector<int> ea(static_cast<std::size_t>(s.E));
  for (int i = 0; i < s.E; ++i) ea[static_cast<std::size_t>(i)] = i;
  if (s.E > 0) round.ops.push_back(model::GateOp{"mat", s.encoders[x], ea, std::nullopt});
  for (int i = s.E - s.m; i < s.E; ++i) round.send.push_back(i);
  p.rounds.push_back(std::move(round));
  return p;
}

Povm pgmDecoder(const Ensemble& ens) {
  const CMat avg = hermitianPart(ens.average());
  const CMat root = linalg::pgmSqrtInv(avg);
  Povm povm;
  const double prior = 1.0 / static_cast<double>(ens.entries.size());
  for (model::Message x = 0; x < ens.entries.size(); ++x) {
    povm.elements.push_back(hermitianPart(root * (prior * ens.density(x)) * root));
  }
  povm.elements.push_back(CMat::Identity(avg.rows(), avg.cols()) - linalg::supportProjector(avg));
  povm.hasReject = true;
  return povm;
}

Povm helstromDecoder(const CMat& rho0, const CMat& rho1) {
  if (rho0.rows() != rho1.rows() || rho0.cols() != rho1.cols() || rho0.rows() != rho0.cols()) {
    throw DimensionError("helstromDecoder: mismatched density matrices");
  }
  Eigen::SelfAdjointEigenSolver<CMat> eig(hermitianPart(rho0 - rho1));
  const RVec& values = eig.eigenvalues();
  const double cutoff = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
  CMat p0 = CMat::Zero(rho0.rows(), rho0.cols());
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) > cutoff) p0 += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).adjoint();
  }
  const CMat p1 = CMat::Identity(rho0.rows(), rho0.cols()) - p0;
  return Povm{{p0, p1}, false};
}

Povm measurementDecoder(const CMat& d, const std::vector<int>& outputs) {
  if (!linalg::isUnitary(d)) throw NotUnitaryError("decoder is not unitary");
  const int k = linalg::qubitCount(d.rows());
  const int n = static_cast<int>(outputs.size());
  for (int q : outputs) {
    if (q < 0 || q >= k) throw DimensionError("output qubit " + std::to_string(q) + " out of range");
  }
  std::vector<CMat> diag(static_cast<std::size_t>(linalg::dimOf(n)), CMat::Zero(d.rows(), d.cols()));
  for (Index b = 0; b < d.rows(); ++b) {
    Index y = 0;
    for (int q : outputs) y = (y << 1) | (linalg::qubitBit(b, q, k) ? 1 : 0);
    diag[static_cast<std::size_t>(y)](b, b) = 1.0;
  }
  Povm povm;
  for (auto& p : diag) povm.elements.push_back(d.adjoint() * p * d);
  return povm;
}

Povm bellDecoder(int m) {
  if (m < 1) throw ValidationError("bellDecoder needs m >= 1");
  // Bob holds (sent halves r_0..r_{m-1}, own halves b_0..b_{m-1}).
  CMat d = linalg::identity(2 * m);
  std::vector<int> outputs;
  for (int i = 0; i < m; ++i) {
    d = linalg::applyOn(gates::CNOT(), {i, m + i}, d);
    d = linalg::applyOn(gates::H(), {i}, d);
    outputs.push_back(i);
    outputs.push_back(m + i);
  }
  return measurementDecoder(d, outputs);
}

double decodeSuccess(const Ensemble& ens, const Povm& d) {
  const std::size_t messages = ens.entries.size();
  const std::size_t outcomes = d.elements.size() - (d.hasReject ? 1 : 0);
  if (outcomes < messages) throw DimensionError("decoder has fewer outcomes than messages");
  const Index dim = linalg::dimOf(ens.qubits);
  double total = 0.0;
  for (model::Message x = 0; x < messages; ++x) {
    const CMat& e = d.elements[x];
    if (e.rows() != dim || e.cols() != dim) throw DimensionError("decoder does not match the ensemble");
    for (const auto& ws : ens.entries[x]) {
      if (ws.state.size() != dim) throw DimensionError("ensemble state has the wrong dimension");
      total += ws.weight * ws.state.dot(e * ws.state).real();
    }
  }
  return total / static_cast<double>(messages);
}

double boundRhs(int n, int mA) {
  if (n < 0 || mA < 0) throw ValidationError("boundRhs needs n >= 0 and mA >= 0");
  if (2 * mA >= n) return 1.0;
  return std::ldexp(1.0, 2 * mA - n);
}

BoundReport checkEncodingBound(const EncodingScheme& s, const Povm& d) {
  BoundReport r;
  r.success = decodeSuccess(buildEnsemble(s), d);
  r.rhs = boundRhs(s.n, s.m);
  r.margin = r.rhs - r.success;
  r.tight = r.margin <= 1e-6;
  return r;
}

}  // namespace qcomm::coding
