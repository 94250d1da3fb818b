#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcomm/gates.hpp"
#include "qcomm/linalg.hpp"
#include "test_util.hpp"

using namespace qcomm;
using namespace qcomm::linalg;
using qcomm::testing::maxDiff;

namespace {

// Brute-force embedding: entry (i, j) is u(sub(i), sub(j)) when i and j agree
// on every non-target qubit.
CMat embedDense(const CMat& u, const std::vector<int>& targets, int k) {
  const Index d = dimOf(k);
  CMat full = CMat::Zero(d, d);
  auto sub = [&](Index idx) {
    Index s = 0;
    for (int t : targets) s = (s << 1) | (qubitBit(idx, t, k) ? 1 : 0);
    return s;
  };
  auto rest = [&](Index idx) {
    Index r = idx;
    for (int t : targets) r &= ~(Index{1} << (k - 1 - t));
    return r;
  };
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (rest(i) == rest(j)) full(i, j) = u(sub(i), sub(j));
    }
  }
  return full;
}

// Brute-force partial trace over explicit index loops.
CMat traceOutDense(const CVec& psi, const std::vector<int>& keep) {
  const int k = qubitCount(psi.size());
  const Index dk = dimOf(static_cast<int>(keep.size()));
  CMat rho = CMat::Zero(dk, dk);
  auto keptIndex = [&](Index idx) {
    Index s = 0;
    for (int q : keep) s = (s << 1) | (qubitBit(idx, q, k) ? 1 : 0);
    return s;
  };
  auto restIndex = [&](Index idx) {
    Index r = idx;
    for (int q : keep) r &= ~(Index{1} << (k - 1 - q));
    return r;
  };
  for (Index i = 0; i < psi.size(); ++i) {
    for (Index j = 0; j < psi.size(); ++j) {
      if (restIndex(i) == restIndex(j)) rho(keptIndex(i), keptIndex(j)) += psi(i) * std::conj(psi(j));
    }
  }
  return rho;
}

std::vector<double> sortedEigenvalues(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

}  // namespace

TEST_CASE("tensor follows the qubit-0-is-MSB convention") {
  CHECK(maxDiff(tensor(identity(1), identity(1)), identity(2)) == 0.0);

  const CVec v = tensor(basisState(1, 0), basisState(1, 1));
  CHECK(v.size() == 4);
  CHECK(maxDiff(v, basisState(2, 1)) == 0.0);

  // (X (x) I)|00> = |10>, index 2
  const CVec out = tensor(gates::X(), gates::I()) * basisState(2, 0);
  CHECK(maxDiff(out, basisState(2, 2)) == 0.0);
}

TEST_CASE("tensor is associative") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CMat a = randomUnitary(1, seed);
    const CMat b = randomUnitary(1, seed + 100);
    const CMat c = randomUnitary(2, seed + 200);
    CHECK(maxDiff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-15);
  }
}

TEST_CASE("applyOn on small examples") {
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(maxDiff(applyOn(gates::H(), {0}, basisState(1, 0)), qcomm::testing::ket({s, s})) < 1e-15);

  const CVec psi = randomState(3, 4);
  CHECK(maxDiff(applyOn(identity(2), {2, 0}, psi), psi) == 0.0);

  const CVec plus0 = qcomm::testing::ket({s, 0, s, 0});
  CHECK(maxDiff(applyOn(gates::CNOT(), {0, 1}, plus0), qcomm::testing::epr()) < 1e-15);
}

TEST_CASE("applyOn matches a brute-force dense embedding") {
  const std::vector<std::vector<int>> targetSets = {{0}, {2}, {1, 3}, {3, 0}, {2, 0, 1}};
  std::uint64_t seed = 11;
  for (const auto& targets : targetSets) {
    const CMat u = randomUnitary(static_cast<int>(targets.size()), seed++);
    const CVec psi = randomState(4, seed++);
    const CVec expected = embedDense(u, targets, 4) * psi;
    CHECK(maxDiff(applyOn(u, targets, psi), expected) < 1e-12);
  }
}

TEST_CASE("applyOn preserves the norm for unitaries") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMat u = randomUnitary(2, seed);
    const CVec psi = randomState(5, seed + 1000);
    const std::vector<int> targets = {static_cast<int>(seed % 5), static_cast<int>((seed + 2) % 5)};
    CHECK(std::abs(applyOn(u, targets, psi).norm() - 1.0) < tol::kNorm);
  }
}

TEST_CASE("applyOn rejects bad input") {
  const CVec psi = randomState(2, 1);
  CHECK_THROWS_AS(applyOn(gates::CNOT(), {0}, psi), DimensionError);
  CHECK_THROWS_AS(applyOn(gates::CNOT(), {0, 0}, psi), DimensionError);
  CHECK_THROWS_AS(applyOn(gates::X(), {2}, psi), DimensionError);
  CMat notUnitary = gates::X();
  notUnitary(0, 0) = 0.5;
  CHECK_THROWS_AS(applyOn(notUnitary, {0}, psi), NotUnitaryError);
  CHECK_NOTHROW(applyOn(notUnitary, {0}, psi, /*strict=*/false));
}

TEST_CASE("permuteQubits relabels qubits") {
  // |q0 q1 q2> = |110>; new order (2, 0, 1) gives |0 1 1>.
  const CVec v = basisState(3, 0b110);
  const std::vector<int> order = {2, 0, 1};
  CHECK(maxDiff(permuteQubits(v, order), basisState(3, 0b011)) == 0.0);
}

TEST_CASE("partialTrace examples") {
  const CMat rho0 = partialTrace(basisState(2, 1), {0});
  CHECK(maxDiff(rho0, basisState(1, 0) * basisState(1, 0).adjoint()) == 0.0);

  const CMat half = 0.5 * identity(1);
  CHECK(maxDiff(partialTrace(qcomm::testing::epr(), {0}), half) < 1e-15);
  CHECK(maxDiff(partialTrace(qcomm::testing::epr(), {1}), half) < 1e-15);

  // Eigenvalues of the 2-qubit marginal equal the squared Schmidt coefficients.
  const CVec psi = randomState(3, 77);
  const auto ev = sortedEigenvalues(partialTrace(psi, {0, 1}));
  const auto form = schmidt(psi, 2);
  for (Index i = 0; i < form.coeffs.size(); ++i) {
    CHECK(ev[static_cast<std::size_t>(i)] == doctest::Approx(form.coeffs(i) * form.coeffs(i)).epsilon(1e-12));
  }
  CHECK(std::abs(ev[2]) < 1e-12);
  CHECK(std::abs(ev[3]) < 1e-12);
}

TEST_CASE("partialTrace matches brute force, for vectors and density matrices") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const CVec psi = randomState(4, seed);
    const std::vector<int> keep = {static_cast<int>(seed % 4), static_cast<int>((seed + 1) % 4)};
    const CMat expected = traceOutDense(psi, keep);
    CHECK(maxDiff(partialTrace<double>(psi, keep), expected) < 1e-13);
    const CMat rho = psi * psi.adjoint();
    CHECK(maxDiff(partialTrace<double>(rho, keep), expected) < 1e-13);
    const CMat reduced = partialTrace<double>(psi, keep);
    CHECK(std::abs(reduced.trace() - 1.0) < 1e-9);
    CHECK(isPsd(reduced));
  }
}

TEST_CASE("partialTrace marginals share their spectrum") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CVec psi = randomState(5, seed + 40);
    const auto left = sortedEigenvalues(partialTrace(psi, {0, 1}));
    const auto right = sortedEigenvalues(partialTrace(psi, {2, 3, 4}));
    for (std::size_t i = 0; i < left.size(); ++i) CHECK(std::abs(left[i] - right[i]) < 1e-9);
    for (std::size_t i = left.size(); i < right.size(); ++i) CHECK(std::abs(right[i]) < 1e-9);
  }
}

TEST_CASE("schmidt examples") {
  const auto product = schmidt(basisState(2, 1), 1);
  CHECK(product.coeffs(0) == doctest::Approx(1.0));
  CHECK(std::abs(product.coeffs(1)) < 1e-15);

  const auto bell = schmidt(qcomm::testing::epr(), 1);
  CHECK(bell.coeffs(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(bell.coeffs(1) == doctest::Approx(1.0 / std::sqrt(2.0)));

  const CVec psi = randomState(4, 2024);
  const auto form = schmidt(psi, 2);
  CHECK(maxDiff(form.reconstruct(), psi) <= 1e-10);
  CHECK(std::abs(form.lambdaSum() - 1.0) < 1e-9);
  CHECK(orthonormalityDefect(form.left) < 1e-9);
  CHECK(orthonormalityDefect(form.right) < 1e-9);
  for (Index i = 1; i < form.coeffs.size(); ++i) CHECK(form.coeffs(i) <= form.coeffs(i - 1));
}

TEST_CASE("schmidt coefficients are invariant under one-sided local unitaries") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CVec psi = randomState(4, seed);
    const CVec rotated = applyOn(randomUnitary(2, seed + 9), {0, 1}, psi);
    const auto a = schmidt(psi, 2);
    const auto b = schmidt(rotated, 2);
    CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("schmidt edge cases") {
  CHECK_THROWS_AS(schmidt(2.0 * basisState(2, 0), 1), DimensionError);
  CHECK_THROWS_AS(schmidt(basisState(2, 0), 3), DimensionError);
  const auto whole = schmidt(qcomm::testing::epr(), 0);
  CHECK(whole.coeffs.size() == 1);
  CHECK(whole.coeffs(0) == doctest::Approx(1.0));
}

TEST_CASE("pgmSqrtInv examples") {
  CHECK(maxDiff(pgmSqrtInv(0.5 * identity(1)), std::sqrt(2.0) * identity(1)) < 1e-12);

  const CMat proj = basisState(1, 0) * basisState(1, 0).adjoint();
  CHECK(maxDiff(pgmSqrtInv(proj), proj) < 1e-12);

  CMat rho = CMat::Zero(4, 4);
  rho(0, 0) = 0.9;
  rho(1, 1) = 0.1;
  CMat expected = CMat::Zero(4, 4);
  expected(0, 0) = 1.0 / std::sqrt(0.9);
  expected(1, 1) = 1.0 / std::sqrt(0.1);
  const CMat m = pgmSqrtInv(rho);
  CHECK(maxDiff(m, expected) < 1e-12);

  CMat support = CMat::Zero(4, 4);
  support(0, 0) = support(1, 1) = 1.0;
  CHECK(maxDiff(m * rho * m, support) < 1e-8);
}

TEST_CASE("pgmSqrtInv gives a support projector for random low-rank states") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CVec a = randomState(3, seed);
    const CVec b = randomState(3, seed + 50);
    const CMat rho = 0.3 * a * a.adjoint() + 0.7 * b * b.adjoint();
    const CMat m = pgmSqrtInv(rho);
    CHECK(maxDiff(m * rho * m, supportProjector(rho)) < 1e-8);
    CHECK(std::abs(supportProjector(rho).trace().real() - 2.0) < 1e-9);
  }
}

TEST_CASE("pgmSqrtInv rejects non-PSD input") {
  CHECK_THROWS_AS(pgmSqrtInv(CMat(gates::Z())), DimensionError);
}

TEST_CASE("randomUnitary") {
  const CMat phase = randomUnitary(0, 3);
  CHECK(phase.rows() == 1);
  CHECK(std::abs(std::abs(phase(0, 0)) - 1.0) < 1e-12);

  CHECK(maxDiff(randomUnitary(1, 7), randomUnitary(1, 7)) == 0.0);
  CHECK(maxDiff(randomUnitary(1, 7), randomUnitary(1, 8)) > 1e-3);

  for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(unitarityDefect(randomUnitary(3, seed)) <= 1e-10);

  CHECK_THROWS_AS(randomUnitary(7, 0), CapExceeded);
  CHECK_NOTHROW(randomUnitary(7, 0, 7));
}

TEST_CASE("unitaryWithFirstColumn") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CVec psi = randomState(3, seed);
    const CMat u = unitaryWithFirstColumn(psi);
    CHECK(isUnitary(u));
    CHECK(maxDiff(u.col(0), psi) < 1e-12);
  }
  CHECK(maxDiff(unitaryWithFirstColumn(basisState(2, 0)), identity(2)) == 0.0);
}

TEST_CASE("qubitCount rejects non powers of two") {
  CHECK(qubitCount(1) == 0);
  CHECK(qubitCount(64) == 6);
  CHECK_THROWS_AS(qubitCount(6), DimensionError);
  CHECK_THROWS_AS(qubitCount(0), DimensionError);
}
