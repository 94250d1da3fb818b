#include "qcomm/linalg.hpp"

#include <cmath>
#include <random>

namespace qcomm::linalg {

CVec SchmidtForm::reconstruct() const {
  CVec out = CVec::Zero(left.rows() * right.rows());
  for (Index i = 0; i < coeffs.size(); ++i) {
    out += coeffs(i) * tensor(left.col(i), right.col(i));
  }
  return out;
}

SchmidtForm schmidt(const CVec& s, int cutAfter) {
  const int k = qubitCount(s.size());
  if (cutAfter < 0 || cutAfter > k) {
    throw DimensionError("Schmidt cut " + std::to_string(cutAfter) + " outside a " +
                         std::to_string(k) + "-qubit state");
  }
  if (std::abs(s.norm() - 1.0) > tol::kNorm) {
    throw DimensionError("Schmidt decomposition needs a normalized state (norm " +
                         std::to_string(s.norm()) + ")");
  }
  const Index dl = dimOf(cutAfter);
  const Index dr = dimOf(k - cutAfter);
  // m(i, j) = s[i * dr + j]
  const CMat m = Eigen::Map<const CMat>(s.data(), dr, dl).transpose();
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  // m = sum_i sigma_i u_i v_i^dagger, so s = sum_i sigma_i u_i (x) conj(v_i).
  SchmidtForm form;
  form.coeffs = svd.singularValues();
  form.left = svd.matrixU();
  form.right = svd.matrixV().conjugate();
  return form;
}

double minEigenvalue(const CMat& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool isPsd(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return minEigenvalue(m) >= -tol;
}

namespace {

Eigen::SelfAdjointEigenSolver<CMat> checkedEigen(const CMat& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("expected a square matrix");
  if (!isPsd(rho)) {
    throw DimensionError("matrix is not positive semidefinite (min eigenvalue " +
                         std::to_string(minEigenvalue(rho)) + ")");
  }
  return Eigen::SelfAdjointEigenSolver<CMat>(rho);
}

}  // namespace

CMat pgmSqrtInv(const CMat& rho, double relTol) {
  const auto es = checkedEigen(rho);
  const RVec& ev = es.eigenvalues();
  const double cutoff = relTol * std::max(ev.maxCoeff(), 0.0);
  RVec scaled = RVec::Zero(ev.size());
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff && ev(i) > 0.0) scaled(i) = 1.0 / std::sqrt(ev(i));
  }
  return es.eigenvectors() * scaled.asDiagonal() * es.eigenvectors().adjoint();
}

CMat supportProjector(const CMat& rho, double relTol) {
  const auto es = checkedEigen(rho);
  const RVec& ev = es.eigenvalues();
  const double cutoff = relTol * std::max(ev.maxCoeff(), 0.0);
  RVec mask = RVec::Zero(ev.size());
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff && ev(i) > 0.0) mask(i) = 1.0;
  }
  return es.eigenvectors() * mask.asDiagonal() * es.eigenvectors().adjoint();
}

CMat randomUnitary(int k, std::uint64_t seed, int cap) {
  if (k < 0) throw DimensionError("negative qubit count");
  if (k > cap) {
    throw CapExceeded("randomUnitary on " + std::to_string(k) + " qubits exceeds cap " +
                      std::to_string(cap));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  const Index d = dimOf(k);
  CMat g(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(d, d);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase freedom of QR so the distribution is Haar.
  for (Index i = 0; i < d; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

CVec randomState(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec v(dimOf(k));
  for (Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
  return v.normalized();
}

CMat unitaryWithFirstColumn(const CVec& psi) {
  const Index d = psi.size();
  qubitCount(d);
  if (std::abs(psi.norm() - 1.0) > tol::kNorm) {
    throw DimensionError("unitaryWithFirstColumn needs a normalized vector");
  }
  // Strip the phase of psi(0), reflect e0 onto the rotated vector, then
  // restore the phase.
  const Complex phase = std::abs(psi(0)) > 0.0 ? psi(0) / std::abs(psi(0)) : Complex(1.0);
  CVec target = psi / phase;
  CVec w = -target;
  w(0) += 1.0;
  CMat u = CMat::Identity(d, d);
  const double wn = w.squaredNorm();
  if (wn > 1e-300) u -= (2.0 / wn) * w * w.adjoint();
  return phase * u;
}

}  // namespace qcomm::linalg
