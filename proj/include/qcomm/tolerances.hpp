#pragma once

namespace qcomm::tol {

// Unitarity and orthonormality, per entry.
inline constexpr double kUnitary = 1e-9;
// Norms of states and sums of probabilities.
inline constexpr double kNorm = 1e-9;
// Max per-entry deviation when rebuilding a state from a decomposition.
inline constexpr double kReconstruction = 1e-9;
// Eigenvalues below this fraction of the largest one are treated as zero.
inline constexpr double kPseudoInverse = 1e-10;
// Most negative eigenvalue still accepted as positive semidefinite.
inline constexpr double kPsd = 1e-9;
// POVM completeness, per entry.
inline constexpr double kPovm = 1e-8;
// Certificate reconstruction against the executor.
inline constexpr double kCertificate = 1e-8;
// Slack allowed on the success bound.
inline constexpr double kBound = 1e-9;

// Dense statevector cap: 2^12 amplitudes.
inline constexpr int kMaxQubits = 12;
// Default cap for randomUnitary.
inline constexpr int kRandomUnitaryCap = 6;

}  // namespace qcomm::tol
