#pragma once

#include <optional>
#include <string_view>

#include "qcomm/linalg.hpp"

namespace qcomm::gates {

CMat I();
CMat X();
CMat Y();
CMat Z();
CMat H();
CMat S();
CMat T();
CMat CNOT();
CMat CZ();
CMat SWAP();
CMat CCX();

/// Rotation exp(-i theta X / 2).
CMat RX(double theta);
/// Rotation exp(-i theta Y / 2).
CMat RY(double theta);

/// Matrix of a named gate from the protocol vocabulary, or nullopt.
std::optional<CMat> byName(std::string_view name);

}  // namespace qcomm::gates
