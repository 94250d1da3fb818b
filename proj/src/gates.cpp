#include "qcomm/gates.hpp"

#include <cmath>
#include <numbers>

namespace qcomm::gates {

namespace {
const Complex kI{0.0, 1.0};
}

CMat I() { return CMat::Identity(2, 2); }

CMat X() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat Y() {
  CMat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

CMat Z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMat H() {
  CMat m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::numbers::sqrt2;
}

CMat S() {
  CMat m(2, 2);
  m << 1, 0, 0, kI;
  return m;
}

CMat T() {
  CMat m(2, 2);
  m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
  return m;
}

CMat CNOT() {
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

CMat CZ() {
  CMat m = CMat::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

CMat SWAP() {
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return m;
}

CMat CCX() {
  CMat m = CMat::Identity(8, 8);
  m(6, 6) = m(7, 7) = 0;
  m(6, 7) = m(7, 6) = 1;
  return m;
}

CMat RX(double theta) {
  CMat m(2, 2);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  m << c, -kI * s, -kI * s, c;
  return m;
}

CMat RY(double theta) {
  CMat m(2, 2);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  m << c, -s, s, c;
  return m;
}

std::optional<CMat> byName(std::string_view name) {
  if (name == "I") return I();
  if (name == "X") return X();
  if (name == "Y") return Y();
  if (name == "Z") return Z();
  if (name == "H") return H();
  if (name == "S") return S();
  if (name == "T") return T();
  if (name == "CNOT") return CNOT();
  if (name == "CZ") return CZ();
  if (name == "SWAP") return SWAP();
  if (name == "CCX") return CCX();
  return std::nullopt;
}

}  // namespace qcomm::gates
