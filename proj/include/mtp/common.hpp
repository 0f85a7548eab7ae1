#pragma once

#include <stdexcept>
#include <string>

namespace mtp {

/// Raised when a result would claim p-adic digits it does not have.
struct PrecisionExhausted : std::runtime_error {
  explicit PrecisionExhausted(const std::string& what)
      : std::runtime_error("precision exhausted: " + what) {}
};

/// Domain errors: malformed or out-of-range parameters.
struct BadInput : std::runtime_error {
  explicit BadInput(const std::string& what) : std::runtime_error(what) {}
};

/// Parameter shape not covered by this library (e.g. middle fields larger
/// than the base).
struct UnsupportedParameter : BadInput {
  explicit UnsupportedParameter(const std::string& what) : BadInput(what) {}
};

/// Toral invariants are defined on symmetric root orbits only.
struct AsymmetricOrbit : BadInput {
  explicit AsymmetricOrbit(const std::string& what) : BadInput(what) {}
};

/// Transfer factors and the twofold character need regular semisimple input.
struct NotRegular : BadInput {
  explicit NotRegular(const std::string& what) : BadInput(what) {}
};

/// No conjugate with an invertible lower-left entry could be produced.
struct LowerLeftZero : BadInput {
  explicit LowerLeftZero(const std::string& what) : BadInput(what) {}
};

/// Square classes of Qp^x for odd p: 1, u, p, up with u a fixed non-residue.
enum class SquareClass { One, U, P, UP };

inline const char* to_string(SquareClass c) {
  switch (c) {
    case SquareClass::One: return "1";
    case SquareClass::U:   return "u";
    case SquareClass::P:   return "p";
    case SquareClass::UP:  return "up";
  }
  return "?";
}

inline SquareClass square_class_from_string(const std::string& s) {
  if (s == "1")  return SquareClass::One;
  if (s == "u")  return SquareClass::U;
  if (s == "p")  return SquareClass::P;
  if (s == "up") return SquareClass::UP;
  throw BadInput("unknown square class: " + s);
}

/// Product of square classes (group law of F^x / F^x2).
inline SquareClass operator*(SquareClass a, SquareClass b) {
  auto bits = [](SquareClass c) -> int {
    switch (c) {
      case SquareClass::One: return 0;
      case SquareClass::U:   return 1;
      case SquareClass::P:   return 2;
      case SquareClass::UP:  return 3;
    }
    return 0;
  };
  int x = bits(a) ^ bits(b);
  switch (x) {
    case 0: return SquareClass::One;
    case 1: return SquareClass::U;
    case 2: return SquareClass::P;
    default: return SquareClass::UP;
  }
}

}  // namespace mtp
