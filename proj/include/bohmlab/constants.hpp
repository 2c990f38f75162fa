#pragma once

namespace bohmlab {

// Natural units by default; both stay runtime parameters.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  bool valid() const { return hbar > 0.0 && mass > 0.0; }
};

}  // namespace bohmlab
