#pragma once

#include <cmath>
#include <cstdint>

namespace d4 {

// Upper bounds X1..X4 on inv1..inv4 (inv_i <= X_i). Real-valued.
struct BoundBox {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double x4 = 0.0;

  double volume() const { return x1 * x2 * x3 * x4; }
  friend bool operator==(const BoundBox&, const BoundBox&) = default;
};

// Largest integer n with n <= x (0 for negative or non-finite x).
inline std::uint64_t floor_bound(double x) {
  if (!(x >= 1.0)) return 0;
  return static_cast<std::uint64_t>(std::floor(x));
}

}  // namespace d4
