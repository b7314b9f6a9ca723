#pragma once

// Local solubility of x^2 - a y^2 - b z^2 = 0 at every place of Q.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "d4census/arith.hpp"

namespace d4 {

struct RealPlace {
  friend bool operator==(const RealPlace&, const RealPlace&) = default;
};
struct TwoPlace {
  friend bool operator==(const TwoPlace&, const TwoPlace&) = default;
};
struct OddPrime {
  std::int64_t p = 3;
  friend bool operator==(const OddPrime&, const OddPrime&) = default;
};
using Place = std::variant<RealPlace, TwoPlace, OddPrime>;

std::string to_string(const Place& v);

// (a, b)_v for nonzero integers. Valuations are reduced internally.
int hilbert_symbol(std::int64_t a, std::int64_t b, const Place& v);

// Exhaustive ground truth for hilbert_symbol: looks for a primitive solution
// modulo p^3 (odd p) or 2^6. Requires v_p(a), v_p(b) <= 1 at the searched prime;
// throws PreconditionError otherwise.
bool padic_oracle(std::int64_t a, std::int64_t b, const Place& v);

struct ESetKey {
  TwoExponents nu;
  std::array<int, 3> eps{1, 1, 1};
};

// Membership of (eps1, d2*eps2, d3*eps3) in E(mu, alpha, beta), defined as
// (2^{mu+alpha} d2 eps1 eps2, 2^{mu+beta} d3 eps1 eps3)_2 = +1.
bool in_E_set(const ESetKey& key, Signs delta);

// Conditions (i)-(iii) at the odd primes dividing m1 m2 m3.
bool odd_place_conditions(const SignedTriple& t);

// Conjunction of the odd-prime, real and 2-adic conditions; by the Hasse
// principle this is global solubility of x^2 - m1 m2 y^2 - m1 m3 z^2 = 0.
bool satisfies_local_conditions(const SignedTriple& t);

using ConicPoint = std::array<std::int64_t, 3>;

// Bounded search over 0 <= x, y, z <= height for a primitive solution. Returns
// the least one in lexicographic order on (z, y, x). Absence proves nothing.
std::optional<ConicPoint> find_conic_point(std::int64_t a, std::int64_t b, std::int64_t height);

// Sign weight u(a1, a2, a3) of the divisor-sum expansion. Depends only on the
// residues mod 8 of the (odd) arguments.
int u_weight(std::int64_t a1, std::int64_t a2, std::int64_t a3, Signs delta, TwoExponents nu);

// Parity of (b - 1) / 2 for odd b.
inline int eta(std::int64_t b) { return mod8(b) % 4 == 3 ? 1 : 0; }

}  // namespace d4
