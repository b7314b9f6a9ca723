#pragma once

// Every fixed rational that enters the leading constant, in one place.

#include <array>
#include <cstdint>

namespace d4::constants {

struct Ratio {
  std::int64_t num;
  std::int64_t den;
};

// |D4|.
inline constexpr std::int64_t kGroupOrder = 8;
// Normalized effective cone constant.
inline constexpr Ratio kAlphaStar{1, 4};
// Real density: 6 of the 8 elements of D4 are 2-torsion.
inline constexpr Ratio kTauInfinity{6, 8};
// Convergence factor (1 - 1/2)^4 applied at p = 2.
inline constexpr Ratio kTwoConvergenceFactor{1, 16};
// Prefactor of the leading constant.
inline constexpr Ratio kLeadingPrefactor{27, 8};
// Inner prefactor of c~ and the multiplier in the final simplification.
inline constexpr Ratio kCTildePrefactor{3, 16};
inline constexpr std::int64_t kFinalMultiplier = 1728;  // 4 * (432 + 432) / 2
// Both class sums over (delta, nu, eps) equal 2^4 * 3^3.
inline constexpr std::int64_t kClassSum = 432;
// E-set sizes for nu = (0,0,0), (1,0,0), (0,1,0), (0,0,1).
inline constexpr std::array<std::int64_t, 4> kESetSizes{48, 32, 32, 32};

// Weighted count of 2-adic etale algebras with Galois closure inside D4:
// tau_{H,2} = (1/8) * sum_i weight_i * count_i with
//   trivial (Q_2^8):        weight 1,  count 1
//   K^4, K quadratic:        weight 5,  count 7
//   L^2, L a V4-extension:   weight 12, count 7
//   L^2, L a C4-extension:   weight 2,  count 12
//   M, a D4-extension:       weight 8,  count 18
// Weights are j/k from the centralizer/conjugation table; counts are the
// numbers of 2-adic fields of each type from the LMFDB local fields tables.
struct EtaleRow {
  const char* algebra;
  std::int64_t weight;
  std::int64_t fields;
};
inline constexpr std::array<EtaleRow, 5> kTwoAdicEtale{{
    {"Q2^8", 1, 1},
    {"K^4 (K/Q2 quadratic)", 5, 7},
    {"L^2 (L/Q2 V4)", 12, 7},
    {"L^2 (L/Q2 C4)", 2, 12},
    {"M (M/Q2 D4)", 8, 18},
}};

}  // namespace d4::constants
