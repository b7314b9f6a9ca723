#pragma once

// Closed-form constants of the main term, truncated Euler products with
// first-order tail bounds, and the exact rational identities behind them.

#include <gmpxx.h>

#include <array>
#include <cstdint>

#include "d4census/box.hpp"

namespace d4 {

struct EulerProductSpec {
  std::uint64_t pmax = 1'000'000;  // primes p <= pmax enter the product
};

// Truncated product and a bound on |log(full) - log(truncated)|.
struct EulerValue {
  double value = 0.0;
  double log_tail = 0.0;

  // Bound on |full - truncated|.
  double abs_error() const;
};

// prod_{p | r} (p+1)/(p+2), exactly. r must be squarefree.
mpq_class c_prefactor(std::uint64_t r);

// c(r) = prod_{p|r} (p+1)/(p+2) * prod_p (1 - 2/(p(p+1))).
EulerValue c_constant(std::uint64_t r, const EulerProductSpec& spec);

// c~ = (3/16)^3 c(1)^3 prod_{p>2} (1 - 3/(p+2)^2 + 2/(p+2)^3).
EulerValue c_tilde(const EulerProductSpec& spec);

// The bare product prod_{p>2} (1 - 3/(p+2)^2 + 2/(p+2)^3).
EulerValue c_tilde_correction(const EulerProductSpec& spec);

// (27/8) prod_{2<p<=pmax} (1-1/p)^4 (1+4/p).
EulerValue leading_constant(const EulerProductSpec& spec);

// prod_{2<p<=pmax} (1 - 1/p^2).
EulerValue odd_zeta2_inverse(const EulerProductSpec& spec);

// Per-prime factors as exact rationals (p odd prime).
mpq_class leading_factor(std::uint64_t p);       // (1-1/p)^4 (1+4/p)
mpq_class identity_lhs_factor(std::uint64_t p);  // (1-2/(p(p+1)))^3 (1-3/(p+2)^2+2/(p+2)^3) (1-1/p^2)

struct IdentityResidual {
  double lhs = 0.0;  // 1728 c~ prod_{p>2} (1 - 1/p^2)
  double rhs = 0.0;  // (27/8) prod_{p>2} (1-1/p)^4 (1+4/p)
  double residual = 0.0;
  double tail_bound = 0.0;  // sum of both sides' absolute tail bounds
};
IdentityResidual constant_identity(const EulerProductSpec& spec);

struct ClassSums {
  std::int64_t unit_weight_sum = 0;  // sum of u(1,1,1) over admissible classes
  std::int64_t eps_weight_sum = 0;   // sum of u(eps) over admissible classes
  std::int64_t class_count = 0;      // number of admissible (delta, nu, eps)
  std::array<std::int64_t, 4> e_set_sizes{};  // |E(nu)| per nu, delta = (+1,+1)
};
ClassSums lemma432_sums();

struct TamagawaParts {
  std::int64_t group_order = 0;
  mpq_class alpha_star;
  mpq_class tau_infty;
  mpq_class tau_two;
  static double euler_factor(std::uint64_t p);  // (1-1/p)^4 (1+4/p)
};

struct TamagawaReport {
  TamagawaParts parts;
  mpq_class tau2_etale;          // (1/8) sum weight * fields = 36
  mpq_class rational_prefactor;  // |D4| alpha* tau_inf tau_2 = 27/8
  double product = 0.0;
  double leading = 0.0;
  double difference = 0.0;
  double tail_bound = 0.0;
};
TamagawaReport tamagawa_constant(const EulerProductSpec& spec);

// C * X1 X2 X3 X4.
double predicted_count(const BoundBox& box, const EulerProductSpec& spec);
inline double predicted_count(const BoundBox& box, const EulerValue& leading) {
  return leading.value * box.volume();
}

// (1/2) prod_{p>2}(1 - 1/p^2) = 4/pi^2, density of odd squarefree integers.
double odd_squarefree_density();

}  // namespace d4
