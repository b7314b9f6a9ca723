#pragma once

// Finite, exact checks of the analytic side: the local factor L as a product
// and as a divisor sum, weighted character sums against their main terms, the
// per-class sums T and T_{1,1,1}, and a bilinear Jacobi-symbol sum.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "d4census/arith.hpp"
#include "d4census/box.hpp"

namespace d4 {

// Odd parts (m1', m2', m3').
using OddParts = std::array<std::uint64_t, 3>;

// prod_{p | m1'm2'm3'} (1 + (-d2 d3 2^{a+b} m2'm3'/p)) (1 + (d3 2^{mu+b} m1'm3'/p))
//                      (1 + (d2 2^{mu+a} m1'm2'/p)).
std::int64_t L_product(const OddParts& mp, Signs delta, TwoExponents nu);

// sum_{k_i l_i = m_i'} u(k1,k2,k3) (l1/k2k3) (l2/k1k3) (l3/k1k2).
std::int64_t L_divisor_sum(const OddParts& mp, Signs delta, TwoExponents nu);

struct CharacterSpec {
  std::uint64_t q = 1;
  // Principal character mod q when empty, else n -> (D/n) [gcd(n, q) = 1].
  std::optional<std::int64_t> discriminant;
  std::uint64_t m = 1;  // sum restricted to gcd(n, m) = 1

  static CharacterSpec principal(std::uint64_t q, std::uint64_t m = 1);
  static CharacterSpec kronecker(std::int64_t d, std::uint64_t q, std::uint64_t m = 1);

  // Throws PreconditionError unless gcd(m, q) = 1 and, for a Kronecker
  // character, D = 0, 1 mod 4 is not a square and |D| divides q.
  void validate() const;
  int operator()(std::uint64_t n) const;
};

struct ResidueClass {
  std::uint64_t a = 0;
  std::uint64_t q0 = 1;
};

struct CharacterSumOptions {
  int workers = 1;
  // Exact rational sums are carried out for x up to this bound.
  std::uint64_t exact_limit = 20'000;
};

struct CharacterSumRecord {
  double value = 0.0;
  std::optional<mpq_class> exact;
  double main_term = 0.0;
  // |S - main| / (sqrt(x) max(log x, 1)).
  double deviation = 0.0;
};

// S = sum_{n <= x, (n,m)=1, n = a mod q0} mu^2(n) chi(n) f(n). The floating
// value is a fixed-chunk reduction and does not depend on the worker count.
CharacterSumRecord character_sum_f(double x, const CharacterSpec& spec,
                                   const std::optional<ResidueClass>& residue,
                                   const SieveTables& tables, const CharacterSumOptions& options = {});

// Serial references for the same sum.
mpq_class character_sum_f_exact(double x, const CharacterSpec& spec,
                                const std::optional<ResidueClass>& residue, const SieveTables& tables);
double character_sum_f_serial(double x, const CharacterSpec& spec,
                              const std::optional<ResidueClass>& residue, const SieveTables& tables);

struct ClassKey {
  std::array<int, 3> eps{1, 1, 1};
  Signs delta;
  TwoExponents nu;

  friend bool operator==(const ClassKey&, const ClassKey&) = default;
};

// 64 eps x 3 delta x 4 nu, ordered nu, delta, eps.
std::vector<ClassKey> all_class_keys();
bool is_admissible(const ClassKey& key);

// sum over odd squarefree pairwise coprime m' in the box with m_i' = eps_i
// mod 8 of L(m', delta, nu) * #{t <= X4 : mu^2(2 t m') = 1}, restricted to
// non-degenerate triples.
std::uint64_t T_direct(const ClassKey& key, const BoundBox& box, const SieveTables& tables);

// 4 * sum of T_direct over admissible keys; equals the exact census.
std::uint64_t census_from_classes(const BoundBox& box, const SieveTables& tables, int workers = 1);

// sum over coprime odd squarefree l_i <= X_i, l_i = eps_i mod 8, of f(l1) f(l2) f(l3).
mpq_class T111_direct(double x1, double x2, double x3, const ClassKey& key, const SieveTables& tables);

struct BilinearResult {
  double sum = 0.0;
  double normalizer = 0.0;  // (M N^{5/6} + M^{5/6} N) (log 3MN)^{7/6}
  double ratio = 0.0;
};

// sum_{m <= M, n <= N} alpha[m] beta[n] (m/n). alpha has size M + 1 and beta
// size N + 1 (index 0 unused); entries must satisfy |.| <= 1 and vanish on
// even indices.
BilinearResult bilinear_sum(const std::vector<double>& alpha, const std::vector<double>& beta);

}  // namespace d4
