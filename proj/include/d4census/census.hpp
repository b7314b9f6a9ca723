#pragma once

// Exact census of pairs (M, sigma) with inv_i(M) <= X_i.
//
// Index convention: X1 bounds inv1 = m2', X2 bounds inv2 = m3', X3 bounds
// inv3 = m1' and X4 bounds inv4 = t (the odd squarefree twist). For a
// symmetric box this is immaterial.

#include <chrono>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "d4census/arith.hpp"
#include "d4census/asymptotic.hpp"
#include "d4census/box.hpp"

namespace d4 {

struct InvariantVector {
  std::uint64_t inv1 = 1;
  std::uint64_t inv2 = 1;
  std::uint64_t inv3 = 1;
  std::uint64_t inv4 = 1;

  friend bool operator==(const InvariantVector&, const InvariantVector&) = default;
};

enum class InertiaClass { S, RS, R, R2, Unramified };

std::string_view to_string(InertiaClass c);

// Classes of odd primes dividing m2 (counted by inv1) and m3 (inv2). Swapping
// the two is the outer automorphism of D4 and leaves every count unchanged.
inline constexpr InertiaClass kM2PrimeClass = InertiaClass::S;
inline constexpr InertiaClass kM3PrimeClass = InertiaClass::RS;

// (m2', m3', m1', t).
InvariantVector invariants_of(const SignedTriple& t, std::uint64_t twist);

InertiaClass inertia_class(std::uint64_t p, const SignedTriple& t, std::uint64_t twist);

// Splitting types (M, K1, K2, L, K) of a tamely ramified prime.
struct SplittingRow {
  std::string_view m;
  std::string_view k1;
  std::string_view k2;
  std::string_view l;
  std::string_view k;
};
std::span<const SplittingRow> splitting_rows(InertiaClass c);

// Counts odd squarefree t <= Y coprime to a given odd squarefree m, using
// #{t <= Y : mu^2(t) = 1, (t, 2m) = 1} = sum_{d (2m)-smooth} lambda(d) Q(Y/d)
// where Q counts squarefree integers and lambda is Liouville's function.
class TwistCounter {
 public:
  TwistCounter(const SieveTables& tables, double y);

  std::uint64_t bound() const noexcept { return y_; }
  // odd_primes: the distinct prime factors of m (all odd).
  std::uint64_t count(std::span<const std::uint32_t> odd_primes) const;

 private:
  std::uint64_t y_ = 0;
  std::vector<std::uint32_t> squarefree_prefix_;
};

// tau(m) * #{t <= Y : t odd, squarefree, coprime to m}. Requires mu^2(2m) = 1.
std::uint64_t twist_count(std::uint64_t m, double y, const SieveTables& tables);

// All admissible signed triples with inv1 <= x1, inv2 <= x2, inv3 <= x3:
// valid, locally (hence globally) soluble and non-degenerate. Ordered by
// (m1', m2', m3'), then nu, then delta.
std::vector<SignedTriple> enumerate_admissible_triples(double x1, double x2, double x3,
                                                       const SieveTables& tables);

// None of m1 m2, m1 m3, m2 m3 is a square.
bool is_nondegenerate(const SignedTriple& t);

struct BreakdownRow {
  SignedTriple triple;
  std::uint64_t twists = 0;      // pairs (M, sigma) over this triple: 4 tau(m') #t
  std::uint64_t cumulative = 0;  // running census total
};

struct CensusOptions {
  int workers = 1;
  bool breakdown = false;
  EulerProductSpec spec{};
};

struct CensusReport {
  BoundBox box;
  std::uint64_t exact = 0;
  double predicted = 0.0;
  double ratio = 0.0;
  std::uint64_t triples_visited = 0;
  std::chrono::nanoseconds elapsed{0};
  std::vector<BreakdownRow> breakdown;
};

// Sieve limit needed to run a census over the box.
std::uint64_t required_sieve_limit(const BoundBox& box);

// OpenMP kernel. Deterministic for any worker count.
CensusReport exact_census(const BoundBox& box, const SieveTables& tables,
                          const CensusOptions& options = {});

// Serial reference: per-triple local-condition checks and twist counts.
std::uint64_t exact_census_serial(const BoundBox& box, const SieveTables& tables);

// Odd squarefree integers in [1, bound], ascending.
std::vector<std::uint32_t> odd_squarefree_up_to(std::uint64_t bound, const SieveTables& tables);

}  // namespace d4
