#include "d4census/census.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "d4census/error.hpp"
#include "d4census/localsolve.hpp"

namespace d4 {

namespace {

constexpr std::array<SplittingRow, 2> kRowsS{{
    {"1^2 1^2 1^2 1^2", "1 1", "1^2", "1^2 1^2", "1^2"},
    {"2^2 2^2", "1 1", "1^2", "1^2 1^2", "1^2"},
}};
constexpr std::array<SplittingRow, 2> kRowsRS{{
    {"1^2 1^2 1^2 1^2", "1^2", "1 1", "1^2 1^2", "1^2"},
    {"2^2 2^2", "1^2", "1 1", "1^2 1^2", "1^2"},
}};
constexpr std::array<SplittingRow, 2> kRowsR{{
    {"1^4 1^4", "1^2", "1^2", "1^2 1^2", "1 1"},
    {"2^4", "1^2", "1^2", "2^2", "2"},
}};
constexpr std::array<SplittingRow, 4> kRowsR2{{
    {"1^2 1^2 1^2 1^2", "1 1", "1 1", "1 1 1 1", "1 1"},
    {"2^2 2^2", "1 1", "2", "2 2", "2"},
    {"2^2 2^2", "2", "1 1", "2 2", "2"},
    {"2^2 2^2", "2", "2", "2 2", "1 1"},
}};

bool is_odd_prime(std::uint64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

void check_twist(const SignedTriple& t, std::uint64_t twist) {
  validate_triple(t);
  if (twist == 0 || twist % 2 == 0 || !is_squarefree(static_cast<std::int64_t>(twist))) {
    throw PreconditionError("twist must be odd and squarefree, got " + std::to_string(twist));
  }
  const auto tw = static_cast<std::int64_t>(twist);
  if (std::gcd(tw, t.m1) != 1 || std::gcd(tw, t.m2) != 1 || std::gcd(tw, t.m3) != 1) {
    throw PreconditionError("twist must be coprime to m1 m2 m3");
  }
}

// Odd-prime conditions in a form that avoids a Kronecker symbol per variant.
// A prime p dividing one of m1', m2', m3' gets a type from three signs:
//   bit 0: (product of the other two odd parts / p) = -1
//   bit 1: (-1/p) = -1
//   bit 2: (2/p) = -1
// For each sign/2-adic variant and position, allowed[] holds the types whose
// Legendre condition is +1.
struct VariantTables {
  std::array<std::array<std::uint8_t, 3>, 12> allowed{};
  // two_adic[variant][eps index]: E-set membership.
  std::array<std::array<bool, 64>, 12> two_adic{};
  std::array<TwoExponents, 12> nu{};
  std::array<Signs, 12> delta{};
};

int eps_index(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return static_cast<int>(((a & 7) >> 1) | (((b & 7) >> 1) << 2) | (((c & 7) >> 1) << 4));
}

VariantTables build_variant_tables() {
  VariantTables v;
  int k = 0;
  for (const TwoExponents nu : kTwoExponentClasses) {
    for (const Signs d : kSignClasses) {
      v.nu[k] = nu;
      v.delta[k] = d;
      // Exponents of (-1/p) and (2/p) at m1', m2', m3' primes:
      //   m1': (-d2 d3 m2 m3 / p)   m2': (d3 2^{mu+beta} m1 m3 / p)
      //   m3': (d2 2^{mu+alpha} m1 m2 / p)
      const std::array<int, 3> e_neg{d.d2 * d.d3 == 1 ? 1 : 0, d.d3 == -1 ? 1 : 0,
                                     d.d2 == -1 ? 1 : 0};
      const std::array<int, 3> e_two{(nu.alpha + nu.beta) & 1, (nu.mu + nu.beta) & 1,
                                     (nu.mu + nu.alpha) & 1};
      for (int pos = 0; pos < 3; ++pos) {
        std::uint8_t mask = 0;
        for (int type = 0; type < 8; ++type) {
          const int parity = (type & 1) + e_neg[pos] * ((type >> 1) & 1) + e_two[pos] * ((type >> 2) & 1);
          if (parity % 2 == 0) mask |= static_cast<std::uint8_t>(1u << type);
        }
        v.allowed[k][pos] = mask;
      }
      for (int idx = 0; idx < 64; ++idx) {
        const std::array<int, 3> eps{2 * (idx & 3) + 1, 2 * ((idx >> 2) & 3) + 1,
                                     2 * ((idx >> 4) & 3) + 1};
        v.two_adic[k][idx] = in_E_set(ESetKey{nu, eps}, d);
      }
      ++k;
    }
  }
  return v;
}

const VariantTables& variant_tables() {
  static const VariantTables tables = build_variant_tables();
  return tables;
}

std::uint8_t prime_type_mask(std::uint64_t n, std::int64_t others, const SieveTables& tables) {
  std::uint8_t present = 0;
  tables.for_each_prime_factor(n, [&](std::uint32_t p) {
    int type = 0;
    if (kronecker(others % p, p) == -1) type |= 1;
    if (p % 4 == 3) type |= 2;
    if (p % 8 == 3 || p % 8 == 5) type |= 4;
    present |= static_cast<std::uint8_t>(1u << type);
  });
  return present;
}

SignedTriple triple_of(std::uint64_t a, std::uint64_t b, std::uint64_t c, TwoExponents nu, Signs d) {
  return {static_cast<std::int64_t>(a) << nu.mu, d.d2 * (static_cast<std::int64_t>(b) << nu.alpha),
          d.d3 * (static_cast<std::int64_t>(c) << nu.beta)};
}

struct Bounds {
  std::uint64_t m1p, m2p, m3p, twist;
};

Bounds bounds_of(const BoundBox& box) {
  return {floor_bound(box.x3), floor_bound(box.x1), floor_bound(box.x2), floor_bound(box.x4)};
}

void check_capacity(const BoundBox& box, const SieveTables& tables) {
  const std::uint64_t need = required_sieve_limit(box);
  if (!tables.covers(need)) {
    throw CapacityError("sieve limit " + std::to_string(tables.limit()) + " below required " +
                        std::to_string(need));
  }
}

// Visits every admissible signed triple whose odd parts are (a, b, c) for a
// fixed a. fn(triple, b, c) is called in the documented order.
template <class Fn>
void visit_m1(std::uint64_t a, const std::vector<std::uint32_t>& list_b,
              const std::vector<std::uint32_t>& list_c, const SieveTables& tables, Fn&& fn) {
  const VariantTables& vt = variant_tables();
  for (const std::uint64_t b : list_b) {
    if (std::gcd(a, b) != 1) continue;
    for (const std::uint64_t c : list_c) {
      if (std::gcd(a * b, c) != 1) continue;
      const auto ia = static_cast<std::int64_t>(a);
      const auto ib = static_cast<std::int64_t>(b);
      const auto ic = static_cast<std::int64_t>(c);
      const std::uint8_t ta = prime_type_mask(a, ib * ic, tables);
      const std::uint8_t tb = prime_type_mask(b, ia * ic, tables);
      const std::uint8_t tc = prime_type_mask(c, ia * ib, tables);
      const int e = eps_index(a, b, c);
      for (int k = 0; k < 12; ++k) {
        if (!vt.two_adic[k][e]) continue;
        if ((ta & ~vt.allowed[k][0]) || (tb & ~vt.allowed[k][1]) || (tc & ~vt.allowed[k][2])) continue;
        const SignedTriple t = triple_of(a, b, c, vt.nu[k], vt.delta[k]);
        if (!is_nondegenerate(t)) continue;
        fn(t, b, c);
      }
    }
  }
}

}  // namespace

std::string_view to_string(InertiaClass c) {
  switch (c) {
    case InertiaClass::S: return "S";
    case InertiaClass::RS: return "RS";
    case InertiaClass::R: return "R";
    case InertiaClass::R2: return "R2";
    case InertiaClass::Unramified: return "unramified";
  }
  return "?";
}

InvariantVector invariants_of(const SignedTriple& t, std::uint64_t twist) {
  check_twist(t, twist);
  return {static_cast<std::uint64_t>(odd_part(t.m2)), static_cast<std::uint64_t>(odd_part(t.m3)),
          static_cast<std::uint64_t>(odd_part(t.m1)), twist};
}

InertiaClass inertia_class(std::uint64_t p, const SignedTriple& t, std::uint64_t twist) {
  if (p == 2) throw PreconditionError("p = 2 is wildly ramified; no inertia class");
  if (!is_odd_prime(p)) throw PreconditionError(std::to_string(p) + " is not an odd prime");
  check_twist(t, twist);
  const auto q = static_cast<std::int64_t>(p);
  if (t.m1 % q == 0) return InertiaClass::R;
  if (t.m2 % q == 0) return kM2PrimeClass;
  if (t.m3 % q == 0) return kM3PrimeClass;
  if (twist % p == 0) return InertiaClass::R2;
  return InertiaClass::Unramified;
}

std::span<const SplittingRow> splitting_rows(InertiaClass c) {
  switch (c) {
    case InertiaClass::S: return kRowsS;
    case InertiaClass::RS: return kRowsRS;
    case InertiaClass::R: return kRowsR;
    case InertiaClass::R2: return kRowsR2;
    case InertiaClass::Unramified: break;
  }
  throw PreconditionError("no splitting table for unramified primes");
}

TwistCounter::TwistCounter(const SieveTables& tables, double y) : y_(floor_bound(y)) {
  if (!tables.covers(y_)) {
    throw CapacityError("twist bound " + std::to_string(y_) + " exceeds sieve limit " +
                        std::to_string(tables.limit()));
  }
  squarefree_prefix_.assign(y_ + 1, 0);
  for (std::uint64_t n = 1; n <= y_; ++n) {
    squarefree_prefix_[n] = squarefree_prefix_[n - 1] + (tables.squarefree(n) ? 1u : 0u);
  }
}

std::uint64_t TwistCounter::count(std::span<const std::uint32_t> odd_primes) const {
  if (y_ == 0) return 0;
  std::array<std::uint64_t, 24> primes{};
  std::size_t np = 0;
  primes[np++] = 2;
  for (const std::uint32_t p : odd_primes) {
    if (np == primes.size()) throw PreconditionError("too many prime factors");
    primes[np++] = p;
  }
  std::int64_t total = 0;
  // Smooth d = prod primes[i]^{e_i} <= y, weight (-1)^{sum e_i}.
  auto walk = [&](auto&& self, std::size_t from, std::uint64_t d, int sign) -> void {
    total += sign * static_cast<std::int64_t>(squarefree_prefix_[y_ / d]);
    for (std::size_t i = from; i < np; ++i) {
      std::uint64_t next = d;
      int s = sign;
      while (next <= y_ / primes[i]) {
        next *= primes[i];
        s = -s;
        self(self, i + 1, next, s);
      }
    }
  };
  walk(walk, 0, 1, 1);
  return static_cast<std::uint64_t>(total);
}

std::uint64_t twist_count(std::uint64_t m, double y, const SieveTables& tables) {
  if (m == 0 || m % 2 == 0 || !is_squarefree(static_cast<std::int64_t>(m))) {
    throw PreconditionError("twist_count needs odd squarefree m, got " + std::to_string(m));
  }
  std::vector<std::uint32_t> primes;
  std::uint64_t n = m;
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) {
      primes.push_back(static_cast<std::uint32_t>(p));
      n /= p;
    }
  }
  if (n > 1) primes.push_back(static_cast<std::uint32_t>(n));
  const TwistCounter counter(tables, y);
  return (std::uint64_t{1} << primes.size()) * counter.count(primes);
}

bool is_nondegenerate(const SignedTriple& t) {
  return t.m1 * t.m2 != 1 && t.m1 * t.m3 != 1 && t.m2 * t.m3 != 1;
}

std::vector<std::uint32_t> odd_squarefree_up_to(std::uint64_t bound, const SieveTables& tables) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t n = 1; n <= bound; n += 2) {
    if (tables.squarefree(n)) out.push_back(static_cast<std::uint32_t>(n));
  }
  return out;
}

std::uint64_t required_sieve_limit(const BoundBox& box) {
  const std::uint64_t m = std::max({floor_bound(box.x1), floor_bound(box.x2), floor_bound(box.x3)});
  return std::max<std::uint64_t>({2 * m, floor_bound(box.x4), 1});
}

std::vector<SignedTriple> enumerate_admissible_triples(double x1, double x2, double x3,
                                                       const SieveTables& tables) {
  check_capacity({x1, x2, x3, 0.0}, tables);
  const BoundBox box{x1, x2, x3, 0.0};
  const Bounds bd = bounds_of(box);
  const auto list_a = odd_squarefree_up_to(bd.m1p, tables);
  const auto list_b = odd_squarefree_up_to(bd.m2p, tables);
  const auto list_c = odd_squarefree_up_to(bd.m3p, tables);
  std::vector<SignedTriple> out;
  for (const std::uint64_t a : list_a) {
    visit_m1(a, list_b, list_c, tables,
             [&](const SignedTriple& t, std::uint64_t, std::uint64_t) { out.push_back(t); });
  }
  return out;
}

CensusReport exact_census(const BoundBox& box, const SieveTables& tables, const CensusOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  check_capacity(box, tables);
  if (options.workers < 1) throw PreconditionError("workers must be >= 1");

  const Bounds bd = bounds_of(box);
  const auto list_a = odd_squarefree_up_to(bd.m1p, tables);
  const auto list_b = odd_squarefree_up_to(bd.m2p, tables);
  const auto list_c = odd_squarefree_up_to(bd.m3p, tables);
  const TwistCounter counter(tables, box.x4);

  std::vector<std::vector<BreakdownRow>> rows(options.breakdown ? list_a.size() : 0);
  std::uint64_t total = 0;
  std::uint64_t visited = 0;
  const auto n_a = static_cast<std::int64_t>(list_a.size());

#pragma omp parallel for num_threads(options.workers) schedule(dynamic, 1) reduction(+ : total, visited)
  for (std::int64_t i = 0; i < n_a; ++i) {
    const std::uint64_t a = list_a[static_cast<std::size_t>(i)];
    std::vector<std::uint32_t> primes;
    std::uint64_t last_b = 0;
    std::uint64_t last_c = 0;
    std::uint64_t weight = 0;
    visit_m1(a, list_b, list_c, tables, [&](const SignedTriple& t, std::uint64_t b, std::uint64_t c) {
      if (b != last_b || c != last_c) {
        primes.clear();
        for (const std::uint64_t n : {a, b, c}) {
          tables.for_each_prime_factor(n, [&](std::uint32_t p) { primes.push_back(p); });
        }
        weight = 4 * (std::uint64_t{1} << primes.size()) * counter.count(primes);
        last_b = b;
        last_c = c;
      }
      total += weight;
      ++visited;
      if (options.breakdown) rows[static_cast<std::size_t>(i)].push_back({t, weight, 0});
    });
  }

  CensusReport r;
  r.box = box;
  r.exact = total;
  r.triples_visited = visited;
  r.predicted = predicted_count(box, options.spec);
  r.ratio = r.predicted > 0.0 ? static_cast<double>(r.exact) / r.predicted : 0.0;
  if (options.breakdown) {
    std::uint64_t running = 0;
    for (auto& chunk : rows) {
      for (auto& row : chunk) {
        running += row.twists;
        row.cumulative = running;
        r.breakdown.push_back(row);
      }
    }
  }
  r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return r;
}

std::uint64_t exact_census_serial(const BoundBox& box, const SieveTables& tables) {
  check_capacity(box, tables);
  const Bounds bd = bounds_of(box);
  std::uint64_t total = 0;
  for (std::uint64_t a = 1; a <= bd.m1p; a += 2) {
    if (!tables.squarefree(a)) continue;
    for (std::uint64_t b = 1; b <= bd.m2p; b += 2) {
      if (!tables.squarefree(b) || std::gcd(a, b) != 1) continue;
      for (std::uint64_t c = 1; c <= bd.m3p; c += 2) {
        if (!tables.squarefree(c) || std::gcd(a * b, c) != 1) continue;
        for (const TwoExponents nu : kTwoExponentClasses) {
          for (const Signs d : kSignClasses) {
            const SignedTriple t = make_triple(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                                               static_cast<std::int64_t>(c), d, nu);
            if (!is_nondegenerate(t) || !satisfies_local_conditions(t)) continue;
            total += 4 * twist_count(a * b * c, box.x4, tables);
          }
        }
      }
    }
  }
  return total;
}

}  // namespace d4
