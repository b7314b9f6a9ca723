#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <numeric>
#include <set>
#include <tuple>

#include "d4census/error.hpp"
#include "d4census/localsolve.hpp"

using namespace d4;

namespace {

std::vector<std::int64_t> odd_primes_of(std::int64_t n) {
  std::vector<std::int64_t> out;
  n = odd_part(n);
  for (std::int64_t p = 3; p * p <= n; p += 2) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Set-builder descriptions of three E-sets, written out by hand. Entries
// are taken mod 8; "-e" means 8 - e.
int neg(int e) { return (8 - e) % 8; }
bool eq4(int a, int b) { return (a - b) % 4 == 0; }

bool literal_E000(int e1, int e2, int e3) { return eq4(e1, e2) || eq4(e1, e3); }

bool literal_E010(int e1, int e2, int e3) {
  return e1 == e3 || (eq4(e1, neg(e3)) && e1 != neg(e3) && eq4(e1, neg(e2))) ||
         (eq4(e1, e2) && e1 == neg(e3));
}

// E(0,1,0) with the second and third entries swapped.
bool literal_E001(int e1, int e2, int e3) {
  return e1 == e2 || (eq4(e1, neg(e2)) && e1 != neg(e2) && eq4(e1, neg(e3))) ||
         (eq4(e1, e3) && e1 == neg(e2));
}

}  // namespace

TEST_CASE("hilbert symbol examples") {
  for (const std::int64_t a : {1, 2, 3, -5, 6, 7, -10, 15}) {
    CHECK(hilbert_symbol(a, -a, RealPlace{}) == 1);
    CHECK(hilbert_symbol(a, -a, TwoPlace{}) == 1);
    for (const std::int64_t p : {3, 5, 7}) CHECK(hilbert_symbol(a, -a, OddPrime{p}) == 1);
  }
  CHECK(hilbert_symbol(-1, -1, RealPlace{}) == -1);
  CHECK(hilbert_symbol(2, 3, OddPrime{3}) == -1);
  CHECK(hilbert_symbol(-1, -1, TwoPlace{}) == -1);
  CHECK_THROWS_AS(hilbert_symbol(0, 3, TwoPlace{}), PreconditionError);
}

TEST_CASE("padic oracle examples") {
  CHECK(padic_oracle(2, 7, OddPrime{7}));
  CHECK_FALSE(padic_oracle(2, 3, OddPrime{3}));
  CHECK_FALSE(padic_oracle(-1, -1, RealPlace{}));
  CHECK_FALSE(padic_oracle(-1, -1, TwoPlace{}));
  CHECK_THROWS_AS(padic_oracle(9, 2, OddPrime{3}), PreconditionError);
  CHECK_THROWS_AS(padic_oracle(4, 3, TwoPlace{}), PreconditionError);
}

TEST_CASE("hilbert symbol agrees with the p-adic search") {
  std::vector<std::int64_t> sf;
  for (std::int64_t n = -30; n <= 30; ++n) {
    if (n != 0 && is_squarefree(n)) sf.push_back(n);
  }
  std::size_t cases = 0;
  for (const std::int64_t a : sf) {
    for (const std::int64_t b : sf) {
      std::vector<Place> places{RealPlace{}, TwoPlace{}};
      for (const std::int64_t p : odd_primes_of(a * b)) places.push_back(OddPrime{p});
      places.push_back(OddPrime{31});
      for (const Place& v : places) {
        ++cases;
        INFO("a=" << a << " b=" << b << " v=" << to_string(v));
        REQUIRE((hilbert_symbol(a, b, v) == 1) == padic_oracle(a, b, v));
      }
    }
  }
  CHECK(cases > 5000);
}

TEST_CASE("hilbert symbol is symmetric and bimultiplicative at 2") {
  const std::array<std::int64_t, 8> reps{1, 3, 5, 7, 2, 6, 10, 14};
  for (const std::int64_t a : reps) {
    for (const std::int64_t b : reps) {
      CHECK(hilbert_symbol(a, b, TwoPlace{}) == hilbert_symbol(b, a, TwoPlace{}));
      for (const std::int64_t c : reps) {
        if ((b * c) % 4 == 0) continue;
        CHECK(hilbert_symbol(a, b * c, TwoPlace{}) ==
              hilbert_symbol(a, b, TwoPlace{}) * hilbert_symbol(a, c, TwoPlace{}));
      }
    }
  }
}

TEST_CASE("E-set examples") {
  CHECK(in_E_set({{0, 0, 0}, {1, 1, 1}}, {1, 1}));
  CHECK_FALSE(in_E_set({{0, 0, 0}, {3, 5, 1}}, {1, 1}));
  CHECK(in_E_set({{0, 0, 0}, {1, 1, 1}}, {-1, 1}));
}

TEST_CASE("E-sets match the transcribed set-builder blocks") {
  struct Block {
    TwoExponents nu;
    bool (*member)(int, int, int);
  };
  const std::array<Block, 3> blocks{{{{0, 0, 0}, literal_E000}, {{0, 1, 0}, literal_E010}, {{0, 0, 1}, literal_E001}}};
  for (const Block& blk : blocks) {
    for (const Signs d : kSignClasses) {
      for (const int e1 : kUnitsMod8) {
        for (const int e2 : kUnitsMod8) {
          for (const int e3 : kUnitsMod8) {
            const int s2 = ((d.d2 * e2) % 8 + 8) % 8;
            const int s3 = ((d.d3 * e3) % 8 + 8) % 8;
            INFO("nu=(" << blk.nu.mu << blk.nu.alpha << blk.nu.beta << ") eps=" << e1 << e2 << e3);
            REQUIRE(in_E_set({blk.nu, {e1, e2, e3}}, d) == blk.member(e1, s2, s3));
          }
        }
      }
    }
  }
}

TEST_CASE("local conditions examples") {
  CHECK(satisfies_local_conditions({1, 2, 7}));
  CHECK_FALSE(satisfies_local_conditions({1, 2, 3}));
  CHECK_FALSE(satisfies_local_conditions({1, -2, -3}));
  CHECK_THROWS_AS(satisfies_local_conditions({1, 3, 3}), InvalidTriple);
}

TEST_CASE("local conditions agree with the p-adic search for small triples") {
  std::size_t cases = 0;
  for (std::int64_t m1 = 1; m1 <= 30; ++m1) {
    for (std::int64_t m2 = -30; m2 <= 30; ++m2) {
      for (std::int64_t m3 = -30; m3 <= 30; ++m3) {
        const SignedTriple t{m1, m2, m3};
        if (!is_valid_triple(t)) continue;
        ++cases;
        const std::int64_t a = m1 * m2;
        const std::int64_t b = m1 * m3;
        bool oracle = padic_oracle(a, b, RealPlace{}) && padic_oracle(a, b, TwoPlace{});
        for (const std::int64_t p : odd_primes_of(m1 * m2 * m3)) oracle = oracle && padic_oracle(a, b, OddPrime{p});
        INFO(m1 << "," << m2 << "," << m3);
        REQUIRE(satisfies_local_conditions(t) == oracle);
      }
    }
  }
  CHECK(cases > 5000);
}

TEST_CASE("conic point search") {
  CHECK(find_conic_point(2, 7, 5) == ConicPoint{3, 1, 1});
  for (const std::int64_t b : {-7, -1, 1, 2, 3, 30}) CHECK(find_conic_point(1, b, 1) == ConicPoint{1, 1, 0});
  CHECK_FALSE(find_conic_point(2, 3, 100).has_value());
}

TEST_CASE("conic points are witnesses of local solubility") {
  for (std::int64_t m1 = 1; m1 <= 15; ++m1) {
    for (std::int64_t m2 = -15; m2 <= 15; ++m2) {
      for (std::int64_t m3 = -15; m3 <= 15; ++m3) {
        const SignedTriple t{m1, m2, m3};
        if (!is_valid_triple(t)) continue;
        const std::int64_t a = m1 * m2;
        const std::int64_t b = m1 * m3;
        const auto pt = find_conic_point(a, b, 60);
        if (pt) {
          const auto [x, y, z] = *pt;
          REQUIRE(x * x - a * y * y - b * z * z == 0);
          REQUIRE(std::gcd(std::gcd(x, y), z) == 1);
          REQUIRE(satisfies_local_conditions(t));
        } else {
          // Every soluble conic here has a small point (Legendre's bound).
          REQUIRE_FALSE(satisfies_local_conditions(t));
        }
      }
    }
  }
}

TEST_CASE("u weight examples") {
  CHECK(u_weight(1, 1, 1, {1, 1}, {0, 0, 0}) == 1);
  CHECK(u_weight(3, 1, 1, {1, 1}, {0, 0, 0}) == -1);
  CHECK(u_weight(3, 3, 1, {1, 1}, {0, 0, 0}) == 1);
  CHECK_THROWS_AS(u_weight(2, 1, 1, {1, 1}, {0, 0, 0}), PreconditionError);
  CHECK(u_weight(11, 9, 1, {1, -1}, {1, 0, 0}) == u_weight(3, 1, 1, {1, -1}, {1, 0, 0}));
}

TEST_CASE("u weight is the 2-adic symbol and is +1 on E") {
  for (const TwoExponents nu : kTwoExponentClasses) {
    for (const Signs d : kSignClasses) {
      for (const int e1 : kUnitsMod8) {
        for (const int e2 : kUnitsMod8) {
          for (const int e3 : kUnitsMod8) {
            const std::int64_t a = (std::int64_t{1} << (nu.mu + nu.alpha)) * d.d2 * e1 * e2;
            const std::int64_t b = (std::int64_t{1} << (nu.mu + nu.beta)) * d.d3 * e1 * e3;
            const int u = u_weight(e1, e2, e3, d, nu);
            REQUIRE(u == hilbert_symbol(a, b, TwoPlace{}));
            if (in_E_set({nu, {e1, e2, e3}}, d)) REQUIRE(u == 1);
          }
        }
      }
    }
  }
}

TEST_CASE("eta is a parity") {
  CHECK(eta(1) == 0);
  CHECK(eta(3) == 1);
  CHECK(eta(5) == 0);
  CHECK(eta(7) == 1);
  CHECK(eta(-1) == 1);
}
