#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "d4census/census.hpp"
#include "d4census/charsum.hpp"
#include "d4census/error.hpp"
#include "d4census/localsolve.hpp"

using namespace d4;

namespace {

mpq_class f_ref(std::uint64_t n) {
  mpq_class v = 1;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    v *= mpq_class(p, p + 1);
    while (n % p == 0) n /= p;
  }
  v.canonicalize();
  return v;
}

std::uint64_t tau_ref(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

}  // namespace

TEST_CASE("L examples") {
  const Signs pp{1, 1};
  const TwoExponents zero{0, 0, 0};
  for (const Signs d : kSignClasses) {
    for (const TwoExponents nu : kTwoExponentClasses) {
      CHECK(L_product({1, 1, 1}, d, nu) == 1);
      CHECK(L_divisor_sum({1, 1, 1}, d, nu) == 1);
    }
  }
  CHECK(L_product({1, 1, 3}, pp, zero) == 2);
  CHECK(L_divisor_sum({1, 1, 3}, pp, zero) == 2);
  CHECK(L_product({7, 1, 1}, pp, zero) == 0);
  CHECK(L_divisor_sum({7, 1, 1}, pp, zero) == 0);
  CHECK_THROWS_AS(L_product({3, 3, 1}, pp, zero), PreconditionError);
  CHECK_THROWS_AS(L_divisor_sum({2, 1, 1}, pp, zero), PreconditionError);
}

TEST_CASE("L product equals divisor sum") {
  std::size_t cases = 0;
  for (std::uint64_t a = 1; a <= 600; a += 2) {
    if (!is_squarefree(static_cast<std::int64_t>(a))) continue;
    for (std::uint64_t b = 1; a * b <= 600; b += 2) {
      if (!is_squarefree(static_cast<std::int64_t>(b)) || std::gcd(a, b) != 1) continue;
      for (std::uint64_t c = 1; a * b * c <= 600; c += 2) {
        if (!is_squarefree(static_cast<std::int64_t>(c)) || std::gcd(a * b, c) != 1) continue;
        for (const Signs d : kSignClasses) {
          for (const TwoExponents nu : kTwoExponentClasses) {
            ++cases;
            const std::int64_t l = L_product({a, b, c}, d, nu);
            REQUIRE(l == L_divisor_sum({a, b, c}, d, nu));
            // L is tau or 0, and positive exactly when (i)-(iii) hold.
            const auto tau = static_cast<std::int64_t>(tau_ref(a * b * c));
            const SignedTriple t = make_triple(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                                               static_cast<std::int64_t>(c), d, nu);
            REQUIRE(l == (odd_place_conditions(t) ? tau : 0));
          }
        }
      }
    }
  }
  CHECK(cases > 10000);
}

TEST_CASE("character spec validation") {
  CHECK_NOTHROW(CharacterSpec::kronecker(-3, 3));
  CHECK_NOTHROW(CharacterSpec::kronecker(-4, 12, 5));
  CHECK_NOTHROW(CharacterSpec::kronecker(5, 15));
  CHECK_THROWS_AS(CharacterSpec::kronecker(3, 3), PreconditionError);   // 3 = 3 mod 4
  CHECK_THROWS_AS(CharacterSpec::kronecker(4, 4), PreconditionError);   // square
  CHECK_THROWS_AS(CharacterSpec::kronecker(-3, 5), PreconditionError);  // |D| does not divide q
  CHECK_THROWS_AS(CharacterSpec::principal(6, 4), PreconditionError);   // gcd(m, q) > 1
  const auto chi = CharacterSpec::kronecker(-3, 3);
  CHECK(chi(1) == 1);
  CHECK(chi(2) == -1);
  CHECK(chi(3) == 0);
  CHECK(chi(5) == -1);
  CHECK(chi(7) == 1);
}

TEST_CASE("character sum examples") {
  const auto tables = SieveTables::build(1000);
  const auto r = character_sum_f(10, CharacterSpec::principal(1), std::nullopt, tables);
  const mpq_class want = 1 + mpq_class(2, 3) + mpq_class(3, 4) + mpq_class(5, 6) + mpq_class(1, 2) +
                         mpq_class(7, 8) + mpq_class(5, 9);
  REQUIRE(r.exact.has_value());
  CHECK(*r.exact == want);
  CHECK(r.value == doctest::Approx(want.get_d()));

  const auto s = character_sum_f(5, CharacterSpec::kronecker(-3, 3), std::nullopt, tables);
  CHECK(*s.exact == mpq_class(-1, 2));
  CHECK(s.main_term == 0.0);

  const auto z = character_sum_f(0.5, CharacterSpec::principal(1), std::nullopt, tables);
  CHECK(*z.exact == 0);
  CHECK(z.value == 0.0);
  CHECK_THROWS_AS(character_sum_f(2000, CharacterSpec::principal(1), std::nullopt, tables), CapacityError);
  CHECK_THROWS_AS(character_sum_f(10, CharacterSpec::principal(1), ResidueClass{2, 4}, tables), PreconditionError);
}

TEST_CASE("character sums match a direct rational sum") {
  const auto tables = SieveTables::build(3000);
  struct Case {
    CharacterSpec spec;
    std::optional<ResidueClass> residue;
  };
  const std::vector<Case> cases{
      {CharacterSpec::principal(1), std::nullopt},        {CharacterSpec::principal(6, 5), std::nullopt},
      {CharacterSpec::kronecker(-4, 4), std::nullopt},    {CharacterSpec::kronecker(5, 15, 7), std::nullopt},
      {CharacterSpec::kronecker(-3, 3), ResidueClass{1, 4}}, {CharacterSpec::principal(7, 3), ResidueClass{3, 8}},
  };
  for (const Case& c : cases) {
    for (const double x : {1.0, 37.5, 400.0, 2500.0}) {
      mpq_class direct = 0;
      for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(x); ++n) {
        if (!is_squarefree(static_cast<std::int64_t>(n)) || std::gcd(n, c.spec.m) != 1) continue;
        if (c.residue && n % c.residue->q0 != c.residue->a) continue;
        int chi = std::gcd(n, c.spec.q) == 1 ? 1 : 0;
        if (c.spec.discriminant) chi *= kronecker(*c.spec.discriminant, static_cast<std::int64_t>(n));
        direct += chi * f_ref(n);
      }
      direct.canonicalize();
      REQUIRE(character_sum_f_exact(x, c.spec, c.residue, tables) == direct);
      CHECK(character_sum_f_serial(x, c.spec, c.residue, tables) == doctest::Approx(direct.get_d()).epsilon(1e-12));
    }
  }
}

TEST_CASE("character sum floating value is independent of workers") {
  const auto tables = SieveTables::build(300000);
  CharacterSumOptions o;
  o.exact_limit = 0;
  const auto spec = CharacterSpec::kronecker(-20, 40, 3);
  o.workers = 1;
  const double one = character_sum_f(300000, spec, std::nullopt, tables, o).value;
  for (const int w : {2, 4, 8}) {
    o.workers = w;
    CHECK(character_sum_f(300000, spec, std::nullopt, tables, o).value == one);
  }
  CHECK(character_sum_f_serial(300000, spec, std::nullopt, tables) == one);
}

TEST_CASE("character sum main terms") {
  const auto tables = SieveTables::build(100000);
  CharacterSumOptions o;
  o.exact_limit = 0;
  for (const std::uint64_t q : {1, 3, 4, 10}) {
    const auto r = character_sum_f(100000, CharacterSpec::principal(q, q == 1 ? 7 : 1), std::nullopt, tables, o);
    CHECK(r.main_term > 0.0);
    CHECK(r.deviation < 100.0);
  }
  // Residue class: c(rad(m q q0)) x / phi(q0), and c(6) / c(3) = (3/4).
  const auto all = character_sum_f(100000, CharacterSpec::principal(3), std::nullopt, tables, o);
  const auto cls = character_sum_f(100000, CharacterSpec::principal(3), ResidueClass{1, 8}, tables, o);
  CHECK(cls.main_term * 4 == doctest::Approx(all.main_term * 0.75));
  CHECK(cls.deviation < 100.0);
}

TEST_CASE("class keys") {
  const auto keys = all_class_keys();
  CHECK(keys.size() == 768);
  std::size_t admissible = 0;
  for (const ClassKey& k : keys) admissible += is_admissible(k);
  CHECK(admissible == 3 * (48 + 32 + 32 + 32));
}

TEST_CASE("T examples") {
  const auto tables = SieveTables::build(200);
  std::uint64_t total = 0;
  std::size_t contributing = 0;
  for (const ClassKey& k : all_class_keys()) {
    const std::uint64_t t = T_direct(k, {1, 1, 1, 1}, tables);
    if (is_admissible(k)) {
      total += t;
      contributing += t > 0;
    }
    CHECK(T_direct(k, {1, 1, 1, 0.5}, tables) == 0);
  }
  CHECK(4 * total == 16);
  CHECK(contributing == 4);
  CHECK(census_from_classes({1, 1, 1, 1}, tables) == 16);
}

TEST_CASE("census through classes for asymmetric boxes") {
  const auto tables = SieveTables::build(200);
  for (const BoundBox box : {BoundBox{10, 10, 10, 10}, BoundBox{17, 5, 23, 40}, BoundBox{3, 31, 9, 7}}) {
    CHECK(census_from_classes(box, tables, 2) == exact_census(box, tables).exact);
  }
}

TEST_CASE("T111 examples") {
  const auto tables = SieveTables::build(1000);
  const ClassKey ones{{1, 1, 1}, {1, 1}, {0, 0, 0}};
  CHECK(T111_direct(1, 1, 1, ones, tables) == 1);
  const ClassKey three{{3, 1, 1}, {1, 1}, {0, 0, 0}};
  CHECK(T111_direct(3, 1, 1, three, tables) == mpq_class(3, 4));
  CHECK(T111_direct(0.5, 1, 1, ones, tables) == 0);
}

TEST_CASE("T111 matches a direct rational sum") {
  const auto tables = SieveTables::build(1000);
  const ClassKey key{{3, 5, 1}, {1, -1}, {1, 0, 0}};
  mpq_class direct = 0;
  for (std::uint64_t a = 3; a <= 60; a += 8) {
    if (!is_squarefree(static_cast<std::int64_t>(a))) continue;
    for (std::uint64_t b = 5; b <= 45; b += 8) {
      if (!is_squarefree(static_cast<std::int64_t>(b)) || std::gcd(a, b) != 1) continue;
      for (std::uint64_t c = 1; c <= 70; c += 8) {
        if (!is_squarefree(static_cast<std::int64_t>(c)) || std::gcd(a * b, c) != 1) continue;
        direct += f_ref(a) * f_ref(b) * f_ref(c);
      }
    }
  }
  direct.canonicalize();
  CHECK(T111_direct(60, 45, 70, key, tables) == direct);
}

TEST_CASE("T111 against c~ X1 X2 X3") {
  const auto tables = SieveTables::build(1000);
  EulerProductSpec spec;
  const double ct = c_tilde(spec).value;
  for (const ClassKey& key : {ClassKey{{1, 1, 1}, {1, 1}, {0, 0, 0}}, ClassKey{{7, 3, 5}, {1, 1}, {0, 0, 0}}}) {
    const double ratio = T111_direct(500, 500, 500, key, tables).get_d() / (ct * 500.0 * 500.0 * 500.0);
    CHECK(ratio > 0.0);
    CHECK(ratio < 2.0);
  }
}

TEST_CASE("bilinear sums") {
  const auto one = bilinear_sum({0, 1}, {0, 1});
  CHECK(one.sum == 1.0);
  CHECK(std::isfinite(one.ratio));

  std::vector<double> alpha(101, 0.0);
  double total = 0.0;
  for (std::size_t m = 1; m <= 100; m += 2) {
    alpha[m] = (m % 3 == 0) ? -0.5 : 1.0;
    total += alpha[m];
  }
  std::vector<double> beta(40, 0.0);
  beta[1] = 1.0;
  const auto r = bilinear_sum(alpha, beta);
  CHECK(r.sum == doctest::Approx(total));
  CHECK(std::isfinite(r.ratio));

  std::mt19937_64 rng(2024);
  std::vector<double> a(513, 0.0), b(513, 0.0);
  for (std::size_t i = 1; i <= 512; i += 2) {
    a[i] = (rng() & 1) ? 1.0 : -1.0;
    b[i] = (rng() & 1) ? 1.0 : -1.0;
  }
  CHECK(bilinear_sum(a, b).ratio < 10.0);

  CHECK_THROWS_AS(bilinear_sum({0, 2.0}, {0, 1}), PreconditionError);
  CHECK_THROWS_AS(bilinear_sum({0, 1, 1}, {0, 1}), PreconditionError);
}
