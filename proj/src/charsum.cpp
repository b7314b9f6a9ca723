#include "d4census/charsum.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "d4census/asymptotic.hpp"
#include "d4census/census.hpp"
#include "d4census/error.hpp"
#include "d4census/localsolve.hpp"

namespace d4 {

namespace {

constexpr std::uint64_t kChunk = 1 << 14;

std::vector<std::uint64_t> prime_factors_of(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<std::int64_t> divisors_of_squarefree(std::uint64_t n) {
  std::vector<std::int64_t> divs{1};
  for (const std::uint64_t p : prime_factors_of(n)) {
    const std::size_t k = divs.size();
    for (std::size_t i = 0; i < k; ++i) divs.push_back(divs[i] * static_cast<std::int64_t>(p));
  }
  return divs;
}

void check_odd_parts(const OddParts& mp) {
  for (const std::uint64_t m : mp) {
    if (m == 0 || m % 2 == 0 || !is_squarefree(static_cast<std::int64_t>(m))) {
      throw PreconditionError("odd parts must be odd, positive and squarefree");
    }
  }
  if (std::gcd(mp[0], mp[1]) != 1 || std::gcd(mp[0], mp[2]) != 1 || std::gcd(mp[1], mp[2]) != 1) {
    throw PreconditionError("odd parts must be pairwise coprime");
  }
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t out = n;
  for (const std::uint64_t p : prime_factors_of(n)) out = out / p * (p - 1);
  return out;
}

std::uint64_t radical(std::uint64_t n) {
  std::uint64_t r = 1;
  for (const std::uint64_t p : prime_factors_of(n)) r *= p;
  return r;
}

bool is_square(std::int64_t d) {
  if (d < 0) return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(d))));
  while (r * r > d) --r;
  while ((r + 1) * (r + 1) <= d) ++r;
  return r * r == d;
}

void check_residue(const std::optional<ResidueClass>& residue) {
  if (!residue) return;
  if (residue->q0 == 0 || std::gcd(residue->a, residue->q0) != 1) {
    throw PreconditionError("residue class needs q0 >= 1 and gcd(a, q0) = 1");
  }
}

// Contribution of n: chi(n) if n is in range of the sum, else 0.
int weight_of(std::uint64_t n, const CharacterSpec& spec, const std::optional<ResidueClass>& residue,
              const SieveTables& tables) {
  if (!tables.squarefree(n)) return 0;
  if (spec.m > 1 && std::gcd(n, spec.m) != 1) return 0;
  if (residue && n % residue->q0 != residue->a % residue->q0) return 0;
  return spec(n);
}

double chunk_sum(std::uint64_t lo, std::uint64_t hi, const CharacterSpec& spec,
                 const std::optional<ResidueClass>& residue, const SieveTables& tables) {
  double s = 0.0;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const int w = weight_of(n, spec, residue, tables);
    if (w == 0) continue;
    const Fraction f = tables.f(n);
    s += w * (static_cast<double>(f.num) / static_cast<double>(f.den));
  }
  return s;
}

void check_cover(std::uint64_t n, const SieveTables& tables) {
  if (!tables.covers(n)) {
    throw CapacityError("sieve limit " + std::to_string(tables.limit()) + " below " + std::to_string(n));
  }
}

std::vector<std::uint32_t> odd_squarefree_in_class(std::uint64_t bound, int eps, const SieveTables& tables) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t n = static_cast<std::uint64_t>(eps); n <= bound; n += 8) {
    if (tables.squarefree(n)) out.push_back(static_cast<std::uint32_t>(n));
  }
  return out;
}

}  // namespace

std::int64_t L_product(const OddParts& mp, Signs delta, TwoExponents nu) {
  check_odd_parts(mp);
  const auto m1 = static_cast<std::int64_t>(mp[0]);
  const auto m2 = static_cast<std::int64_t>(mp[1]);
  const auto m3 = static_cast<std::int64_t>(mp[2]);
  const std::int64_t a1 = -delta.d2 * delta.d3 * (std::int64_t{1} << (nu.alpha + nu.beta)) * m2 * m3;
  const std::int64_t a2 = delta.d3 * (std::int64_t{1} << (nu.mu + nu.beta)) * m1 * m3;
  const std::int64_t a3 = delta.d2 * (std::int64_t{1} << (nu.mu + nu.alpha)) * m1 * m2;
  std::int64_t out = 1;
  for (const std::uint64_t n : mp) {
    for (const std::uint64_t up : prime_factors_of(n)) {
      const auto p = static_cast<std::int64_t>(up);
      out *= (1 + kronecker(a1, p)) * (1 + kronecker(a2, p)) * (1 + kronecker(a3, p));
      if (out == 0) return 0;
    }
  }
  return out;
}

std::int64_t L_divisor_sum(const OddParts& mp, Signs delta, TwoExponents nu) {
  check_odd_parts(mp);
  const auto d1 = divisors_of_squarefree(mp[0]);
  const auto d2 = divisors_of_squarefree(mp[1]);
  const auto d3 = divisors_of_squarefree(mp[2]);
  std::int64_t total = 0;
  for (const std::int64_t k1 : d1) {
    const std::int64_t l1 = static_cast<std::int64_t>(mp[0]) / k1;
    for (const std::int64_t k2 : d2) {
      const std::int64_t l2 = static_cast<std::int64_t>(mp[1]) / k2;
      for (const std::int64_t k3 : d3) {
        const std::int64_t l3 = static_cast<std::int64_t>(mp[2]) / k3;
        total += u_weight(k1, k2, k3, delta, nu) * kronecker(l1, k2 * k3) * kronecker(l2, k1 * k3) *
                 kronecker(l3, k1 * k2);
      }
    }
  }
  return total;
}

CharacterSpec CharacterSpec::principal(std::uint64_t q, std::uint64_t m) {
  CharacterSpec s;
  s.q = q;
  s.m = m;
  s.validate();
  return s;
}

CharacterSpec CharacterSpec::kronecker(std::int64_t d, std::uint64_t q, std::uint64_t m) {
  CharacterSpec s;
  s.q = q;
  s.discriminant = d;
  s.m = m;
  s.validate();
  return s;
}

void CharacterSpec::validate() const {
  if (q == 0 || m == 0) throw PreconditionError("character modulus and m must be positive");
  if (std::gcd(m, q) != 1) throw PreconditionError("character sum needs gcd(m, q) = 1");
  if (!discriminant) return;
  const std::int64_t d = *discriminant;
  const int r = mod8(d) % 4;
  if (d == 0 || (r != 0 && r != 1)) throw PreconditionError("D must be 0 or 1 mod 4 and nonzero");
  if (is_square(d)) throw PreconditionError("D must not be a square");
  const auto abs_d = static_cast<std::uint64_t>(d < 0 ? -d : d);
  if (q % abs_d != 0) throw PreconditionError("|D| must divide q");
}

int CharacterSpec::operator()(std::uint64_t n) const {
  if (q > 1 && std::gcd(n, q) != 1) return 0;
  if (!discriminant) return 1;
  return d4::kronecker(*discriminant, static_cast<std::int64_t>(n));
}

CharacterSumRecord character_sum_f(double x, const CharacterSpec& spec,
                                   const std::optional<ResidueClass>& residue,
                                   const SieveTables& tables, const CharacterSumOptions& options) {
  spec.validate();
  check_residue(residue);
  if (options.workers < 1) throw PreconditionError("workers must be >= 1");
  const std::uint64_t n_max = floor_bound(x);
  check_cover(n_max, tables);

  const std::uint64_t chunks = (n_max + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  const auto n_chunks = static_cast<std::int64_t>(chunks);
#pragma omp parallel for num_threads(options.workers) schedule(static)
  for (std::int64_t i = 0; i < n_chunks; ++i) {
    const std::uint64_t lo = static_cast<std::uint64_t>(i) * kChunk + 1;
    const std::uint64_t hi = std::min(n_max, lo + kChunk - 1);
    partial[static_cast<std::size_t>(i)] = chunk_sum(lo, hi, spec, residue, tables);
  }

  CharacterSumRecord r;
  for (const double s : partial) r.value += s;
  if (n_max <= options.exact_limit) {
    r.exact = character_sum_f_exact(x, spec, residue, tables);
    r.value = r.exact->get_d();
  }
  if (!spec.discriminant && x >= 1.0) {
    const std::uint64_t q0 = residue ? residue->q0 : 1;
    const std::uint64_t rad = radical(spec.m * spec.q * q0);
    EulerProductSpec ep;
    ep.pmax = std::max<std::uint64_t>(ep.pmax, rad);
    r.main_term = c_constant(rad, ep).value * x / static_cast<double>(euler_phi(q0));
  }
  if (x >= 1.0) {
    r.deviation = std::abs(r.value - r.main_term) / (std::sqrt(x) * std::max(std::log(x), 1.0));
  }
  return r;
}

mpq_class character_sum_f_exact(double x, const CharacterSpec& spec,
                                const std::optional<ResidueClass>& residue, const SieveTables& tables) {
  spec.validate();
  check_residue(residue);
  const std::uint64_t n_max = floor_bound(x);
  check_cover(n_max, tables);
  // Common denominator first, then one big-integer numerator.
  mpz_class common = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (weight_of(n, spec, residue, tables) == 0) continue;
    const Fraction f = tables.f(n);
    mpz_lcm_ui(common.get_mpz_t(), common.get_mpz_t(), f.den);
  }
  mpz_class numerator = 0;
  mpz_class term;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const int w = weight_of(n, spec, residue, tables);
    if (w == 0) continue;
    const Fraction f = tables.f(n);
    mpz_divexact_ui(term.get_mpz_t(), common.get_mpz_t(), f.den);
    term *= f.num;
    if (w > 0) numerator += term;
    else numerator -= term;
  }
  mpq_class out(numerator, common);
  out.canonicalize();
  return out;
}

double character_sum_f_serial(double x, const CharacterSpec& spec,
                              const std::optional<ResidueClass>& residue, const SieveTables& tables) {
  spec.validate();
  check_residue(residue);
  const std::uint64_t n_max = floor_bound(x);
  check_cover(n_max, tables);
  double s = 0.0;
  for (std::uint64_t lo = 1; lo <= n_max; lo += kChunk) {
    s += chunk_sum(lo, std::min(n_max, lo + kChunk - 1), spec, residue, tables);
  }
  return s;
}

std::vector<ClassKey> all_class_keys() {
  std::vector<ClassKey> keys;
  keys.reserve(768);
  for (const TwoExponents nu : kTwoExponentClasses) {
    for (const Signs d : kSignClasses) {
      for (const int e1 : kUnitsMod8) {
        for (const int e2 : kUnitsMod8) {
          for (const int e3 : kUnitsMod8) keys.push_back({{e1, e2, e3}, d, nu});
        }
      }
    }
  }
  return keys;
}

bool is_admissible(const ClassKey& key) { return in_E_set(ESetKey{key.nu, key.eps}, key.delta); }

std::uint64_t T_direct(const ClassKey& key, const BoundBox& box, const SieveTables& tables) {
  check_cover(required_sieve_limit(box), tables);
  // m1' is bounded by X3, m2' by X1, m3' by X2.
  const auto list_a = odd_squarefree_in_class(floor_bound(box.x3), key.eps[0], tables);
  const auto list_b = odd_squarefree_in_class(floor_bound(box.x1), key.eps[1], tables);
  const auto list_c = odd_squarefree_in_class(floor_bound(box.x2), key.eps[2], tables);
  const TwistCounter counter(tables, box.x4);
  std::uint64_t total = 0;
  std::vector<std::uint32_t> primes;
  for (const std::uint64_t a : list_a) {
    for (const std::uint64_t b : list_b) {
      if (std::gcd(a, b) != 1) continue;
      for (const std::uint64_t c : list_c) {
        if (std::gcd(a * b, c) != 1) continue;
        const SignedTriple t = make_triple(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                                           static_cast<std::int64_t>(c), key.delta, key.nu);
        if (!is_nondegenerate(t)) continue;
        const std::int64_t l = L_product({a, b, c}, key.delta, key.nu);
        if (l == 0) continue;
        primes.clear();
        for (const std::uint64_t n : {a, b, c}) {
          tables.for_each_prime_factor(n, [&](std::uint32_t p) { primes.push_back(p); });
        }
        total += static_cast<std::uint64_t>(l) * counter.count(primes);
      }
    }
  }
  return total;
}

std::uint64_t census_from_classes(const BoundBox& box, const SieveTables& tables, int workers) {
  if (workers < 1) throw PreconditionError("workers must be >= 1");
  std::vector<ClassKey> keys;
  for (const ClassKey& k : all_class_keys()) {
    if (is_admissible(k)) keys.push_back(k);
  }
  check_cover(required_sieve_limit(box), tables);
  std::uint64_t total = 0;
  const auto n = static_cast<std::int64_t>(keys.size());
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1) reduction(+ : total)
  for (std::int64_t i = 0; i < n; ++i) total += T_direct(keys[static_cast<std::size_t>(i)], box, tables);
  return 4 * total;
}

mpq_class T111_direct(double x1, double x2, double x3, const ClassKey& key, const SieveTables& tables) {
  const std::uint64_t b1 = floor_bound(x1);
  const std::uint64_t b2 = floor_bound(x2);
  const std::uint64_t b3 = floor_bound(x3);
  check_cover(std::max({b1, b2, b3, std::uint64_t{1}}), tables);
  const std::array<std::vector<std::uint32_t>, 3> lists{odd_squarefree_in_class(b1, key.eps[0], tables),
                                                        odd_squarefree_in_class(b2, key.eps[1], tables),
                                                        odd_squarefree_in_class(b3, key.eps[2], tables)};
  // f(l) = F(l) / common with integer F.
  mpz_class common = 1;
  for (const auto& list : lists) {
    for (const std::uint32_t l : list) mpz_lcm_ui(common.get_mpz_t(), common.get_mpz_t(), tables.f(l).den);
  }
  std::array<std::vector<mpz_class>, 3> scaled;
  for (std::size_t i = 0; i < 3; ++i) {
    for (const std::uint32_t l : lists[i]) {
      const Fraction f = tables.f(l);
      mpz_class v;
      mpz_divexact_ui(v.get_mpz_t(), common.get_mpz_t(), f.den);
      v *= f.num;
      scaled[i].push_back(v);
    }
  }
  mpz_class total = 0;
  mpz_class inner2;
  mpz_class inner3;
  for (std::size_t i = 0; i < lists[0].size(); ++i) {
    const std::uint64_t l1 = lists[0][i];
    inner2 = 0;
    for (std::size_t j = 0; j < lists[1].size(); ++j) {
      const std::uint64_t l2 = lists[1][j];
      if (std::gcd(l1, l2) != 1) continue;
      inner3 = 0;
      for (std::size_t k = 0; k < lists[2].size(); ++k) {
        if (std::gcd(l1 * l2, std::uint64_t{lists[2][k]}) == 1) inner3 += scaled[2][k];
      }
      inner2 += scaled[1][j] * inner3;
    }
    total += scaled[0][i] * inner2;
  }
  mpq_class out(total, mpz_class(common * common * common));
  out.canonicalize();
  return out;
}

BilinearResult bilinear_sum(const std::vector<double>& alpha, const std::vector<double>& beta) {
  if (alpha.size() < 2 || beta.size() < 2) throw PreconditionError("bilinear_sum needs M, N >= 1");
  auto check = [](const std::vector<double>& c) {
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (std::abs(c[i]) > 1.0) throw PreconditionError("coefficients must satisfy |c| <= 1");
      if (i % 2 == 0 && c[i] != 0.0) throw PreconditionError("coefficients must vanish on even indices");
    }
  };
  check(alpha);
  check(beta);
  const std::size_t big_m = alpha.size() - 1;
  const std::size_t big_n = beta.size() - 1;
  BilinearResult r;
  for (std::size_t n = 1; n <= big_n; n += 2) {
    if (beta[n] == 0.0) continue;
    double row = 0.0;
    for (std::size_t m = 1; m <= big_m; m += 2) {
      if (alpha[m] == 0.0) continue;
      row += alpha[m] * kronecker(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n));
    }
    r.sum += beta[n] * row;
  }
  const double m = static_cast<double>(big_m);
  const double n = static_cast<double>(big_n);
  r.normalizer = (m * std::pow(n, 5.0 / 6.0) + std::pow(m, 5.0 / 6.0) * n) * std::pow(std::log(3.0 * m * n), 7.0 / 6.0);
  r.ratio = std::abs(r.sum) / r.normalizer;
  return r;
}

}  // namespace d4
