#include "d4census/localsolve.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "d4census/error.hpp"

namespace d4 {

namespace {

struct Split {
  int valuation = 0;
  std::int64_t unit = 1;
};

Split split_prime(std::int64_t a, std::int64_t p) {
  Split s{0, a};
  while (s.unit % p == 0) {
    s.unit /= p;
    ++s.valuation;
  }
  return s;
}

int sign_pow(int exponent) { return (exponent & 1) ? -1 : 1; }

// (u^2 - 1) / 8 mod 2 for odd u.
int omega(std::int64_t u) {
  const int r = mod8(u);
  return (r == 3 || r == 5) ? 1 : 0;
}

std::int64_t reduce(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Is there (x, y, z) mod modulus, one coordinate a unit, with
// x^2 - a y^2 - b z^2 == 0? Every primitive solution scales to one with a
// coordinate equal to 1, so three charts cover the search.
bool primitive_solution_mod(std::int64_t a, std::int64_t b, std::int64_t modulus) {
  const std::int64_t am = reduce(a, modulus);
  const std::int64_t bm = reduce(b, modulus);
  auto value_set = [&](std::int64_t c) {
    std::vector<char> hit(static_cast<std::size_t>(modulus), 0);
    for (std::int64_t z = 0; z < modulus; ++z) hit[(c * (z * z % modulus)) % modulus] = 1;
    return hit;
  };
  const auto squares = value_set(1);
  const auto b_squares = value_set(bm);

  // x = 1: a y^2 + b z^2 == 1.
  for (std::int64_t y = 0; y < modulus; ++y) {
    const std::int64_t need = reduce(1 - am * (y * y % modulus), modulus);
    if (b_squares[need]) return true;
  }
  // y = 1: x^2 == a + b z^2.
  for (std::int64_t z = 0; z < modulus; ++z) {
    if (squares[(am + bm * (z * z % modulus)) % modulus]) return true;
  }
  // z = 1: x^2 == a y^2 + b.
  for (std::int64_t y = 0; y < modulus; ++y) {
    if (squares[(am * (y * y % modulus) + bm) % modulus]) return true;
  }
  return false;
}

}  // namespace

std::string to_string(const Place& v) {
  if (std::holds_alternative<RealPlace>(v)) return "inf";
  if (std::holds_alternative<TwoPlace>(v)) return "2";
  return std::to_string(std::get<OddPrime>(v).p);
}

int hilbert_symbol(std::int64_t a, std::int64_t b, const Place& v) {
  if (a == 0 || b == 0) throw PreconditionError("hilbert_symbol needs nonzero arguments");
  if (std::holds_alternative<RealPlace>(v)) return (a < 0 && b < 0) ? -1 : 1;
  if (std::holds_alternative<TwoPlace>(v)) {
    const Split sa = split_prime(a, 2);
    const Split sb = split_prime(b, 2);
    const int e = eta(sa.unit) * eta(sb.unit) + sa.valuation * omega(sb.unit) +
                  sb.valuation * omega(sa.unit);
    return sign_pow(e);
  }
  const std::int64_t p = std::get<OddPrime>(v).p;
  const Split sa = split_prime(a, p);
  const Split sb = split_prime(b, p);
  int result = sign_pow(sa.valuation * sb.valuation * static_cast<int>(((p - 1) / 2) & 1));
  if (sb.valuation & 1) result *= kronecker(sa.unit, p);
  if (sa.valuation & 1) result *= kronecker(sb.unit, p);
  return result;
}

bool padic_oracle(std::int64_t a, std::int64_t b, const Place& v) {
  if (a == 0 || b == 0) throw PreconditionError("padic_oracle needs nonzero arguments");
  if (std::holds_alternative<RealPlace>(v)) return !(a < 0 && b < 0);
  const std::int64_t p = std::holds_alternative<TwoPlace>(v) ? 2 : std::get<OddPrime>(v).p;
  if (split_prime(a, p).valuation > 1 || split_prime(b, p).valuation > 1) {
    throw PreconditionError("padic_oracle: valuation above 1 at p=" + std::to_string(p));
  }
  const std::int64_t modulus = p == 2 ? 64 : p * p * p;
  return primitive_solution_mod(a, b, modulus);
}

bool in_E_set(const ESetKey& key, Signs delta) {
  const auto& e = key.eps;
  const std::int64_t a = (std::int64_t{1} << (key.nu.mu + key.nu.alpha)) * delta.d2 * e[0] * e[1];
  const std::int64_t b = (std::int64_t{1} << (key.nu.mu + key.nu.beta)) * delta.d3 * e[0] * e[2];
  return hilbert_symbol(a, b, TwoPlace{}) == 1;
}

bool odd_place_conditions(const SignedTriple& t) {
  auto all_residues = [](std::int64_t m, std::int64_t value) {
    std::int64_t n = odd_part(m);
    for (std::int64_t p = 3; p * p <= n; p += 2) {
      if (n % p != 0) continue;
      while (n % p == 0) n /= p;
      if (kronecker(value, p) != 1) return false;
    }
    return n == 1 || kronecker(value, n) == 1;
  };
  return all_residues(t.m1, -t.m2 * t.m3) && all_residues(t.m2, t.m1 * t.m3) &&
         all_residues(t.m3, t.m1 * t.m2);
}

bool satisfies_local_conditions(const SignedTriple& t) {
  const DecomposedTriple d = decompose_triple(t);
  if (t.m2 < 0 && t.m3 < 0) return false;
  if (!odd_place_conditions(t)) return false;
  return in_E_set({d.nu, d.eps}, d.delta);
}

std::optional<ConicPoint> find_conic_point(std::int64_t a, std::int64_t b, std::int64_t height) {
  if (height < 1) throw PreconditionError("find_conic_point needs height >= 1");
  for (std::int64_t z = 0; z <= height; ++z) {
    for (std::int64_t y = 0; y <= height; ++y) {
      const std::int64_t rhs = a * y * y + b * z * z;  // x^2
      if (rhs < 0) continue;
      auto x = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(rhs))));
      while (x * x > rhs) --x;
      while ((x + 1) * (x + 1) <= rhs) ++x;
      if (x * x != rhs || x > height) continue;
      if (std::gcd(std::gcd(x, y), z) != 1) continue;
      return ConicPoint{x, y, z};
    }
  }
  return std::nullopt;
}

int u_weight(std::int64_t a1, std::int64_t a2, std::int64_t a3, Signs delta, TwoExponents nu) {
  if ((a1 & 1) == 0 || (a2 & 1) == 0 || (a3 & 1) == 0) {
    throw PreconditionError("u_weight needs odd arguments");
  }
  const int reciprocity = sign_pow(eta(a1) * eta(a2) + eta(a1) * eta(a3) + eta(a2) * eta(a3));
  const std::int64_t r1 = mod8(a1), r2 = mod8(a2), r3 = mod8(a3);
  return reciprocity * kronecker(-1, r1) * kronecker(std::int64_t{1} << nu.mu, r2 * r3) *
         kronecker(delta.d2 * (std::int64_t{1} << nu.alpha), r1 * r3) *
         kronecker(delta.d3 * (std::int64_t{1} << nu.beta), r1 * r2);
}

}  // namespace d4
