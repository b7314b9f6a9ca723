#pragma once

// Integer substrate: the linear sieve with its multiplicative tables, the
// Kronecker symbol, and the sign / 2-part / odd-part split of a triple.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace d4 {

// Exact value of a positive rational, kept in lowest terms.
struct Fraction {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

inline constexpr std::size_t kDefaultSieveBudgetBytes = std::size_t{1} << 30;

class SieveTables {
 public:
  // Bytes of table storage per sieved integer.
  static constexpr std::size_t kBytesPerEntry =
      sizeof(std::uint32_t) + sizeof(std::int8_t) + sizeof(std::uint16_t) +
      2 * sizeof(std::uint64_t);

  // Linear sieve over [1, limit]. Throws CapacityError when the tables would
  // exceed memory_budget bytes or limit does not fit 32-bit factors.
  static SieveTables build(std::uint64_t limit,
                           std::size_t memory_budget = kDefaultSieveBudgetBytes);

  // Rebuilds mu, tau and f from a smallest-prime-factor table indexed 0..N
  // (entry 0 ignored). Throws FormatError if spf is not a valid table.
  static SieveTables from_spf(std::vector<std::uint32_t> spf);

  std::uint64_t limit() const noexcept { return limit_; }
  bool covers(std::uint64_t n) const noexcept { return n <= limit_; }

  std::uint32_t spf(std::uint64_t n) const { return spf_[checked(n)]; }
  int mu(std::uint64_t n) const { return mu_[checked(n)]; }
  bool squarefree(std::uint64_t n) const { return mu_[checked(n)] != 0; }
  std::uint32_t tau(std::uint64_t n) const { return tau_[checked(n)]; }
  Fraction f(std::uint64_t n) const {
    const auto i = checked(n);
    return {f_num_[i], f_den_[i]};
  }

  // Primes in [2, limit], ascending.
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }

  // Distinct prime divisors of n, ascending.
  std::vector<std::uint32_t> prime_factors(std::uint64_t n) const;

  template <class Fn>
  void for_each_prime_factor(std::uint64_t n, Fn&& fn) const {
    checked(n);
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      fn(p);
      while (n % p == 0) n /= p;
    }
  }

  std::span<const std::uint32_t> spf_table() const noexcept { return spf_; }

 private:
  SieveTables() = default;
  void derive_from_spf();
  std::size_t checked(std::uint64_t n) const;

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint16_t> tau_;
  std::vector<std::uint64_t> f_num_;
  std::vector<std::uint64_t> f_den_;
  std::vector<std::uint32_t> primes_;
};

// Sieve cache: "D4CS", u32 LE version (=1), u64 LE limit N, then spf[1..N]
// as u32 LE. mu, tau and f are rederived on load.
inline constexpr std::uint32_t kSieveCacheVersion = 1;
void save_sieve_cache(const SieveTables& tables, const std::filesystem::path& path);
SieveTables load_sieve_cache(const std::filesystem::path& path);

// Plain Eratosthenes, for callers that only need primes.
std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

// Full Kronecker symbol (a/n); (a/0) = 1 iff a = +-1.
int kronecker(std::int64_t a, std::int64_t n);

// Trial-division helpers for values outside any sieve.
bool is_squarefree(std::int64_t n);
std::int64_t odd_part(std::int64_t n);  // positive odd part of n != 0

// (m1, m2, m3): m1 > 0, all squarefree, pairwise coprime.
struct SignedTriple {
  std::int64_t m1 = 1;
  std::int64_t m2 = 1;
  std::int64_t m3 = 1;

  friend bool operator==(const SignedTriple&, const SignedTriple&) = default;
  friend auto operator<=>(const SignedTriple&, const SignedTriple&) = default;
};

bool is_valid_triple(const SignedTriple& t);
void validate_triple(const SignedTriple& t);  // throws InvalidTriple

// 2-exponents (mu, alpha, beta) of m1, m2, m3; at most one is 1.
struct TwoExponents {
  int mu = 0;
  int alpha = 0;
  int beta = 0;

  friend bool operator==(const TwoExponents&, const TwoExponents&) = default;
};

// Signs (delta2, delta3) of m2 and m3.
struct Signs {
  int d2 = 1;
  int d3 = 1;

  friend bool operator==(const Signs&, const Signs&) = default;
};

inline constexpr std::array<TwoExponents, 4> kTwoExponentClasses{
    {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
inline constexpr std::array<Signs, 3> kSignClasses{{{1, 1}, {1, -1}, {-1, 1}}};
inline constexpr std::array<int, 4> kUnitsMod8{1, 3, 5, 7};

struct DecomposedTriple {
  std::int64_t m1p = 1;  // odd parts m1', m2', m3' (positive)
  std::int64_t m2p = 1;
  std::int64_t m3p = 1;
  Signs delta;
  TwoExponents nu;
  std::array<int, 3> eps{1, 1, 1};  // m_i' mod 8

  friend bool operator==(const DecomposedTriple&, const DecomposedTriple&) = default;
};

DecomposedTriple decompose_triple(const SignedTriple& t);
SignedTriple recompose(const DecomposedTriple& d);

// Reassembles a signed triple from odd parts and class data.
SignedTriple make_triple(std::int64_t m1p, std::int64_t m2p, std::int64_t m3p,
                         Signs delta, TwoExponents nu);

inline int mod8(std::int64_t a) { return static_cast<int>(((a % 8) + 8) % 8); }

}  // namespace d4
