#include "d4census/arith.hpp"

#include <bit>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "d4census/error.hpp"

namespace d4 {

SieveTables SieveTables::build(std::uint64_t limit, std::size_t memory_budget) {
  if (limit < 1) throw PreconditionError("sieve limit must be >= 1");
  if (limit > std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds 32-bit table range");
  }
  if ((limit + 1) > memory_budget / kBytesPerEntry) {
    throw CapacityError("sieve limit " + std::to_string(limit) + " needs " +
                        std::to_string((limit + 1) * kBytesPerEntry) +
                        " bytes, budget is " + std::to_string(memory_budget));
  }

  SieveTables t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  t.spf_[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] == 0) {
      t.spf_[i] = static_cast<std::uint32_t>(i);
      t.primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (const std::uint32_t p : t.primes_) {
      if (p > t.spf_[i] || i * p > limit) break;
      t.spf_[i * p] = p;
    }
  }
  t.derive_from_spf();
  return t;
}

SieveTables SieveTables::from_spf(std::vector<std::uint32_t> spf) {
  if (spf.size() < 2) throw FormatError("spf table is empty");
  SieveTables t;
  t.limit_ = spf.size() - 1;
  t.spf_ = std::move(spf);
  t.spf_[0] = 0;
  if (t.spf_[1] != 1) throw FormatError("spf[1] must be 1");
  for (std::uint64_t n = 2; n <= t.limit_; ++n) {
    const std::uint64_t p = t.spf_[n];
    if (p < 2 || p > n || n % p != 0 || t.spf_[p] != p) {
      throw FormatError("spf table inconsistent at n=" + std::to_string(n));
    }
    const std::uint64_t rest = n / p;
    if (rest > 1 && t.spf_[rest] < p) {
      throw FormatError("spf table not minimal at n=" + std::to_string(n));
    }
    if (p == n) t.primes_.push_back(static_cast<std::uint32_t>(n));
  }
  t.derive_from_spf();
  return t;
}

// mu, tau, f follow from n = p^e * rest with p = spf(n), p not dividing rest.
void SieveTables::derive_from_spf() {
  const std::size_t size = limit_ + 1;
  mu_.assign(size, 0);
  tau_.assign(size, 0);
  f_num_.assign(size, 0);
  f_den_.assign(size, 0);
  mu_[1] = 1;
  tau_[1] = 1;
  f_num_[1] = 1;
  f_den_[1] = 1;
  for (std::uint64_t n = 2; n < size; ++n) {
    const std::uint64_t p = spf_[n];
    std::uint64_t rest = n / p;
    int e = 1;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    mu_[n] = e > 1 ? 0 : static_cast<std::int8_t>(-mu_[rest]);
    tau_[n] = static_cast<std::uint16_t>(tau_[rest] * (e + 1));
    std::uint64_t num = f_num_[rest] * p;
    std::uint64_t den = f_den_[rest] * (p + 1);
    const std::uint64_t g = std::gcd(num, den);
    f_num_[n] = num / g;
    f_den_[n] = den / g;
  }
}

std::size_t SieveTables::checked(std::uint64_t n) const {
  if (n < 1 || n > limit_) {
    throw CapacityError("value " + std::to_string(n) + " outside sieve range [1, " +
                        std::to_string(limit_) + "]");
  }
  return static_cast<std::size_t>(n);
}

std::vector<std::uint32_t> SieveTables::prime_factors(std::uint64_t n) const {
  std::vector<std::uint32_t> out;
  for_each_prime_factor(n, [&](std::uint32_t p) { out.push_back(p); });
  return out;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  put_u32(os, static_cast<std::uint32_t>(v & 0xffffffffu));
  put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw FormatError("sieve cache truncated");
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
         (std::uint32_t{b[3]} << 24);
}

std::uint64_t get_u64(std::istream& is) {
  const std::uint64_t lo = get_u32(is);
  const std::uint64_t hi = get_u32(is);
  return lo | (hi << 32);
}

constexpr char kMagic[4] = {'D', '4', 'C', 'S'};

}  // namespace

void save_sieve_cache(const SieveTables& tables, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put_u32(os, kSieveCacheVersion);
  put_u64(os, tables.limit());
  const auto spf = tables.spf_table();
  for (std::uint64_t n = 1; n <= tables.limit(); ++n) put_u32(os, spf[n]);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

SieveTables load_sieve_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open sieve cache " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw FormatError("bad sieve cache magic in " + path.string());
  }
  const std::uint32_t version = get_u32(is);
  if (version != kSieveCacheVersion) {
    throw FormatError("unsupported sieve cache version " + std::to_string(version));
  }
  const std::uint64_t limit = get_u64(is);
  if (limit < 1 || limit > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("bad sieve cache limit " + std::to_string(limit));
  }
  std::vector<std::uint32_t> spf(limit + 1, 0);
  for (std::uint64_t n = 1; n <= limit; ++n) spf[n] = get_u32(is);
  if (is.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in sieve cache");
  return SieveTables::from_spf(std::move(spf));
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  const int v = std::countr_zero(static_cast<std::uint64_t>(n));
  if (v > 0) {
    if ((a & 1) == 0) return 0;
    n >>= v;
    const int r = mod8(a);
    if ((v & 1) && (r == 3 || r == 5)) result = -result;
  }
  // Jacobi symbol with odd positive modulus.
  std::uint64_t m = static_cast<std::uint64_t>(n);
  std::int64_t red = a % n;
  if (red < 0) red += n;
  std::uint64_t x = static_cast<std::uint64_t>(red);
  while (x != 0) {
    const int t = std::countr_zero(x);
    x >>= t;
    if ((t & 1) && (m % 8 == 3 || m % 8 == 5)) result = -result;
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    std::swap(x, m);
    x %= m;
  }
  return m == 1 ? result : 0;
}

bool is_squarefree(std::int64_t n) {
  if (n == 0) return false;
  std::uint64_t u = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  for (std::uint64_t p = 2; p * p <= u; ++p) {
    if (u % p != 0) continue;
    u /= p;
    if (u % p == 0) return false;
  }
  return true;
}

std::int64_t odd_part(std::int64_t n) {
  if (n == 0) throw PreconditionError("odd_part(0)");
  if (n < 0) n = -n;
  while ((n & 1) == 0) n >>= 1;
  return n;
}

bool is_valid_triple(const SignedTriple& t) {
  if (t.m1 <= 0 || t.m2 == 0 || t.m3 == 0) return false;
  if (!is_squarefree(t.m1) || !is_squarefree(t.m2) || !is_squarefree(t.m3)) return false;
  return std::gcd(t.m1, t.m2) == 1 && std::gcd(t.m1, t.m3) == 1 && std::gcd(t.m2, t.m3) == 1;
}

void validate_triple(const SignedTriple& t) {
  if (!is_valid_triple(t)) {
    throw InvalidTriple("invalid triple (" + std::to_string(t.m1) + ", " + std::to_string(t.m2) +
                        ", " + std::to_string(t.m3) +
                        "): need m1 > 0, squarefree, pairwise coprime");
  }
}

DecomposedTriple decompose_triple(const SignedTriple& t) {
  validate_triple(t);
  DecomposedTriple d;
  d.m1p = odd_part(t.m1);
  d.m2p = odd_part(t.m2);
  d.m3p = odd_part(t.m3);
  d.delta = {t.m2 < 0 ? -1 : 1, t.m3 < 0 ? -1 : 1};
  d.nu = {t.m1 % 2 == 0 ? 1 : 0, t.m2 % 2 == 0 ? 1 : 0, t.m3 % 2 == 0 ? 1 : 0};
  d.eps = {mod8(d.m1p), mod8(d.m2p), mod8(d.m3p)};
  return d;
}

SignedTriple recompose(const DecomposedTriple& d) {
  return make_triple(d.m1p, d.m2p, d.m3p, d.delta, d.nu);
}

SignedTriple make_triple(std::int64_t m1p, std::int64_t m2p, std::int64_t m3p, Signs delta,
                         TwoExponents nu) {
  return {(std::int64_t{1} << nu.mu) * m1p, delta.d2 * (std::int64_t{1} << nu.alpha) * m2p,
          delta.d3 * (std::int64_t{1} << nu.beta) * m3p};
}

}  // namespace d4
