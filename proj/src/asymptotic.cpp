#include "d4census/asymptotic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "d4census/arith.hpp"
#include "d4census/constants.hpp"
#include "d4census/error.hpp"
#include "d4census/localsolve.hpp"

namespace d4 {

namespace {

mpq_class ratio(const constants::Ratio& r) {
  mpq_class q(r.num, r.den);
  q.canonicalize();
  return q;
}

// Sum of log(factor(p)) over first_prime <= p <= pmax, descending in p.
// deviation_constant C bounds |factor(p) - 1| <= C / p^2 for p > pmax, so the
// log tail is at most sum_{p>pmax} 2C/p^2 < 2C/pmax.
template <class LogFactor>
EulerValue euler_product(const EulerProductSpec& spec, std::uint64_t first_prime,
                         double deviation_constant, LogFactor&& log_factor) {
  if (spec.pmax < 3) throw PreconditionError("pmax must be >= 3");
  const auto primes = primes_up_to(spec.pmax);
  double log_sum = 0.0;
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    if (*it < first_prime) break;
    log_sum += log_factor(static_cast<double>(*it));
  }
  return {std::exp(log_sum), 2.0 * deviation_constant / static_cast<double>(spec.pmax)};
}

double log_c_factor(double p) { return std::log1p(-2.0 / (p * (p + 1.0))); }

double log_correction_factor(double p) {
  const double q = p + 2.0;
  return std::log1p(-3.0 / (q * q) + 2.0 / (q * q * q));
}

double log_leading_factor(double p) { return 4.0 * std::log1p(-1.0 / p) + std::log1p(4.0 / p); }

}  // namespace

double EulerValue::abs_error() const { return std::abs(value) * std::expm1(log_tail); }

mpq_class c_prefactor(std::uint64_t r) {
  if (r == 0 || !is_squarefree(static_cast<std::int64_t>(r))) {
    throw PreconditionError("c(r) needs squarefree r >= 1, got " + std::to_string(r));
  }
  mpq_class out = 1;
  std::uint64_t n = r;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    out *= mpq_class(p + 1, p + 2);
  }
  if (n > 1) out *= mpq_class(n + 1, n + 2);
  out.canonicalize();
  return out;
}

EulerValue c_constant(std::uint64_t r, const EulerProductSpec& spec) {
  const mpq_class pre = c_prefactor(r);
  std::uint64_t largest = 1;
  std::uint64_t n = r;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      n /= p;
      largest = p;
    }
  }
  if (n > 1) largest = n;
  if (spec.pmax < largest) {
    throw PreconditionError("pmax " + std::to_string(spec.pmax) +
                            " below largest prime factor of r=" + std::to_string(r));
  }
  EulerValue v = euler_product(spec, 2, 2.0, log_c_factor);
  v.value *= pre.get_d();
  return v;
}

EulerValue c_tilde_correction(const EulerProductSpec& spec) {
  return euler_product(spec, 3, 3.0, log_correction_factor);
}

EulerValue c_tilde(const EulerProductSpec& spec) {
  const EulerValue c1 = c_constant(1, spec);
  const EulerValue corr = c_tilde_correction(spec);
  const mpq_class pre = ratio(constants::kCTildePrefactor);
  const double pre3 = mpq_class(pre * pre * pre).get_d();
  return {pre3 * c1.value * c1.value * c1.value * corr.value, 3.0 * c1.log_tail + corr.log_tail};
}

EulerValue leading_constant(const EulerProductSpec& spec) {
  EulerValue v = euler_product(spec, 3, 10.0, log_leading_factor);
  v.value *= ratio(constants::kLeadingPrefactor).get_d();
  return v;
}

EulerValue odd_zeta2_inverse(const EulerProductSpec& spec) {
  return euler_product(spec, 3, 1.0, [](double p) { return std::log1p(-1.0 / (p * p)); });
}

mpq_class leading_factor(std::uint64_t p) {
  const mpq_class one_minus(p - 1, p);
  mpq_class out = one_minus * one_minus * one_minus * one_minus * mpq_class(p + 4, p);
  out.canonicalize();
  return out;
}

mpq_class identity_lhs_factor(std::uint64_t p) {
  mpq_class c_factor = 1 - mpq_class(2, p * (p + 1));
  c_factor.canonicalize();
  const std::uint64_t q = p + 2;
  mpq_class corr = 1 - mpq_class(3, q * q) + mpq_class(2, q * q * q);
  corr.canonicalize();
  mpq_class zeta = 1 - mpq_class(1, p * p);
  zeta.canonicalize();
  mpq_class out = c_factor * c_factor * c_factor * corr * zeta;
  out.canonicalize();
  return out;
}

IdentityResidual constant_identity(const EulerProductSpec& spec) {
  const EulerValue ct = c_tilde(spec);
  const EulerValue z = odd_zeta2_inverse(spec);
  const EulerValue lead = leading_constant(spec);
  IdentityResidual r;
  r.lhs = static_cast<double>(constants::kFinalMultiplier) * ct.value * z.value;
  r.rhs = lead.value;
  r.residual = std::abs(r.lhs - r.rhs);
  r.tail_bound = std::abs(r.lhs) * std::expm1(ct.log_tail + z.log_tail) + lead.abs_error();
  return r;
}

ClassSums lemma432_sums() {
  ClassSums s;
  for (const Signs delta : kSignClasses) {
    for (std::size_t k = 0; k < kTwoExponentClasses.size(); ++k) {
      const TwoExponents nu = kTwoExponentClasses[k];
      for (const int e1 : kUnitsMod8) {
        for (const int e2 : kUnitsMod8) {
          for (const int e3 : kUnitsMod8) {
            // (eps1, d2 eps2, d3 eps3) in E(nu).
            if (!in_E_set(ESetKey{nu, {e1, e2, e3}}, delta)) continue;
            ++s.class_count;
            s.unit_weight_sum += u_weight(1, 1, 1, delta, nu);
            s.eps_weight_sum += u_weight(e1, e2, e3, delta, nu);
            if (delta == Signs{1, 1}) ++s.e_set_sizes[k];
          }
        }
      }
    }
  }
  return s;
}

double TamagawaParts::euler_factor(std::uint64_t p) {
  const double x = static_cast<double>(p);
  return std::pow(1.0 - 1.0 / x, 4) * (1.0 + 4.0 / x);
}

TamagawaReport tamagawa_constant(const EulerProductSpec& spec) {
  TamagawaReport r;
  r.parts.group_order = constants::kGroupOrder;
  r.parts.alpha_star = ratio(constants::kAlphaStar);
  r.parts.tau_infty = ratio(constants::kTauInfinity);

  mpq_class weighted = 0;
  for (const auto& row : constants::kTwoAdicEtale) weighted += row.weight * row.fields;
  r.tau2_etale = weighted / constants::kGroupOrder;
  r.tau2_etale.canonicalize();
  r.parts.tau_two = r.tau2_etale * ratio(constants::kTwoConvergenceFactor);
  r.parts.tau_two.canonicalize();

  r.rational_prefactor = r.parts.group_order * r.parts.alpha_star * r.parts.tau_infty * r.parts.tau_two;
  r.rational_prefactor.canonicalize();

  const EulerValue bare = euler_product(spec, 3, 10.0, log_leading_factor);
  const EulerValue lead = leading_constant(spec);
  r.product = r.rational_prefactor.get_d() * bare.value;
  r.leading = lead.value;
  r.difference = std::abs(r.product - r.leading);
  r.tail_bound = lead.abs_error();
  return r;
}

double predicted_count(const BoundBox& box, const EulerProductSpec& spec) {
  return predicted_count(box, leading_constant(spec));
}

double odd_squarefree_density() { return 4.0 / (std::numbers::pi * std::numbers::pi); }

}  // namespace d4
