#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skewmorph/errors.hpp"

// Exact arithmetic in the residue ring Z_{p^e} for an odd prime p.
// Residues are uint64_t values in [0, n); every supported modulus is
// below 2^32, so a product of two residues fits in 64 bits.

namespace skewmorph {

inline constexpr uint64_t max_modulus = uint64_t{1} << 32;

inline bool is_odd_prime(uint64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

// p^e as a plain integer, with an explicit overflow guard.
inline uint64_t checked_pow(uint64_t base, uint32_t exp, uint64_t limit) {
  uint64_t v = 1;
  for (uint32_t i = 0; i < exp; ++i) {
    v *= base;
    if (v >= limit)
      throw std::invalid_argument("checked_pow: value exceeds supported width");
  }
  return v;
}

// The pair (p, e) with n = p^e.  e == 0 gives the trivial ring Z_1,
// which only exists so that product constructions have an identity
// factor; the classification theorems all assume e >= 2.
struct Modulus {
  uint32_t p;
  uint32_t e;
  uint64_t n;

  Modulus(uint32_t p_, uint32_t e_) : p(p_), e(e_), n(1) {
    if (!is_odd_prime(p_))
      throw std::invalid_argument("Modulus: p must be an odd prime, got " +
                                  std::to_string(p_));
    n = checked_pow(p_, e_, max_modulus);
  }

  friend bool operator==(const Modulus&, const Modulus&) = default;
};

inline uint64_t euler_phi(const Modulus& m) {
  if (m.e == 0) return 1;
  return (m.n / m.p) * (m.p - 1);
}

// A residue coprime to p, i.e. an element of the unit group of Z_{p^e}.
struct Unit {
  uint64_t value;
  Modulus m;

  Unit(uint64_t value_, const Modulus& m_) : value(value_), m(m_) {
    if (m.n < 2)
      throw std::invalid_argument("Unit: the trivial ring has no units");
    if (value_ == 0 || value_ >= m.n || std::gcd(value_, m.n) != 1)
      throw std::invalid_argument("Unit: " + std::to_string(value_) +
                                  " is not a unit mod " + std::to_string(m.n));
  }
};

inline uint64_t pow_mod(uint64_t base, uint64_t exp, const Modulus& m) {
  if (base >= m.n)
    throw std::invalid_argument("pow_mod: base out of range");
  uint64_t r = 1 % m.n;
  uint64_t b = base;
  while (exp > 0) {
    if (exp & 1) r = (r * b) % m.n;
    b = (b * b) % m.n;
    exp >>= 1;
  }
  return r;
}

// Smallest d >= 1 with u^d = 1 (mod p^e); divides (p-1)p^{e-1}.
inline uint64_t multiplicative_order(const Unit& u) {
  const Modulus& m = u.m;
  uint64_t phi = euler_phi(m);
  // prime factors of phi = (p-1) p^{e-1}
  std::vector<uint64_t> primes;
  if (m.e >= 2) primes.push_back(m.p);
  uint64_t w = m.p - 1;
  for (uint64_t q = 2; q * q <= w; ++q) {
    if (w % q == 0) {
      primes.push_back(q);
      while (w % q == 0) w /= q;
    }
  }
  if (w > 1) primes.push_back(w);

  uint64_t d = phi;
  for (uint64_t q : primes)
    while (d % q == 0 && pow_mod(u.value, d / q, m) == 1) d /= q;
  return d;
}

inline uint64_t multiplicative_order(uint64_t value, const Modulus& m) {
  return multiplicative_order(Unit(value, m));
}

// The canonical unit of order p-1: g^(p^{e-1}) for the smallest
// primitive root g of Z_{p^e}.  Deterministic, so the 4-tuple
// parametrization downstream is reproducible.
inline Unit canonical_b_unit(const Modulus& m) {
  if (m.e == 0)
    throw std::invalid_argument("canonical_b_unit: requires e >= 1");
  const uint64_t phi = euler_phi(m);
  for (uint64_t g = 2; g < m.n; ++g) {
    if (g % m.p == 0) continue;
    if (multiplicative_order(g, m) == phi) {
      uint64_t u = pow_mod(g, checked_pow(m.p, m.e - 1, max_modulus), m);
      return Unit(u, m);
    }
  }
  throw consistency_error("canonical_b_unit: no primitive root found");
}

// gcd((p+1)^k - 1, p^e), which always equals p*gcd(k, p^{e-1}).
// gcd(0, x) = x throughout, so k = 0 yields p^e.
inline uint64_t gcd_shift(uint64_t k, const Modulus& m) {
  if (m.e == 0)
    throw std::invalid_argument("gcd_shift: requires e >= 1");
  uint64_t x = pow_mod((m.p + 1) % m.n, k, m);
  uint64_t diff = (x + m.n - 1) % m.n;
  uint64_t g = std::gcd(diff, m.n);
  uint64_t rhs = m.p * std::gcd(k, m.n / m.p);
  if (g != rhs)
    throw consistency_error("gcd_shift: gcd((p+1)^k-1, p^e) != p*gcd(k, p^{e-1})");
  return g;
}

// Modular inverse of a mod m for coprime a, via extended Euclid.
inline uint64_t inv_mod(uint64_t a, uint64_t m) {
  int64_t t = 0, newt = 1;
  int64_t r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
  while (newr != 0) {
    int64_t q = r / newr;
    t = std::exchange(newt, t - q * newt);
    r = std::exchange(newr, r - q * newr);
  }
  if (r != 1)
    throw std::invalid_argument("inv_mod: arguments are not coprime");
  return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(m) : t);
}

}  // namespace skewmorph
