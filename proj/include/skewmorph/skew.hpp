#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "skewmorph/perm.hpp"

// Skew-morphisms of Z_n, written additively: a bijection f with
// f(0) = 0 and f(x+y) = f(x) + f^{pi(x)}(y) for some power function pi.
// This header holds the power-function solver, the two verifiers, the
// constructive families b_j, s_{i,j}, s_{i,j,k,l}, the admissibility
// predicate, the classifier and the coprime product.

namespace skewmorph {

// pi attached to a skew-morphism; values are canonical representatives
// in [0, d-1] where d is the order of the skew-morphism.
struct PowerFunction {
  uint32_t degree;
  uint64_t modulus_of_values;
  std::vector<uint32_t> values;
};

struct SkewMorphism {
  Permutation perm;
  PowerFunction pi;
  uint64_t ord;
  Modulus modulus;
};

// a(x) = (p+1)x, the canonical automorphism of order p^{e-1}.
inline Permutation mult_by_p_plus_one(const Modulus& m) {
  return mult_map((m.p + 1) % m.n, static_cast<uint32_t>(m.n));
}

// Solves f(x+y) = f(x) + f^{pi(x)}(y) for pi, or reports that no power
// function exists.  Candidates for pi(x) are seeded from the y = 1
// specialization f(x+1) - f(x) = f^k(1) and then checked against all y.
inline std::optional<PowerFunction> compute_power_function(const Permutation& f) {
  const uint32_t n = f.degree();
  if (f(0) != 0)
    throw std::invalid_argument("compute_power_function: f does not fix 0");
  if (n == 1) return PowerFunction{1, 1, {0}};

  const uint64_t d = order(f);
  const auto& fimg = f.images();

  // orbit of 1 under f; its length divides d
  std::vector<int64_t> pos(n, -1);
  std::vector<uint32_t> orb;
  for (uint32_t v = 1; pos[v] < 0; v = fimg[v]) {
    pos[v] = static_cast<int64_t>(orb.size());
    orb.push_back(v);
  }
  const uint64_t orbit_len = orb.size();

  // image tables of f^k, filled on demand in increasing k
  std::vector<std::vector<uint32_t>> powers;
  {
    std::vector<uint32_t> id(n);
    std::iota(id.begin(), id.end(), 0u);
    powers.push_back(std::move(id));
  }
  auto ensure = [&](uint64_t k) -> const std::vector<uint32_t>& {
    while (powers.size() <= k) {
      const auto& prev = powers.back();
      std::vector<uint32_t> nxt(n);
      for (uint32_t x = 0; x < n; ++x) nxt[x] = fimg[prev[x]];
      powers.push_back(std::move(nxt));
    }
    return powers[k];
  };

  std::vector<uint32_t> vals(n);
  for (uint32_t x = 0; x < n; ++x) {
    const uint64_t fx = fimg[x];
    const uint64_t fx1 = fimg[(x + 1u) % n];
    const uint32_t delta = static_cast<uint32_t>((fx1 + n - fx) % n);
    if (pos[delta] < 0) return std::nullopt;
    bool found = false;
    for (uint64_t k = static_cast<uint64_t>(pos[delta]); k < d; k += orbit_len) {
      const auto& fk = ensure(k);
      bool ok = true;
      for (uint32_t y = 0; y < n; ++y) {
        if (fimg[(static_cast<uint64_t>(x) + y) % n] != (fx + fk[y]) % n) {
          ok = false;
          break;
        }
      }
      if (ok) {
        vals[x] = static_cast<uint32_t>(k);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return PowerFunction{n, d, std::move(vals)};
}

// Definition-level verifier: bijective, fixes 0, admits a power function.
inline bool verify_definition(const Permutation& f) {
  if (f(0) != 0) return false;
  return compute_power_function(f).has_value();
}

// Group-criterion verifier: f(0) = 0 and |<t,f>| = n|f|.  Since <t><f>
// always has exactly n|f| elements, the closure either equals that size
// or overshoots it, so a closure bounded by n|f| decides the criterion.
inline bool verify_criterion(const Permutation& f,
                             size_t closure_cap = default_closure_cap) {
  if (f(0) != 0) return false;
  const uint32_t n = f.degree();
  if (n == 1) return true;
  const uint64_t target = static_cast<uint64_t>(n) * order(f);
  const size_t run_cap = static_cast<size_t>(
      std::min<uint64_t>(target, static_cast<uint64_t>(closure_cap)));
  auto elems = detail::close_under_products({translation(n), f}, run_cap);
  if (!elems) {
    if (target <= closure_cap) return false;  // grew past n|f|
    throw resource_error("verify_criterion: closure exceeded the configured cap");
  }
  return elems->size() == target;
}

// b_j: the unique permutation fixing 0 with b_j t b_j^{-1} = t a^j,
// given by the geometric sum b_j(x) = 1 + (p+1)^j + ... + (p+1)^{(x-1)j}.
inline Permutation b_map(uint64_t j, const Modulus& m) {
  if (m.e == 0)
    throw std::invalid_argument("b_map: requires e >= 1");
  if (j >= m.n / m.p)
    throw std::invalid_argument("b_map: j out of range [0, p^{e-1})");
  const uint64_t n = m.n;
  const uint64_t q = pow_mod((m.p + 1) % n, j, m);
  std::vector<uint32_t> img(n);
  img[0] = 0;
  uint64_t acc = 0, pw = 1;
  for (uint64_t x = 1; x < n; ++x) {
    acc = (acc + pw) % n;
    pw = (pw * q) % n;
    img[x] = static_cast<uint32_t>(acc);
  }
  Permutation b(std::move(img));
  const Permutation t = translation(m);
  if (conjugate(t, b) != compose(t, power(mult_by_p_plus_one(m), static_cast<int64_t>(j))))
    throw consistency_error("b_map: conjugation identity b t b^{-1} = t a^j failed");
  return b;
}

// (i, j, k, l) subject to (C0)-(C2); parametrizes Skew(Z_{p^e})
// bijectively.  gcd(0, x) = x throughout, so p^c = p^{e-2} when i = 0.
inline bool is_admissible(uint64_t i, uint64_t j, uint64_t k, uint64_t l,
                          const Modulus& m) {
  if (m.e < 2)
    throw std::invalid_argument("is_admissible: requires e >= 2");
  const uint64_t pe1 = m.n / m.p;       // p^{e-1}
  const uint64_t pe2 = pe1 / m.p;       // p^{e-2}
  if (i >= pe1 || l >= pe1) return false;             // (C0)
  if (k >= m.p - 1) return false;                     // (C0): k <= p-2
  const uint64_t pc = std::gcd(i, pe2);               // p^c
  if (j >= pe2 / pc) return false;                    // (C0)
  if ((i == 0 || k == 0) && l != 0) return false;     // (C1)
  if (i != 0 && k != 0) {                             // (C2)
    if (j % pc != 0) return false;
    if (l % std::max(pc, pe2 / pc) != 0) return false;
  }
  return true;
}

struct AdmissibleTuple {
  uint32_t i, j, k, l;
  Modulus m;

  AdmissibleTuple(uint32_t i_, uint32_t j_, uint32_t k_, uint32_t l_, const Modulus& m_)
      : i(i_), j(j_), k(k_), l(l_), m(m_) {
    if (!is_admissible(i_, j_, k_, l_, m_))
      throw std::invalid_argument("AdmissibleTuple: (C0)-(C2) violated");
  }

  friend bool operator==(const AdmissibleTuple&, const AdmissibleTuple&) = default;
};

namespace detail {

// Lexicographic visit of every admissible tuple, exactly once.
template <class F>
inline void for_each_admissible(const Modulus& m, F&& fn) {
  if (m.e < 2)
    throw std::invalid_argument("for_each_admissible: requires e >= 2");
  const uint64_t pe1 = m.n / m.p;
  const uint64_t pe2 = pe1 / m.p;
  for (uint64_t i = 0; i < pe1; ++i) {
    const uint64_t pc = std::gcd(i, pe2);
    const uint64_t jbound = pe2 / pc;
    for (uint64_t j = 0; j < jbound; ++j) {
      const bool j_ok = (j % pc == 0);
      const uint64_t lstep = std::max(pc, jbound);
      for (uint64_t k = 0; k + 1 < m.p; ++k) {
        if (i == 0 || k == 0) {
          fn(static_cast<uint32_t>(i), static_cast<uint32_t>(j),
             static_cast<uint32_t>(k), uint32_t{0});
        } else if (j_ok) {
          for (uint64_t l = 0; l < pe1; l += lstep)
            fn(static_cast<uint32_t>(i), static_cast<uint32_t>(j),
               static_cast<uint32_t>(k), static_cast<uint32_t>(l));
        }
      }
    }
  }
}

// The bare permutation b_j^{-1} a^i b^k b_l b_j, without the power
// function; classify and the enumerator compare against these.
inline Permutation s_ijkl_perm(const AdmissibleTuple& t) {
  const Modulus& m = t.m;
  const Permutation a = mult_by_p_plus_one(m);
  const Permutation bj = b_map(t.j, m);
  Permutation r = compose(b_map(t.l, m), bj);
  r = compose(power(mult_map(canonical_b_unit(m)), t.k), r);
  r = compose(power(a, t.i), r);
  return compose(inverse(bj), r);
}

// p^{e-1}(p-1) / (gcd(i, p^{e-1}) gcd(k, p-1))
inline uint64_t s_ijkl_order(const AdmissibleTuple& t) {
  const uint64_t pe1 = t.m.n / t.m.p;
  return pe1 * (t.m.p - 1) /
         (std::gcd<uint64_t>(t.i, pe1) * std::gcd<uint64_t>(t.k, t.m.p - 1));
}

}  // namespace detail

// s_{i,j} = b_j^{-1} a^i b_j, a skew-morphism of order
// p^{e-1}/gcd(i, p^{e-1}).
inline SkewMorphism s_ij(uint32_t i, uint32_t j, const Modulus& m) {
  if (m.e < 2)
    throw std::invalid_argument("s_ij: requires e >= 2");
  const uint64_t pe1 = m.n / m.p;
  if (i >= pe1 || j >= pe1)
    throw std::invalid_argument("s_ij: parameters out of range [0, p^{e-1})");
  const Permutation bj = b_map(j, m);
  const Permutation perm =
      compose(compose(inverse(bj), power(mult_by_p_plus_one(m), i)), bj);
  auto pf = compute_power_function(perm);
  if (!pf)
    throw consistency_error("s_ij: constructed permutation is not a skew-morphism");
  const uint64_t ord = order(perm);
  if (ord != pe1 / std::gcd<uint64_t>(i, pe1))
    throw consistency_error("s_ij: order formula violated");
  return SkewMorphism{perm, std::move(*pf), ord, m};
}

// s_{i,j,k,l} = b_j^{-1} a^i b^k b_l b_j for an admissible tuple.
inline SkewMorphism s_ijkl(const AdmissibleTuple& t) {
  Permutation perm = detail::s_ijkl_perm(t);
  auto pf = compute_power_function(perm);
  if (!pf)
    throw consistency_error("s_ijkl: constructed permutation is not a skew-morphism");
  const uint64_t ord = order(perm);
  if (ord != detail::s_ijkl_order(t))
    throw consistency_error("s_ijkl: order formula violated");
  return SkewMorphism{std::move(perm), std::move(*pf), ord, t.m};
}

// Wraps a verified permutation as a SkewMorphism; nullopt when f is not
// a skew-morphism.
inline std::optional<SkewMorphism> from_permutation(const Permutation& f,
                                                    const Modulus& m) {
  if (f.degree() != m.n)
    throw std::invalid_argument("from_permutation: degree does not match modulus");
  if (f(0) != 0) return std::nullopt;
  auto pf = compute_power_function(f);
  if (!pf) return std::nullopt;
  return SkewMorphism{f, std::move(*pf), order(f), m};
}

// The unique admissible tuple T with s_ijkl(T) = s.  Tuples are scanned
// lexicographically, restricted to those whose order formula matches;
// uniqueness means first hit wins.
inline AdmissibleTuple classify(const SkewMorphism& s) {
  const Modulus& m = s.modulus;
  if (m.e < 2)
    throw std::invalid_argument("classify: requires e >= 2");
  std::optional<AdmissibleTuple> hit;
  detail::for_each_admissible(m, [&](uint32_t i, uint32_t j, uint32_t k, uint32_t l) {
    if (hit) return;
    AdmissibleTuple t(i, j, k, l, m);
    if (detail::s_ijkl_order(t) != s.ord) return;
    if (detail::s_ijkl_perm(t) == s.perm) hit = t;
  });
  if (!hit)
    throw consistency_error("classify: no admissible tuple matches");
  return *hit;
}

// sigma = s1 x s2 on Z_{n1 n2} under the coprime-residue isomorphism.
// Requires gcd(n1, n2) = gcd(n1, phi(n2)) = gcd(phi(n1), n2) = 1.
inline Permutation crt_product(const SkewMorphism& s1, const SkewMorphism& s2) {
  const uint64_t n1 = s1.modulus.n, n2 = s2.modulus.n;
  if (std::gcd(n1, n2) != 1)
    throw std::invalid_argument("crt_product: moduli are not coprime");
  if (std::gcd(n1, euler_phi(s2.modulus)) != 1 ||
      std::gcd(euler_phi(s1.modulus), n2) != 1)
    throw std::invalid_argument("crt_product: gcd(n1, phi(n2)) = gcd(phi(n1), n2) = 1 required");
  const uint64_t n = n1 * n2;
  if (n >= max_modulus)
    throw std::invalid_argument("crt_product: product degree exceeds supported width");

  // CRT basis: c1 = 1 mod n1, 0 mod n2 and vice versa.  A trivial factor
  // contributes nothing, so its coefficient can stay 0.
  uint64_t c1 = 0, c2 = 0;
  if (n1 > 1) c1 = n2 * inv_mod(n2 % n1, n1) % n;
  if (n2 > 1) c2 = n1 * inv_mod(n1 % n2, n2) % n;

  std::vector<uint32_t> img(n);
  for (uint64_t x = 0; x < n; ++x) {
    const uint64_t a = s1.perm(static_cast<uint32_t>(x % n1));
    const uint64_t b = s2.perm(static_cast<uint32_t>(x % n2));
    img[x] = static_cast<uint32_t>((a * c1 + b * c2) % n);
  }
  Permutation product(std::move(img));
  if (!verify_definition(product))
    throw consistency_error("crt_product: product failed the skew-morphism definition");
  return product;
}

}  // namespace skewmorph
