#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "skewmorph/zmod.hpp"

// Permutations on {0, ..., n-1} and finite permutation-group
// computations: closure, commutator subgroup, center, exponent, and a
// split-metacyclic decision procedure.  Composition is right-to-left:
// (fg)(x) = f(g(x)).

namespace skewmorph {

class Permutation {
 public:
  explicit Permutation(std::vector<uint32_t> images) : images_(std::move(images)) {
    if (images_.empty())
      throw std::invalid_argument("Permutation: degree must be positive");
    std::vector<char> seen(images_.size(), 0);
    for (uint32_t v : images_) {
      if (v >= images_.size() || seen[v])
        throw std::invalid_argument("Permutation: images are not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(uint32_t degree) {
    std::vector<uint32_t> img(degree);
    std::iota(img.begin(), img.end(), 0u);
    return Permutation(std::move(img));
  }

  uint32_t degree() const { return static_cast<uint32_t>(images_.size()); }
  uint32_t operator()(uint32_t x) const { return images_[x]; }
  const std::vector<uint32_t>& images() const { return images_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend bool operator<(const Permutation& a, const Permutation& b) {
    return a.images_ < b.images_;
  }

 private:
  std::vector<uint32_t> images_;
};

struct PermHash {
  size_t operator()(const Permutation& f) const {
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (uint32_t v : f.images()) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

namespace detail {
inline void require_same_degree(const Permutation& f, const Permutation& g,
                                const char* who) {
  if (f.degree() != g.degree())
    throw std::invalid_argument(std::string(who) + ": degree mismatch");
}
}  // namespace detail

// compose(f, g)(x) = f(g(x))
inline Permutation compose(const Permutation& f, const Permutation& g) {
  detail::require_same_degree(f, g, "compose");
  std::vector<uint32_t> img(f.degree());
  for (uint32_t x = 0; x < f.degree(); ++x) img[x] = f(g(x));
  return Permutation(std::move(img));
}

inline Permutation inverse(const Permutation& f) {
  std::vector<uint32_t> img(f.degree());
  for (uint32_t x = 0; x < f.degree(); ++x) img[f(x)] = x;
  return Permutation(std::move(img));
}

namespace detail {
inline unsigned __int128 lcm128(unsigned __int128 a, uint64_t b) {
  unsigned __int128 x = a, y = b;
  while (y != 0) {
    unsigned __int128 t = x % y;
    x = y;
    y = static_cast<uint64_t>(t);
  }
  return a / x * b;
}
}  // namespace detail

inline uint64_t order(const Permutation& f) {
  const uint32_t n = f.degree();
  std::vector<char> seen(n, 0);
  unsigned __int128 l = 1;
  for (uint32_t x = 0; x < n; ++x) {
    if (seen[x]) continue;
    uint64_t len = 0;
    for (uint32_t y = x; !seen[y]; y = f(y)) {
      seen[y] = 1;
      ++len;
    }
    l = detail::lcm128(l, len);
    if (l > ~uint64_t{0})
      throw std::overflow_error("order: permutation order exceeds 64 bits");
  }
  return static_cast<uint64_t>(l);
}

// f^k for any integer k; negative exponents go through the inverse.
inline Permutation power(const Permutation& f, int64_t k) {
  const uint64_t ord = order(f);
  uint64_t r;
  if (k >= 0) {
    r = static_cast<uint64_t>(k) % ord;
  } else {
    r = ord - (static_cast<uint64_t>(-(k + 1)) + 1) % ord;
    if (r == ord) r = 0;
  }
  Permutation acc = Permutation::identity(f.degree());
  Permutation base = f;
  while (r > 0) {
    if (r & 1) acc = compose(acc, base);
    base = compose(base, base);
    r >>= 1;
  }
  return acc;
}

// conjugate(f, by) = by . f . by^{-1}
inline Permutation conjugate(const Permutation& f, const Permutation& by) {
  return compose(compose(by, f), inverse(by));
}

// t(x) = x + 1
inline Permutation translation(uint32_t degree) {
  std::vector<uint32_t> img(degree);
  for (uint32_t x = 0; x < degree; ++x) img[x] = (x + 1) % degree;
  return Permutation(std::move(img));
}

inline Permutation translation(const Modulus& m) {
  return translation(static_cast<uint32_t>(m.n));
}

// x -> u*x mod n; requires gcd(u, n) = 1 so the map is a bijection.
inline Permutation mult_map(uint64_t u, uint32_t degree) {
  u %= degree;
  if (std::gcd<uint64_t>(u, degree) != 1)
    throw std::invalid_argument("mult_map: multiplier is not a unit");
  std::vector<uint32_t> img(degree);
  for (uint32_t x = 0; x < degree; ++x)
    img[x] = static_cast<uint32_t>((u * x) % degree);
  return Permutation(std::move(img));
}

inline Permutation mult_map(const Unit& u) {
  return mult_map(u.value, static_cast<uint32_t>(u.m.n));
}

inline constexpr size_t default_closure_cap = 1'000'000;

namespace detail {

// BFS product closure of the generated subgroup.  Returns nullopt when
// the element count would exceed cap.
inline std::optional<std::unordered_set<Permutation, PermHash>> close_under_products(
    const std::vector<Permutation>& generators, size_t cap) {
  std::unordered_set<Permutation, PermHash> elems;
  std::queue<Permutation> frontier;
  Permutation id = Permutation::identity(generators.front().degree());
  elems.insert(id);
  frontier.push(std::move(id));
  while (!frontier.empty()) {
    Permutation x = std::move(frontier.front());
    frontier.pop();
    for (const Permutation& g : generators) {
      Permutation y = compose(x, g);
      if (elems.insert(y).second) {
        if (elems.size() > cap) return std::nullopt;
        frontier.push(std::move(y));
      }
    }
  }
  return elems;
}

}  // namespace detail

// A finite permutation group: the closure of its generators, with the
// elements held in lexicographic order for deterministic iteration.
class GroupClosure {
 public:
  GroupClosure(std::vector<Permutation> elements, std::vector<Permutation> generators)
      : elements_(std::move(elements)), generators_(std::move(generators)) {
    std::sort(elements_.begin(), elements_.end());
  }

  uint32_t degree() const { return elements_.front().degree(); }
  uint64_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  bool contains(const Permutation& f) const {
    return std::binary_search(elements_.begin(), elements_.end(), f);
  }

 private:
  std::vector<Permutation> elements_;
  std::vector<Permutation> generators_;
};

inline GroupClosure closure(std::vector<Permutation> generators,
                            size_t element_cap = default_closure_cap) {
  if (generators.empty())
    throw std::invalid_argument("closure: need at least one generator");
  for (const Permutation& g : generators)
    detail::require_same_degree(generators.front(), g, "closure");
  auto elems = detail::close_under_products(generators, element_cap);
  if (!elems)
    throw resource_error("closure: element cap of " + std::to_string(element_cap) +
                         " exceeded");
  return GroupClosure(std::vector<Permutation>(elems->begin(), elems->end()),
                      std::move(generators));
}

// G' = normal closure of the commutators of generator pairs.
inline GroupClosure commutator_subgroup(const GroupClosure& G,
                                        size_t element_cap = default_closure_cap) {
  const Permutation id = Permutation::identity(G.degree());
  std::vector<Permutation> kgens;
  auto add_unique = [&](const Permutation& c) {
    if (c == id) return false;
    if (std::find(kgens.begin(), kgens.end(), c) != kgens.end()) return false;
    kgens.push_back(c);
    return true;
  };
  for (const Permutation& g : G.generators())
    for (const Permutation& h : G.generators())
      add_unique(compose(compose(g, h), compose(inverse(g), inverse(h))));

  if (kgens.empty()) return GroupClosure({id}, {});

  for (;;) {
    GroupClosure K = closure(kgens, element_cap);
    bool grew = false;
    const size_t fixed = kgens.size();
    for (const Permutation& g : G.generators())
      for (size_t s = 0; s < fixed; ++s)
        if (!K.contains(conjugate(kgens[s], g)))
          grew |= add_unique(conjugate(kgens[s], g));
    if (!grew) return K;
  }
}

inline GroupClosure center(const GroupClosure& G) {
  std::vector<Permutation> z;
  for (const Permutation& x : G.elements()) {
    bool commutes = true;
    for (const Permutation& g : G.generators())
      if (compose(x, g) != compose(g, x)) {
        commutes = false;
        break;
      }
    if (commutes) z.push_back(x);
  }
  return GroupClosure(z, z);
}

inline uint64_t exponent(const GroupClosure& G) {
  unsigned __int128 l = 1;
  for (const Permutation& x : G.elements()) {
    l = detail::lcm128(l, order(x));
    if (l > ~uint64_t{0})
      throw std::overflow_error("exponent: exceeds 64 bits");
  }
  return static_cast<uint64_t>(l);
}

// Exponent of G/N; N must be a normal subgroup of G.
inline uint64_t quotient_exponent(const GroupClosure& G, const GroupClosure& N) {
  detail::require_same_degree(G.elements().front(), N.elements().front(),
                              "quotient_exponent");
  for (const Permutation& x : N.elements())
    if (!G.contains(x))
      throw std::invalid_argument("quotient_exponent: N is not contained in G");
  for (const Permutation& g : G.generators())
    for (const Permutation& x : N.elements())
      if (!N.contains(conjugate(x, g)))
        throw std::invalid_argument("quotient_exponent: N is not normal in G");

  unsigned __int128 l = 1;
  for (const Permutation& g : G.elements()) {
    Permutation y = g;
    uint64_t k = 1;
    while (!N.contains(y)) {
      y = compose(y, g);
      ++k;
    }
    l = detail::lcm128(l, k);
  }
  return static_cast<uint64_t>(l);
}

// True iff G = <x><y> with <x> normal, <x> meet <y> = 1 and
// |<x>||<y>| = |G|.  One generator per cyclic subgroup is examined,
// maximal-order representatives first.
inline bool is_split_metacyclic(const GroupClosure& G) {
  const uint64_t size = G.order();
  if (size == 1) return true;
  uint64_t p = 0;
  for (uint64_t q = 2; q * q <= size; ++q)
    if (size % q == 0) {
      p = q;
      break;
    }
  if (p == 0) p = size;
  for (uint64_t w = size; w != 1; w /= p)
    if (w % p != 0)
      throw std::invalid_argument("is_split_metacyclic: order is not a prime power");

  const auto& elems = G.elements();
  std::vector<uint64_t> ords(elems.size());
  for (size_t i = 0; i < elems.size(); ++i) ords[i] = order(elems[i]);

  std::unordered_map<Permutation, size_t, PermHash> index;
  for (size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);

  std::vector<size_t> by_order(elems.size());
  std::iota(by_order.begin(), by_order.end(), size_t{0});
  std::stable_sort(by_order.begin(), by_order.end(),
                   [&](size_t a, size_t b) { return ords[a] > ords[b]; });

  std::vector<char> covered(elems.size(), 0);
  for (size_t gi : by_order) {
    if (covered[gi]) continue;
    const Permutation& g = elems[gi];
    const uint64_t corder = ords[gi];

    // members of <g>; mark the other generators of the same subgroup
    std::unordered_set<size_t> members;
    Permutation y = Permutation::identity(G.degree());
    for (uint64_t k = 0; k < corder; ++k) {
      size_t idx = index.at(y);
      members.insert(idx);
      if (ords[idx] == corder) covered[idx] = 1;
      y = compose(y, g);
    }

    bool normal = true;
    for (const Permutation& h : G.generators())
      if (!members.count(index.at(conjugate(g, h)))) {
        normal = false;
        break;
      }
    if (!normal) continue;

    const uint64_t need = size / corder;
    if (need == 1) return true;  // G itself is cyclic
    for (size_t yi = 0; yi < elems.size(); ++yi) {
      if (ords[yi] != need) continue;
      // <y> meets <g> trivially iff the unique order-p subgroup of <y>
      // is outside <g>
      Permutation probe = power(elems[yi], static_cast<int64_t>(need / p));
      if (!members.count(index.at(probe))) return true;
    }
  }
  return false;
}

}  // namespace skewmorph
