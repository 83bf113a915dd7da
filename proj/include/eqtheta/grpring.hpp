// SPDX-License-Identifier: Apache-2.0
#pragma once

// Finite abelian groups, integral group rings Z[G] and (Z/N)[G],
// exact cyclotomic integers Z[zeta_n], characters, and equivariant
// polynomials (group-ring coefficients in one variable u).

#include <functional>
#include <gmpxx.h>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqtheta/intmat.hpp"

namespace eqtheta {

// G = prod Z/ns[i], elements are exponent tuples, indexed mixed-radix.
struct AbGroup {
  std::vector<long> ns;

  long order() const {
    long o = 1;
    for (long n : ns) o *= n;
    return o;
  }
  long exponent() const {
    long e = 1;
    for (long n : ns) e = std::lcm(e, n);
    return e;
  }
  size_t rank() const { return ns.size(); }

  long index(const std::vector<long>& e) const {
    long idx = 0, stride = 1;
    for (size_t i = 0; i < ns.size(); ++i) {
      long v = ((e[i] % ns[i]) + ns[i]) % ns[i];
      idx += v * stride;
      stride *= ns[i];
    }
    return idx;
  }
  std::vector<long> element(long idx) const {
    std::vector<long> e(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) {
      e[i] = idx % ns[i];
      idx /= ns[i];
    }
    return e;
  }
  std::vector<long> add(const std::vector<long>& a, const std::vector<long>& b) const {
    std::vector<long> r(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) r[i] = (a[i] + b[i]) % ns[i];
    return r;
  }
  std::vector<long> neg(const std::vector<long>& a) const {
    std::vector<long> r(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) r[i] = (ns[i] - a[i] % ns[i]) % ns[i];
    return r;
  }
  long add_idx(long a, long b) const { return index(add(element(a), element(b))); }
  long neg_idx(long a) const { return index(neg(element(a))); }
  long elt_order(const std::vector<long>& a) const {
    long o = 1;
    for (size_t i = 0; i < ns.size(); ++i)
      if (a[i]) o = std::lcm(o, ns[i] / std::gcd(ns[i], a[i]));
    return o;
  }
  bool operator==(const AbGroup& o) const { return ns == o.ns; }
};

// ---- cyclotomic integers ----------------------------------------------

namespace detail {

// Little-endian integer polys; exact arithmetic helpers for Phi_n.
inline void ztrim(std::vector<mpz_class>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline std::vector<mpz_class> zp_mul(const std::vector<mpz_class>& a,
                                     const std::vector<mpz_class>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<mpz_class> r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ztrim(r);
  return r;
}
inline std::vector<mpz_class> zp_divexact(std::vector<mpz_class> a,
                                          const std::vector<mpz_class>& b) {
  std::vector<mpz_class> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  for (int i = (int)q.size() - 1; i >= 0; --i) {
    mpz_class c = a[i + b.size() - 1] / b.back();
    q[i] = c;
    if (c != 0)
      for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
  }
  ztrim(a);
  if (!a.empty()) throw std::logic_error("inexact cyclotomic division");
  return q;
}

inline const std::vector<mpz_class>& cyclotomic_poly(long n) {
  static std::map<long, std::vector<mpz_class>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lk(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // x^n - 1 divided by all Phi_d, d | n, d < n (computed recursively
  // without re-locking: iterate d ascending so cache entries exist).
  std::function<std::vector<mpz_class>(long)> phi = [&](long k) -> std::vector<mpz_class> {
    auto ck = cache.find(k);
    if (ck != cache.end()) return ck->second;
    std::vector<mpz_class> num(k + 1);
    num[0] = -1;
    num[k] = 1;
    for (long d = 1; d < k; ++d)
      if (k % d == 0) num = zp_divexact(num, phi(d));
    cache.emplace(k, num);
    return num;
  };
  phi(n);
  return cache.at(n);
}

}  // namespace detail

// Element of Z[zeta_n], coordinates in the power basis mod Phi_n.
struct Cyclo {
  long n = 1;
  std::vector<mpz_class> c;  // size < deg Phi_n after reduce()

  static Cyclo zero(long n) { return Cyclo{n, {}}; }
  static Cyclo from_int(long n, const mpz_class& v) {
    Cyclo z{n, {v}};
    detail::ztrim(z.c);
    return z;
  }
  // zeta_n^k
  static Cyclo root_pow(long n, long k) {
    k = ((k % n) + n) % n;
    Cyclo z{n, std::vector<mpz_class>(k + 1)};
    z.c[k] = 1;
    z.reduce();
    return z;
  }

  void reduce() {
    const auto& Phi = detail::cyclotomic_poly(n);
    size_t d = Phi.size() - 1;
    while (c.size() > d) {
      mpz_class lead = c.back();
      size_t off = c.size() - Phi.size();
      if (lead != 0)
        for (size_t j = 0; j < Phi.size(); ++j) c[off + j] -= lead * Phi[j];
      c.pop_back();
    }
    detail::ztrim(c);
  }

  bool is_zero() const { return c.empty(); }
  bool is_int() const { return c.size() <= 1; }
  mpz_class int_value() const {
    if (c.empty()) return 0;
    if (c.size() > 1) throw std::logic_error("not a rational integer");
    return c[0];
  }

  Cyclo operator+(const Cyclo& o) const {
    Cyclo r{n, c};
    if (r.c.size() < o.c.size()) r.c.resize(o.c.size());
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    detail::ztrim(r.c);
    return r;
  }
  Cyclo operator-(const Cyclo& o) const {
    Cyclo r{n, c};
    if (r.c.size() < o.c.size()) r.c.resize(o.c.size());
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] -= o.c[i];
    detail::ztrim(r.c);
    return r;
  }
  Cyclo operator*(const Cyclo& o) const {
    Cyclo r{n, detail::zp_mul(c, o.c)};
    r.reduce();
    return r;
  }
  bool operator==(const Cyclo& o) const { return n == o.n && c == o.c; }

  // zeta -> zeta^k (Galois); gcd(k, n) = 1 for automorphisms.
  Cyclo galois(long k) const {
    k = ((k % n) + n) % n;
    std::vector<mpz_class> v((size_t)n, 0);
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      long e = (long)((i * (size_t)k) % (size_t)n);
      v[e] += c[i];
    }
    Cyclo r{n, v};
    r.reduce();
    return r;
  }
  Cyclo conj() const { return galois(n - 1); }

  std::string str() const {
    if (c.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      if (!s.empty()) s += " + ";
      s += c[i].get_str();
      if (i >= 1) s += "*z^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }
};

// ---- group ring --------------------------------------------------------

// Element of Z[G] (N = 0) or (Z/N)[G] (N > 0); dense coefficients by
// element index.
struct GrElt {
  const AbGroup* G = nullptr;
  mpz_class N = 0;
  std::vector<mpz_class> c;

  static GrElt zero(const AbGroup* G, const mpz_class& N = 0) {
    return GrElt{G, N, std::vector<mpz_class>((size_t)G->order())};
  }
  static GrElt one(const AbGroup* G, const mpz_class& N = 0) {
    GrElt e = zero(G, N);
    e.c[0] = 1;
    e.normalize();
    return e;
  }
  static GrElt basis(const AbGroup* G, long idx, const mpz_class& N = 0) {
    GrElt e = zero(G, N);
    e.c[idx] = 1;
    e.normalize();
    return e;
  }
  static GrElt scalar(const AbGroup* G, const mpz_class& v, const mpz_class& N = 0) {
    GrElt e = zero(G, N);
    e.c[0] = v;
    e.normalize();
    return e;
  }

  void normalize() {
    if (N > 0)
      for (auto& v : c) {
        v %= N;
        if (v < 0) v += N;
      }
  }

  bool is_zero() const {
    for (auto& v : c)
      if (v != 0) return false;
    return true;
  }

  GrElt operator+(const GrElt& o) const {
    GrElt r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
    r.normalize();
    return r;
  }
  GrElt operator-(const GrElt& o) const {
    GrElt r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
    r.normalize();
    return r;
  }
  GrElt operator*(const GrElt& o) const {
    GrElt r = zero(G, N);
    long n = G->order();
    for (long i = 0; i < n; ++i) {
      if (c[i] == 0) continue;
      for (long j = 0; j < n; ++j) {
        if (o.c[j] == 0) continue;
        r.c[G->add_idx(i, j)] += c[i] * o.c[j];
      }
    }
    r.normalize();
    return r;
  }
  GrElt operator*(const mpz_class& s) const {
    GrElt r = *this;
    for (auto& v : r.c) v *= s;
    r.normalize();
    return r;
  }
  bool operator==(const GrElt& o) const {
    GrElt d = *this - o;
    return d.is_zero();
  }

  // sigma -> sigma^{-1} extended linearly.
  GrElt involution() const {
    GrElt r = zero(G, N);
    for (long i = 0; i < G->order(); ++i) r.c[G->neg_idx(i)] = c[i];
    r.normalize();
    return r;
  }

  // Reduce coefficients into a new modulus (e.g. Z[G] -> Z/N[G]).
  GrElt with_modulus(const mpz_class& M) const {
    GrElt r = *this;
    r.N = M;
    r.normalize();
    return r;
  }

  std::string str() const {
    std::string s;
    for (long i = 0; i < G->order(); ++i) {
      if (c[i] == 0) continue;
      if (!s.empty()) s += " + ";
      s += c[i].get_str();
      auto e = G->element(i);
      for (size_t j = 0; j < e.size(); ++j)
        if (e[j]) s += "*g" + std::to_string(j) + "^" + std::to_string(e[j]);
    }
    return s.empty() ? "0" : s;
  }
};

// A character G -> mu_E, E = exponent of G, stored as the exponent tuple.
struct Character {
  const AbGroup* G = nullptr;
  std::vector<long> a;  // chi(g) = zeta_E^{sum a_i g_i E/ns_i}
  long E = 1;

  long root_exp(const std::vector<long>& g) const {
    long s = 0;
    for (size_t i = 0; i < a.size(); ++i)
      s = (s + a[i] * g[i] % E * (E / G->ns[i])) % E;
    return ((s % E) + E) % E;
  }
  long root_exp_idx(long idx) const { return root_exp(G->element(idx)); }

  bool is_trivial() const {
    for (long v : a)
      if (v) return false;
    return true;
  }

  Cyclo apply(const GrElt& x) const {
    if (x.N != 0) throw std::invalid_argument("character on integral ring only");
    Cyclo r = Cyclo::zero(E);
    for (long i = 0; i < G->order(); ++i)
      if (x.c[i] != 0)
        r = r + Cyclo::root_pow(E, root_exp_idx(i)) * Cyclo::from_int(E, x.c[i]);
    return r;
  }

  // chi^{-1}
  Character inverse() const {
    Character r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = (G->ns[i] - a[i] % G->ns[i]) % G->ns[i];
    return r;
  }
};

inline std::vector<Character> characters(const AbGroup& G) {
  std::vector<Character> out;
  long n = G.order();
  long E = G.exponent();
  for (long idx = 0; idx < n; ++idx) {
    Character ch;
    ch.G = &G;
    ch.a = G.element(idx);
    ch.E = E;
    out.push_back(ch);
  }
  return out;
}

// Polynomial in u with Z[G] coefficients, little-endian.
struct EqPoly {
  const AbGroup* G = nullptr;
  std::vector<GrElt> coef;

  static EqPoly zero(const AbGroup* G) { return EqPoly{G, {}}; }
  static EqPoly one(const AbGroup* G) { return EqPoly{G, {GrElt::one(G)}}; }

  void trim() {
    while (!coef.empty() && coef.back().is_zero()) coef.pop_back();
  }
  int deg() const { return (int)coef.size() - 1; }

  EqPoly operator+(const EqPoly& o) const {
    EqPoly r = *this;
    if (r.coef.size() < o.coef.size()) r.coef.resize(o.coef.size(), GrElt::zero(G));
    for (size_t i = 0; i < o.coef.size(); ++i) r.coef[i] = r.coef[i] + o.coef[i];
    r.trim();
    return r;
  }
  EqPoly operator*(const EqPoly& o) const {
    if (coef.empty() || o.coef.empty()) return zero(G);
    EqPoly r{G, std::vector<GrElt>(coef.size() + o.coef.size() - 1, GrElt::zero(G))};
    for (size_t i = 0; i < coef.size(); ++i) {
      if (coef[i].is_zero()) continue;
      for (size_t j = 0; j < o.coef.size(); ++j)
        if (!o.coef[j].is_zero()) r.coef[i + j] = r.coef[i + j] + coef[i] * o.coef[j];
    }
    r.trim();
    return r;
  }
  bool operator==(const EqPoly& o) const {
    EqPoly a = *this, b = o;
    a.trim();
    b.trim();
    if (a.coef.size() != b.coef.size()) return false;
    for (size_t i = 0; i < a.coef.size(); ++i)
      if (!(a.coef[i] == b.coef[i])) return false;
    return true;
  }

  // Truncated product: drop powers of u beyond B.
  EqPoly mul_trunc(const EqPoly& o, int B) const {
    EqPoly r = *this * o;
    if ((int)r.coef.size() > B + 1) r.coef.resize(B + 1, GrElt::zero(G));
    r.trim();
    return r;
  }

  GrElt eval_int(const mpz_class& u0) const {
    GrElt r = GrElt::zero(G);
    mpz_class pw = 1;
    for (size_t i = 0; i < coef.size(); ++i) {
      r = r + coef[i] * pw;
      pw *= u0;
    }
    return r;
  }

  // Substitute u = (group element)^{exp}, i.e. u -> basis(h)^exp, landing
  // in Z[G'] for a supergroup G' containing G x <h>; caller supplies the
  // coefficient-embedding map and the image of u.
  GrElt eval_group(const AbGroup* Gbar, const mpz_class& N,
                   const std::function<long(long)>& embed_idx, long u_idx) const {
    GrElt r = GrElt::zero(Gbar, N);
    long cur = 0;  // identity
    for (size_t i = 0; i < coef.size(); ++i) {
      for (long g = 0; g < G->order(); ++g)
        if (coef[i].c[g] != 0) {
          long tgt = Gbar->add_idx(embed_idx(g), cur);
          r.c[tgt] += coef[i].c[g];
        }
      cur = Gbar->add_idx(cur, u_idx);
    }
    r.normalize();
    return r;
  }

  // Apply a character coefficient-wise: polynomial over Z[zeta].
  std::vector<Cyclo> apply_char(const Character& ch) const {
    std::vector<Cyclo> r;
    for (auto& co : coef) r.push_back(ch.apply(co));
    while (!r.empty() && r.back().is_zero()) r.pop_back();
    return r;
  }
};

}  // namespace eqtheta
