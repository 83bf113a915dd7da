// SPDX-License-Identifier: Apache-2.0
#pragma once

// Finite fields F_{p^m} with a canonical modulus per (p, m).
//
// Elements are integer codes sum_i c_i p^i with digits c_i in [0, p).
// The modulus is the least monic irreducible of degree m over F_p in code
// order, so every (p, m) names one field and codes are portable identifiers.
// Small fields carry exp/log tables; larger ones fall back to digit
// arithmetic.  p^m must fit in 62 bits and p in 31 bits.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace eqtheta {

using u64 = std::uint64_t;
using i64 = std::int64_t;

namespace detail {

// Minimal F_p[x] helpers used only for modulus search and generic fallbacks.
// Polynomials are little-endian digit vectors, normalized (no zero lead).

inline void fpv_norm(std::vector<u64>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u64> fpv_mulmod(const std::vector<u64>& a, const std::vector<u64>& b,
                                   const std::vector<u64>& f, u64 p) {
  // f monic, deg f >= 1; result reduced mod f.
  if (a.empty() || b.empty()) return {};
  std::vector<u64> prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  size_t df = f.size() - 1;
  for (size_t i = prod.size(); i-- > df;) {
    u64 d = prod[i];
    if (!d) continue;
    prod[i] = 0;
    for (size_t j = 0; j < df; ++j)
      prod[i - df + j] = (prod[i - df + j] + d * ((p - f[j]) % p)) % p;
  }
  prod.resize(df);
  fpv_norm(prod);
  return prod;
}

inline std::vector<u64> fpv_powmod(std::vector<u64> base, u64 e,
                                   const std::vector<u64>& f, u64 p) {
  std::vector<u64> r{1};
  while (e) {
    if (e & 1) r = fpv_mulmod(r, base, f, p);
    base = fpv_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline std::vector<u64> fpv_gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
  auto inv_mod_p = [p](u64 x) {
    // p prime, x != 0.
    u64 r = 1, bse = x % p, e = p - 2;
    while (e) {
      if (e & 1) r = r * bse % p;
      bse = bse * bse % p;
      e >>= 1;
    }
    return r;
  };
  while (!b.empty()) {
    // a mod b
    u64 lb = inv_mod_p(b.back());
    while (a.size() >= b.size() && !a.empty()) {
      u64 c = a.back() * lb % p;
      size_t off = a.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j)
        a[off + j] = (a[off + j] + (p - c * b[j] % p)) % p;
      fpv_norm(a);
      if (a.size() < b.size()) break;
    }
    std::swap(a, b);
  }
  return a;
}

inline std::vector<u64> small_prime_factors(u64 n) {
  std::vector<u64> fs;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      fs.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) fs.push_back(n);
  return fs;
}

inline bool fpv_is_irreducible(const std::vector<u64>& f, u64 p) {
  // f monic, deg >= 1.  x^{p^d} == x mod f and gcd(x^{p^{d/r}} - x, f) = 1.
  size_t d = f.size() - 1;
  if (d == 1) return true;
  std::vector<u64> x{0, 1};
  // xq[k] = x^{p^k} mod f, computed by iterated p-th powering.
  std::vector<std::vector<u64>> xq(d + 1);
  xq[0] = x;
  for (size_t k = 1; k <= d; ++k) xq[k] = fpv_powmod(xq[k - 1], p, f, p);
  auto sub_x = [&](std::vector<u64> v) {
    if (v.size() < 2) v.resize(2, 0);
    v[1] = (v[1] + p - 1) % p;
    fpv_norm(v);
    return v;
  };
  if (!sub_x(xq[d]).empty()) return false;
  for (u64 r : small_prime_factors(d)) {
    auto g = fpv_gcd(f, sub_x(xq[d / r]), p);
    if (g.size() != 1) return false;
  }
  return true;
}

inline std::vector<u64> least_irreducible(u64 p, int m) {
  if (m == 1) return {0, 1};  // x itself; unused for arithmetic.
  // Scan monic degree-m polynomials in code order of their lower digits.
  u64 span = 1;
  for (int i = 0; i < m; ++i) span *= p;
  for (u64 code = 0; code < span; ++code) {
    std::vector<u64> f(m + 1, 0);
    u64 c = code;
    for (int i = 0; i < m; ++i) {
      f[i] = c % p;
      c /= p;
    }
    f[m] = 1;
    if (f[0] == 0) continue;  // divisible by x
    if (fpv_is_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible found");
}

}  // namespace detail

struct FieldCtx {
  u64 p = 0;
  int m = 0;
  u64 q = 0;                  // p^m
  std::vector<u64> mod;       // canonical modulus, digits, mod[m] = 1
  std::vector<u64> exp_tab;   // exp_tab[i] = gen^i, size q-1 (iff tabled)
  std::vector<std::uint32_t> log_tab;  // log_tab[code] = i (iff tabled)
  u64 gen = 0;                // least primitive element (always set)
  std::vector<u64> qm1_primes;

  static constexpr u64 kTableLimit = 1u << 21;

  bool tabled() const { return !exp_tab.empty(); }

  std::vector<u64> dec(u64 code) const {
    std::vector<u64> d(m);
    for (int i = 0; i < m; ++i) {
      d[i] = code % p;
      code /= p;
    }
    return d;
  }
  u64 enc(const std::vector<u64>& d) const {
    u64 code = 0;
    for (int i = m; i-- > 0;) code = code * p + (i < (int)d.size() ? d[i] : 0);
    return code;
  }

  u64 add(u64 a, u64 b) const {
    if (m == 1) return (a + b) % p;
    u64 r = 0, pw = 1;
    for (int i = 0; i < m; ++i) {
      r += (a % p + b % p) % p * pw;
      a /= p;
      b /= p;
      pw *= p;
    }
    return r;
  }
  u64 neg(u64 a) const {
    if (m == 1) return (p - a) % p;
    u64 r = 0, pw = 1;
    for (int i = 0; i < m; ++i) {
      r += (p - a % p) % p * pw;
      a /= p;
      pw *= p;
    }
    return r;
  }
  u64 sub(u64 a, u64 b) const { return add(a, neg(b)); }

  u64 mul(u64 a, u64 b) const {
    if (a == 0 || b == 0) return 0;
    if (m == 1) return a * b % p;
    if (tabled()) {
      u64 e = (u64)log_tab[a] + log_tab[b];
      if (e >= q - 1) e -= q - 1;
      return exp_tab[e];
    }
    auto prod = detail::fpv_mulmod(dec(a), dec(b), mod, p);
    return enc(prod);
  }

  u64 pow(u64 a, u64 e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    if (tabled()) {
      u64 l = log_tab[a];
      // e mod (q-1) via 128-bit safe split: e < 2^64, q-1 < 2^62.
      u64 em = e % (q - 1);
      unsigned __int128 t = (unsigned __int128)l * em;
      return exp_tab[(u64)(t % (q - 1))];
    }
    u64 r = 1, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  u64 inv(u64 a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    if (tabled()) {
      u64 l = log_tab[a];
      return exp_tab[l == 0 ? 0 : q - 1 - l];
    }
    return pow(a, q - 2);
  }
  u64 div(u64 a, u64 b) const { return mul(a, inv(b)); }

  u64 frob(u64 a) const { return pow(a, p); }         // x -> x^p
  u64 pth_root(u64 a) const {                          // inverse of frob
    u64 r = a;
    for (int i = 0; i + 1 < m; ++i) r = frob(r);
    return r;
  }

  u64 trace_abs(u64 a) const {  // to F_p; returns code < p
    u64 t = 0, x = a;
    for (int i = 0; i < m; ++i) {
      t = add(t, x);
      x = frob(x);
    }
    return t;
  }
  u64 norm_abs(u64 a) const {  // to F_p
    if (a == 0) return 0;
    return pow(a, (q - 1) / (p - 1));
  }

  // Multiplicative order of a != 0.
  u64 order(u64 a) const {
    u64 o = q - 1;
    for (u64 r : qm1_primes)
      while (o % r == 0 && pow(a, o / r) == 1) o /= r;
    return o;
  }

  u64 dlog(u64 a) const {
    if (a == 0) throw std::domain_error("dlog of zero");
    if (tabled()) return log_tab[a];
    // Baby-step giant-step.
    u64 n = q - 1;
    u64 s = 1;
    while (s * s < n) ++s;
    std::unordered_map<u64, u64> baby;
    u64 cur = 1;
    for (u64 j = 0; j < s; ++j) {
      baby.emplace(cur, j);
      cur = mul(cur, gen);
    }
    u64 giant = inv(cur);  // gen^{-s}
    u64 y = a;
    for (u64 i = 0; i <= s; ++i) {
      auto it = baby.find(y);
      if (it != baby.end()) return i * s + it->second;
      y = mul(y, giant);
    }
    throw std::logic_error("dlog failed");
  }

  u64 from_int(i64 c) const {
    i64 r = c % (i64)p;
    if (r < 0) r += p;
    return (u64)r;
  }
};

inline const FieldCtx* fq_make(u64 p, int m) {
  static std::map<std::pair<u64, int>, std::unique_ptr<FieldCtx>> registry;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lk(mtx);
  auto key = std::make_pair(p, m);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second.get();

  if (p < 2 || p >= (1u << 31)) throw std::invalid_argument("bad p");
  for (u64 d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("p not prime");
  if (m < 1) throw std::invalid_argument("bad m");
  u64 q = 1;
  for (int i = 0; i < m; ++i) {
    if (q > (1ULL << 62) / p) throw std::invalid_argument("field too large");
    q *= p;
  }

  auto ctx = std::make_unique<FieldCtx>();
  ctx->p = p;
  ctx->m = m;
  ctx->q = q;
  ctx->mod = detail::least_irreducible(p, m);
  ctx->qm1_primes = detail::small_prime_factors(q - 1);

  // Least primitive element by code.
  if (q == 2) {
    ctx->gen = 1;
  } else {
    for (u64 c = 2; c < q; ++c) {
      bool prim = true;
      for (u64 r : ctx->qm1_primes)
        if (ctx->pow(c, (q - 1) / r) == 1) {
          prim = false;
          break;
        }
      if (prim) {
        ctx->gen = c;
        break;
      }
    }
  }

  if (q <= FieldCtx::kTableLimit) {
    // Build into locals so mul keeps using the digit path meanwhile.
    std::vector<u64> et(q - 1);
    std::vector<std::uint32_t> lt(q, 0);
    u64 cur = 1;
    for (u64 i = 0; i < q - 1; ++i) {
      et[i] = cur;
      lt[cur] = (std::uint32_t)i;
      cur = ctx->mul(cur, ctx->gen);
    }
    ctx->exp_tab = std::move(et);
    ctx->log_tab = std::move(lt);
  }

  auto* raw = ctx.get();
  registry.emplace(key, std::move(ctx));
  return raw;
}

}  // namespace eqtheta
