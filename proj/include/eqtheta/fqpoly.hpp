// SPDX-License-Identifier: Apache-2.0
#pragma once

// Univariate polynomials over a FieldCtx: little-endian code vectors,
// always normalized (no zero leading coefficient; zero poly is empty).
// Provides factorization, root finding, resultants, canonical irreducible
// enumeration, and least-root embeddings between canonical fields.

#include <algorithm>
#include <gmpxx.h>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eqtheta/fq.hpp"
#include "eqtheta/rng.hpp"

namespace eqtheta {

using PolyV = std::vector<u64>;

inline void pnorm(PolyV& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int pdeg(const PolyV& a) { return (int)a.size() - 1; }
inline bool pis_zero(const PolyV& a) { return a.empty(); }
inline u64 plc(const PolyV& a) { return a.empty() ? 0 : a.back(); }
inline PolyV pconst(u64 c) { return c ? PolyV{c} : PolyV{}; }

inline PolyV padd(const FieldCtx* F, const PolyV& a, const PolyV& b) {
  PolyV r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    u64 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    r[i] = F->add(x, y);
  }
  pnorm(r);
  return r;
}
inline PolyV pneg(const FieldCtx* F, const PolyV& a) {
  PolyV r(a);
  for (auto& c : r) c = F->neg(c);
  return r;
}
inline PolyV psub(const FieldCtx* F, const PolyV& a, const PolyV& b) {
  return padd(F, a, pneg(F, b));
}
inline PolyV pscale(const FieldCtx* F, u64 c, const PolyV& a) {
  if (c == 0) return {};
  PolyV r(a);
  for (auto& x : r) x = F->mul(c, x);
  return r;
}
inline PolyV pmul(const FieldCtx* F, const PolyV& a, const PolyV& b) {
  if (a.empty() || b.empty()) return {};
  PolyV r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j]) r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
  }
  pnorm(r);
  return r;
}
inline PolyV pshift(const PolyV& a, int k) {  // multiply by x^k
  if (a.empty()) return {};
  PolyV r(a.size() + k, 0);
  std::copy(a.begin(), a.end(), r.begin() + k);
  return r;
}

// quotient, remainder with divisor b != 0.
inline std::pair<PolyV, PolyV> pdivmod(const FieldCtx* F, PolyV a, const PolyV& b) {
  if (b.empty()) throw std::domain_error("poly division by zero");
  PolyV q;
  u64 li = F->inv(plc(b));
  while (a.size() >= b.size()) {
    u64 c = F->mul(plc(a), li);
    size_t off = a.size() - b.size();
    if (q.size() < off + 1) q.resize(off + 1, 0);
    q[off] = c;
    for (size_t j = 0; j < b.size(); ++j)
      a[off + j] = F->sub(a[off + j], F->mul(c, b[j]));
    pnorm(a);
    if (a.empty()) break;
  }
  pnorm(q);
  return {q, a};
}
inline PolyV pmod(const FieldCtx* F, const PolyV& a, const PolyV& b) {
  return pdivmod(F, a, b).second;
}
inline PolyV pdiv_exact(const FieldCtx* F, const PolyV& a, const PolyV& b) {
  auto [q, r] = pdivmod(F, a, b);
  if (!r.empty()) throw std::logic_error("inexact poly division");
  return q;
}
inline PolyV pmonic(const FieldCtx* F, const PolyV& a) {
  if (a.empty() || plc(a) == 1) return a;
  return pscale(F, F->inv(plc(a)), a);
}
inline PolyV pgcd(const FieldCtx* F, PolyV a, PolyV b) {
  while (!b.empty()) {
    a = pmod(F, a, b);
    std::swap(a, b);
  }
  return pmonic(F, a);
}
// g = gcd, s*a + t*b = g.
inline void pgcd_ext(const FieldCtx* F, PolyV a, PolyV b, PolyV& g, PolyV& s, PolyV& t) {
  PolyV s0{1}, s1{}, t0{}, t1{1};
  while (!b.empty()) {
    auto [q, r] = pdivmod(F, a, b);
    a = std::move(b);
    b = std::move(r);
    PolyV s2 = psub(F, s0, pmul(F, q, s1));
    PolyV t2 = psub(F, t0, pmul(F, q, t1));
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  u64 li = a.empty() ? 1 : F->inv(plc(a));
  g = pscale(F, li, a);
  s = pscale(F, li, s0);
  t = pscale(F, li, t0);
}

inline u64 peval(const FieldCtx* F, const PolyV& a, u64 x) {
  u64 r = 0;
  for (size_t i = a.size(); i-- > 0;) r = F->add(F->mul(r, x), a[i]);
  return r;
}
inline PolyV pderiv(const FieldCtx* F, const PolyV& a) {
  if (a.size() <= 1) return {};
  PolyV r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i)
    r[i - 1] = F->mul(F->from_int((i64)(i % F->p)), a[i]);
  pnorm(r);
  return r;
}

inline PolyV pmulmod(const FieldCtx* F, const PolyV& a, const PolyV& b, const PolyV& f) {
  return pmod(F, pmul(F, a, b), f);
}
inline PolyV ppowmod(const FieldCtx* F, PolyV base, mpz_class e, const PolyV& f) {
  PolyV r{1};
  base = pmod(F, base, f);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = pmulmod(F, r, base, f);
    base = pmulmod(F, base, base, f);
    e >>= 1;
  }
  return r;
}

// f = g^p with g recovered via coefficient p-th roots; requires f' = 0.
inline PolyV ppth_root(const FieldCtx* F, const PolyV& f) {
  PolyV g((f.size() - 1) / F->p + 1, 0);
  for (size_t i = 0; i < f.size(); ++i)
    if (f[i]) {
      if (i % F->p) throw std::logic_error("not a p-th power");
      g[i / F->p] = F->pth_root(f[i]);
    }
  pnorm(g);
  return g;
}

inline mpz_class field_card(const FieldCtx* F) {
  mpz_class q;
  mpz_class pp((unsigned long)F->p);
  mpz_pow_ui(q.get_mpz_t(), pp.get_mpz_t(), F->m);
  return q;
}

inline bool pis_irreducible(const FieldCtx* F, const PolyV& f) {
  int d = pdeg(f);
  if (d < 1) return false;
  if (d == 1) return true;
  mpz_class q = field_card(F);
  PolyV x{0, 1};
  std::vector<PolyV> xq(d + 1);
  xq[0] = x;
  for (int k = 1; k <= d; ++k) xq[k] = ppowmod(F, xq[k - 1], q, f);
  auto minus_x = [&](PolyV v) { return psub(F, v, x); };
  if (!minus_x(xq[d]).empty()) return false;
  for (u64 r : detail::small_prime_factors((u64)d))
    if (pdeg(pgcd(F, f, minus_x(xq[d / (int)r]))) != 0) return false;
  return true;
}

namespace detail {

inline u64 poly_seed(const FieldCtx* F, const PolyV& f) {
  u64 h = 0x243f6a8885a308d3ULL ^ F->q;
  for (u64 c : f) h = (h ^ c) * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL;
  return h;
}

// Equal-degree factorization: g squarefree monic, all factors of degree d.
inline void edf(const FieldCtx* F, const PolyV& g, int d, Rng& rng,
                std::vector<PolyV>& out) {
  if (pdeg(g) == d) {
    out.push_back(pmonic(F, g));
    return;
  }
  mpz_class q = field_card(F);
  mpz_class qd;
  mpz_pow_ui(qd.get_mpz_t(), q.get_mpz_t(), d);
  for (;;) {
    PolyV r(pdeg(g), 0);
    for (auto& c : r) c = rng.below(F->q);
    pnorm(r);
    if (pdeg(r) < 1) continue;
    PolyV t;
    if (F->p == 2) {
      // trace map over F_2: sum of r^{2^i}, i < m d.
      t = {};
      PolyV cur = pmod(F, r, g);
      for (int i = 0; i < F->m * d; ++i) {
        t = pmod(F, padd(F, t, cur), g);
        cur = ppowmod(F, cur, mpz_class(2), g);
      }
    } else {
      mpz_class e = (qd - 1) / 2;
      t = psub(F, ppowmod(F, r, e, g), pconst(1));
    }
    PolyV w = pgcd(F, t, g);
    if (pdeg(w) > 0 && pdeg(w) < pdeg(g)) {
      edf(F, w, d, rng, out);
      edf(F, pdiv_exact(F, g, w), d, rng, out);
      return;
    }
  }
}

// Distinct-degree then equal-degree split of squarefree monic s.
inline void ddf_edf(const FieldCtx* F, PolyV s, std::vector<PolyV>& out) {
  Rng rng(poly_seed(F, s));
  mpz_class q = field_card(F);
  PolyV h{0, 1};
  int d = 0;
  while (pdeg(s) > 0) {
    ++d;
    if (2 * d > pdeg(s)) {
      out.push_back(pmonic(F, s));
      return;
    }
    h = ppowmod(F, h, q, s);
    PolyV g = pgcd(F, psub(F, h, PolyV{0, 1}), s);
    if (pdeg(g) > 0) {
      edf(F, g, d, rng, out);
      s = pdiv_exact(F, s, g);
      h = pmod(F, h, s);
    }
  }
}

}  // namespace detail

// Monic irreducible factors with multiplicities; f != 0.
// Deterministic: internal randomness is seeded from f itself.
inline std::vector<std::pair<PolyV, int>> pfactor(const FieldCtx* F, PolyV f) {
  if (pis_zero(f)) throw std::domain_error("factor of zero");
  f = pmonic(F, f);
  std::vector<std::pair<PolyV, int>> res;
  int mult_scale = 1;
  while (pdeg(f) > 0) {
    PolyV fp = pderiv(F, f);
    if (pis_zero(fp)) {
      f = ppth_root(F, f);
      mult_scale *= (int)F->p;
      continue;
    }
    PolyV s = pdiv_exact(F, f, pgcd(F, f, fp));
    std::vector<PolyV> irr;
    detail::ddf_edf(F, s, irr);
    for (auto& u : irr) {
      int e = 0;
      for (;;) {
        auto [quo, rem] = pdivmod(F, f, u);
        if (!rem.empty()) break;
        f = quo;
        ++e;
      }
      res.emplace_back(u, e * mult_scale);
    }
  }
  std::sort(res.begin(), res.end());
  return res;
}

// Distinct roots of f in F, ascending by code.
inline std::vector<u64> proots(const FieldCtx* F, const PolyV& f) {
  std::vector<u64> roots;
  if (pis_zero(f)) throw std::domain_error("roots of zero");
  mpz_class q = field_card(F);
  PolyV xq = ppowmod(F, PolyV{0, 1}, q, f);
  PolyV g = pgcd(F, psub(F, xq, PolyV{0, 1}), f);
  if (pdeg(g) < 1) return roots;
  std::vector<PolyV> lin;
  Rng rng(detail::poly_seed(F, g));
  detail::edf(F, g, 1, rng, lin);
  for (auto& l : lin) roots.push_back(F->neg(l[0]));
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Least-root embedding of canonical F_{p^a} into canonical F_{p^{ak}},
// with the inverse linear map for reading subfield elements back.
struct Embed {
  const FieldCtx* sub = nullptr;
  const FieldCtx* sup = nullptr;
  std::vector<u64> rpow;              // root powers, size sub->m
  std::vector<std::vector<u64>> pre;  // (sub->m) x (sup->m) over F_p

  u64 apply(u64 code) const {
    if (sub == sup) return code;
    u64 r = 0;
    auto d = sub->dec(code);
    for (int i = 0; i < sub->m; ++i)
      if (d[i]) r = sup->add(r, sup->mul(d[i], rpow[i]));
    return r;
  }

  // Preimage if z lies in the embedded subfield.
  std::optional<u64> preimage(u64 z) const {
    if (sub == sup) return z;
    const u64 p = sub->p;
    auto zd = sup->dec(z);
    u64 code = 0;
    for (int j = sub->m; j-- > 0;) {
      u64 xj = 0;
      for (int i = 0; i < sup->m; ++i) xj = (xj + pre[j][i] * zd[i]) % p;
      code = code * p + xj;
    }
    if (apply(code) != z) return std::nullopt;
    return code;
  }
};

inline const Embed* embed_map(const FieldCtx* sub, const FieldCtx* sup) {
  static std::map<std::pair<const FieldCtx*, const FieldCtx*>, std::unique_ptr<Embed>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lk(mtx);
  auto key = std::make_pair(sub, sup);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.get();
  if (sub->p != sup->p || sup->m % sub->m != 0)
    throw std::invalid_argument("no embedding");
  auto e = std::make_unique<Embed>();
  e->sub = sub;
  e->sup = sup;
  if (sub != sup) {
    PolyV fm(sub->mod.begin(), sub->mod.end());  // digits < p are constants
    auto rts = proots(sup, fm);
    if (rts.empty()) throw std::logic_error("modulus has no root upstairs");
    u64 r0 = rts.front();
    int mf = sub->m, me = sup->m;
    e->rpow.resize(mf);
    e->rpow[0] = 1;
    for (int i = 1; i < mf; ++i) e->rpow[i] = sup->mul(e->rpow[i - 1], r0);
    // Left inverse of the digit matrix of rpow by Gaussian elimination
    // with an augmented identity.
    const u64 p = sub->p;
    std::vector<std::vector<u64>> M(me, std::vector<u64>(mf + me, 0));
    for (int j = 0; j < mf; ++j) {
      auto cd = sup->dec(e->rpow[j]);
      for (int i = 0; i < me; ++i) M[i][j] = cd[i];
    }
    for (int i = 0; i < me; ++i) M[i][mf + i] = 1;
    auto invp = [&](u64 x) {
      u64 rr = 1, b = x % p, e2 = p - 2;
      while (e2) {
        if (e2 & 1) rr = rr * b % p;
        b = b * b % p;
        e2 >>= 1;
      }
      return rr;
    };
    int row = 0;
    std::vector<int> pivot_row(mf, -1);
    for (int colj = 0; colj < mf && row < me; ++colj) {
      int pr = -1;
      for (int i = row; i < me; ++i)
        if (M[i][colj]) { pr = i; break; }
      if (pr < 0) throw std::logic_error("degenerate subfield basis");
      std::swap(M[pr], M[row]);
      u64 iv = invp(M[row][colj]);
      for (size_t jj = 0; jj < M[row].size(); ++jj) M[row][jj] = M[row][jj] * iv % p;
      for (int i = 0; i < me; ++i)
        if (i != row && M[i][colj]) {
          u64 c = M[i][colj];
          for (size_t jj = 0; jj < M[i].size(); ++jj)
            M[i][jj] = (M[i][jj] + (p - c) * M[row][jj]) % p;
        }
      pivot_row[colj] = row;
      ++row;
    }
    e->pre.assign(mf, std::vector<u64>(me, 0));
    for (int j = 0; j < mf; ++j)
      for (int i = 0; i < me; ++i) e->pre[j][i] = M[pivot_row[j]][mf + i];
  }
  auto* raw = e.get();
  cache.emplace(key, std::move(e));
  return raw;
}

// Canonical order on polynomials: integer code sum c_i q^i, i.e.
// degree first, then digits from the top coefficient down.
inline bool pcode_less(const PolyV& a, const PolyV& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

// All monic irreducibles of degree d over F, in canonical code order.
// Enumerated as Frobenius-orbit minimal polynomials inside F_{q^d}.
inline std::vector<PolyV> irreducibles_of_degree(const FieldCtx* F, int d) {
  std::vector<PolyV> out;
  if (d == 1) {
    out.reserve(F->q);
    for (u64 a = 0; a < F->q; ++a) out.push_back(a ? PolyV{F->neg(a), 1} : PolyV{0, 1});
    std::sort(out.begin(), out.end(), pcode_less);
    return out;
  }
  if (F->m * d > 40) throw std::invalid_argument("enumeration field too large");
  const FieldCtx* E = fq_make(F->p, F->m * d);
  const Embed* em = embed_map(F, E);
  auto frobq = [&](u64 z) {
    u64 r = z;
    for (int i = 0; i < F->m; ++i) r = E->frob(r);
    return r;
  };
  for (u64 z = 0; z < E->q; ++z) {
    u64 w = frobq(z);
    bool minimal = true;
    int len = 1;
    while (w != z) {
      if (w < z) { minimal = false; break; }
      w = frobq(w);
      ++len;
    }
    if (!minimal || len != d) continue;
    PolyV mp{1};
    u64 zz = z;
    for (int i = 0; i < d; ++i) {
      mp = pmul(E, mp, PolyV{E->neg(zz), 1});
      zz = frobq(zz);
    }
    PolyV down(mp.size());
    for (size_t i = 0; i < mp.size(); ++i) {
      auto c = em->preimage(mp[i]);
      if (!c) throw std::logic_error("orbit product not over subfield");
      down[i] = *c;
    }
    out.push_back(std::move(down));
  }
  std::sort(out.begin(), out.end(), pcode_less);
  return out;
}

// Number of monic irreducibles of degree d over F_q (Moebius count).
inline mpz_class count_irreducibles(u64 q, int d) {
  auto mobius = [](u64 n) -> int {
    int mu = 1;
    for (u64 dd = 2; dd * dd <= n; ++dd)
      if (n % dd == 0) {
        n /= dd;
        if (n % dd == 0) return 0;
        mu = -mu;
      }
    if (n > 1) mu = -mu;
    return mu;
  };
  mpz_class total = 0;
  for (int e = 1; e <= d; ++e) {
    if (d % e) continue;
    int mu = mobius((u64)(d / e));
    if (!mu) continue;
    mpz_class qe;
    mpz_class qq((unsigned long)q);
    mpz_pow_ui(qe.get_mpz_t(), qq.get_mpz_t(), e);
    total += mu * qe;
  }
  return total / d;
}

// Resultant of nonzero a, b by the Euclidean remainder sequence.
inline u64 presultant(const FieldCtx* F, PolyV a, PolyV b) {
  if (pis_zero(a) || pis_zero(b)) return 0;
  u64 res = 1;
  while (pdeg(b) > 0) {
    PolyV r = pmod(F, a, b);
    if (pis_zero(r)) return 0;
    int da = pdeg(a), db = pdeg(b), dr = pdeg(r);
    u64 sign = ((da & 1) && (db & 1)) ? F->neg(1) : 1;
    res = F->mul(res, F->mul(sign, F->pow(plc(b), (u64)(da - dr))));
    a = std::move(b);
    b = std::move(r);
  }
  if (pdeg(a) > 0 && b[0] == 0) return 0;
  res = F->mul(res, F->pow(b[0], (u64)pdeg(a)));
  return res;
}

}  // namespace eqtheta
