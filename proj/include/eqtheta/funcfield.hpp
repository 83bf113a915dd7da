// SPDX-License-Identifier: Apache-2.0
#pragma once

// Function-field arithmetic for abelian covers of P^1: elements as
// y-monomial combinations over F_r[t] with a common denominator, explicit
// Galois action, inversion through geometric norms, derivations, place
// fibers with deterministic root labels, exact valuations (Hensel series at
// unramified places, monomial orders at totally ramified ones), divisors,
// evaluation, and Riemann-Roch spaces with built-in dimension checks.

#include <map>

#include "eqtheta/curves.hpp"

namespace eqtheta {

// ---- truncated power series over a FieldCtx (little-endian in z) ----------

inline PolyV ptrunc(PolyV a, int n) {
  if ((int)a.size() > n) a.resize(n);
  pnorm(a);
  return a;
}

inline PolyV pmul_trunc(const FieldCtx* F, const PolyV& a, const PolyV& b, int n) {
  if (pis_zero(a) || pis_zero(b)) return {};
  PolyV r(std::min<int>(n, (int)a.size() + (int)b.size() - 1), 0);
  for (size_t i = 0; i < a.size() && (int)i < n; ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size() && (int)(i + j) < n; ++j)
      if (b[j]) r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
  }
  pnorm(r);
  return r;
}

// 1/a mod z^n; requires a(0) != 0.
inline PolyV pinv_series(const FieldCtx* F, const PolyV& a, int n) {
  if (pis_zero(a) || a[0] == 0) throw std::invalid_argument("series not a unit");
  PolyV r{F->inv(a[0])};
  for (int k = 1; k < n; k <<= 1) {
    int nn = std::min(n, 2 * k);
    // r <- r (2 - a r) mod z^nn
    PolyV two_m = pneg(F, pmul_trunc(F, a, r, nn));
    two_m = padd(F, two_m, PolyV{F->add(1, 1)});
    r = pmul_trunc(F, r, two_m, nn);
  }
  return ptrunc(r, n);
}

// a(series) mod z^n for a over F, series over F (Horner).
inline PolyV peval_series(const FieldCtx* F, const PolyV& a, const PolyV& series,
                          int n) {
  PolyV r;
  for (size_t i = a.size(); i-- > 0;) {
    r = pmul_trunc(F, r, series, n);
    if (a[i]) {
      if (r.empty()) r.resize(1, 0);
      r[0] = F->add(r[0], a[i]);
    }
    pnorm(r);
  }
  return r;
}

// ---- coordinates of F_sup over F_sub (basis 1, x, x^2, ...) ---------------

struct SubCoords {
  const FieldCtx* sub = nullptr;
  const FieldCtx* sup = nullptr;
  int d = 1;  // [sup : sub]
  std::vector<std::vector<u64>> fwd;  // F_p matrix: coords -> dec(sup elt)
  std::vector<std::vector<u64>> inv;  // dec(sup elt) -> stacked sub-dec coords

  // coordinates c_0..c_{d-1} in sub with z = sum c_i * x^i  (x = code p elt)
  std::vector<u64> coords(u64 z) const {
    int n = sup->m;
    std::vector<u64> zz = sup->dec(z), out((size_t)d, 0);
    std::vector<u64> flat(n, 0);
    for (int i = 0; i < n; ++i) {
      u64 acc = 0;
      for (int j = 0; j < n; ++j)
        acc = (acc + inv[i][j] * zz[j]) % sup->p;
      flat[i] = acc;
    }
    for (int i = 0; i < d; ++i) {
      std::vector<u64> digs(flat.begin() + i * sub->m,
                            flat.begin() + (i + 1) * sub->m);
      out[i] = sub->enc(digs);
    }
    return out;
  }
};

inline const SubCoords* sub_coords(const FieldCtx* sub, const FieldCtx* sup) {
  static std::map<std::pair<const FieldCtx*, const FieldCtx*>, SubCoords> cache;
  auto key = std::make_pair(sub, sup);
  auto it = cache.find(key);
  if (it != cache.end()) return &it->second;
  if (sup->m % sub->m != 0) throw std::invalid_argument("not a subfield pair");
  SubCoords sc;
  sc.sub = sub;
  sc.sup = sup;
  sc.d = sup->m / sub->m;
  int n = sup->m;
  const Embed* em = embed_map(sub, sup);
  // columns: emb(b_j) * x^i for sub basis b_j = sub codes p^0..p^{m_sub-1}
  std::vector<std::vector<u64>> M((size_t)n, std::vector<u64>((size_t)n, 0));
  u64 x = sup->m == 1 ? 1 : (u64)sup->p;  // generator of sup over prime field
  for (int i = 0; i < sc.d; ++i) {
    u64 xi = 1;
    for (int k = 0; k < i; ++k) xi = sup->mul(xi, x);
    for (int j = 0; j < sub->m; ++j) {
      u64 bj = 1;
      for (int k = 0; k < j; ++k) bj = sub->mul(bj, sub->m == 1 ? 1 : (u64)sub->p);
      u64 col = sup->mul(em->apply(bj), xi);
      auto digs = sup->dec(col);
      for (int r = 0; r < n; ++r) M[r][(size_t)(i * sub->m + j)] = digs[r];
    }
  }
  // invert M over F_p
  u64 p = sup->p;
  std::vector<std::vector<u64>> A = M, I((size_t)n, std::vector<u64>((size_t)n, 0));
  for (int i = 0; i < n; ++i) I[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (A[r][c]) { piv = r; break; }
    if (piv < 0) throw std::logic_error("subfield basis is singular");
    std::swap(A[c], A[piv]);
    std::swap(I[c], I[piv]);
    u64 ic = 1, base = A[c][c], e = p - 2;  // Fermat inverse mod p
    while (e) {
      if (e & 1) ic = ic * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (int j = 0; j < n; ++j) {
      A[c][j] = A[c][j] * ic % p;
      I[c][j] = I[c][j] * ic % p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || !A[r][c]) continue;
      u64 f = A[r][c];
      for (int j = 0; j < n; ++j) {
        A[r][j] = (A[r][j] + (p - f) * A[c][j]) % p;
        I[r][j] = (I[r][j] + (p - f) * I[c][j]) % p;
      }
    }
  }
  sc.fwd = std::move(M);
  sc.inv = std::move(I);
  auto [pos, ok] = cache.emplace(key, std::move(sc));
  return &pos->second;
}

// ---- function field context ------------------------------------------------

// Core data of one chart: constant field, y-layer exponents and right-hand
// sides, Kummer roots of unity.  `as` marks an Artin-Schreier single layer.
struct FFCore {
  const FieldCtx* Fr = nullptr;
  std::vector<long> ms;
  std::vector<PolyV> fs;
  std::vector<u64> zetas;  // unused entries 0 for the AS layer
  bool as = false;
  long dy = 1;
  std::vector<long> stride;

  void finish() {
    dy = 1;
    stride.assign(ms.size(), 1);
    for (size_t i = 0; i < ms.size(); ++i) {
      stride[i] = dy;
      dy *= ms[i];
    }
  }
  long idx(const std::vector<long>& alpha) const {
    long j = 0;
    for (size_t i = 0; i < ms.size(); ++i) j += stride[i] * alpha[i];
    return j;
  }
  std::vector<long> alpha(long j) const {
    std::vector<long> a(ms.size());
    for (size_t i = 0; i < ms.size(); ++i) {
      a[i] = (j / stride[i]) % ms[i];
    }
    return a;
  }
};

struct FFCtx {
  Cover cov;  // owned copy
  FFCore core;
  FFCore flip;              // chart s = 1/t, ytilde_i = y_i s^{kshift_i}
  std::vector<long> kshift;  // per Kummer layer
  long const_frob_exp = 0;   // constant generator acts as Frob_{p}^{const_frob_exp}
  long gK = 0;
};

// ---- elements --------------------------------------------------------------

struct FFElt {
  std::vector<PolyV> num;  // indexed by y-monomial
  PolyV den;               // nonzero
};

inline bool ff_is_zero(const FFElt& x) {
  for (auto& n : x.num)
    if (!pis_zero(n)) return false;
  return true;
}

inline FFElt ff_zero(const FFCore& C) { return FFElt{std::vector<PolyV>((size_t)C.dy), {1}}; }

inline FFElt ff_from_rat(const FFCore& C, const PolyV& n, const PolyV& d) {
  if (pis_zero(d)) throw std::invalid_argument("zero denominator");
  FFElt x = ff_zero(C);
  x.num[0] = n;
  x.den = d;
  return x;
}

inline FFElt ff_one(const FFCore& C) { return ff_from_rat(C, {1}, {1}); }
inline FFElt ff_t(const FFCore& C) { return ff_from_rat(C, {0, 1}, {1}); }

inline FFElt ff_y(const FFCore& C, size_t layer) {
  FFElt x = ff_zero(C);
  std::vector<long> a(C.ms.size(), 0);
  a[layer] = 1;
  x.num[(size_t)C.idx(a)] = {1};
  return x;
}

// divide out gcd of all numerators and the denominator; make den monic
inline void ff_norm(const FFCore& C, FFElt& x) {
  const FieldCtx* F = C.Fr;
  PolyV g = x.den;
  for (auto& n : x.num)
    if (!pis_zero(n)) g = pgcd(F, g, n);
  if (pdeg(g) > 0) {
    x.den = pdiv_exact(F, x.den, g);
    for (auto& n : x.num)
      if (!pis_zero(n)) n = pdiv_exact(F, n, g);
  }
  u64 lc = plc(x.den);
  if (lc != 1) {
    u64 il = F->inv(lc);
    x.den = pscale(F, il, x.den);
    for (auto& n : x.num) n = pscale(F, il, n);
  }
}

inline FFElt ff_add(const FFCore& C, const FFElt& a, const FFElt& b) {
  const FieldCtx* F = C.Fr;
  FFElt r;
  r.den = pmul(F, a.den, b.den);
  r.num.resize((size_t)C.dy);
  for (long j = 0; j < C.dy; ++j)
    r.num[j] = padd(F, pmul(F, a.num[j], b.den), pmul(F, b.num[j], a.den));
  ff_norm(C, r);
  return r;
}

inline FFElt ff_neg(const FFCore& C, const FFElt& a) {
  FFElt r = a;
  for (auto& n : r.num) n = pneg(C.Fr, n);
  return r;
}

inline FFElt ff_sub(const FFCore& C, const FFElt& a, const FFElt& b) {
  return ff_add(C, a, ff_neg(C, b));
}

// reduce y_i^{e} for e >= m_i via y^m = f (Kummer) or y^p = y + f (AS);
// multiply accumulates into a monomial map
inline void ff_mul_acc(const FFCore& C, std::vector<PolyV>& acc,
                       std::vector<long> alpha, PolyV coef) {
  const FieldCtx* F = C.Fr;
  if (pis_zero(coef)) return;
  for (size_t i = 0; i < C.ms.size(); ++i) {
    while (alpha[i] >= C.ms[i]) {
      alpha[i] -= C.ms[i];
      if (C.as) {
        // y^p = y + f: split into two monomials, recurse
        std::vector<long> a1 = alpha;
        a1[i] += 1;
        ff_mul_acc(C, acc, a1, coef);
        coef = pmul(F, coef, C.fs[i]);
      } else {
        coef = pmul(F, coef, C.fs[i]);
      }
    }
  }
  PolyV& slot = acc[(size_t)C.idx(alpha)];
  slot = padd(F, slot, coef);
}

inline FFElt ff_mul(const FFCore& C, const FFElt& a, const FFElt& b) {
  const FieldCtx* F = C.Fr;
  FFElt r = ff_zero(C);
  r.den = pmul(F, a.den, b.den);
  for (long i = 0; i < C.dy; ++i) {
    if (pis_zero(a.num[i])) continue;
    auto ai = C.alpha(i);
    for (long j = 0; j < C.dy; ++j) {
      if (pis_zero(b.num[j])) continue;
      auto aj = C.alpha(j);
      std::vector<long> s(ai.size());
      for (size_t k = 0; k < ai.size(); ++k) s[k] = ai[k] + aj[k];
      ff_mul_acc(C, r.num, s, pmul(F, a.num[i], b.num[j]));
    }
  }
  ff_norm(C, r);
  return r;
}

inline FFElt ff_scale_rat(const FFCore& C, const PolyV& n, const PolyV& d,
                          const FFElt& a) {
  const FieldCtx* F = C.Fr;
  FFElt r = a;
  for (auto& nn : r.num) nn = pmul(F, nn, n);
  r.den = pmul(F, r.den, d);
  ff_norm(C, r);
  return r;
}

inline bool ff_eq(const FFCore& C, const FFElt& a, const FFElt& b) {
  return ff_is_zero(ff_sub(C, a, b));
}

// ---- Galois action ---------------------------------------------------------

// g is a full group tuple of cov.G: Kummer components scale y_i by
// zeta_i^{a_i}; the AS component shifts y by a; the constant component acts
// coefficientwise by Frob_p^{const_frob_exp * a}.
inline FFElt ff_galois(const FFCtx& X, const std::vector<long>& g, const FFElt& x) {
  const FFCore& C = X.core;
  const FieldCtx* F = C.Fr;
  FFElt r = ff_zero(C);
  r.den = x.den;
  for (long j = 0; j < C.dy; ++j) {
    if (pis_zero(x.num[j])) continue;
    auto a = C.alpha(j);
    if (C.as) {
      // (y + c)^a0 expansion with c = g[as-index] in F_p
      long c = g[0] % C.ms[0];
      if (c == 0) {
        r.num[j] = padd(F, r.num[j], x.num[j]);
        continue;
      }
      // binomial expansion over the prime field
      long a0 = a[0];
      std::vector<mpz_class> binom(a0 + 1);
      binom[0] = 1;
      for (long i = 1; i <= a0; ++i)
        binom[i] = binom[i - 1] * (a0 - i + 1) / i;
      u64 cc = (u64)c % F->p;
      u64 cpow = 1;
      for (long i = a0; i >= 0; --i) {
        // coefficient binom(a0, i) * c^{a0-i} on y^i
        mpz_class bc = binom[i] % (unsigned long)F->p;
        u64 co = F->mul((u64)bc.get_ui() % F->p, cpow);
        if (co) {
          std::vector<long> ai{i};
          PolyV add = pscale(F, co, x.num[j]);
          PolyV& slot = r.num[(size_t)C.idx(ai)];
          slot = padd(F, slot, add);
        }
        cpow = F->mul(cpow, cc);
      }
      continue;
    }
    u64 sc = 1;
    for (size_t i = 0; i < C.ms.size(); ++i) {
      long ai = ((g[i] % C.ms[i]) + C.ms[i]) % C.ms[i];
      sc = F->mul(sc, F->pow(C.zetas[i], (u64)((ai * a[i]) % C.ms[i])));
    }
    r.num[j] = padd(F, r.num[j], pscale(F, sc, x.num[j]));
  }
  // constant factor: coefficientwise Frobenius
  long ncomp = (long)X.cov.G.rank();
  if (X.cov.nc > 1) {
    long a = ((g[(size_t)ncomp - 1] % X.cov.nc) + X.cov.nc) % X.cov.nc;
    if (a != 0) {
      long e = (X.const_frob_exp * a) % (long)F->m;
      auto frobk = [&](u64 z) {
        for (long i = 0; i < e; ++i) z = F->frob(z);
        return z;
      };
      for (auto& n : r.num)
        for (auto& cc : n) cc = frobk(cc);
      for (auto& cc : r.den) cc = frobk(cc);
    }
  }
  ff_norm(C, r);
  return r;
}

// product over all geometric group elements g != 0 of g(x); together with x
// it multiplies to the geometric norm, a rational function
inline FFElt ff_inv(const FFCtx& X, const FFElt& x) {
  if (ff_is_zero(x)) throw std::invalid_argument("inverse of zero");
  const FFCore& C = X.core;
  const FieldCtx* F = C.Fr;
  FFElt conj = ff_one(C);
  size_t ngeo = X.cov.n_geo_factors();
  std::vector<long> g(X.cov.G.rank(), 0);
  long geo_n = 1;
  for (size_t i = 0; i < ngeo; ++i) geo_n *= C.ms[i];
  for (long it = 1; it < geo_n; ++it) {
    // increment geometric counter
    for (size_t i = 0; i < ngeo; ++i) {
      if (++g[i] < C.ms[i]) break;
      g[i] = 0;
    }
    conj = ff_mul(C, conj, ff_galois(X, g, x));
  }
  FFElt normf = ff_mul(C, conj, x);
  for (long j = 1; j < C.dy; ++j)
    if (!pis_zero(normf.num[j]))
      throw std::logic_error("geometric norm is not rational");
  if (pis_zero(normf.num[0])) throw std::logic_error("zero norm");
  // 1/x = conj * den(norm)/num(norm)
  return ff_scale_rat(C, normf.den, normf.num[0], conj);
}

// d/dt with y' = f' y / (m f) per Kummer layer and y' = -f' for AS
inline FFElt ff_deriv(const FFCtx& X, const FFElt& x) {
  const FFCore& C = X.core;
  const FieldCtx* F = C.Fr;
  // quotient rule: (n/d)' = (n' d - n d') / d^2
  FFElt r = ff_zero(C);
  PolyV dd = pderiv(F, x.den);
  for (long j = 0; j < C.dy; ++j) {
    if (pis_zero(x.num[j])) continue;
    auto a = C.alpha(j);
    // monomial m_j = a_j(t) y^alpha: derivative of coefficient part
    PolyV c1 = psub(F, pmul(F, pderiv(F, x.num[j]), x.den),
                    pmul(F, x.num[j], dd));
    FFElt term = ff_zero(C);
    term.num[j] = c1;
    term.den = pmul(F, x.den, x.den);
    r = ff_add(C, r, term);
    // derivative of the y-part
    if (C.as) {
      long i = a[0];
      if (i > 0) {
        // i y^{i-1} y' = -i f' y^{i-1}
        u64 ii = (u64)(i % (long)F->p);
        if (ii) {
          FFElt t2 = ff_zero(C);
          std::vector<long> am{i - 1};
          t2.num[(size_t)C.idx(am)] =
              pneg(F, pscale(F, ii, pmul(F, pderiv(F, C.fs[0]), x.num[j])));
          t2.den = x.den;
          r = ff_add(C, r, t2);
        }
      }
    } else {
      for (size_t i = 0; i < C.ms.size(); ++i) {
        if (a[i] == 0) continue;
        // alpha_i * f_i'/(m_i f_i) * a_j y^alpha
        u64 co = (u64)((a[i]) % (long)F->p);
        long minv_l = 1;
        while ((minv_l * C.ms[i]) % (long)F->p != 1 % (long)F->p) ++minv_l;
        FFElt t2 = ff_zero(C);
        t2.num[j] = pscale(F, F->mul(co % F->p, (u64)(minv_l % (long)F->p)),
                           pmul(F, pderiv(F, C.fs[i]), x.num[j]));
        t2.den = pmul(F, x.den, C.fs[i]);
        if (!pis_zero(t2.num[j])) r = ff_add(C, r, t2);
      }
    }
  }
  ff_norm(C, r);
  return r;
}

// ---- context construction --------------------------------------------------

inline FFCtx make_ff(const Cover& c) {
  if (c.nc > 1 && std::gcd(c.nc, c.level) != 1)
    throw std::invalid_argument("function field needs a connected curve");
  FFCtx X;
  X.cov = c;
  X.gK = c.gK;
  FFCore& C = X.core;
  C.Fr = c.nc == 1 ? c.F : fq_make(c.F->p, c.F->m * (int)c.nc);
  C.as = c.has_as;
  if (c.has_as) {
    C.ms = {c.p()};
    C.fs = {detail::embed_poly(c.F, C.Fr, c.as_f)};
    C.zetas = {0};
  } else {
    for (auto& L : c.kummer) {
      C.ms.push_back(L.m);
      C.fs.push_back(detail::embed_poly(c.F, C.Fr, L.f));
      C.zetas.push_back(c.nc == 1 ? L.zeta : embed_map(c.F, C.Fr)->apply(L.zeta));
    }
    if (C.ms.empty()) {
      C.ms = {1};
      C.fs = {{1}};
      C.zetas = {1};
    }
  }
  C.finish();
  // constant generator = Frob_{q0} extended to Fr fixing the level part:
  // exponent j * m0 on prime-field Frobenii with j = CRT(1 mod nc, 0 mod level)
  if (c.nc > 1) {
    long j = 0;
    for (j = 0; j < c.nc * c.level; ++j)
      if (j % c.nc == 1 % c.nc && j % c.level == 0) break;
    X.const_frob_exp = (long)c.F0->m * j;
  }
  // flipped chart: s = 1/t, ytilde_i = y_i s^{k_i}, k_i = ceil(deg f_i / m_i)
  FFCore& D = X.flip;
  D.Fr = C.Fr;
  D.as = C.as;
  D.ms = C.ms;
  D.zetas = C.zetas;
  X.kshift.assign(C.ms.size(), 0);
  for (size_t i = 0; i < C.ms.size(); ++i) {
    if (C.as) {
      D.fs.push_back(C.fs[i]);  // flipped chart unused for AS
      continue;
    }
    if (C.ms[i] == 1) {
      X.kshift[i] = 0;
      D.fs.push_back({1});
      continue;
    }
    int df = pdeg(C.fs[i]);
    long k = (df + C.ms[i] - 1) / C.ms[i];
    X.kshift[i] = k;
    PolyV rev(C.fs[i].rbegin(), C.fs[i].rend());
    pnorm(rev);
    D.fs.push_back(pshift(rev, (int)(k * C.ms[i] - df)));
  }
  D.finish();
  return X;
}

// ---- places of K -----------------------------------------------------------

// A closed point of the cover above a base place of F_r(t).  Unramified
// places carry a Frobenius-orbit of root tuples; the stored tuple is the
// lexicographically least orbit representative (deterministic label).
struct KPlace {
  Place vr;          // base place of F_r(t)
  int idx = 0;       // position among the places above vr
  bool ram = false;
  int ram_layer = -1;
  long e = 1;
  long ram_a = 0;    // ord of the chart rhs at vr (ramified layer)
  long forb = 1;     // residual degree over vr
  const FieldCtx* Fs = nullptr;  // residue field of vr
  const FieldCtx* Fw = nullptr;  // residue field of the place
  u64 theta = 0;                 // canonical root of vr.pol in Fs (0 at inf)
  std::vector<u64> eta;          // per-layer root values in Fw (ram slot 0)

  long deg_r() const { return vr.deg * forb; }
};

struct KRef {
  Place vr;
  int idx = 0;
  bool operator==(const KRef& o) const { return vr == o.vr && idx == o.idx; }
};

inline bool kref_less(const KRef& a, const KRef& b) {
  if (!(a.vr == b.vr)) return place_less(a.vr, b.vr);
  return a.idx < b.idx;
}

using KDiv = std::vector<std::pair<KRef, long>>;

namespace detail {

// multiplicative order bound: least j >= 1 with c^{(s^j-1)/m} = 1 in Fs
inline long kummer_split_order(const FieldCtx* Fs, u64 c, long m) {
  mpz_class s((unsigned long)Fs->q);
  for (long j = 1; j <= m; ++j) {
    mpz_class e;
    mpz_pow_ui(e.get_mpz_t(), s.get_mpz_t(), (unsigned long)j);
    e = (e - 1) / m;
    mpz_class red = e % (unsigned long)(Fs->q - 1);
    if (Fs->pow(c, red.get_ui()) == 1) return j;
  }
  throw std::logic_error("no Kummer splitting order");
}

inline u64 frob_iter(const FieldCtx* E, u64 z, long k) {
  for (long i = 0; i < k; ++i) z = E->frob(z);
  return z;
}

}  // namespace detail

// All places of the cover above a base place vr of F_r(t), in canonical
// order.  For vr = infinity the Kummer chart is flipped (s = 1/t).
inline std::vector<KPlace> ff_fiber_raw(const FFCtx& X, const Place& vr) {
  const bool use_flip = vr.inf && !X.core.as;
  const FFCore& C = use_flip ? X.flip : X.core;
  const FieldCtx* Fr = C.Fr;

  // Artin-Schreier infinity: one totally ramified place.
  if (vr.inf && X.core.as) {
    KPlace w;
    w.vr = vr;
    w.ram = true;
    w.ram_layer = 0;
    w.e = X.core.ms[0];
    w.ram_a = pdeg(X.core.fs[0]);
    w.Fs = Fr;
    w.Fw = Fr;
    w.eta.assign(X.core.ms.size(), 0);
    return {w};
  }

  PolyV P = vr.inf ? PolyV{0, 1} : vr.pol;
  long d = vr.inf ? 1 : vr.deg;
  const FieldCtx* Fs = d == 1 ? Fr : fq_make(Fr->p, Fr->m * (int)d);
  u64 theta = 0;
  if (!vr.inf) {
    PolyV Pe = detail::embed_poly(Fr, Fs, P);
    auto rts = proots(Fs, Pe);
    if ((long)rts.size() != d && d != 1)
      throw std::logic_error("place polynomial does not split in residue field");
    theta = rts.empty() ? 0 : rts[0];
  }

  // per-layer data at theta
  size_t nl = C.ms.size();
  int ram_layer = -1;
  long ram_a = 0, e = 1;
  std::vector<u64> cval(nl, 0);
  std::vector<long> order(nl, 1);
  for (size_t i = 0; i < nl; ++i) {
    if (C.ms[i] == 1) {
      cval[i] = 1;
      continue;
    }
    long a = 0;
    PolyV g = C.fs[i];
    for (;;) {
      auto [q, r] = pdivmod(Fr, g, P);
      if (!pis_zero(r)) break;
      ++a;
      g = q;
    }
    if (!C.as && a % C.ms[i] != 0) {
      ram_layer = (int)i;
      ram_a = a;
      e = C.ms[i];
      continue;
    }
    PolyV ge = detail::embed_poly(Fr, Fs, g);
    u64 val = peval(Fs, ge, theta);
    if (C.as) {
      // finite places are unramified for a polynomial rhs; a = 0 here
      cval[i] = val;
      u64 tr = Fs->trace_abs(val);
      order[i] = tr == 0 ? 1 : (long)Fs->p;
    } else {
      if (val == 0) throw std::logic_error("unit part vanishes");
      cval[i] = val;
      order[i] = detail::kummer_split_order(Fs, val, C.ms[i]);
    }
  }

  long lcm = 1;
  for (size_t i = 0; i < nl; ++i)
    if ((int)i != ram_layer) lcm = std::lcm(lcm, order[i]);
  const FieldCtx* E = (lcm == 1) ? Fs : fq_make(Fs->p, Fs->m * (int)lcm);
  const Embed* emSE = (E == Fs) ? nullptr : embed_map(Fs, E);
  auto lift = [&](u64 z) { return emSE ? emSE->apply(z) : z; };

  // per-layer root lists in E
  std::vector<std::vector<u64>> roots(nl);
  for (size_t i = 0; i < nl; ++i) {
    if ((int)i == ram_layer) {
      roots[i] = {0};
      continue;
    }
    if (C.ms[i] == 1) {
      roots[i] = {lift(cval[i])};
      continue;
    }
    PolyV poly;
    if (C.as) {
      // Y^p - Y - c
      poly.assign((size_t)C.ms[i] + 1, 0);
      poly[0] = E->neg(lift(cval[i]));
      poly[1] = E->neg(1);
      poly[(size_t)C.ms[i]] = 1;
      if (poly[0] == 0 && false) {}
      pnorm(poly);
      if (pis_zero(poly)) throw std::logic_error("bad AS fiber polynomial");
    } else {
      poly.assign((size_t)C.ms[i] + 1, 0);
      poly[0] = E->neg(lift(cval[i]));
      poly[(size_t)C.ms[i]] = 1;
    }
    roots[i] = proots(E, poly);
    if ((long)roots[i].size() != C.ms[i])
      throw std::logic_error("fiber polynomial does not split");
  }

  // tuples and Frobenius_s orbits
  long ntup = 1;
  for (auto& r : roots) ntup *= (long)r.size();
  auto frob_s = [&](std::vector<u64> t) {
    for (auto& z : t) z = detail::frob_iter(E, z, Fs->m);
    return t;
  };
  std::vector<std::vector<u64>> reps;
  std::vector<long> replen;
  std::vector<bool> seen;
  std::map<std::vector<u64>, int> id;
  std::vector<std::vector<u64>> all;
  for (long c = 0; c < ntup; ++c) {
    std::vector<u64> t(nl);
    long cc = c;
    for (size_t i = 0; i < nl; ++i) {
      t[i] = roots[i][(size_t)(cc % (long)roots[i].size())];
      cc /= (long)roots[i].size();
    }
    all.push_back(t);
    id[t] = (int)c;
  }
  std::vector<bool> used((size_t)ntup, false);
  for (long c = 0; c < ntup; ++c) {
    if (used[(size_t)c]) continue;
    std::vector<u64> t = all[(size_t)c], best = t;
    long len = 0;
    std::vector<u64> cur = t;
    do {
      used[(size_t)id.at(cur)] = true;
      if (cur < best) best = cur;
      cur = frob_s(cur);
      ++len;
    } while (cur != t);
    reps.push_back(best);
    replen.push_back(len);
  }
  // canonical order: by orbit representative
  std::vector<size_t> perm(reps.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](size_t a, size_t b) { return reps[a] < reps[b]; });

  std::vector<KPlace> out;
  for (size_t pi = 0; pi < perm.size(); ++pi) {
    size_t oi = perm[pi];
    KPlace w;
    w.vr = vr;
    w.idx = (int)pi;
    w.ram = ram_layer >= 0;
    w.ram_layer = ram_layer;
    w.e = w.ram ? e : 1;
    w.ram_a = ram_a;
    w.forb = replen[oi];
    w.Fs = Fs;
    w.theta = theta;
    w.Fw = (w.forb == (long)(E->m / Fs->m)) ? E
           : (w.forb == 1 ? Fs : fq_make(Fs->p, Fs->m * (int)w.forb));
    w.eta.assign(nl, 0);
    const Embed* emWE = (w.Fw == E) ? nullptr : embed_map(w.Fw, E);
    for (size_t i = 0; i < nl; ++i) {
      if ((int)i == ram_layer) continue;
      if (!emWE) {
        w.eta[i] = reps[oi][i];
      } else {
        auto pre = emWE->preimage(reps[oi][i]);
        if (!pre) throw std::logic_error("root outside residue field");
        w.eta[i] = *pre;
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

// ---- series expansions at a place ------------------------------------------

struct WSeries {
  const FieldCtx* Fw = nullptr;
  int prec = 0;
  PolyV T;                 // chart coordinate (t or s) as series in z
  std::vector<PolyV> H;    // per-layer root series (ram slot empty)
};

inline WSeries build_wseries(const FFCtx& X, const KPlace& w, int prec) {
  const bool use_flip = w.vr.inf && !X.core.as;
  const FFCore& C = use_flip ? X.flip : X.core;
  const FieldCtx* Fw = w.Fw;
  WSeries S;
  S.Fw = Fw;
  S.prec = prec;
  const Embed* emSW = (w.Fs == Fw) ? nullptr : embed_map(w.Fs, Fw);
  auto liftS = [&](u64 z) { return emSW ? emSW->apply(z) : z; };
  if (w.vr.inf) {
    S.T = PolyV{0, 1};  // z = s exactly
  } else {
    PolyV P = detail::embed_poly(C.Fr, Fw, w.vr.pol);
    PolyV dP = pderiv(Fw, P);
    PolyV T{liftS(w.theta)};
    int cur = 1;
    while (cur < prec) {
      cur = std::min(prec, 2 * cur);
      // T <- T - (P(T) - z) / P'(T) mod z^cur
      PolyV val = peval_series(Fw, P, T, cur);
      if (val.empty()) val.resize(2, 0);
      if (val.size() < 2) val.resize(2, 0);
      val[1] = Fw->sub(val[1], 1);  // P(T) - z
      pnorm(val);
      PolyV dval = peval_series(Fw, dP, T, cur);
      PolyV corr = pmul_trunc(Fw, val, pinv_series(Fw, dval, cur), cur);
      T = ptrunc(psub(Fw, T, corr), cur);
    }
    S.T = T;
  }
  S.H.resize(C.ms.size());
  for (size_t i = 0; i < C.ms.size(); ++i) {
    if ((int)i == w.ram_layer) continue;
    PolyV fse = peval_series(Fw, detail::embed_poly(C.Fr, Fw, C.fs[i]), S.T, prec);
    if (C.ms[i] == 1) {
      S.H[i] = fse;
      continue;
    }
    PolyV h{w.eta[i]};
    long m = C.ms[i];
    int cur = 1;
    while (cur < prec) {
      cur = std::min(prec, 2 * cur);
      PolyV fcur = ptrunc(fse, cur);
      if (C.as) {
        // h <- h + (h^p - h - f); error contracts z-adically
        for (int rep = 0; rep < 2; ++rep) {
          PolyV hp = h;
          for (long k = 1; k < m; ++k) hp = pmul_trunc(Fw, hp, h, cur);
          PolyV err = psub(Fw, psub(Fw, hp, h), fcur);
          h = ptrunc(padd(Fw, h, err), cur);
        }
      } else {
        PolyV hm1 = {1};
        for (long k = 1; k < m; ++k) hm1 = pmul_trunc(Fw, hm1, h, cur);
        PolyV hm = pmul_trunc(Fw, hm1, h, cur);
        PolyV err = psub(Fw, hm, fcur);
        PolyV den = pscale(Fw, (u64)((long)m % (long)Fw->p), hm1);
        PolyV corr = pmul_trunc(Fw, err, pinv_series(Fw, den, cur), cur);
        h = ptrunc(psub(Fw, h, corr), cur);
      }
    }
    // verify to full precision
    PolyV hp = {1};
    for (long k = 0; k < m; ++k) hp = pmul_trunc(Fw, hp, h, prec);
    PolyV target = fse;
    if (C.as) target = padd(Fw, target, h);
    if (!ff_series_eq(hp, target, prec))
      throw std::logic_error("root series fails its equation");
    S.H[i] = h;
  }
  return S;
}

// transport an element into the flipped chart: t = 1/s, y_i = ytilde_i s^{-k_i}
inline FFElt ff_flip(const FFCtx& X, const FFElt& x) {
  const FFCore& C = X.core;
  const FFCore& D = X.flip;
  const FieldCtx* F = C.Fr;
  long M = 0;
  for (long j = 0; j < C.dy; ++j) {
    if (pis_zero(x.num[j])) continue;
    auto a = C.alpha(j);
    long ksum = 0;
    for (size_t i = 0; i < a.size(); ++i) ksum += a[i] * X.kshift[i];
    M = std::max(M, (long)pdeg(x.num[j]) + ksum);
  }
  M = std::max(M, (long)pdeg(x.den));
  FFElt r = ff_zero(D);
  for (long j = 0; j < C.dy; ++j) {
    if (pis_zero(x.num[j])) continue;
    auto a = C.alpha(j);
    long ksum = 0;
    for (size_t i = 0; i < a.size(); ++i) ksum += a[i] * X.kshift[i];
    PolyV rev(x.num[j].rbegin(), x.num[j].rend());
    pnorm(rev);
    r.num[j] = pshift(rev, (int)(M - pdeg(x.num[j]) - ksum));
  }
  PolyV revd(x.den.rbegin(), x.den.rend());
  pnorm(revd);
  r.den = pshift(revd, (int)(M - pdeg(x.den)));
  ff_norm(D, r);
  return r;
}

}  // namespace eqtheta
