// SPDX-License-Identifier: Apache-2.0
#pragma once

// Places of k = F_q(t), abelian covers of P^1 (Kummer layers y^m = f with
// m | q-1, one Artin-Schreier layer y^p - y = f, constant-field layers),
// decomposition data with deterministic labels, genus formulas, and the
// zeta-numerator oracle from place counts.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "eqtheta/fqpoly.hpp"
#include "eqtheta/grpring.hpp"

namespace eqtheta {

// ---- places of the base -------------------------------------------------

struct Place {
  bool inf = false;
  PolyV pol;  // monic irreducible, empty when inf
  long deg = 1;

  static Place infinity() { return Place{true, {}, 1}; }
  static Place finite(const PolyV& p) { return Place{false, p, pdeg(p)}; }

  bool operator==(const Place& o) const { return inf == o.inf && pol == o.pol; }
};

// Deterministic order: by degree, infinity first, then code order.
inline bool place_less(const Place& a, const Place& b) {
  if (a.deg != b.deg) return a.deg < b.deg;
  if (a.inf != b.inf) return a.inf;
  return pcode_less(a.pol, b.pol);
}

// All places of degree <= maxdeg in canonical order.
inline std::vector<Place> all_places(const FieldCtx* F, int maxdeg) {
  std::vector<Place> out;
  out.push_back(Place::infinity());
  for (int d = 1; d <= maxdeg; ++d)
    for (auto& p : irreducibles_of_degree(F, d)) out.push_back(Place::finite(p));
  std::stable_sort(out.begin(), out.end(), place_less);
  return out;
}

// ord_v of a nonzero polynomial at a finite place; at infinity ord = -deg.
inline long poly_ord_at(const FieldCtx* F, const PolyV& f, const Place& v) {
  if (pis_zero(f)) throw std::invalid_argument("ord of zero");
  if (v.inf) return -(long)pdeg(f);
  long ord = 0;
  PolyV g = f;
  for (;;) {
    auto [q, r] = pdivmod(F, g, v.pol);
    if (!pis_zero(r)) break;
    ++ord;
    g = q;
  }
  return ord;
}

// ---- covers --------------------------------------------------------------

struct KLayer {
  long m = 1;  // y^m = f
  PolyV f;
  u64 zeta = 0;  // chosen primitive m-th root of unity in the working field
};

struct Cover {
  const FieldCtx* F0 = nullptr;  // configured base field F_q
  const FieldCtx* F = nullptr;   // working base field F_{q^level}
  long level = 1;

  std::vector<KLayer> kummer;  // tame layers (group factors in order)
  bool has_as = false;
  PolyV as_f;      // normalized: deg coprime to p
  PolyV as_f_raw;  // as configured, over the working field
  long nc = 1;     // constant-field Galois layer C_nc (last group factor)

  AbGroup G;               // factor order: kummer..., artin-schreier, constant
  long gK = 0;             // genus of K over its constant field
  long gammaK = -1;        // p-rank when determined by formula, else -1
  long r_exp = 1;          // [constant field of K : working base]
  long H_index = 1;        // [G:H] = components of X x Fqbar
  std::vector<Place> ram;  // ramified base places, canonical order

  long p() const { return (long)F->p; }
  u64 qwork() const { return F->q; }
  long geo_order() const {
    long o = 1;
    for (auto& L : kummer) o *= L.m;
    if (has_as) o *= p();
    return o;
  }
  size_t n_geo_factors() const { return kummer.size() + (has_as ? 1 : 0); }
};

// Decomposition data of a base place in the cover.
struct SplitData {
  Place v;
  long e = 1, f = 1, g = 1;
  bool ramified = false;
  int ram_layer = -1;      // group-factor index of the inertia layer
  std::vector<long> frob;  // Frobenius tuple; inertia component 0 if ramified
};

namespace detail {

// Embed coefficients of f (over sub) into sup.
inline PolyV embed_poly(const FieldCtx* sub, const FieldCtx* sup, const PolyV& f) {
  if (sub == sup) return f;
  const Embed* E = embed_map(sub, sup);
  PolyV r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = E->apply(f[i]);
  return r;
}

// Unit part of f at a finite place: f / pol^{ord}.
inline PolyV unit_part(const FieldCtx* F, PolyV f, const Place& v, long ord) {
  for (long i = 0; i < ord; ++i) f = pdiv_exact(F, f, v.pol);
  return f;
}

// (f mod pi) is an element of the residue field F_{q^d}; its (q^d-1)/m-th
// power lies in mu_m subset F_q*.  Return a with zeta^a = that constant.
// Independent of any root choice: values in F_q are Frobenius-fixed.
inline long kummer_symbol(const FieldCtx* F, const PolyV& f, const Place& v,
                          long m, u64 zeta) {
  PolyV s;
  if (v.inf) {
    u64 c = plc(f);  // unit part f/t^{deg f} has value lc(f) at infinity
    s = {F->pow(c, (F->q - 1) / (u64)m)};
  } else {
    PolyV z = pmod(F, f, v.pol);
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), F->q, (unsigned long)v.deg);
    e = (e - 1) / m;
    s = ppowmod(F, z, e, v.pol);
  }
  if (pdeg(s) != 0) throw std::logic_error("kummer symbol is not a constant");
  for (long a = 0; a < m; ++a)
    if (F->pow(zeta, (u64)a) == s[0]) return a;
  throw std::logic_error("kummer symbol outside mu_m");
}

// Absolute trace to F_p of (f mod pi) in the residue field F_{q^d}.
inline long as_symbol(const FieldCtx* F, const PolyV& f, const Place& v) {
  PolyV z = pmod(F, f, v.pol);
  PolyV acc = z, cur = z;
  for (long i = 1; i < v.deg; ++i) {
    cur = ppowmod(F, cur, mpz_class((unsigned long)F->q), v.pol);
    acc = padd(F, acc, cur);
  }
  if (pdeg(acc) > 0) throw std::logic_error("relative trace not in F_q");
  return (long)F->trace_abs(acc.empty() ? 0 : acc[0]);
}

}  // namespace detail

// Splitting data with deterministic Frobenius labels.
inline SplitData splitting(const Cover& c, const Place& v) {
  const FieldCtx* F = c.F;
  SplitData sd;
  sd.v = v;
  sd.frob.assign(c.G.rank(), 0);
  long e = 1;
  size_t gi = 0;
  for (auto& L : c.kummer) {
    long ov = poly_ord_at(F, L.f, v);
    long red = ((ov % L.m) + L.m) % L.m;
    if (red != 0) {
      if (std::gcd(red, L.m) != 1)
        throw std::domain_error("partially ramified Kummer place");
      if (sd.ramified) throw std::domain_error("two layers ramify at one place");
      sd.ramified = true;
      sd.ram_layer = (int)gi;
      e = L.m;
    } else {
      PolyV u = v.inf ? L.f : detail::unit_part(F, L.f, v, ov);
      sd.frob[gi] = detail::kummer_symbol(F, u, v, L.m, L.zeta);
    }
    ++gi;
  }
  if (c.has_as) {
    if (v.inf) {
      if (sd.ramified) throw std::domain_error("two layers ramify at one place");
      sd.ramified = true;
      sd.ram_layer = (int)gi;
      e = c.p();
    } else {
      sd.frob[gi] = detail::as_symbol(F, c.as_f, v);
    }
    ++gi;
  }
  if (c.nc > 1) {
    sd.frob[gi] = ((v.deg * c.level) % c.nc + c.nc) % c.nc;
    ++gi;
  }
  sd.e = e;
  sd.f = c.G.elt_order(sd.frob);
  if (c.G.order() % (sd.e * sd.f) != 0)
    throw std::logic_error("e f does not divide |G|");
  sd.g = c.G.order() / (sd.e * sd.f);
  return sd;
}

// ---- construction --------------------------------------------------------

namespace detail {

// Subtract h^p - h until deg f is coprime to p or f is constant.
inline PolyV as_normalize(const FieldCtx* F, PolyV f) {
  long p = (long)F->p;
  for (;;) {
    int d = pdeg(f);
    if (d <= 0 || d % p != 0) return f;
    u64 c = F->pth_root(plc(f));
    PolyV h = pshift(PolyV{c}, d / (int)p);
    PolyV hp = h;
    for (long i = 1; i < p; ++i) hp = pmul(F, hp, h);
    f = padd(F, psub(F, f, hp), h);
  }
}

}  // namespace detail

// Build a cover over F0 at constant-extension level `level`.
// kummer_in: (m, f over F0) layers; asf over F0 (empty = none); nc >= 1.
// Validation enforces: m | q-1; each Kummer layer totally ramified somewhere
// (irreducibility and geometric connectedness); ramification loci of distinct
// geometric layers disjoint; Artin-Schreier rhs nonconstant after reduction.
inline Cover make_cover(const FieldCtx* F0,
                        const std::vector<std::pair<long, PolyV>>& kummer_in,
                        const PolyV& asf, long nc, long level = 1) {
  Cover c;
  c.F0 = F0;
  c.level = level;
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  if (nc < 1) throw std::invalid_argument("constant layer must have n >= 1");
  const FieldCtx* F = level == 1 ? F0 : fq_make(F0->p, F0->m * (int)level);
  c.F = F;
  c.nc = nc;

  std::vector<long> ns;
  for (auto& [m, f0] : kummer_in) {
    if (m < 2) throw std::invalid_argument("Kummer exponent must be >= 2");
    if (((long)F0->q - 1) % m != 0)
      throw std::invalid_argument("Kummer exponent must divide q - 1");
    if (pis_zero(f0)) throw std::invalid_argument("Kummer rhs is zero");
    KLayer L;
    L.m = m;
    L.f = detail::embed_poly(F0, F, f0);
    // zeta fixed over F0 and embedded, so labels persist across levels
    u64 z0 = F0->pow(F0->gen, (F0->q - 1) / (u64)m);
    L.zeta = level == 1 ? z0 : embed_map(F0, F)->apply(z0);
    c.kummer.push_back(L);
    ns.push_back(m);
  }
  if (!pis_zero(asf)) {
    c.has_as = true;
    c.as_f_raw = detail::embed_poly(F0, F, asf);
    c.as_f = detail::as_normalize(F, c.as_f_raw);
    if (pdeg(c.as_f) <= 0)
      throw std::invalid_argument(
          "Artin-Schreier rhs degenerates to a constant after reduction");
    ns.push_back((long)F->p);
  }
  if (nc > 1) ns.push_back(nc);
  if (ns.empty()) ns.push_back(1);
  c.G.ns = ns;

  // ramified loci per geometric layer
  std::vector<std::vector<Place>> lram(c.n_geo_factors());
  size_t li = 0;
  for (auto& L : c.kummer) {
    bool total = false;
    for (auto& [pp, mult] : pfactor(F, L.f)) {
      long red = ((long)mult % L.m + L.m) % L.m;
      if (red == 0) continue;
      if (std::gcd(red, L.m) != 1)
        throw std::invalid_argument("Kummer place with partial ramification");
      lram[li].push_back(Place::finite(pp));
      total = true;
    }
    long dinf = (long)pdeg(L.f) % L.m;
    if (dinf != 0) {
      if (std::gcd(dinf, L.m) != 1)
        throw std::invalid_argument("Kummer place with partial ramification");
      lram[li].push_back(Place::infinity());
      total = true;
    }
    if (!total)
      throw std::invalid_argument(
          "Kummer layer needs a totally ramified place (connectedness)");
    ++li;
  }
  if (c.has_as) lram[li].push_back(Place::infinity());
  for (size_t i = 0; i < lram.size(); ++i)
    for (size_t j = i + 1; j < lram.size(); ++j)
      for (auto& a : lram[i])
        for (auto& b : lram[j])
          if (a == b)
            throw std::invalid_argument("geometric layers share a ramified place");
  for (auto& lr : lram)
    for (auto& v : lr) c.ram.push_back(v);
  std::sort(c.ram.begin(), c.ram.end(), place_less);

  // genus over the constant field of K
  long Gg = c.geo_order();
  if (c.has_as) {
    long pp = c.p();
    long cinf = pdeg(c.as_f);  // conductor exponent at the unique pole
    long two_g = pp * (-2) + (pp - 1) * (cinf + 1) + 2;
    if (two_g % 2 != 0 || two_g < 0) throw std::logic_error("bad AS genus");
    c.gK = two_g / 2;
    // Deuring-Shafarevich: one geometric point above the pole at infinity
    c.gammaK = pp * (0 - 1) + (pp - 1) + 1;
  } else {
    long two_g = Gg * (-2) + 2;
    for (auto& v : c.ram) {
      SplitData sd = splitting(c, v);
      two_g += v.deg * (Gg - Gg / sd.e);
    }
    if (two_g % 2 != 0) throw std::logic_error("bad genus parity");
    c.gK = std::max(0L, two_g / 2);
    if (c.gK == 0) c.gammaK = 0;
  }
  c.r_exp = nc;
  c.H_index = nc;
  return c;
}

// Same cover at constant-extension level n of the base (Galois group
// unchanged; the Gamma-level is recorded in `level`).
inline Cover constant_field_level(const Cover& c, long n) {
  if (c.level != 1)
    throw std::invalid_argument("level extension must start from level 1");
  std::vector<std::pair<long, PolyV>> kin;
  for (auto& L : c.kummer) kin.push_back({L.m, L.f});
  PolyV asf = c.has_as ? c.as_f_raw : PolyV{};
  return make_cover(c.F0, kin, asf, c.nc, n);
}

// ---- zeta numerator oracle -----------------------------------------------

// Counts places of K through splitting data and recovers the numerator
// P(u) of Z_K(u) = P(u) / ((1-u)(1-Ru)) over the constant field F_R of K.
// Verifies deg P = 2 g_K, functional-equation symmetry, and `extra` point
// counts beyond 2g.  P is little-endian with P(0) = 1.
struct ZetaData {
  std::vector<mpz_class> P;
  mpz_class R;               // size of the constant field of K
  mpz_class h;               // P(1), the divisor class number
  std::vector<mpz_class> N;  // point counts over F_{R^j}, j = 1, 2, ...
};

inline ZetaData zeta_numerator(const Cover& c, long extra = 2) {
  if (std::gcd(c.nc, c.level) != 1)
    throw std::runtime_error("zeta oracle needs a connected curve");
  long g = c.gK;
  long nstar = c.r_exp;
  long jmax = 2 * g + extra;
  ZetaData zd;
  mpz_class qw((unsigned long)c.qwork());
  mpz_pow_ui(zd.R.get_mpz_t(), qw.get_mpz_t(), (unsigned long)nstar);
  long need = jmax * nstar;  // base degree bound: d_v <= d_v f_w = nstar * j
  double npl = std::pow((double)c.qwork(), (double)need);
  if (need > 12 || npl > 5e8)
    throw std::runtime_error("zeta oracle budget exceeded");
  std::vector<mpz_class> Nj(jmax + 1, 0);
  for (auto& v : all_places(c.F, (int)need)) {
    SplitData sd = splitting(c, v);
    long dq = v.deg * sd.f;  // degree over the working base of places above v
    if (dq % nstar != 0) throw std::logic_error("degree not divisible by r_exp");
    long dr = dq / nstar;
    for (long j = dr; j <= jmax; j += dr) Nj[j] += mpz_class(sd.g) * dr;
  }
  zd.N.assign(Nj.begin() + 1, Nj.end());
  // S_j = R^j + 1 - N_j are power sums of the numerator roots; Newton.
  std::vector<mpz_class> S(jmax + 1), e(jmax + 1);
  for (long j = 1; j <= jmax; ++j) {
    mpz_class Rj;
    mpz_pow_ui(Rj.get_mpz_t(), zd.R.get_mpz_t(), (unsigned long)j);
    S[j] = Rj + 1 - Nj[j];
  }
  e[0] = 1;
  for (long k = 1; k <= jmax; ++k) {
    mpz_class acc = 0;
    for (long i = 1; i <= k; ++i) {
      if (i % 2 == 0) acc -= e[k - i] * S[i];
      else acc += e[k - i] * S[i];
    }
    if (acc % k != 0) throw std::logic_error("zeta Newton identity not integral");
    e[k] = acc / k;
  }
  for (long k = 2 * g + 1; k <= jmax; ++k)
    if (e[k] != 0) throw std::logic_error("zeta numerator degree exceeds 2g");
  if (g > 0 && e[2 * g] == 0)
    throw std::logic_error("zeta numerator degree below 2g");
  zd.P.resize(2 * g + 1);
  for (long k = 0; k <= 2 * g; ++k) zd.P[k] = (k % 2 == 0) ? e[k] : -e[k];
  for (long k = 0; k <= g; ++k) {  // P(u) = R^g u^{2g} P(1/(Ru))
    mpz_class Rp;
    mpz_pow_ui(Rp.get_mpz_t(), zd.R.get_mpz_t(), (unsigned long)(g - k));
    if (zd.P[2 * g - k] != zd.P[k] * Rp)
      throw std::logic_error("zeta functional equation fails");
  }
  zd.h = 0;
  for (auto& co : zd.P) zd.h += co;
  if (zd.h <= 0) throw std::logic_error("class number must be positive");
  return zd;
}

// Re-checks e f g = |G| and Frobenius orders over a degree budget, the oracle
// genus, and the tame Hurwitz rewrite against the oracle genus.
inline void verify_cover_invariants(const Cover& c, int deg_budget = 3,
                                    bool with_oracle = true) {
  for (auto& v : all_places(c.F, deg_budget)) {
    SplitData sd = splitting(c, v);
    if (sd.e * sd.f * sd.g != c.G.order())
      throw std::logic_error("e f g != |G|");
    if (!sd.ramified && c.G.elt_order(sd.frob) != sd.f)
      throw std::logic_error("Frobenius order != residue degree");
  }
  if (!with_oracle) return;
  ZetaData zd = zeta_numerator(c);
  if ((long)zd.P.size() - 1 != 2 * c.gK)
    throw std::logic_error("oracle genus mismatch");
  if (!c.has_as && !c.ram.empty()) {
    // tame rewrite: 2g_K - 2 + |S_K geom| = |G_geo| (2g_k - 2 + |S geom|)
    long Gg = c.geo_order();
    long sk = 0, sb = 0;
    for (auto& v : c.ram) {
      SplitData sd = splitting(c, v);
      sk += v.deg * (Gg / sd.e);
      sb += v.deg;
    }
    if (2 * c.gK - 2 + sk != Gg * (-2 + sb))
      throw std::logic_error("Hurwitz rewrite fails");
  }
}

}  // namespace eqtheta
