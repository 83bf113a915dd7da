// SPDX-License-Identifier: Apache-2.0
#pragma once

// Finite modules over R[G], R = Z or Z/N, G finite abelian: presentations,
// Fitting ideals (all maximal minors), annihilators, covariant and
// contravariant duals, Tate-twist ring maps, freeness tests over F_l[G]
// for l-groups, and free-basis search plus group-ring determinants used
// by the finite-level characteristic polynomial identity.

#include <optional>
#include <unordered_map>

#include "eqtheta/grpring.hpp"
#include "eqtheta/intmat.hpp"
#include "eqtheta/rng.hpp"

namespace eqtheta {

// Underlying group ⊕ Z/d[i]; column vectors; generator i of G acts by
// act[i] (well-defined: d[k] | act[i](k,j)·d[j]).
struct GModule {
  const AbGroup* G = nullptr;
  mpz_class N = 0;  // coefficient ring Z (0) or Z/N
  std::vector<mpz_class> d;
  std::vector<ZMat> act;

  int ngen() const { return (int)d.size(); }

  // Reduce entry rows mod their invariant factor.
  void reduce_mat(ZMat& A) const {
    for (int i = 0; i < A.r; ++i)
      for (int j = 0; j < A.c; ++j) {
        A.at(i, j) %= d[i];
        if (A.at(i, j) < 0) A.at(i, j) += d[i];
      }
  }

  ZMat action_of_idx(long idx) const {
    auto e = G->element(idx);
    int n = ngen();
    ZMat R = ZMat::eye(n);
    for (size_t i = 0; i < e.size(); ++i)
      for (long t = 0; t < e[i]; ++t) R = matmul(act[i], R);
    reduce_mat(R);
    return R;
  }
};

struct IdealZG {
  const AbGroup* G = nullptr;
  mpz_class N = 0;
  std::vector<GrElt> gens;
};

// ---- group-ring linear algebra ------------------------------------------

// Determinant of a k x k matrix over Z[G] (or Z/N[G]) by subset DP.
inline GrElt gr_det(const AbGroup* G, const mpz_class& N,
                    const std::vector<std::vector<GrElt>>& M) {
  int k = (int)M.size();
  if (k == 0) return GrElt::one(G, N);
  std::unordered_map<unsigned, GrElt> memo;
  // f(mask) = det of rows [0, popcount) on column set mask.
  std::function<GrElt(unsigned)> f = [&](unsigned mask) -> GrElt {
    if (mask == 0) return GrElt::one(G, N);
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    int row = __builtin_popcount(mask) - 1;
    GrElt acc = GrElt::zero(G, N);
    int sign = (row % 2 == 0) ? 1 : -1;  // Laplace along row `row`
    for (int j = 0; j < k; ++j) {
      if (!(mask & (1u << j))) continue;
      if (!M[row][j].is_zero()) {
        GrElt term = M[row][j] * f(mask & ~(1u << j));
        acc = sign > 0 ? acc + term : acc - term;
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return f((1u << k) - 1);
}

// Relation rows of the standard presentation over R[G].
inline std::vector<std::vector<GrElt>> presentation_rows(const GModule& M) {
  int n = M.ngen();
  std::vector<std::vector<GrElt>> rows;
  auto zero_row = [&] { return std::vector<GrElt>(n, GrElt::zero(M.G, M.N)); };
  for (int j = 0; j < n; ++j) {
    auto r = zero_row();
    r[j] = GrElt::scalar(M.G, M.d[j], M.N);
    rows.push_back(r);
  }
  for (size_t i = 0; i < M.G->rank(); ++i) {
    std::vector<long> gi(M.G->rank(), 0);
    gi[i] = 1;
    long idx = M.G->index(gi);
    for (int j = 0; j < n; ++j) {
      auto r = zero_row();
      r[j] = r[j] + GrElt::basis(M.G, idx, M.N);
      for (int kk = 0; kk < n; ++kk)
        r[kk] = r[kk] - GrElt::scalar(M.G, M.act[i].at(kk, j), M.N);
      rows.push_back(r);
    }
  }
  // drop zero rows
  std::vector<std::vector<GrElt>> out;
  for (auto& r : rows) {
    bool z = true;
    for (auto& e : r)
      if (!e.is_zero()) { z = false; break; }
    if (!z) out.push_back(r);
  }
  return out;
}

// Fitting ideal from an explicit relation-row list (n columns).
inline IdealZG fitting_from_presentation(const AbGroup* G, const mpz_class& N,
                                         const std::vector<std::vector<GrElt>>& rows,
                                         int n) {
  IdealZG I{G, N, {}};
  if (n == 0) {
    I.gens.push_back(GrElt::one(G, N));
    return I;
  }
  int m = (int)rows.size();
  if (m < n) return I;  // zero ideal
  // enumerate n-subsets of rows
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  double total = 1;
  for (int i = 0; i < n; ++i) total *= double(m - i) / (i + 1);
  if (total > 2e6) throw std::runtime_error("fitting: presentation too large");
  for (;;) {
    std::vector<std::vector<GrElt>> sub(n);
    for (int i = 0; i < n; ++i) sub[i] = rows[comb[i]];
    GrElt det = gr_det(G, N, sub);
    if (!det.is_zero()) I.gens.push_back(det);
    int i = n - 1;
    while (i >= 0 && comb[i] == m - n + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
  }
  return I;
}

inline IdealZG fitting_ideal(const GModule& M) {
  return fitting_from_presentation(M.G, M.N, presentation_rows(M), M.ngen());
}

// Z-lattice of an ideal inside Z^{|G|} (plus N·Z^{|G|} if modular).
inline HermiteForm ideal_lattice(const IdealZG& I) {
  long n = I.G->order();
  std::vector<std::vector<mpz_class>> rows;
  for (auto& g : I.gens)
    for (long h = 0; h < n; ++h) {
      GrElt sh = GrElt::basis(I.G, h, I.N) * g;
      rows.push_back(sh.c);
    }
  if (I.N > 0)
    for (long h = 0; h < n; ++h) {
      std::vector<mpz_class> r(n, 0);
      r[h] = I.N;
      rows.push_back(r);
    }
  if (rows.empty()) rows.push_back(std::vector<mpz_class>(n, 0));
  ZMat B((int)rows.size(), (int)n);
  for (int i = 0; i < B.r; ++i)
    for (int j = 0; j < B.c; ++j) B.at(i, j) = rows[i][j];
  return hnf_rows(B);
}

inline bool ideal_contains(const IdealZG& I, const GrElt& x) {
  HermiteForm H = ideal_lattice(I);
  GrElt xr = x.with_modulus(I.N);
  return hnf_reduce(H, xr.c).has_value();
}

inline bool ideal_contains_ideal(const IdealZG& I, const IdealZG& J) {
  HermiteForm H = ideal_lattice(I);
  for (auto& g : J.gens)
    if (!hnf_reduce(H, g.with_modulus(I.N).c).has_value()) return false;
  return true;
}

inline bool ideal_equal(const IdealZG& I, const IdealZG& J) {
  return ideal_contains_ideal(I, J) && ideal_contains_ideal(J, I);
}

// Replace generators by a Z-basis of the ideal's lattice (at most |G| rows).
inline IdealZG ideal_reduce(const IdealZG& I) {
  HermiteForm H = ideal_lattice(I);
  IdealZG R{I.G, I.N, {}};
  for (int i = 0; i < H.rank; ++i) {
    GrElt e = GrElt::zero(I.G, I.N);
    for (int j = 0; j < H.H.c; ++j) e.c[j] = H.H.at(i, j);
    e.normalize();
    if (!e.is_zero()) R.gens.push_back(e);
  }
  return R;
}

inline IdealZG ideal_mul(const IdealZG& I, const IdealZG& J) {
  IdealZG P{I.G, I.N, {}};
  for (auto& a : I.gens)
    for (auto& b : J.gens) {
      GrElt p = a * b;
      if (!p.is_zero()) P.gens.push_back(p);
    }
  return ideal_reduce(P);
}

inline IdealZG ideal_pow(const IdealZG& I, int m) {
  IdealZG P{I.G, I.N, {GrElt::one(I.G, I.N)}};
  for (int t = 0; t < m; ++t) P = ideal_mul(P, I);
  return P;
}

// Annihilator ideal of M in R[G].
inline IdealZG annihilator(const GModule& M) {
  long ng = M.G->order();
  int n = M.ngen();
  // rows: group elements; cols: (k, j) entries; condition sum_g c_g rho(g)_{kj} = 0 mod d_k
  int cols = n * n;
  ZMat B((int)ng + cols, cols);
  std::vector<ZMat> rho(ng);
  for (long g = 0; g < ng; ++g) rho[g] = M.action_of_idx(g);
  for (long g = 0; g < ng; ++g)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) B.at((int)g, k * n + j) = rho[g].at(k, j);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) B.at((int)ng + k * n + j, k * n + j) = M.d[k];
  ZMat K = left_kernel(B);
  IdealZG I{M.G, M.N, {}};
  for (int i = 0; i < K.r; ++i) {
    GrElt e = GrElt::zero(M.G, M.N);
    bool nz = false;
    for (long g = 0; g < ng; ++g) {
      e.c[g] = K.at(i, (int)g);
      if (e.c[g] != 0) nz = true;
    }
    e.normalize();
    if (nz && !e.is_zero()) I.gens.push_back(e);
  }
  if (M.N > 0 && I.gens.empty()) I.gens.push_back(GrElt::zero(M.G, M.N));
  return I;
}

// M an F_l[G]-module, G an l-group: returns (free?, rank).  Uses the
// invariant criterion: free iff dim M = |G| dim M^G, rank = dim M^G.
inline std::pair<bool, long> is_free_over_lgroup(const GModule& M, const mpz_class& ell) {
  for (long n : M.G->ns) {
    long v = n;
    while (v % ell == 0) v /= mpz_get_ui(ell.get_mpz_t());
    if (v != 1) throw std::invalid_argument("G is not an ell-group");
  }
  int n = M.ngen();
  for (auto& di : M.d)
    if (di != ell) throw std::invalid_argument("module not elementary abelian of exponent ell");
  // stack (rho(g_i) - I) over F_ell
  int s = (int)M.G->rank();
  ZMat St(s * n, n);
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        St.at(i * n + k, j) = M.act[i].at(k, j) - (k == j ? 1 : 0);
  int rank = rank_mod_p(St, ell);
  long dim_inv = n - rank;
  bool free = ((long)n == M.G->order() * dim_inv);
  return {free, dim_inv};
}

// Covariant dual: (sigma f)(m) = f(sigma m).
// Contravariant dual: (sigma f)(m) = f(sigma^{-1} m).
inline GModule dualize(const GModule& M, bool covariant) {
  GModule D;
  D.G = M.G;
  D.N = M.N;
  D.d = M.d;
  int n = M.ngen();
  for (size_t i = 0; i < M.act.size(); ++i) {
    ZMat A = M.act[i];
    if (!covariant) {
      // action of the generator's inverse
      long ni = M.G->ns[i];
      ZMat P = ZMat::eye(n);
      for (long t = 0; t < ni - 1; ++t) P = matmul(A, P);
      M.reduce_mat(P);
      A = P;
    }
    ZMat B(n, n);
    for (int j = 0; j < n; ++j)
      for (int i2 = 0; i2 < n; ++i2) {
        // B(j, i2) = (d_j / d_i2) A(i2, j)
        mpz_class num = M.d[j] * A.at(i2, j);
        if (num % M.d[i2] != 0) throw std::logic_error("dual action not integral");
        B.at(j, i2) = num / M.d[i2];
      }
    D.reduce_mat(B);
    D.act.push_back(B);
  }
  return D;
}

// Tate twist t_n on R[Gbar], Gbar = G x C_N with the LAST factor generated
// by gamma; kappa(gamma) = q, kappa trivial on G.  t_n(sigma) = kappa^n sigma.
struct TateTwist {
  const AbGroup* Gbar = nullptr;
  long n_twist = 0;
  mpz_class q;
  mpz_class mod;  // coefficient modulus (0 = Z: only valid if n_twist >= 0)

  GrElt apply(const GrElt& x) const {
    GrElt r = GrElt::zero(Gbar, x.N);
    long gi = (long)Gbar->rank() - 1;
    for (long idx = 0; idx < Gbar->order(); ++idx) {
      if (x.c[idx] == 0) continue;
      long j = Gbar->element(idx)[gi];
      mpz_class scale;
      long e = n_twist * j;
      if (mod > 0) {
        mpz_class qe, mm = mod;
        if (e >= 0) {
          mpz_class ee((long)e);
          mpz_powm(qe.get_mpz_t(), q.get_mpz_t(), ee.get_mpz_t(), mm.get_mpz_t());
        } else {
          mpz_class qinv;
          if (!mpz_invert(qinv.get_mpz_t(), q.get_mpz_t(), mm.get_mpz_t()))
            throw std::domain_error("q not invertible mod N");
          mpz_class ee((long)(-e));
          mpz_powm(qe.get_mpz_t(), qinv.get_mpz_t(), ee.get_mpz_t(), mm.get_mpz_t());
        }
        scale = qe;
      } else {
        if (e < 0) throw std::domain_error("negative twist needs modular coefficients");
        mpz_class qe;
        mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), (unsigned long)e);
        scale = qe;
      }
      r.c[idx] += x.c[idx] * scale;
    }
    r.normalize();
    return r;
  }

  IdealZG apply(const IdealZG& I) const {
    IdealZG J{I.G, I.N, {}};
    for (auto& g : I.gens) J.gens.push_back(apply(g));
    return J;
  }
};

inline TateTwist tate_twist_map(long n, const mpz_class& q, const AbGroup* Gbar,
                                const mpz_class& mod) {
  return TateTwist{Gbar, n, q, mod};
}

// R^rank as a module over R[C_N] (R = Z/m) with the cycle acting by A.
inline GModule charpoly_presentation(const ZMat& A, const mpz_class& m, long N,
                                     const AbGroup* CN) {
  if (A.r != A.c) throw std::invalid_argument("square matrix required");
  if (CN->ns.size() != 1 || CN->ns[0] != N) throw std::invalid_argument("group mismatch");
  // A^N must be the identity mod m.
  ZMat P = ZMat::eye(A.r);
  for (long t = 0; t < N; ++t) P = matmul(A, P);
  for (int i = 0; i < P.r; ++i)
    for (int j = 0; j < P.c; ++j) {
      mpz_class v = (P.at(i, j) - (i == j ? 1 : 0)) % m;
      if (v != 0) throw std::invalid_argument("A^N != 1 mod m");
    }
  GModule M;
  M.G = CN;
  M.N = m;
  M.d.assign(A.r, m);
  ZMat Am = A;
  M.reduce_mat(Am);
  M.act.push_back(Am);
  return M;
}

// ---- free R[G]-structure ------------------------------------------------

// Candidate-driven search for an R[G]-basis of (Z/m)^D with commuting
// unit actions rho(g).  Returns s = D/|G| vectors whose G-translates form
// a basis, or nullopt.
struct FreeBasis {
  std::vector<std::vector<mpz_class>> vecs;  // s vectors of length D
  ZMat full;                                  // D x D: columns g-translates
  ZMat full_inv;                              // inverse mod m
};

namespace detail {

// Invert B mod m (unit determinant required); Gaussian elimination with
// unit pivots.  Returns nullopt if not invertible.
inline std::optional<ZMat> invert_mod(const ZMat& B, const mpz_class& m) {
  int n = B.r;
  ZMat A = B, I = ZMat::eye(n);
  auto norm = [&](mpz_class v) {
    v %= m;
    if (v < 0) v += m;
    return v;
  };
  for (auto& v : A.a) v = norm(v);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    mpz_class pinv;
    for (int i = col; i < n; ++i) {
      if (mpz_invert(pinv.get_mpz_t(), A.at(i, col).get_mpz_t(), m.get_mpz_t())) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(A.at(piv, j), A.at(col, j));
        std::swap(I.at(piv, j), I.at(col, j));
      }
    }
    for (int j = 0; j < n; ++j) {
      A.at(col, j) = norm(A.at(col, j) * pinv);
      I.at(col, j) = norm(I.at(col, j) * pinv);
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      mpz_class f = A.at(i, col);
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        A.at(i, j) = norm(A.at(i, j) - f * A.at(col, j));
        I.at(i, j) = norm(I.at(i, j) - f * I.at(col, j));
      }
    }
  }
  return I;
}

}  // namespace detail

// rho: per G-generator action matrix on (Z/m)^D.
inline std::optional<FreeBasis> find_free_basis(const AbGroup* G, const mpz_class& m,
                                                int D, const std::vector<ZMat>& rho,
                                                const std::vector<std::vector<mpz_class>>& natural,
                                                u64 seed, int tries = 400) {
  long ng = G->order();
  if (D % ng != 0) return std::nullopt;
  int s = (int)(D / ng);
  // full action of each group element
  std::vector<ZMat> full(ng);
  for (long g = 0; g < ng; ++g) {
    auto e = G->element(g);
    ZMat R = ZMat::eye(D);
    for (size_t i = 0; i < e.size(); ++i)
      for (long t = 0; t < e[i]; ++t) R = matmul(rho[i], R);
    for (auto& v : R.a) {
      v %= m;
      if (v < 0) v += m;
    }
    full[g] = R;
  }
  auto try_tuple = [&](const std::vector<std::vector<mpz_class>>& cand)
      -> std::optional<FreeBasis> {
    ZMat B(D, D);
    int col = 0;
    for (int i = 0; i < s; ++i)
      for (long g = 0; g < ng; ++g) {
        // column = full[g] * cand[i]
        for (int r2 = 0; r2 < D; ++r2) {
          mpz_class acc = 0;
          for (int k = 0; k < D; ++k) acc += full[g].at(r2, k) * cand[i][k];
          acc %= m;
          if (acc < 0) acc += m;
          B.at(r2, col) = acc;
        }
        ++col;
      }
    auto inv = detail::invert_mod(B, m);
    if (!inv) return std::nullopt;
    return FreeBasis{cand, B, *inv};
  };
  // natural candidates first: all s-subsets when feasible
  int nn = (int)natural.size();
  if (s <= nn && nn <= 16) {
    std::vector<int> comb(s);
    for (int i = 0; i < s; ++i) comb[i] = i;
    for (;;) {
      std::vector<std::vector<mpz_class>> cand(s);
      for (int i = 0; i < s; ++i) cand[i] = natural[comb[i]];
      auto r = try_tuple(cand);
      if (r) return r;
      int i = s - 1;
      while (i >= 0 && comb[i] == nn - s + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  Rng rng(seed);
  for (int t = 0; t < tries; ++t) {
    std::vector<std::vector<mpz_class>> cand(s, std::vector<mpz_class>(D));
    for (int i = 0; i < s; ++i) {
      if (!natural.empty()) {
        // random small G-combination of natural generators
        for (auto& v : cand[i]) v = 0;
        for (int picks = 0; picks < 2; ++picks) {
          const auto& base = natural[rng.below(natural.size())];
          long g = (long)rng.below((u64)ng);
          mpz_class coefc((long)(1 + rng.below(mpz_get_ui(m.get_mpz_t()) > 1 ? 2 : 1)));
          for (int r2 = 0; r2 < D; ++r2) {
            mpz_class acc = 0;
            for (int k = 0; k < D; ++k) acc += full[g].at(r2, k) * base[k];
            cand[i][r2] = (cand[i][r2] + coefc * acc) % m;
          }
        }
      } else {
        for (auto& v : cand[i]) v = (long)rng.below(mpz_get_ui(m.get_mpz_t()));
      }
    }
    auto r = try_tuple(cand);
    if (r) return r;
  }
  return std::nullopt;
}

// Matrix of a commuting endomorphism A over R[G] in a free basis.
inline std::vector<std::vector<GrElt>> matrix_over_rg(const AbGroup* G, const mpz_class& m,
                                                      const FreeBasis& fb, const ZMat& A) {
  long ng = G->order();
  int D = fb.full.r;
  int s = (int)fb.vecs.size();
  std::vector<std::vector<GrElt>> out(s, std::vector<GrElt>(s, GrElt::zero(G, m)));
  for (int i = 0; i < s; ++i) {
    // coords of A * vecs[i] in the full basis
    std::vector<mpz_class> img(D, 0);
    for (int r2 = 0; r2 < D; ++r2) {
      mpz_class acc = 0;
      for (int k = 0; k < D; ++k) acc += A.at(r2, k) * fb.vecs[i][k];
      acc %= m;
      if (acc < 0) acc += m;
      img[r2] = acc;
    }
    std::vector<mpz_class> coords(D, 0);
    for (int r2 = 0; r2 < D; ++r2) {
      mpz_class acc = 0;
      for (int k = 0; k < D; ++k) acc += fb.full_inv.at(r2, k) * img[k];
      acc %= m;
      if (acc < 0) acc += m;
      coords[r2] = acc;
    }
    // coords are indexed (j, g) in column order of find_free_basis
    for (int j = 0; j < s; ++j)
      for (long g = 0; g < ng; ++g) out[j][i].c[g] = coords[(size_t)j * ng + g];
    for (int j = 0; j < s; ++j) out[j][i].normalize();
  }
  return out;
}

// det(1 - u A) over R[G][u] for an s x s group-ring matrix A.
inline EqPoly det_one_minus_u_rg(const AbGroup* G, const mpz_class& m,
                                 const std::vector<std::vector<GrElt>>& A) {
  int s = (int)A.size();
  // entries of (I - uA) as EqPoly, determinant by subset DP over EqPoly.
  std::vector<std::vector<EqPoly>> M(s, std::vector<EqPoly>(s, EqPoly::zero(G)));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      EqPoly e = EqPoly::zero(G);
      e.coef.push_back(i == j ? GrElt::one(G, m) : GrElt::zero(G, m));
      GrElt minus = GrElt::zero(G, m) - A[i][j];
      e.coef.push_back(minus);
      e.trim();
      M[i][j] = e;
    }
  std::unordered_map<unsigned, EqPoly> memo;
  std::function<EqPoly(unsigned)> f = [&](unsigned mask) -> EqPoly {
    if (mask == 0) {
      EqPoly one = EqPoly::zero(G);
      one.coef.push_back(GrElt::one(G, m));
      return one;
    }
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    int row = __builtin_popcount(mask) - 1;
    EqPoly acc = EqPoly::zero(G);
    int sign = (row % 2 == 0) ? 1 : -1;  // Laplace along row `row`
    for (int j = 0; j < s; ++j) {
      if (!(mask & (1u << j))) continue;
      EqPoly term = M[row][j] * f(mask & ~(1u << j));
      if (sign < 0) {
        for (auto& co : term.coef) co = GrElt::zero(G, m) - co;
      }
      acc = acc + term;
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return f((1u << s) - 1);
}

}  // namespace eqtheta
