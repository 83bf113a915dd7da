// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact integer linear algebra on GMP integers: Smith and Hermite normal
// forms with unimodular transforms, lattice membership with certificates,
// kernels, modular solving, Bareiss determinants and char polys.

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <vector>

namespace eqtheta {

struct ZMat {
  int r = 0, c = 0;
  std::vector<mpz_class> a;

  ZMat() = default;
  ZMat(int rows, int cols) : r(rows), c(cols), a((size_t)rows * cols) {}

  mpz_class& at(int i, int j) { return a[(size_t)i * c + j]; }
  const mpz_class& at(int i, int j) const { return a[(size_t)i * c + j]; }

  static ZMat eye(int n) {
    ZMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  ZMat transpose() const {
    ZMat t(c, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  bool operator==(const ZMat& o) const { return r == o.r && c == o.c && a == o.a; }
};

inline ZMat matmul(const ZMat& A, const ZMat& B) {
  if (A.c != B.r) throw std::invalid_argument("matmul shape");
  ZMat R(A.r, B.c);
  for (int i = 0; i < A.r; ++i)
    for (int k = 0; k < A.c; ++k) {
      const mpz_class& v = A.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < B.c; ++j) R.at(i, j) += v * B.at(k, j);
    }
  return R;
}

inline std::vector<mpz_class> matvec_left(const std::vector<mpz_class>& x, const ZMat& A) {
  if ((int)x.size() != A.r) throw std::invalid_argument("matvec shape");
  std::vector<mpz_class> y(A.c);
  for (int i = 0; i < A.r; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < A.c; ++j) y[j] += x[i] * A.at(i, j);
  }
  return y;
}

struct SmithForm {
  ZMat U, D, V;  // D = U A V, U,V unimodular
  std::vector<mpz_class> diag() const {
    std::vector<mpz_class> d;
    int n = std::min(D.r, D.c);
    for (int i = 0; i < n; ++i) d.push_back(D.at(i, i));
    return d;
  }
};

// Smith normal form: nonnegative diagonal with divisibility chain.
inline SmithForm smith_normal_form(const ZMat& A) {
  SmithForm S;
  S.D = A;
  S.U = ZMat::eye(A.r);
  S.V = ZMat::eye(A.c);
  ZMat& D = S.D;
  ZMat& U = S.U;
  ZMat& V = S.V;
  int n = std::min(A.r, A.c);

  auto row_swap = [&](int i, int j) {
    for (int k = 0; k < D.c; ++k) std::swap(D.at(i, k), D.at(j, k));
    for (int k = 0; k < U.c; ++k) std::swap(U.at(i, k), U.at(j, k));
  };
  auto col_swap = [&](int i, int j) {
    for (int k = 0; k < D.r; ++k) std::swap(D.at(k, i), D.at(k, j));
    for (int k = 0; k < V.r; ++k) std::swap(V.at(k, i), V.at(k, j));
  };
  auto row_sub = [&](int i, int j, const mpz_class& q) {  // row_i -= q row_j
    if (q == 0) return;
    for (int k = 0; k < D.c; ++k) D.at(i, k) -= q * D.at(j, k);
    for (int k = 0; k < U.c; ++k) U.at(i, k) -= q * U.at(j, k);
  };
  auto col_sub = [&](int i, int j, const mpz_class& q) {  // col_i -= q col_j
    if (q == 0) return;
    for (int k = 0; k < D.r; ++k) D.at(k, i) -= q * D.at(k, j);
    for (int k = 0; k < V.r; ++k) V.at(k, i) -= q * V.at(k, j);
  };
  auto row_neg = [&](int i) {
    for (int k = 0; k < D.c; ++k) D.at(i, k) = -D.at(i, k);
    for (int k = 0; k < U.c; ++k) U.at(i, k) = -U.at(i, k);
  };

  for (int t = 0; t < n; ++t) {
    for (;;) {
      // minimal nonzero entry of the trailing submatrix to (t,t)
      int bi = -1, bj = -1;
      for (int i = t; i < D.r; ++i)
        for (int j = t; j < D.c; ++j)
          if (D.at(i, j) != 0 &&
              (bi < 0 || mpz_cmpabs(D.at(i, j).get_mpz_t(), D.at(bi, bj).get_mpz_t()) < 0)) {
            bi = i;
            bj = j;
          }
      if (bi < 0) { t = n; break; }
      if (bi != t) row_swap(bi, t);
      if (bj != t) col_swap(bj, t);

      bool dirty = false;
      for (int i = t + 1; i < D.r; ++i)
        if (D.at(i, t) != 0) {
          mpz_class q = D.at(i, t) / D.at(t, t);  // truncated
          row_sub(i, t, q);
          if (D.at(i, t) != 0) dirty = true;
        }
      for (int j = t + 1; j < D.c; ++j)
        if (D.at(t, j) != 0) {
          mpz_class q = D.at(t, j) / D.at(t, t);
          col_sub(j, t, q);
          if (D.at(t, j) != 0) dirty = true;
        }
      if (dirty) continue;
      // pivot must divide the whole trailing block
      bool fixed = true;
      for (int i = t + 1; i < D.r && fixed; ++i)
        for (int j = t + 1; j < D.c && fixed; ++j)
          if (D.at(i, j) % D.at(t, t) != 0) {
            row_sub(t, i, mpz_class(-1));  // row_t += row_i
            fixed = false;
          }
      if (fixed) break;
    }
    if (t >= n) break;
    if (D.at(t, t) < 0) row_neg(t);
  }
  return S;
}

struct HermiteForm {
  ZMat H, U;                 // H = U B, U unimodular, H row echelon
  std::vector<int> pivots;   // pivot column per nonzero row
  int rank = 0;
};

// Row-style Hermite normal form: positive pivots, entries above reduced
// into [0, pivot).
inline HermiteForm hnf_rows(const ZMat& B) {
  HermiteForm R;
  R.H = B;
  R.U = ZMat::eye(B.r);
  ZMat& H = R.H;
  ZMat& U = R.U;

  auto row_swap = [&](int i, int j) {
    for (int k = 0; k < H.c; ++k) std::swap(H.at(i, k), H.at(j, k));
    for (int k = 0; k < U.c; ++k) std::swap(U.at(i, k), U.at(j, k));
  };
  auto row_sub = [&](int i, int j, const mpz_class& q) {
    if (q == 0) return;
    for (int k = 0; k < H.c; ++k) H.at(i, k) -= q * H.at(j, k);
    for (int k = 0; k < U.c; ++k) U.at(i, k) -= q * U.at(j, k);
  };
  auto row_neg = [&](int i) {
    for (int k = 0; k < H.c; ++k) H.at(i, k) = -H.at(i, k);
    for (int k = 0; k < U.c; ++k) U.at(i, k) = -U.at(i, k);
  };

  int row = 0;
  for (int col = 0; col < H.c && row < H.r; ++col) {
    // Euclid below the working row until one nonzero remains.
    for (;;) {
      int bi = -1;
      for (int i = row; i < H.r; ++i)
        if (H.at(i, col) != 0 &&
            (bi < 0 || mpz_cmpabs(H.at(i, col).get_mpz_t(), H.at(bi, col).get_mpz_t()) < 0))
          bi = i;
      if (bi < 0) break;
      if (bi != row) row_swap(bi, row);
      bool clear = true;
      for (int i = row + 1; i < H.r; ++i)
        if (H.at(i, col) != 0) {
          mpz_class q = H.at(i, col) / H.at(row, col);
          row_sub(i, row, q);
          if (H.at(i, col) != 0) clear = false;
        }
      if (clear) break;
    }
    if (row < H.r && H.at(row, col) != 0) {
      if (H.at(row, col) < 0) row_neg(row);
      // reduce entries above into [0, pivot)
      for (int i = 0; i < row; ++i) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), H.at(i, col).get_mpz_t(), H.at(row, col).get_mpz_t());
        row_sub(i, row, q);
      }
      R.pivots.push_back(col);
      ++row;
    }
  }
  R.rank = row;
  return R;
}

// Is x in the row span?  If yes, also return coefficients on H's rows.
inline std::optional<std::vector<mpz_class>> hnf_reduce(const HermiteForm& F,
                                                        std::vector<mpz_class> x) {
  if ((int)x.size() != F.H.c) throw std::invalid_argument("hnf_reduce shape");
  std::vector<mpz_class> d(F.rank);
  for (int rr = 0; rr < F.rank; ++rr) {
    int col = F.pivots[rr];
    const mpz_class& piv = F.H.at(rr, col);
    if (x[col] % piv != 0) return std::nullopt;
    mpz_class q = x[col] / piv;
    d[rr] = q;
    if (q != 0)
      for (int k = 0; k < F.H.c; ++k) x[k] -= q * F.H.at(rr, k);
  }
  for (auto& v : x)
    if (v != 0) return std::nullopt;
  return d;
}

inline bool hnf_membership(const std::vector<std::vector<mpz_class>>& basis,
                           const std::vector<mpz_class>& x) {
  if (basis.empty()) {
    for (auto& v : x)
      if (v != 0) return false;
    return true;
  }
  ZMat B((int)basis.size(), (int)basis[0].size());
  for (int i = 0; i < B.r; ++i)
    for (int j = 0; j < B.c; ++j) B.at(i, j) = basis[i][j];
  return hnf_reduce(hnf_rows(B), x).has_value();
}

// Coefficients on the ORIGINAL generators B_i with x = sum c_i B_i.
inline std::optional<std::vector<mpz_class>> rowspan_coeffs(const ZMat& B,
                                                            const std::vector<mpz_class>& x) {
  HermiteForm F = hnf_rows(B);
  auto d = hnf_reduce(F, x);
  if (!d) return std::nullopt;
  std::vector<mpz_class> dd(B.r, 0);
  for (int i = 0; i < F.rank; ++i) dd[i] = (*d)[i];
  return matvec_left(dd, F.U);
}

// Basis of {x : x A = 0} as rows.
inline ZMat left_kernel(const ZMat& A) {
  HermiteForm F = hnf_rows(A);
  int k = A.r - F.rank;
  ZMat K(k, A.r);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < A.r; ++j) K.at(i, j) = F.U.at(F.rank + i, j);
  return K;
}

// One solution of x A = b over Z, if any.
inline std::optional<std::vector<mpz_class>> solve_left(const ZMat& A,
                                                        const std::vector<mpz_class>& b) {
  return rowspan_coeffs(A, b);
}

// One solution of A x = b mod N (N > 0), via Smith form.
inline std::optional<std::vector<mpz_class>> solve_mod(const ZMat& A,
                                                       const std::vector<mpz_class>& b,
                                                       const mpz_class& N) {
  SmithForm S = smith_normal_form(A);
  std::vector<mpz_class> ub(A.r);
  for (int i = 0; i < A.r; ++i) {
    mpz_class s = 0;
    for (int j = 0; j < A.r; ++j) s += S.U.at(i, j) * b[j];
    ub[i] = s;
  }
  int n = std::min(A.r, A.c);
  std::vector<mpz_class> y(A.c, 0);
  for (int i = 0; i < A.r; ++i) {
    mpz_class di = i < n ? S.D.at(i, i) : mpz_class(0);
    mpz_class rhs = ub[i] % N;
    if (rhs < 0) rhs += N;
    if (di == 0) {
      if (rhs != 0) return std::nullopt;
      continue;
    }
    // d y = rhs mod N solvable iff gcd(d, N) | rhs
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), di.get_mpz_t(), N.get_mpz_t());
    if (rhs % g != 0) return std::nullopt;
    mpz_class yi = (rhs / g) * s % N;
    if (yi < 0) yi += N;
    y[i] = yi;
  }
  std::vector<mpz_class> x(A.c, 0);
  for (int i = 0; i < A.c; ++i) {
    mpz_class s = 0;
    for (int j = 0; j < A.c; ++j) s += S.V.at(i, j) * y[j];
    mpz_class v = s % N;
    if (v < 0) v += N;
    x[i] = v;
  }
  return x;
}

// Fraction-free determinant (Bareiss); A square.
inline mpz_class zdet(ZMat A) {
  if (A.r != A.c) throw std::invalid_argument("det shape");
  int n = A.r;
  if (n == 0) return 1;
  mpz_class denom = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (A.at(k, k) == 0) {
      int pi = -1;
      for (int i = k + 1; i < n; ++i)
        if (A.at(i, k) != 0) { pi = i; break; }
      if (pi < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(A.at(k, j), A.at(pi, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        A.at(i, j) = (A.at(i, j) * A.at(k, k) - A.at(i, k) * A.at(k, j)) / denom;
      }
    for (int i = k + 1; i < n; ++i) A.at(i, k) = 0;
    denom = A.at(k, k);
  }
  return sign > 0 ? A.at(n - 1, n - 1) : -A.at(n - 1, n - 1);
}

// det(I - u A) as integer coefficient vector, little-endian, degree <= n.
// Fraction-free elimination over Z[u] (entries stay polynomials).
inline std::vector<mpz_class> det_one_minus_uA(const ZMat& A) {
  int n = A.r;
  if (A.c != n) throw std::invalid_argument("shape");
  using Pz = std::vector<mpz_class>;  // little-endian
  auto trim = [](Pz& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
  };
  auto mulp = [&](const Pz& f, const Pz& g) {
    if (f.empty() || g.empty()) return Pz{};
    Pz h(f.size() + g.size() - 1);
    for (size_t i = 0; i < f.size(); ++i)
      if (f[i] != 0)
        for (size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
    trim(h);
    return h;
  };
  auto subp = [&](Pz f, const Pz& g) {
    if (f.size() < g.size()) f.resize(g.size());
    for (size_t i = 0; i < g.size(); ++i) f[i] -= g[i];
    trim(f);
    return f;
  };
  auto divp = [&](const Pz& f, const Pz& g) {  // exact division
    if (f.empty()) return Pz{};
    if (f.size() < g.size()) throw std::logic_error("inexact poly division in det");
    Pz r = f, q;
    q.assign(f.size() - g.size() + 1, 0);
    for (int i = (int)f.size() - (int)g.size(); i >= 0; --i) {
      if ((int)r.size() < i + (int)g.size()) continue;
      mpz_class c = r[i + g.size() - 1] / g.back();
      q[i] = c;
      if (c != 0)
        for (size_t j = 0; j < g.size(); ++j) r[i + j] -= c * g[j];
      trim(r);
    }
    if (!r.empty()) throw std::logic_error("inexact poly division in det");
    trim(q);
    return q;
  };

  std::vector<std::vector<Pz>> M(n, std::vector<Pz>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Pz e;
      if (i == j) e.push_back(1);
      mpz_class c = -A.at(i, j);
      if (c != 0) {
        if (e.empty()) e.push_back(0);
        e.resize(2, 0);
        e[1] = c;
      }
      trim(e);
      M[i][j] = e;
    }
  Pz denom{1};
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (M[k][k].empty()) {
      int pi = -1;
      for (int i = k + 1; i < n; ++i)
        if (!M[i][k].empty()) { pi = i; break; }
      if (pi < 0) return {};  // det = 0
      std::swap(M[k], M[pi]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        M[i][j] = divp(subp(mulp(M[i][j], M[k][k]), mulp(M[i][k], M[k][j])), denom);
    for (int i = k + 1; i < n; ++i) M[i][k].clear();
    denom = M[k][k];
  }
  Pz res = M[n - 1][n - 1];
  if (sign < 0)
    for (auto& c : res) c = -c;
  return res;
}

// Rank of A over F_p.
inline int rank_mod_p(ZMat A, const mpz_class& p) {
  auto norm = [&](mpz_class v) {
    v %= p;
    if (v < 0) v += p;
    return v;
  };
  for (auto& v : A.a) v = norm(v);
  int rank = 0;
  for (int col = 0; col < A.c && rank < A.r; ++col) {
    int piv = -1;
    for (int i = rank; i < A.r; ++i)
      if (A.at(i, col) != 0) { piv = i; break; }
    if (piv < 0) continue;
    for (int j = 0; j < A.c; ++j) std::swap(A.at(rank, j), A.at(piv, j));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), A.at(rank, col).get_mpz_t(), p.get_mpz_t());
    for (int j = 0; j < A.c; ++j) A.at(rank, j) = norm(A.at(rank, j) * inv);
    for (int i = 0; i < A.r; ++i)
      if (i != rank && A.at(i, col) != 0) {
        mpz_class f = A.at(i, col);
        for (int j = 0; j < A.c; ++j) A.at(i, j) = norm(A.at(i, j) - f * A.at(rank, j));
      }
    ++rank;
  }
  return rank;
}

}  // namespace eqtheta
