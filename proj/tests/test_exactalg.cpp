// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "eqtheta/fq.hpp"
#include "eqtheta/fqpoly.hpp"
#include "eqtheta/intmat.hpp"
#include "eqtheta/rng.hpp"

using namespace eqtheta;

TEST_CASE("prime field arithmetic") {
  const FieldCtx* F = fq_make(7, 1);
  REQUIRE(F->q == 7);
  REQUIRE(F->add(3, 5) == 1);
  REQUIRE(F->mul(3, 5) == 1);
  REQUIRE(F->neg(0) == 0);
  REQUIRE(F->sub(2, 5) == 4);
  for (u64 a = 1; a < 7; ++a) {
    REQUIRE(F->mul(a, F->inv(a)) == 1);
    REQUIRE(F->pow(a, 6) == 1);  // Fermat
  }
  REQUIRE(F->trace_abs(4) == 4);
  REQUIRE(F->norm_abs(4) == 4);
}

TEST_CASE("canonical moduli are the least irreducibles") {
  // Degree 3 over F_2: x^3+1 splits, x^3+x reducible, x^3+x+1 irreducible.
  const FieldCtx* F8 = fq_make(2, 3);
  REQUIRE(F8->mod == std::vector<u64>{1, 1, 0, 1});
  // Degree 2 over F_3: x^2+1 is irreducible (-1 is a nonresidue mod 3).
  const FieldCtx* F9 = fq_make(3, 2);
  REQUIRE(F9->mod == std::vector<u64>{1, 0, 1});
}

TEST_CASE("extension field arithmetic and tables") {
  const FieldCtx* F = fq_make(3, 2);
  REQUIRE(F->q == 9);
  REQUIRE(F->tabled());
  // Frobenius is additive and multiplicative; trace lands in F_p.
  for (u64 a = 0; a < 9; ++a)
    for (u64 b = 0; b < 9; ++b) {
      REQUIRE(F->frob(F->add(a, b)) == F->add(F->frob(a), F->frob(b)));
      REQUIRE(F->frob(F->mul(a, b)) == F->mul(F->frob(a), F->frob(b)));
    }
  for (u64 a = 0; a < 9; ++a) {
    REQUIRE(F->trace_abs(a) < 3);
    REQUIRE(F->pth_root(F->frob(a)) == a);
    if (a) REQUIRE(F->mul(a, F->inv(a)) == 1);
  }
  REQUIRE(F->order(F->gen) == 8);
  for (u64 a = 1; a < 9; ++a) REQUIRE(F->pow(F->gen, F->dlog(a)) == a);
  // x^2 = -1 for the class of x (code 3): modulus x^2+1.
  REQUIRE(F->mul(3, 3) == F->neg(1));
}

TEST_CASE("untabled field: digit path, BSGS dlog, p-th roots") {
  const FieldCtx* F = fq_make(2, 22);
  REQUIRE_FALSE(F->tabled());
  Rng rng(42);
  for (int i = 0; i < 16; ++i) {
    u64 a = rng.below(F->q), b = rng.below(F->q);
    REQUIRE(F->mul(a, b) == F->mul(b, a));
    REQUIRE(F->pth_root(F->frob(a)) == a);
    if (a) REQUIRE(F->mul(a, F->inv(a)) == 1);
    REQUIRE(F->frob(F->add(a, b)) == F->add(F->frob(a), F->frob(b)));
  }
  u64 x = F->pow(F->gen, 123457);
  REQUIRE(F->dlog(x) == 123457);
}

TEST_CASE("polynomial division, gcd, eval") {
  const FieldCtx* F = fq_make(5, 1);
  PolyV a{1, 2, 3, 4};  // 4x^3+3x^2+2x+1
  PolyV b{2, 1};        // x+2
  auto [q, r] = pdivmod(F, a, b);
  REQUIRE(padd(F, pmul(F, q, b), r) == a);
  REQUIRE(pdeg(r) < pdeg(b));
  REQUIRE(peval(F, a, 3) == (1 + 2 * 3 + 3 * 9 + 4 * 27) % 5);

  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    PolyV f(4), g(3);
    for (auto& c : f) c = rng.below(5);
    for (auto& c : g) c = rng.below(5);
    pnorm(f);
    pnorm(g);
    if (pis_zero(f) || pis_zero(g)) continue;
    PolyV gg, s, t;
    pgcd_ext(F, f, g, gg, s, t);
    REQUIRE(padd(F, pmul(F, s, f), pmul(F, t, g)) == gg);
    REQUIRE(pgcd(F, f, g) == gg);
  }
}

TEST_CASE("factorization with multiplicities and p-th powers") {
  const FieldCtx* F = fq_make(3, 1);
  PolyV u1{1, 1};        // x+1
  PolyV u2{1, 2, 0, 1};  // x^3-x+1 = x^3+2x+1, no roots in F_3
  REQUIRE(pis_irreducible(F, u2));
  PolyV f = pmul(F, u1, pmul(F, u2, pmul(F, u2, u2)));  // (x+1)(x^3+2x+1)^3
  auto fac = pfactor(F, f);
  REQUIRE(fac.size() == 2);
  bool saw1 = false, saw2 = false;
  for (auto& [p, e] : fac) {
    if (p == u1) { REQUIRE(e == 1); saw1 = true; }
    if (p == u2) { REQUIRE(e == 3); saw2 = true; }
  }
  REQUIRE((saw1 && saw2));
}

TEST_CASE("roots") {
  const FieldCtx* F = fq_make(7, 1);
  PolyV f{5, 0, 1};  // x^2 - 2
  auto rts = proots(F, f);
  REQUIRE(rts == std::vector<u64>{3, 4});
}

TEST_CASE("irreducible enumeration matches the Moebius count") {
  const FieldCtx* F2 = fq_make(2, 1);
  REQUIRE(count_irreducibles(2, 1) == 2);
  REQUIRE(count_irreducibles(2, 2) == 1);
  REQUIRE(count_irreducibles(2, 3) == 2);
  REQUIRE(count_irreducibles(2, 4) == 3);
  REQUIRE(count_irreducibles(2, 5) == 6);
  for (int d = 1; d <= 5; ++d) {
    auto irr = irreducibles_of_degree(F2, d);
    REQUIRE(mpz_class((unsigned long)irr.size()) == count_irreducibles(2, d));
    for (size_t i = 0; i < irr.size(); ++i) {
      REQUIRE(pdeg(irr[i]) == d);
      REQUIRE(plc(irr[i]) == 1);
      REQUIRE(pis_irreducible(F2, irr[i]));
      if (i) REQUIRE(pcode_less(irr[i - 1], irr[i]));
    }
  }
  const FieldCtx* F3 = fq_make(3, 1);
  auto irr3 = irreducibles_of_degree(F3, 2);
  REQUIRE(irr3 == std::vector<PolyV>{{1, 0, 1}, {2, 1, 1}, {2, 2, 1}});
  // Over a non-prime base: F_4, degree 2 has (16-4)/2 = 6 irreducibles.
  const FieldCtx* F4 = fq_make(2, 2);
  auto irr4 = irreducibles_of_degree(F4, 2);
  REQUIRE(irr4.size() == 6);
  for (auto& f : irr4) REQUIRE(pis_irreducible(F4, f));
}

TEST_CASE("resultants") {
  const FieldCtx* F = fq_make(7, 1);
  // res(f, x-a) = f(a)
  PolyV f{1, 0, 1};  // x^2+1
  for (u64 a = 0; a < 7; ++a)
    REQUIRE(presultant(F, f, PolyV{F->neg(a), 1}) == peval(F, f, a));
  // res(f,g) = 0 iff common factor
  PolyV g = pmul(F, PolyV{3, 1}, PolyV{5, 1});
  REQUIRE(presultant(F, pmul(F, f, PolyV{3, 1}), g) == 0);
  // multiplicativity res(fg, h) = res(f,h) res(g,h)
  PolyV h{2, 3, 1};
  u64 lhs = presultant(F, pmul(F, f, g), h);
  u64 rhs = F->mul(presultant(F, f, h), presultant(F, g, h));
  REQUIRE(lhs == rhs);
}

TEST_CASE("embeddings respect field structure") {
  const FieldCtx* F4 = fq_make(2, 2);
  const FieldCtx* F16 = fq_make(2, 4);
  const Embed* em = embed_map(F4, F16);
  for (u64 a = 0; a < 4; ++a)
    for (u64 b = 0; b < 4; ++b) {
      REQUIRE(em->apply(F4->add(a, b)) == F16->add(em->apply(a), em->apply(b)));
      REQUIRE(em->apply(F4->mul(a, b)) == F16->mul(em->apply(a), em->apply(b)));
    }
  // image = fixed points of x -> x^4
  int in_sub = 0;
  for (u64 z = 0; z < 16; ++z) {
    bool fixed = F16->pow(z, 4) == z;
    auto pre = em->preimage(z);
    REQUIRE(pre.has_value() == fixed);
    if (pre) {
      REQUIRE(em->apply(*pre) == z);
      ++in_sub;
    }
  }
  REQUIRE(in_sub == 4);
}

TEST_CASE("smith normal form") {
  ZMat A(2, 2);
  A.at(0, 0) = 2; A.at(0, 1) = 4;
  A.at(1, 0) = 6; A.at(1, 1) = 8;
  SmithForm S = smith_normal_form(A);
  REQUIRE(matmul(matmul(S.U, A), S.V) == S.D);
  auto d = S.diag();
  REQUIRE(d == std::vector<mpz_class>{2, 4});
  mpz_class du = zdet(S.U), dv = zdet(S.V);
  REQUIRE((du == 1 || du == -1));
  REQUIRE((dv == 1 || dv == -1));

  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    ZMat B(3, 4);
    for (auto& v : B.a) v = (long)rng.range(-9, 9);
    SmithForm T = smith_normal_form(B);
    REQUIRE(matmul(matmul(T.U, B), T.V) == T.D);
    mpz_class u1 = zdet(T.U), v1 = zdet(T.V);
    REQUIRE((u1 == 1 || u1 == -1));
    REQUIRE((v1 == 1 || v1 == -1));
    auto dg = T.diag();
    for (size_t i = 0; i + 1 < dg.size(); ++i) {
      REQUIRE(dg[i] >= 0);
      if (dg[i] != 0) REQUIRE(dg[i + 1] % dg[i] == 0);
      else REQUIRE(dg[i + 1] == 0);
    }
    // off-diagonal zero
    for (int i = 0; i < T.D.r; ++i)
      for (int j = 0; j < T.D.c; ++j)
        if (i != j) REQUIRE(T.D.at(i, j) == 0);
  }
}

TEST_CASE("hermite form and membership certificates") {
  ZMat B(2, 2);
  B.at(0, 0) = 1; B.at(0, 1) = 2;
  B.at(1, 0) = 3; B.at(1, 1) = 4;
  HermiteForm H = hnf_rows(B);
  REQUIRE(matmul(H.U, B) == H.H);
  REQUIRE(hnf_membership({{1, 2}, {3, 4}}, {4, 6}));
  REQUIRE(hnf_membership({{1, 2}, {3, 4}}, {1, 0}));
  REQUIRE_FALSE(hnf_membership({{1, 2}, {3, 4}}, {0, 1}));

  auto co = rowspan_coeffs(B, {1, 0});
  REQUIRE(co.has_value());
  std::vector<mpz_class> back = matvec_left(*co, B);
  REQUIRE(back == std::vector<mpz_class>{1, 0});

  ZMat A(3, 2);
  A.at(0, 0) = 1; A.at(0, 1) = 2;
  A.at(1, 0) = 2; A.at(1, 1) = 4;
  A.at(2, 0) = 3; A.at(2, 1) = 6;
  ZMat K = left_kernel(A);
  REQUIRE(K.r == 2);
  for (int i = 0; i < K.r; ++i) {
    std::vector<mpz_class> x(K.c);
    for (int j = 0; j < K.c; ++j) x[j] = K.at(i, j);
    auto y = matvec_left(x, A);
    for (auto& v : y) REQUIRE(v == 0);
  }
}

TEST_CASE("modular solve") {
  ZMat A(2, 2);
  A.at(0, 0) = 2; A.at(1, 1) = 3;
  auto x = solve_mod(A, {1, 0}, 5);
  REQUIRE(x.has_value());
  // A acts on column vectors: check A x = b mod 5
  mpz_class r0 = (A.at(0, 0) * (*x)[0] + A.at(0, 1) * (*x)[1]) % 5;
  mpz_class r1 = (A.at(1, 0) * (*x)[0] + A.at(1, 1) * (*x)[1]) % 5;
  REQUIRE(r0 == 1);
  REQUIRE(r1 == 0);
}

TEST_CASE("determinants and char polys") {
  ZMat A(3, 3);
  long vals[9] = {2, -1, 0, 1, 3, 4, 0, 5, 1};
  for (int i = 0; i < 9; ++i) A.a[i] = vals[i];
  // det = 2(3-20) +1(1-0) + 0 = -34 + 1 = -33
  REQUIRE(zdet(A) == -33);

  ZMat R(2, 2);
  R.at(0, 1) = 1;
  R.at(1, 0) = -1;
  auto cp = det_one_minus_uA(R);  // rotation: 1 + u^2
  REQUIRE(cp == std::vector<mpz_class>{1, 0, 1});

  ZMat J(2, 2);
  J.at(0, 0) = 1; J.at(0, 1) = 1; J.at(1, 1) = 1;
  auto cp2 = det_one_minus_uA(J);  // (1-u)^2
  REQUIRE(cp2 == std::vector<mpz_class>{1, -2, 1});

  REQUIRE(rank_mod_p(A, 3) == 2);  // det = -33 vanishes mod 3
  REQUIRE(rank_mod_p(A, 5) == 3);
  ZMat M2(2, 2);
  M2.at(0, 0) = 1; M2.at(0, 1) = 2;
  M2.at(1, 0) = 3; M2.at(1, 1) = 6;
  REQUIRE(rank_mod_p(M2, 5) == 1);
  REQUIRE(rank_mod_p(M2, 3) == 1);  // second row = 3*(1,2) = 0 mod 3
}
