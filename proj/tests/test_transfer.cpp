// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "thermobloch/transfer.hpp"

using namespace thermobloch;
using namespace thermobloch::transfer;
using BF = num::BigFloat;
using C = num::Cx<BF>;
using num::Matrix;
constexpr long kBits = 106;

namespace {
materials::PhaseCoefficients phase1() {
  return materials::derive_coefficients(materials::sofc_phase1());
}
materials::PhaseCoefficients phase2() {
  return materials::derive_coefficients(materials::sofc_phase2());
}
double d(const BF& x) { return x.to_double(); }
C cm(double re, double im = 0.0) { return C::make(re, im, kBits); }

TransferOptions<BF> opts() {
  TransferOptions<BF> o;
  o.bits = kBits;
  return o;
}
}  // namespace

TEST_CASE("zero thickness gives the identity") {
  LayerSpec l{phase1(), 0.0};
  auto tm = layer_transfer(l, cm(0), cm(0), cm(250), opts());
  auto diff = tm.T - Matrix<BF>::identity(8, kBits);
  CHECK(d(diff.norm1()) < 1e-28);
  CHECK(d(tm.det_residual) < 1e-28);
}

TEST_CASE("shear block equals the classical elastic layer matrix") {
  // k1 = 0 decouples (u1, sigma21); the closed 1-D shear solution is the
  // independent oracle, evaluated with the same extended-precision scalars.
  // The series exponential preserves the decoupled block structure exactly
  // even when the diffusive modes dwarf the elastic ones.
  auto c = phase1();
  LayerSpec l{c, 1e-3};
  const double w = 4.2e6;  // within the first folds
  auto o = opts();
  o.method = ExpMethod::series;
  auto tm = layer_transfer(l, cm(0), cm(0), cm(w), o);
  BF cs = sqrt(BF(c.G, kBits) / c.rho);
  BF kap = BF(w, kBits) / cs;
  BF arg = kap * l.thickness;
  BF cosv = cos(arg), sinv = sin(arg);
  BF gk = kap * c.G;
  CHECK(std::fabs(d(tm.T(0, 0).re - cosv)) < 1e-18);
  CHECK(std::fabs(d(tm.T(0, 4).re - sinv / gk)) < 1e-18 * std::fabs(d(sinv / gk)));
  CHECK(std::fabs(d(tm.T(4, 0).re + sinv * gk)) < 1e-18 * std::fabs(d(sinv * gk)));
  CHECK(std::fabs(d(tm.T(4, 4).re - cosv)) < 1e-18);
  CHECK(std::fabs(d(tm.T(0, 0).im)) < 1e-18);
  // shear row decouples from everything else
  for (int j : {1, 2, 3, 5, 6, 7}) CHECK(d(abs1(tm.T(0, j))) < 1e-20);
}

TEST_CASE("thermal block equals the classical conduction layer matrix") {
  auto c = materials::apply_coupling(phase1(), {0.0});
  LayerSpec l{c, 1e-3};
  const double w = 200.0;
  auto tm = layer_transfer(l, cm(0), cm(0), cm(w), opts());
  // theta'' = s^2 theta with s^2 = -i w p / K; state (theta, -K theta')
  C s2 = cm(0, -w) * (BF(c.p, kBits) / BF(c.K, kBits));
  C s = sqrt(s2);
  C sl = s * l.thickness;
  C ch = (exp(sl) + exp(-sl)) * 0.5;
  C sh = (exp(sl) - exp(-sl)) * 0.5;
  CHECK(d(abs(tm.T(2, 2) - ch)) < 1e-28 * d(abs(ch)));
  C want01 = -(sh / (s * c.K));
  CHECK(d(abs(tm.T(2, 6) - want01)) < 1e-28 * d(abs(want01)));
  C want10 = -(sh * s * c.K);
  CHECK(d(abs(tm.T(6, 2) - want10)) < 1e-28 * d(abs(want10)));
}

TEST_CASE("transfer matrix does not depend on k2") {
  CellSpec cell{{{phase1(), 1e-3}, {phase2(), 1e-3}}};
  const double L = cell.period();
  auto t0 = cell_transfer(cell, cm(0), cm(0), cm(5e3), opts());
  for (double k2 : {1.0 / L, 3.14159265358979 / L}) {
    auto tk = cell_transfer(cell, cm(0), cm(k2), cm(5e3), opts());
    CHECK(d((t0.T - tk.T).norm1() / t0.T.norm1()) < 1e-18);
  }
  // also with k1 fixed nonzero
  auto s0 = cell_transfer(cell, cm(0.5 * 3.14159 / L), cm(0), cm(5e3), opts());
  auto s1 = cell_transfer(cell, cm(0.5 * 3.14159 / L), cm(2.0 / L), cm(5e3), opts());
  CHECK(d((s0.T - s1.T).norm1() / s0.T.norm1()) < 1e-20);
}

TEST_CASE("exponential semigroup across identical layers") {
  CellSpec two{{{phase1(), 0.7e-3}, {phase1(), 0.7e-3}}};
  CellSpec one{{{phase1(), 1.4e-3}}};
  auto t2 = cell_transfer(two, cm(0), cm(0), cm(3e3), opts());
  auto t1 = cell_transfer(one, cm(0), cm(0), cm(3e3), opts());
  CHECK(d((t2.T - t1.T).norm1() / t1.T.norm1()) < 1e-25);
}

TEST_CASE("single-layer cell equals the layer transfer") {
  CellSpec cell{{{phase2(), 1e-3}}};
  auto tc = cell_transfer(cell, cm(0), cm(0), cm(777), opts());
  auto tl = layer_transfer(cell.layers[0], cm(0), cm(0), cm(777), opts());
  CHECK(d((tc.T - tl.T).norm1()) == 0.0);
}

TEST_CASE("SOFC bilayer symplecticity at omega* = 1e4") {
  CellSpec cell{{{phase1(), 1e-3}, {phase2(), 1e-3}}};
  auto tm = cell_transfer(cell, cm(0), cm(0), cm(1e4), opts());
  CHECK(d(tm.det_residual) <= 1e-20);
}

TEST_CASE("shear sub-block is identical across coupling factors") {
  const double w = 3.3e6;
  auto o = opts();
  o.method = ExpMethod::series;  // preserves the decoupled block exactly
  std::vector<Matrix<BF>> blocks;
  for (double delta : {0.0, 0.5, 1.0}) {
    CellSpec cell{{{materials::apply_coupling(phase1(), {delta}), 1e-3},
                   {materials::apply_coupling(phase2(), {delta}), 1e-3}}};
    auto tm = cell_transfer(cell, cm(0), cm(0), cm(w), o);
    Matrix<BF> blk(2, 2, kBits);
    blk(0, 0) = tm.T(0, 0);
    blk(0, 1) = tm.T(0, 4);
    blk(1, 0) = tm.T(4, 0);
    blk(1, 1) = tm.T(4, 4);
    blocks.push_back(blk);
  }
  CHECK(d((blocks[0] - blocks[1]).norm1() / blocks[0].norm1()) < 1e-18);
  CHECK(d((blocks[0] - blocks[2]).norm1() / blocks[0].norm1()) < 1e-18);
}

TEST_CASE("series in k1: constant term and linear structure") {
  LayerSpec l{phase1(), 1e-3};
  SeriesOptions so;
  so.bits = kBits;
  auto poly = series_transfer_k1<BF>(l, cm(0), cm(1e2), 4, so);
  REQUIRE(poly.converged);
  auto exact0 = layer_transfer(l, cm(0), cm(0), cm(1e2), opts());
  // the adaptive truncation stops at 1e-12 of the accumulated norm
  CHECK(d((poly.c[0] - exact0.T).norm1() / exact0.T.norm1()) < 1e-11);

  // H1 = linear-in-k1 part of the generator has entries only where the
  // field equations couple through k1: rows 1..4 of the reduced system
  // pattern extracted at k2 = 0: nonzero k2 adds the k1 k2 cross-stiffness
  // entries of C to the linear part
  auto gen = [&](double k1v) {
    auto abc = assembly::build_abc_isotropic<BF>(l.coefficients, cm(k1v), cm(0),
                                                 cm(1e2), kBits);
    return assembly::build_mn(abc).MinvN * (-l.thickness);
  };
  auto xp = gen(1.0), xm = gen(-1.0), x0 = gen(0.0);
  auto h1 = (xp - xm) * 0.5;
  auto h2 = (xp + xm) * 0.5 - x0;
  const std::pair<int, int> h1_expected[] = {{0, 1}, {1, 0}, {0, 6}, {0, 7},
                                             {2, 4}, {3, 4}};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      bool expected = false;
      for (auto [a, b] : h1_expected) expected = expected || (i == a && j == b);
      if (!expected) {
        CAPTURE(i, j);
        CHECK(d(abs1(h1(i, j))) == 0.0);
      }
    }
  CHECK(d(abs1(h1(0, 1))) > 0.0);
  CHECK(d(abs1(h1(2, 4))) > 0.0);
  // H2: quadratic terms sit on the diagonal of the A^-1 C block
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      bool expected = (i < 4 && j == i + 4);
      if (!expected) {
        CAPTURE(i, j);
        CHECK(d(abs1(h2(i, j))) == 0.0);
      }
    }
}

TEST_CASE("series in k1 converges to the exact transfer") {
  LayerSpec l{phase1(), 1e-3};
  const double L = 2e-3;
  const double k1 = 0.1 / L;  // k1* = 0.1
  const double w = 1e2;
  SeriesOptions so;
  so.bits = kBits;
  so.eval_radius = k1;
  auto exact = layer_transfer(l, cm(k1), cm(0), cm(w), opts());
  double prev = 1e300;
  for (int order : {2, 4, 6}) {
    auto poly = series_transfer_k1<BF>(l, cm(0), cm(w), order, so);
    auto approx = poly.evaluate(cm(k1));
    double rel = d((approx - exact.T).norm1() / exact.T.norm1());
    CAPTURE(order, rel);
    CHECK(rel < prev);
    prev = rel;
  }
  CHECK(prev < 1e-8);
}

TEST_CASE("series in omega: constant term and quadratic structure") {
  LayerSpec l{phase1(), 1e-3};
  SeriesOptions so;
  so.bits = kBits;
  auto poly = series_transfer_omega<BF>(l, cm(0), cm(0), 4, so);
  REQUIRE(poly.converged);
  auto exact0 = layer_transfer(l, cm(0), cm(0), cm(0), opts());
  CHECK(d((poly.c[0] - exact0.T).norm1() / exact0.T.norm1()) < 1e-24);

  auto gen = [&](double wv) {
    auto abc = assembly::build_abc_isotropic<BF>(l.coefficients, cm(0), cm(0),
                                                 cm(wv), kBits);
    return assembly::build_mn(abc).MinvN * (-l.thickness);
  };
  auto xp = gen(1.0), xm = gen(-1.0), x0 = gen(0.0);
  auto g2 = (xp + xm) * 0.5 - x0;
  // only the inertial rho w^2 terms are quadratic: rows 1-2 of A^-1 C
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      bool expected = (i < 2 && j == i + 4);
      if (!expected) {
        CAPTURE(i, j);
        CHECK(d(abs1(g2(i, j))) == 0.0);
      }
    }
  CHECK(d(abs1(g2(0, 4))) > 0.0);
  CHECK(d(abs1(g2(1, 5))) > 0.0);
}

TEST_CASE("series in omega converges to the exact transfer") {
  // omega* = 5 keeps the thermal expansion parameter w p l^2 / K near 4, the
  // convergent regime where truncation errors fall monotonically
  LayerSpec l{phase1(), 1e-3};
  const double w = 5.0;
  SeriesOptions so;
  so.bits = kBits;
  so.eval_radius = w;
  auto exact = layer_transfer(l, cm(0), cm(0), cm(w), opts());
  double prev = 1e300;
  for (int order : {2, 4, 6, 8}) {
    auto poly = series_transfer_omega<BF>(l, cm(0), cm(0), order, so);
    auto approx = poly.evaluate(cm(w));
    double rel = d((approx - exact.T).norm1() / exact.T.norm1());
    CAPTURE(order, rel);
    CHECK(rel < prev);
    prev = rel;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("polynomial multiply: identities") {
  LayerSpec l{phase1(), 1e-3};
  SeriesOptions so;
  so.bits = kBits;
  auto poly = series_transfer_omega<BF>(l, cm(0), cm(0), 3, so);
  PolyMatrix<BF> ident;
  ident.var = PolyVar::omega;
  ident.tail_bound = num::Rt<BF>::make(0.0, kBits);
  ident.c = {Matrix<BF>::identity(8, kBits)};
  auto prod = poly_multiply_truncate(poly, ident, 3);
  for (int m = 0; m <= 3; ++m)
    CHECK(d((prod.c[m] - poly.c[m]).norm1()) == 0.0);

  // (I + xA)(I - xA) truncated at order 1 is the identity
  PolyMatrix<BF> plus = ident, minus = ident;
  Matrix<BF> a(8, 8, kBits);
  a(0, 3) = C::make(2.0, -1.0, kBits);
  a(5, 5) = C::make(0.5, 0.25, kBits);
  plus.c.push_back(a);
  minus.c.push_back(a * -1.0);
  auto p2 = poly_multiply_truncate(plus, minus, 1);
  CHECK(d((p2.c[0] - Matrix<BF>::identity(8, kBits)).norm1()) == 0.0);
  CHECK(d(p2.c[1].norm1()) == 0.0);

  // variable mismatch must throw
  PolyMatrix<BF> other = ident;
  other.var = PolyVar::k1;
  CHECK_THROWS_AS(poly_multiply_truncate(plus, other, 1), std::invalid_argument);
}

TEST_CASE("bilayer cell series tightens with order") {
  CellSpec cell{{{phase1(), 1e-3}, {phase2(), 1e-3}}};
  const double w = 5.0;
  SeriesOptions so;
  so.bits = kBits;
  so.eval_radius = w;
  auto exact = cell_transfer(cell, cm(0), cm(0), cm(w), opts());
  double errs[2];
  int oi = 0;
  for (int order : {4, 6}) {
    PolyMatrix<BF> prod;
    bool first = true;
    for (const auto& layer : cell.layers) {
      auto lp = series_transfer_omega<BF>(layer, cm(0), cm(0), order, so);
      prod = first ? lp : poly_multiply_truncate(lp, prod, order);
      first = false;
    }
    auto approx = prod.evaluate(cm(w));
    errs[oi++] = d((approx - exact.T).norm1() / exact.T.norm1());
  }
  CHECK(errs[1] < errs[0]);
}

TEST_CASE("amplitude matrix coincides with P Gamma at k1 = 0") {
  auto c = phase1();
  auto k2 = cm(150.0);
  auto w = cm(900.0);
  auto abc = assembly::build_abc_isotropic<BF>(c, cm(0), k2, w, kBits);
  auto mn = assembly::build_mn(abc);
  auto eig = num::eigen_decompose(mn.MinvN);
  auto om = amplitude_matrix(c, eig.vectors, cm(0), k2);
  auto bm = assembly::build_boundary_map<BF>(c, k2, kBits);
  auto pg = bm.P * eig.vectors;
  CHECK(d((om - pg).norm1() / pg.norm1()) < 1e-24);
}

TEST_CASE("cell validation") {
  CellSpec empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  CellSpec zero{{{phase1(), 0.0}}};
  CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}
