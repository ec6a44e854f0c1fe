// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "thermobloch/assembly.hpp"
#include "thermobloch/matexp.hpp"

using namespace thermobloch;
using namespace thermobloch::num;
using BF = BigFloat;
using C = Cx<BF>;

namespace {
struct Rng {
  unsigned long long s;
  double operator()() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
  }
};
}  // namespace

TEST_CASE("exp of zero is the identity") {
  const long bits = 106;
  Matrix<BF> z(8, 8, bits);
  auto e = exp_series(z);
  auto diff = e - Matrix<BF>::identity(8, bits);
  CHECK(Rt<BF>::to_double(diff.norm1()) == 0.0);
}

TEST_CASE("exp of a diagonal matrix") {
  const long bits = 106;
  Matrix<BF> d(4, 4, bits);
  const double vals[4] = {0.5, -2.0, 3.25, 0.0};
  for (int i = 0; i < 4; ++i) d(i, i) = C::make(vals[i], 0.0, bits);
  auto e = exp_series(d);
  for (int i = 0; i < 4; ++i) {
    BF want = exp(BF(vals[i], bits));
    CHECK(std::fabs(Rt<BF>::to_double((e(i, i).re - want) / want)) < 1e-30);
  }
}

TEST_CASE("nilpotent exponential terminates exactly") {
  const long bits = 106;
  Matrix<BF> n(2, 2, bits);
  n(0, 1) = C::make(3.5, 0.0, bits);
  auto e = exp_series(n);
  CHECK(e(0, 0).re.to_double() == 1.0);
  CHECK(e(0, 1).re.to_double() == 3.5);
  CHECK(e(1, 0).re.to_double() == 0.0);
  CHECK(e(1, 1).re.to_double() == 1.0);
}

TEST_CASE("group inverse: exp(F) exp(-F) = I") {
  const long bits = 106;
  Rng rng{3};
  Matrix<BF> f(8, 8, bits);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) f(i, j) = C::make(rng() * 2, rng() * 2, bits);
  auto ep = exp_series(f);
  auto em = exp_series(f * -1.0);
  auto prod = ep * em;
  auto diff = prod - Matrix<BF>::identity(8, bits);
  CHECK(Rt<BF>::to_double(diff.norm1()) < 1e-28);
}

TEST_CASE("cross-method agreement on random well-conditioned matrices") {
  const long bits = 106;
  Rng rng{11};
  double worst = 0;
  for (int rep = 0; rep < 5; ++rep) {
    Matrix<BF> f(8, 8, bits);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) f(i, j) = C::make(rng() * 2, rng() * 2, bits);
    auto es = exp_series(f);
    auto ee = exp_eigen(f);
    worst = std::max(worst, Rt<BF>::to_double((es - ee).norm1() / es.norm1()));
  }
  CHECK(worst < 1e-25);
}

TEST_CASE("degenerate spectrum signals the series fallback") {
  const long bits = 106;
  Matrix<BF> d = Matrix<BF>::identity(8, bits);  // fully degenerate
  CHECK_THROWS_AS(exp_eigen(d), DegenerateEigenvalueError);
  // the series route handles it fine
  auto e = exp_series(d);
  BF eu = exp(BF(1.0, bits));
  CHECK(std::fabs(Rt<BF>::to_double((e(0, 0).re - eu) / eu)) < 1e-30);
}

TEST_CASE("layer generator exponential: cross-method at omega* = 1e4") {
  const long bits = 106;
  auto ph1 = materials::derive_coefficients(materials::sofc_phase1());
  auto k0 = C::zero(bits);
  auto w = C::make(1e4, 0.0, bits);
  auto abc = assembly::build_abc_isotropic<BF>(ph1, k0, k0, w, bits);
  auto mn = assembly::build_mn(abc);
  Matrix<BF> x = mn.MinvN * (-1e-3);
  auto es = exp_series(x);
  auto ee = exp_eigen(x);
  double rel = Rt<BF>::to_double((es - ee).norm1() / es.norm1());
  CHECK(rel < 1e-20);
}
