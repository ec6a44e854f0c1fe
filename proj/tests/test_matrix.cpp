// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "thermobloch/matrix.hpp"

using namespace thermobloch::num;
using BF = BigFloat;
using C = Cx<BF>;

namespace {
// deterministic generator shared across the numeric tests
struct Rng {
  unsigned long long s;
  double operator()() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
  }
};

Matrix<BF> random_matrix(int n, long bits, Rng& rng, double scale = 1.0) {
  Matrix<BF> m(n, n, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = C::make(rng() * scale, rng() * scale, bits);
  return m;
}
}  // namespace

TEST_CASE("lu solves and inverts") {
  const long bits = 106;
  Rng rng{7};
  Matrix<BF> a = random_matrix(8, bits, rng);
  Lu<BF> lu(a);
  REQUIRE(!lu.singular());
  Matrix<BF> inv = lu.inverse();
  double r = Rt<BF>::to_double(residual_inverse(a, inv));
  CHECK(r < 1e-28);
}

TEST_CASE("lu determinant of known matrices") {
  const long bits = 106;
  Matrix<BF> m = Matrix<BF>::identity(5, bits);
  m(0, 0) = C::make(2.0, 0.0, bits);
  m(3, 3) = C::make(0.0, 3.0, bits);  // det = 6i
  Lu<BF> lu(m);
  C d = lu.det();
  CHECK(std::fabs(d.re.to_double()) < 1e-30);
  CHECK(std::fabs(d.im.to_double() - 6.0) < 1e-30);
}

TEST_CASE("singular detection") {
  const long bits = 106;
  Matrix<BF> m(3, 3, bits);
  m(0, 0) = C::one(bits);
  m(1, 1) = C::one(bits);  // third row/col zero
  Lu<BF> lu(m);
  REQUIRE(lu.singular());
  std::vector<C> b(3, C::one(bits));
  CHECK_THROWS_AS(lu.solve(b), SingularMatrixError);
}

TEST_CASE("balancing preserves the spectrum data exactly") {
  const long bits = 106;
  Rng rng{13};
  Matrix<BF> a = random_matrix(6, bits, rng);
  // grade it badly
  for (int j = 0; j < 6; ++j) {
    a(0, j) *= 1e9;
    a(j, 5) *= 1e-7;
  }
  Matrix<BF> b = a;
  balance_in_place(b);
  // trace is a similarity invariant and power-of-two scaling is exact
  C ta = a.trace(), tb = b.trace();
  CHECK(abs(ta - tb).to_double() == 0.0);
  CHECK(Rt<BF>::to_double(b.norm1()) <= Rt<BF>::to_double(a.norm1()));
}

TEST_CASE("norms") {
  const long bits = 106;
  Matrix<BF> m(2, 2, bits);
  m(0, 0) = C::make(3.0, -4.0, bits);
  m(1, 0) = C::make(-1.0, 0.0, bits);
  m(0, 1) = C::make(0.0, 2.0, bits);
  CHECK(std::fabs(Rt<BF>::to_double(m.norm1()) - 8.0) < 1e-30);  // col 0: |3|+|4|+1
  CHECK(std::fabs(Rt<BF>::to_double(m.max_abs()) - 7.0) < 1e-30);
}
