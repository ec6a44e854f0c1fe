// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "thermobloch/materials.hpp"
#include "thermobloch/matrix.hpp"

namespace thermobloch::assembly {

using materials::PhaseCoefficients;
using num::Cx;
using num::Lu;
using num::Matrix;
using num::Rt;

struct AssemblyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Second-order operator A w'' + B w' + C w = 0 for one homogeneous layer.
template <class R>
struct AbcMatrices {
  Matrix<R> A, B, C;
  Cx<R> k1, k2, omega;
};

template <class R>
struct MnMatrices {
  Matrix<R> M, N;
  Matrix<R> Minv;    // block-diagonal [[A^-1, 0], [0, I]]
  Matrix<R> MinvN;   // generator of the first-order flow
};

// P = [[0, I], [R_mat, i k2 R_mat + S]] maps (w', w) to the generalized
// field/traction vector; its inverse is available in closed form because
// R_mat is diagonal.
template <class R>
struct BoundaryMap {
  Matrix<R> P, Pinv;
  Matrix<R> Rmat, Smat;
  R inverse_residual;
};

// Plane-strain isotropic layer matrices.
template <class R>
AbcMatrices<R> build_abc_isotropic(const PhaseCoefficients& c, const Cx<R>& k1,
                                   const Cx<R>& k2, const Cx<R>& omega,
                                   long bits) {
  AbcMatrices<R> m{Matrix<R>(4, 4, bits), Matrix<R>(4, 4, bits),
                   Matrix<R>(4, 4, bits), k1, k2, omega};
  const double G = c.c1212();
  const double c2222 = c.c2222();
  const double over = 1.0 / (1.0 - 2.0 * c.nu);  // G/(1-2nu) couplings
  auto rc = [&](double d) { return Cx<R>::make(d, 0.0, bits); };
  const Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);

  m.A(0, 0) = rc(G);
  m.A(1, 1) = rc(c2222);
  m.A(2, 2) = rc(c.K);
  m.A(3, 3) = rc(c.D);

  const Cx<R> ik1Gov = iu * k1 * (G * over);
  m.B(0, 0) = iu * k2 * (2.0 * G);
  m.B(0, 1) = ik1Gov;
  m.B(1, 0) = ik1Gov;
  m.B(1, 1) = iu * k2 * (2.0 * c2222);
  m.B(1, 2) = rc(-c.alpha);
  m.B(1, 3) = rc(-c.beta);
  m.B(2, 1) = iu * omega * c.alpha;
  m.B(2, 2) = iu * k2 * (2.0 * c.K);
  m.B(3, 1) = iu * omega * c.beta;
  m.B(3, 3) = iu * k2 * (2.0 * c.D);

  const Cx<R> rw2 = omega * omega * c.rho;
  const Cx<R> k12 = k1 * k1;
  const Cx<R> k22 = k2 * k2;
  const Cx<R> kk = k1 * k2;
  m.C(0, 0) = rw2 - k12 * c2222 - k22 * G;
  m.C(0, 1) = -(kk * (G * over));
  m.C(0, 2) = -(iu * k1 * c.alpha);
  m.C(0, 3) = -(iu * k1 * c.beta);
  m.C(1, 0) = m.C(0, 1);
  m.C(1, 1) = rw2 - k12 * G - k22 * c2222;
  m.C(1, 2) = -(iu * k2 * c.alpha);
  m.C(1, 3) = -(iu * k2 * c.beta);
  m.C(2, 0) = -(omega * k1 * c.alpha);
  m.C(2, 1) = -(omega * k2 * c.alpha);
  m.C(2, 2) = iu * omega * c.p - (k12 + k22) * c.K;
  m.C(2, 3) = iu * omega * c.psi;
  m.C(3, 0) = -(omega * k1 * c.beta);
  m.C(3, 1) = -(omega * k2 * c.beta);
  m.C(3, 2) = m.C(2, 3);
  m.C(3, 3) = iu * omega * c.q - (k12 + k22) * c.D;
  return m;
}

// Full anisotropic tensor inputs. C is indexed C[i][j][h][k] with i,... in
// {0,1}; minor and major symmetries are required, as is symmetry of the
// second-order tensors.
struct AnisotropicSet {
  double C[2][2][2][2] = {};
  double alpha[2][2] = {};
  double beta[2][2] = {};
  double K[2][2] = {};
  double D[2][2] = {};
  double rho = 0, p = 0, q = 0, psi = 0;
};

inline void validate(const AnisotropicSet& s, double rel_tol = 1e-12) {
  double cmax = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int h = 0; h < 2; ++h)
        for (int k = 0; k < 2; ++k) cmax = std::max(cmax, std::abs(s.C[i][j][h][k]));
  const double tol = rel_tol * (cmax > 0 ? cmax : 1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int h = 0; h < 2; ++h)
        for (int k = 0; k < 2; ++k) {
          if (std::abs(s.C[i][j][h][k] - s.C[j][i][h][k]) > tol ||
              std::abs(s.C[i][j][h][k] - s.C[i][j][k][h]) > tol ||
              std::abs(s.C[i][j][h][k] - s.C[h][k][i][j]) > tol)
            throw AssemblyError("anisotropic: elasticity tensor lacks symmetry");
        }
  auto sym2 = [&](const double (&t)[2][2], const char* name) {
    double m = std::max({std::abs(t[0][0]), std::abs(t[0][1]), std::abs(t[1][0]),
                         std::abs(t[1][1]), 1e-300});
    if (std::abs(t[0][1] - t[1][0]) > rel_tol * m)
      throw AssemblyError(std::string("anisotropic: tensor ") + name +
                          " must be symmetric");
  };
  sym2(s.alpha, "alpha");
  sym2(s.beta, "beta");
  sym2(s.K, "K");
  sym2(s.D, "D");
}

inline AnisotropicSet isotropic_lift(const PhaseCoefficients& c) {
  AnisotropicSet s;
  const double c2222 = c.c2222(), c1122 = c.c1122(), g = c.c1212();
  s.C[0][0][0][0] = c2222;
  s.C[1][1][1][1] = c2222;
  s.C[0][0][1][1] = s.C[1][1][0][0] = c1122;
  s.C[0][1][0][1] = s.C[0][1][1][0] = s.C[1][0][0][1] = s.C[1][0][1][0] = g;
  s.alpha[0][0] = s.alpha[1][1] = c.alpha;
  s.beta[0][0] = s.beta[1][1] = c.beta;
  s.K[0][0] = s.K[1][1] = c.K;
  s.D[0][0] = s.D[1][1] = c.D;
  s.rho = c.rho;
  s.p = c.p;
  s.q = c.q;
  s.psi = c.psi;
  return s;
}

// Layer matrices from the Bloch-amplitude PDEs specialized to constant
// properties. Fields are ordered (u1, u2, θ, η); w' enters through A and B.
template <class R>
AbcMatrices<R> build_abc_anisotropic(const AnisotropicSet& s, const Cx<R>& k1,
                                     const Cx<R>& k2, const Cx<R>& omega,
                                     long bits) {
  validate(s);
  AbcMatrices<R> m{Matrix<R>(4, 4, bits), Matrix<R>(4, 4, bits),
                   Matrix<R>(4, 4, bits), k1, k2, omega};
  const Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);
  const Cx<R> kv[2] = {k1, k2};
  auto rc = [&](double d) { return Cx<R>::make(d, 0.0, bits); };

  // elastic rows
  for (int i = 0; i < 2; ++i) {
    for (int h = 0; h < 2; ++h) {
      m.A(i, h) = rc(s.C[i][1][h][1]);
      Cx<R> acc = Cx<R>::zero(bits);
      for (int j = 0; j < 2; ++j)
        acc += kv[j] * (s.C[i][j][h][1] + s.C[i][1][h][j]);
      m.B(i, h) = iu * acc;
      Cx<R> quad = Cx<R>::zero(bits);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) quad += kv[j] * kv[k] * s.C[i][j][h][k];
      m.C(i, h) = -quad;
      if (i == h) m.C(i, h) += omega * omega * s.rho;
    }
    m.B(i, 2) = rc(-s.alpha[i][1]);
    m.B(i, 3) = rc(-s.beta[i][1]);
    Cx<R> ath = Cx<R>::zero(bits);
    Cx<R> bth = Cx<R>::zero(bits);
    for (int j = 0; j < 2; ++j) {
      ath += kv[j] * s.alpha[i][j];
      bth += kv[j] * s.beta[i][j];
    }
    m.C(i, 2) = -(iu * ath);
    m.C(i, 3) = -(iu * bth);
  }
  // thermal row
  m.A(2, 2) = rc(s.K[1][1]);
  for (int i = 0; i < 2; ++i) {
    m.B(2, i) = iu * omega * s.alpha[i][1];
    Cx<R> acc = Cx<R>::zero(bits);
    for (int j = 0; j < 2; ++j) acc += kv[j] * s.alpha[i][j];
    m.C(2, i) = -(omega * acc);
  }
  {
    Cx<R> acc = Cx<R>::zero(bits);
    for (int j = 0; j < 2; ++j) acc += kv[j] * s.K[1][j];
    m.B(2, 2) = iu * acc * 2.0;
    Cx<R> quad = Cx<R>::zero(bits);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) quad += kv[i] * kv[j] * s.K[i][j];
    m.C(2, 2) = iu * omega * s.p - quad;
    m.C(2, 3) = iu * omega * s.psi;
  }
  // diffusive row
  m.A(3, 3) = rc(s.D[1][1]);
  for (int i = 0; i < 2; ++i) {
    m.B(3, i) = iu * omega * s.beta[i][1];
    Cx<R> acc = Cx<R>::zero(bits);
    for (int j = 0; j < 2; ++j) acc += kv[j] * s.beta[i][j];
    m.C(3, i) = -(omega * acc);
  }
  {
    Cx<R> acc = Cx<R>::zero(bits);
    for (int j = 0; j < 2; ++j) acc += kv[j] * s.D[1][j];
    m.B(3, 3) = iu * acc * 2.0;
    Cx<R> quad = Cx<R>::zero(bits);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) quad += kv[i] * kv[j] * s.D[i][j];
    m.C(3, 3) = iu * omega * s.q - quad;
    m.C(3, 2) = iu * omega * s.psi;
  }
  return m;
}

// First-order reduction M r' + N r = 0 with r = (w', w).
template <class R>
MnMatrices<R> build_mn(const AbcMatrices<R>& abc) {
  const long bits = abc.A.bits();
  MnMatrices<R> mn{Matrix<R>(8, 8, bits), Matrix<R>(8, 8, bits),
                   Matrix<R>(8, 8, bits), Matrix<R>(8, 8, bits)};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      mn.M(i, j) = abc.A(i, j);
      mn.N(i, j) = abc.B(i, j);
      mn.N(i, j + 4) = abc.C(i, j);
    }
    mn.M(i + 4, i + 4) = Cx<R>::one(bits);
    mn.N(i + 4, i) = -Cx<R>::one(bits);
  }
  Lu<R> lu(abc.A);
  if (lu.singular())
    throw num::SingularMatrixError(
        "build_mn: A is singular (vanishing stiffness/conductivity/diffusivity)");
  Matrix<R> ainv = lu.inverse();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      mn.Minv(i, j) = ainv(i, j);
      Cx<R> accB = Cx<R>::zero(bits);
      Cx<R> accC = Cx<R>::zero(bits);
      for (int k = 0; k < 4; ++k) {
        accB += ainv(i, k) * abc.B(k, j);
        accC += ainv(i, k) * abc.C(k, j);
      }
      mn.MinvN(i, j) = accB;
      mn.MinvN(i, j + 4) = accC;
    }
    mn.Minv(i + 4, i + 4) = Cx<R>::one(bits);
    mn.MinvN(i + 4, i) = -Cx<R>::one(bits);
  }
  return mn;
}

template <class R>
BoundaryMap<R> build_boundary_map(const PhaseCoefficients& c, const Cx<R>& k2,
                                  long bits) {
  if (c.G == 0 || c.K == 0 || c.D == 0)
    throw num::SingularMatrixError("boundary map: R matrix is singular");
  BoundaryMap<R> bm{Matrix<R>(8, 8, bits), Matrix<R>(8, 8, bits),
                    Matrix<R>(4, 4, bits), Matrix<R>(4, 4, bits),
                    Rt<R>::make(0.0, bits)};
  auto rc = [&](double d) { return Cx<R>::make(d, 0.0, bits); };
  const Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);
  const double rdiag[4] = {c.c1212(), c.c2222(), -c.K, -c.D};
  for (int i = 0; i < 4; ++i) bm.Rmat(i, i) = rc(rdiag[i]);
  bm.Smat(1, 2) = rc(-c.alpha);
  bm.Smat(1, 3) = rc(-c.beta);

  for (int i = 0; i < 4; ++i) {
    bm.P(i, i + 4) = Cx<R>::one(bits);
    bm.P(i + 4, i) = bm.Rmat(i, i);
    bm.P(i + 4, i + 4) = iu * k2 * bm.Rmat(i, i);
  }
  bm.P(5, 6) += bm.Smat(1, 2);
  bm.P(5, 7) += bm.Smat(1, 3);

  // closed-form inverse: [[-(ik2 I + R^-1 S), R^-1], [I, 0]]
  for (int i = 0; i < 4; ++i) {
    bm.Pinv(i, i) = -(iu * k2);
    bm.Pinv(i, i + 4) = Cx<R>::one(bits) / bm.Rmat(i, i);
    bm.Pinv(i + 4, i) = Cx<R>::one(bits);
  }
  bm.Pinv(1, 2) = -(bm.Smat(1, 2) / bm.Rmat(1, 1));
  bm.Pinv(1, 3) = -(bm.Smat(1, 3) / bm.Rmat(1, 1));

  bm.inverse_residual = num::residual_inverse(bm.P, bm.Pinv);
  return bm;
}

}  // namespace thermobloch::assembly
