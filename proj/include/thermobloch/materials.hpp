// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace thermobloch::materials {

struct InvalidMaterialError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raw engineering inputs for one phase, SI units throughout. The diffusive
// constants are given through the ratio rules q = (q/p) p, ψ = (ψ/p) p and
// D = (D/q) q, with direct overrides available for off-study parameters.
struct PhaseInput {
  double E = 0;           // Young's modulus [Pa]
  double nu = 0;          // Poisson ratio
  double rho = 0;         // mass density [kg/m^3]
  double Kt = 0;          // thermal conductivity [W/(m K)]
  double C_spec = 0;      // specific heat [J/(kg K)]
  double alpha_t = 0;     // linear thermal dilatation [1/K]
  double beta_t = 0;      // linear diffusive dilatation
  double D_over_q = 0;    // diffusivity ratio [m^2/s]
  double q_over_p = 0.1;
  double psi_over_p = 1.0 / 3.0;
  double T0 = 293.15;     // natural-state temperature [K]

  std::optional<double> q_direct;
  std::optional<double> psi_direct;
  std::optional<double> D_direct;
};

// Normalized per-layer constitutive scalars entering the field equations.
struct PhaseCoefficients {
  double rho = 0;
  double G = 0;      // shear modulus [Pa]
  double nu = 0;
  double alpha = 0;  // thermal stress coupling [Pa/K]
  double beta = 0;   // diffusive stress coupling
  double K = 0;      // conductivity normalized by T0
  double D = 0;      // mass diffusivity
  double p = 0;      // thermal capacity, rho C / T0
  double q = 0;      // diffusive capacity
  double psi = 0;    // thermodiffusive coupling

  // plane-strain stiffnesses derived from (G, nu)
  double c1212() const { return G; }
  double c2222() const { return 2.0 * G * (1.0 - nu) / (1.0 - 2.0 * nu); }
  double c1122() const { return 2.0 * G * nu / (1.0 - 2.0 * nu); }
  double c1111() const { return c2222(); }
};

struct CouplingFactor {
  double delta = 1.0;
  bool extrapolated() const { return delta > 1.0; }
};

inline void validate(const PhaseInput& in) {
  auto fail = [](const std::string& msg) { throw InvalidMaterialError(msg); };
  if (!(in.E > 0)) fail("phase: E must be positive");
  if (!(in.rho > 0)) fail("phase: rho must be positive");
  if (!(in.nu > -1.0 && in.nu < 0.5))
    fail("phase: nu must lie in (-1, 0.5); nu = 0.5 makes the plane-strain "
         "modulus singular");
  if (!(in.Kt > 0)) fail("phase: Kt must be positive");
  if (!(in.C_spec > 0)) fail("phase: specific heat must be positive");
  if (!(in.T0 > 0)) fail("phase: T0 must be positive");
  if (!(in.D_over_q > 0) && !in.D_direct) fail("phase: D_over_q must be positive");
  if (!(in.q_over_p > 0) && !in.q_direct) fail("phase: q_over_p must be positive");
}

inline PhaseCoefficients derive_coefficients(const PhaseInput& in) {
  validate(in);
  PhaseCoefficients c;
  c.rho = in.rho;
  c.nu = in.nu;
  c.G = in.E / (2.0 * (1.0 + in.nu));
  const double stress_scale = 2.0 * c.G * (1.0 + in.nu) / (1.0 - 2.0 * in.nu);
  c.alpha = stress_scale * in.alpha_t;
  c.beta = stress_scale * in.beta_t;
  c.K = in.Kt / in.T0;
  c.p = in.rho * in.C_spec / in.T0;
  c.q = in.q_direct ? *in.q_direct : in.q_over_p * c.p;
  c.psi = in.psi_direct ? *in.psi_direct : in.psi_over_p * c.p;
  c.D = in.D_direct ? *in.D_direct : in.D_over_q * c.q;
  if (!(c.q > 0)) throw InvalidMaterialError("phase: derived q must be positive");
  if (!(c.D > 0)) throw InvalidMaterialError("phase: derived D must be positive");
  return c;
}

// Scale the coupling coefficients α, β, ψ by δ; everything else unchanged.
inline PhaseCoefficients apply_coupling(const PhaseCoefficients& c,
                                        const CouplingFactor& f) {
  if (f.delta < 0)
    throw InvalidMaterialError("coupling factor must be non-negative");
  PhaseCoefficients out = c;
  out.alpha = c.alpha * f.delta;
  out.beta = c.beta * f.delta;
  out.psi = c.psi * f.delta;
  return out;
}

// SOFC bi-layer study parameters: phase 1 is the YSZ electrolyte, phase 2 a
// Ni-based electrode composite.
inline PhaseInput sofc_phase1() {
  PhaseInput p;
  p.E = 155e9;
  p.nu = 0.3;
  p.rho = 5532;
  p.Kt = 2.64;
  p.C_spec = 400;
  p.alpha_t = 2.2205e-6;
  p.beta_t = 2.2205e-7;
  p.D_over_q = 0.9e-5;
  return p;
}
inline PhaseInput sofc_phase2() {
  PhaseInput p;
  p.E = 50e9;
  p.nu = 0.25;
  p.rho = 6670;
  p.Kt = 9.96;
  p.C_spec = 440;
  p.alpha_t = 3.8858e-6;
  p.beta_t = 3.8858e-7;
  p.D_over_q = 0.73e-5;
  return p;
}

}  // namespace thermobloch::materials
