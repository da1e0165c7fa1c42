#pragma once

#include <vector>

#include "crossflow/params.hpp"
#include "crossflow/types.hpp"

namespace crossflow {

// Finite-volume solver for the 1D counterflow system on the periodic unit
// interval, cells centered at (i+1/2)h:
//   d_t r = -d_x((1-rho) r) [+ eps d_x((1-b) d_x r + r d_x b)]
//   d_t b = +d_x((1-rho) b) [+ eps d_x((1-r) d_x b + b d_x r)]
// First-order upwind advection (face coefficient = arithmetic mean of
// 1-rho, transported density upwinded by its sign), central diffusion with
// arithmetic-mean face coefficients, explicit midpoint in time. The b
// update runs the r kernel on spatially mirrored fields with the species
// swapped, so the reflection symmetry of the system is exact in floating
// point.

// Largest stable step 0.4*min(h/S, h^2/(4*eps*D)) with S the max
// characteristic modulus over cells and D = max(1, 2*gamma0+gamma1+gamma2).
double dt_stable_1d(const Field1D& f, const ModelParams& p, PdeMode mode);

// Flux-divergence right-hand side; exact telescoping gives machine-level
// mass conservation per species.
void pde1d_rhs(const Field1D& f, const ModelParams& p, PdeMode mode,
               std::vector<double>& dr, std::vector<double>& db);

// One midpoint step. Returns the number of cells clamped from tiny
// negative values (within -1e-8) back to zero; larger box violations or
// NaNs throw SolverAbort.
long pde1d_step(Field1D& f, const ModelParams& p, PdeMode mode, double dt);

// Vacancy/imbalance change of variables xi = 1-rho, eta = r-b and its
// inverse; the inverse throws when the pair violates |eta| <= 1-xi or
// xi in [0,1] beyond 1e-12.
XiEtaField to_xi_eta(const Field1D& f);
Field1D from_xi_eta(const XiEtaField& f);

// Solver for the transformed system
//   d_t xi  = d_x(eta xi) + eps d_x^2 xi
//   d_t eta = -d_x(xi(1-xi)) + eps d_x(xi d_x eta - eta d_x xi)
// with upwind transport of xi by the face mean of -eta and central fluxes
// for eta; both cell means are conserved exactly.
double dt_stable_xieta(const XiEtaField& f, const ModelParams& p);
void xieta_rhs(const XiEtaField& f, const ModelParams& p,
               std::vector<double>& dxi, std::vector<double>& deta);
long xieta_step(XiEtaField& f, const ModelParams& p, double dt);

// Pointwise residuals of the stationary first-integral relations
//   res_r = -(1-rho) r + eps((1-b) d_x r + r d_x b)
//   res_b = +(1-rho) b + eps((1-r) d_x b + b d_x r)
// with periodic central differences; both vanish on a stationary profile.
void stationary_residual_1d(const Field1D& f, double epsilon,
                            std::vector<double>& res_r, std::vector<double>& res_b);

} // namespace crossflow
