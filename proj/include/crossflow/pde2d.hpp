#pragma once

#include "crossflow/params.hpp"
#include "crossflow/types.hpp"

namespace crossflow {

// Finite-volume solver for the planar two-species system on the unit
// square, cells centered at ((i+1/2)h, (j+1/2)h):
//   d_t r + div J_r = 0,  J_r = ((1-rho) r, (g2-g1)(1-rho) b r) + eps terms
//   d_t b + div J_b = 0,  J_b mirrored under (x,y) and (r,b) swap.
// The parabolic correction to J_r is
//   x: -eps[(1-rho) d_x r + r d_x rho]
//   y: -eps[(g1+g2)((1-rho) d_y(rb) + br d_y rho)
//          + 2 g0((1-rho) d_y r + r d_y rho)
//          + 2(g1-g2)(1-rho) r d_x b].
// Advective face fluxes use the arithmetic mean of the per-cell coefficient
// and upwind the transported density by its sign; diffusive fluxes use
// central differences with arithmetic-mean face coefficients. Time stepping
// is explicit midpoint. The b tendency is computed by running the r kernel
// on transposed fields with the species swapped and transposing back, so
// the swap symmetry of the system is exact in floating point.
//
// Boundary conditions: Periodic wraps both axes. Mixed drives a channel
// flow: each species has a Dirichlet inflow ghost (value bc.inflow_value)
// on the face it drifts away from (x=0 for r, y=0 for b), an outflow face
// with flux bc.outflux_coeff * (adjacent cell density) on the face it
// drifts into (x=1 for r, y=1 for b), and zero normal flux on its two
// transverse edges; the crossing species is extended by zero-gradient
// ghosts where its value is needed. Mixed requires the parabolic mode.

struct StepResult2d {
    long clamped = 0;        // cells clamped from tiny negatives to zero
    double exit_flux_r = 0;  // integral of the r flux through x=1 (Mixed)
    double exit_flux_b = 0;  // integral of the b flux through y=1 (Mixed)
};

// Largest stable step 0.4*min(h/S, h^2/(4*eps*D)) with S the maximal
// eigenvalue modulus of the directional quasi-linear matrices over cells
// and D = max(1, 2*gamma0+gamma1+gamma2).
double dt_stable_2d(const Field2D& f, const ModelParams& p, PdeMode mode);

// Flux-divergence tendencies; optional exit-flux integrals through the
// outflow faces (meaningful for Mixed boundaries).
void pde2d_rhs(const Field2D& f, const ModelParams& p, PdeMode mode,
               const BoundaryDescriptor& bc, Array2D& dr, Array2D& db,
               double* exit_r = nullptr, double* exit_b = nullptr);

// One midpoint step. Exit fluxes are evaluated at the midpoint stage, the
// one whose divergence actually advances the solution, so the reported
// outflow matches the mass balance of the step. Negative densities within
// -1e-8 are clamped to zero and counted; anything worse, a total density
// above 1 + 1e-8, or a non-finite value throws SolverAbort.
StepResult2d pde2d_step(Field2D& f, const ModelParams& p, PdeMode mode,
                        const BoundaryDescriptor& bc, double dt);

// Pointwise advective flux vectors at a homogeneous state; gradients of a
// uniform field vanish so the eps terms contribute nothing.
void flux_point_2d(double r, double b, const ModelParams& p,
                   double& jrx, double& jry, double& jbx, double& jby);

} // namespace crossflow
