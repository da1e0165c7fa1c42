#pragma once

#include "crossflow/params.hpp"
#include "crossflow/types.hpp"

namespace crossflow {

// Deterministic mean-field counterpart of the lattice walk: cell densities
// evolve by the expected per-step transition balance on a periodic n x n
// grid. One map step advances physical time by alpha * h.
struct CompartmentState {
    Field2D f;
    long step_count = 0;

    CompartmentState() = default;
    CompartmentState(int n, double fill_r, double fill_b)
        : f{Array2D(n, n, fill_r), Array2D(n, n, fill_b)} {}
};

// One Euler update of the red-like density `a` drifting along +x, with `b`
// the crossing density (side rates are modulated by b ahead of the mover).
// Directed fluxes are formed once and applied to both endpoints, so total
// mass is conserved to rounding. The blue update is this kernel on
// transposed fields, transposed back; the species symmetry is structural.
Array2D compartment_kernel(const Array2D& a, const Array2D& b, const ModelParams& p);

// Advances both species one step. Throws SolverAbort if the update leaves
// the admissible box (negative density or total density above 1) by more
// than 1e-12; the map does not preserve the box for all admissible inputs.
void compartment_step(CompartmentState& s, const ModelParams& p);

} // namespace crossflow
