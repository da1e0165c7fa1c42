#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "crossflow/params.hpp"
#include "crossflow/types.hpp"

namespace crossflow {

enum : std::uint8_t { CellEmpty = 0, CellRed = 1, CellBlue = 2 };

enum class Scheduler { Synchronous, RandomSequential };

// Deterministic uniform draws shared by every stochastic component: a
// mt19937_64 stream mapped to [0,1) via the top 53 bits, so trajectories
// are reproducible across platforms for a fixed seed.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed = 0) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    // uniform integer in [0, n)
    int uniform_int(int n) {
        int k = static_cast<int>(uniform() * n);
        return k >= n ? n - 1 : k;
    }
};

// Occupancy grid of the exclusion walk; one byte per site, row-major j*n+i,
// periodic in both axes.
struct LatticeState {
    int n = 0;
    std::vector<std::uint8_t> cells;
    long step_count = 0;
    Rng rng;

    LatticeState() = default;
    LatticeState(int n_, std::uint64_t seed)
        : n(n_), cells(static_cast<size_t>(n_) * n_, CellEmpty), rng(seed) {}

    std::uint8_t at(int i, int j) const {
        return cells[static_cast<size_t>(Array2D::mod(j, n)) * n + Array2D::mod(i, n)];
    }
    bool occupied(int i, int j) const { return at(i, j) != CellEmpty; }
};

// Move distribution of one walker in its logical frame: forward along the
// drift axis, side step against (gamma1) or with (gamma2) the crossing
// group's drift, or stay. For red walkers (drift +x) these are right, down,
// up, stay; for blue (drift +y) they are up, left, right, stay.
struct MoveProbs {
    double fwd = 0, side_minus = 0, side_plus = 0, stay = 1;
};

// Both throw std::invalid_argument when the cell does not hold the claimed
// species, and SolverAbort when the stay probability goes negative beyond
// rounding (an actual step-probability overflow, possible even under the
// printed parameter predicate).
MoveProbs transition_probs_red(const LatticeState& s, int i, int j, const ModelParams& p);
MoveProbs transition_probs_blue(const LatticeState& s, int i, int j, const ModelParams& p);

// One update of every walker. Synchronous: moves are sampled from the
// time-t state; walkers contesting the same empty target are resolved by a
// uniform winner draw, losers stay. Draws happen in a fixed order (walker
// proposals row-major, then contested targets row-major), so trajectories
// are seed-deterministic. RandomSequential: a fresh uniform permutation of
// walkers, each moving on the partially updated occupancy.
void lattice_step(LatticeState& s, const ModelParams& p, Scheduler sched);

// Scatter round(rho_omega*n^2) walkers uniformly without overlap,
// round(red_fraction*P) of them red.
void populate_random(LatticeState& s, double rho_omega, double red_fraction);

long count_species(const LatticeState& s, std::uint8_t species);

// Block-averaged occupancy fraction on a blocks x blocks grid; species_mask
// is a bit-or of the species to count (CellRed | CellBlue for total
// density). n must be a multiple of blocks.
Array2D coarse_grain(const LatticeState& s, int blocks, int species_mask);

} // namespace crossflow
