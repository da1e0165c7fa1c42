#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "crossflow/lattice.hpp"
#include "crossflow/types.hpp"

using namespace crossflow;

namespace {

void put(LatticeState& s, int i, int j, std::uint8_t species) {
    s.cells[static_cast<size_t>(Array2D::mod(j, s.n)) * s.n + Array2D::mod(i, s.n)] = species;
}

} // namespace

TEST_SUITE("lattice") {

TEST_CASE("red transition tuple with an empty neighborhood") {
    LatticeState s(5, 1);
    put(s, 2, 2, CellRed);
    ModelParams p{0.5, 0.2, 0.15, 0.1, 0.0};
    MoveProbs m = transition_probs_red(s, 2, 2, p);
    CHECK(m.fwd == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.side_minus == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(m.side_plus == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(m.stay == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("red walker blocked by a blue ahead gets boosted side rates") {
    LatticeState s(5, 1);
    put(s, 2, 2, CellRed);
    put(s, 3, 2, CellBlue);
    ModelParams p{0.6, 0.15, 0.2, 0.1, 0.0};
    MoveProbs m = transition_probs_red(s, 2, 2, p);
    CHECK(m.fwd == doctest::Approx(0.0));
    CHECK(m.side_minus == doctest::Approx(0.21).epsilon(1e-14)); // against the blue drift
    CHECK(m.side_plus == doctest::Approx(0.15).epsilon(1e-14));  // with the blue drift
    CHECK(m.stay == doctest::Approx(0.64).epsilon(1e-14));
}

TEST_CASE("red walker blocked by another red keeps base side rates") {
    LatticeState s(5, 1);
    put(s, 2, 2, CellRed);
    put(s, 3, 2, CellRed);
    ModelParams p{0.6, 0.15, 0.2, 0.1, 0.0};
    MoveProbs m = transition_probs_red(s, 2, 2, p);
    CHECK(m.fwd == doctest::Approx(0.0));
    CHECK(m.side_minus == doctest::Approx(0.09).epsilon(1e-14)); // alpha*gamma0 only
    CHECK(m.side_plus == doctest::Approx(0.09).epsilon(1e-14));
}

TEST_CASE("blue transition tuples mirror the red ones") {
    ModelParams p{0.6, 0.15, 0.2, 0.1, 0.0};
    LatticeState s(5, 1);
    put(s, 2, 2, CellBlue);
    put(s, 2, 3, CellRed); // blocked ahead by red
    MoveProbs m = transition_probs_blue(s, 2, 2, p);
    CHECK(m.fwd == doctest::Approx(0.0));
    CHECK(m.side_minus == doctest::Approx(0.21).epsilon(1e-14));
    CHECK(m.side_plus == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(m.stay == doctest::Approx(0.64).epsilon(1e-14));

    LatticeState lone(5, 1);
    put(lone, 1, 1, CellBlue);
    MoveProbs l = transition_probs_blue(lone, 1, 1, p);
    CHECK(l.fwd == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(l.side_minus == doctest::Approx(0.09).epsilon(1e-14));
    CHECK(l.side_plus == doctest::Approx(0.09).epsilon(1e-14));
    CHECK(l.stay == doctest::Approx(1 - 0.6 - 0.18).epsilon(1e-13));
}

TEST_CASE("querying the wrong species throws") {
    LatticeState s(5, 1);
    put(s, 2, 2, CellBlue);
    ModelParams p;
    CHECK_THROWS_AS(transition_probs_red(s, 2, 2, p), std::invalid_argument);
    CHECK_THROWS_AS(transition_probs_blue(s, 1, 1, p), std::invalid_argument); // empty cell
}

TEST_CASE("probability overflow beyond the printed bound aborts") {
    // alpha*max{1, 2g0+g1+g2} <= 1 holds, yet fwd + both sides = 2
    ModelParams p{1.0, 0.5, 0.0, 0.0, 0.0};
    CHECK(validate_cfl(p));
    LatticeState s(5, 1);
    put(s, 2, 2, CellRed);
    CHECK_THROWS_AS(transition_probs_red(s, 2, 2, p), SolverAbort);
    CHECK_THROWS_AS(lattice_step(s, p, Scheduler::RandomSequential), SolverAbort);
}

TEST_CASE("a lone red walker with certain forward motion marches right") {
    for (Scheduler sched : {Scheduler::Synchronous, Scheduler::RandomSequential}) {
        LatticeState s(8, 3);
        put(s, 3, 4, CellRed);
        ModelParams p{1.0, 0.0, 0.2, 0.1, 0.0};
        for (int k = 0; k < 5; ++k) lattice_step(s, p, sched);
        CHECK(s.at(0, 4) == CellRed); // (3+5) mod 8
        CHECK(count_species(s, CellRed) == 1);
        CHECK(s.step_count == 5);
    }
}

TEST_CASE("a fully packed lattice cannot move") {
    for (Scheduler sched : {Scheduler::Synchronous, Scheduler::RandomSequential}) {
        LatticeState s(6, 5);
        for (int j = 0; j < 6; ++j)
            for (int i = 0; i < 6; ++i) put(s, i, j, ((i + j) % 2) ? CellRed : CellBlue);
        std::vector<std::uint8_t> before = s.cells;
        ModelParams p{0.5, 0.2, 0.15, 0.1, 0.0};
        lattice_step(s, p, sched);
        CHECK(s.cells == before);
    }
}

TEST_CASE("steps conserve per-species counts and exclusion") {
    for (Scheduler sched : {Scheduler::Synchronous, Scheduler::RandomSequential}) {
        LatticeState s(30, 17);
        populate_random(s, 0.4, 0.5);
        long red0 = count_species(s, CellRed);
        long blue0 = count_species(s, CellBlue);
        ModelParams p{0.6, 0.15, 0.2, 0.1, 0.0};
        for (int k = 0; k < 50; ++k) lattice_step(s, p, sched);
        CHECK(count_species(s, CellRed) == red0);
        CHECK(count_species(s, CellBlue) == blue0);
        for (std::uint8_t c : s.cells) CHECK(c <= CellBlue);
    }
}

TEST_CASE("identical seeds give identical trajectories, different seeds diverge") {
    for (Scheduler sched : {Scheduler::Synchronous, Scheduler::RandomSequential}) {
        LatticeState a(20, 99), b(20, 99), c(20, 100);
        populate_random(a, 0.3, 0.5);
        populate_random(b, 0.3, 0.5);
        populate_random(c, 0.3, 0.5);
        ModelParams p{0.6, 0.15, 0.2, 0.1, 0.0};
        for (int k = 0; k < 5; ++k) {
            lattice_step(a, p, sched);
            lattice_step(b, p, sched);
            lattice_step(c, p, sched);
        }
        CHECK(a.cells == b.cells);
        CHECK(a.cells != c.cells);
    }
}

TEST_CASE("populate_random places the rounded counts without overlap") {
    LatticeState s(10, 4);
    populate_random(s, 0.37, 0.6);
    CHECK(count_species(s, CellRed) == 22);  // round(0.6 * round(0.37*100))
    CHECK(count_species(s, CellBlue) == 15);
}

TEST_CASE("coarse graining averages block occupancy per species") {
    LatticeState s(4, 1);
    put(s, 0, 0, CellRed);
    put(s, 1, 1, CellBlue);
    put(s, 2, 0, CellRed);
    put(s, 3, 0, CellRed);
    put(s, 2, 1, CellRed);
    Array2D red = coarse_grain(s, 2, CellRed);
    Array2D blue = coarse_grain(s, 2, CellBlue);
    Array2D both = coarse_grain(s, 2, CellRed | CellBlue);
    CHECK(red.at(0, 0) == doctest::Approx(0.25));
    CHECK(blue.at(0, 0) == doctest::Approx(0.25));
    CHECK(both.at(0, 0) == doctest::Approx(0.5));
    CHECK(red.at(1, 0) == doctest::Approx(0.75));
    CHECK(both.at(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("synchronous step commutes with transpose plus species swap in distribution") {
    // fixed 5x5 configuration with blocking, contention, and free walkers
    const int n = 5, trials = 20000;
    auto build_a = [&](std::uint64_t seed) {
        LatticeState s(n, seed);
        put(s, 1, 2, CellRed);
        put(s, 2, 2, CellRed);
        put(s, 2, 1, CellBlue);
        put(s, 3, 1, CellBlue);
        put(s, 3, 3, CellBlue);
        return s;
    };
    auto build_b = [&](std::uint64_t seed) { // transpose + swap of A
        LatticeState s(n, seed);
        put(s, 2, 1, CellBlue);
        put(s, 2, 2, CellBlue);
        put(s, 1, 2, CellRed);
        put(s, 1, 3, CellRed);
        put(s, 3, 3, CellRed);
        return s;
    };
    ModelParams p{0.6, 0.15, 0.2, 0.1, 0.0};
    std::vector<long> red_a(n * n, 0), blue_b(n * n, 0);
    for (int t = 0; t < trials; ++t) {
        LatticeState a = build_a(1000 + t);
        lattice_step(a, p, Scheduler::Synchronous);
        LatticeState b = build_b(5000 + t);
        lattice_step(b, p, Scheduler::Synchronous);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (a.at(i, j) == CellRed) red_a[j * n + i]++;
                if (b.at(i, j) == CellBlue) blue_b[j * n + i]++;
            }
    }
    // P_A[red at (i,j)] must equal P_B[blue at (j,i)] within 3 sigma
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double pa = red_a[j * n + i] / double(trials);
            double pb = blue_b[i * n + j] / double(trials);
            double sig = std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / trials);
            CHECK(std::fabs(pa - pb) <= 3.0 * sig + 1e-9);
        }
}

} // TEST_SUITE("lattice")
