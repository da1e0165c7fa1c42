#include "crossflow/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace crossflow {

namespace {

// Shared move kernel in the walker's logical frame; both species differ
// only in the frame vectors and in which crossing species modulates the
// side rates, so the red/blue symmetry holds by construction.
MoveProbs move_kernel(const LatticeState& s, int i, int j, const ModelParams& p,
                      int fx, int fy, int mx, int my, int px, int py,
                      std::uint8_t other) {
    MoveProbs q;
    const bool ahead_occ = s.occupied(i + fx, j + fy);
    const double cross = (s.at(i + fx, j + fy) == other) ? 1.0 : 0.0;
    q.fwd = p.alpha * (ahead_occ ? 0.0 : 1.0);
    q.side_minus = p.alpha * (s.occupied(i + mx, j + my) ? 0.0 : 1.0) *
                   (p.gamma0 + p.gamma1 * cross);
    q.side_plus = p.alpha * (s.occupied(i + px, j + py) ? 0.0 : 1.0) *
                  (p.gamma0 + p.gamma2 * cross);
    q.stay = 1.0 - q.fwd - q.side_minus - q.side_plus;
    if (q.stay < -1e-12)
        throw SolverAbort("walker step probabilities exceed 1; reduce alpha or the side rates");
    if (q.stay < 0.0) q.stay = 0.0;
    return q;
}

// Destination of one sampled move; -1 encodes stay. Cumulative intervals in
// the fixed order fwd, side-, side+, stay.
int sample_move(const MoveProbs& q, double u, int i, int j, int n,
                int fx, int fy, int mx, int my, int px, int py) {
    auto idx = [n](int a, int b) {
        return static_cast<int>(Array2D::mod(b, n)) * n + Array2D::mod(a, n);
    };
    double c = q.fwd;
    if (u < c) return idx(i + fx, j + fy);
    c += q.side_minus;
    if (u < c) return idx(i + mx, j + my);
    c += q.side_plus;
    if (u < c) return idx(i + px, j + py);
    return -1;
}

struct Frame {
    int fx, fy, mx, my, px, py;
    std::uint8_t other;
};

Frame frame_of(std::uint8_t species) {
    // red drifts +x, side steps are -y (gamma1) and +y (gamma2);
    // blue drifts +y, side steps are -x (gamma1) and +x (gamma2).
    if (species == CellRed) return {1, 0, 0, -1, 0, 1, CellBlue};
    return {0, 1, -1, 0, 1, 0, CellRed};
}

} // namespace

MoveProbs transition_probs_red(const LatticeState& s, int i, int j, const ModelParams& p) {
    if (s.at(i, j) != CellRed)
        throw std::invalid_argument("transition_probs_red: cell does not hold a red walker");
    const Frame f = frame_of(CellRed);
    return move_kernel(s, i, j, p, f.fx, f.fy, f.mx, f.my, f.px, f.py, f.other);
}

MoveProbs transition_probs_blue(const LatticeState& s, int i, int j, const ModelParams& p) {
    if (s.at(i, j) != CellBlue)
        throw std::invalid_argument("transition_probs_blue: cell does not hold a blue walker");
    const Frame f = frame_of(CellBlue);
    return move_kernel(s, i, j, p, f.fx, f.fy, f.mx, f.my, f.px, f.py, f.other);
}

namespace {

void step_synchronous(LatticeState& s, const ModelParams& p) {
    const int n = s.n;
    const int n2 = n * n;
    // Phase 1: every walker samples a move from the time-t state, row-major.
    std::vector<int> target(n2, -1);
    for (int c = 0; c < n2; ++c) {
        const std::uint8_t sp = s.cells[c];
        if (sp == CellEmpty) continue;
        const int i = c % n, j = c / n;
        const Frame f = frame_of(sp);
        const MoveProbs q = move_kernel(s, i, j, p, f.fx, f.fy, f.mx, f.my, f.px, f.py, f.other);
        const double u = s.rng.uniform();
        target[c] = sample_move(q, u, i, j, n, f.fx, f.fy, f.mx, f.my, f.px, f.py);
    }
    // Phase 2: bucket movers by target. Move probabilities carry a
    // (1 - occupancy) factor from the time-t state, so every proposed
    // target was empty at time t and conflicts are only mover vs mover.
    std::vector<int> head(n2, -1), tail(n2, -1), next(n2, -1), cnt(n2, 0);
    for (int c = 0; c < n2; ++c) {
        const int t = target[c];
        if (t < 0 || s.cells[c] == CellEmpty) continue;
        if (head[t] < 0) head[t] = c;
        else next[tail[t]] = c;
        tail[t] = c;
        ++cnt[t];
    }
    // Phase 3: stayers keep their cell (nobody proposes into an occupied
    // cell); contested targets draw a uniform winner, row-major.
    std::vector<std::uint8_t> fresh(n2, CellEmpty);
    for (int c = 0; c < n2; ++c)
        if (s.cells[c] != CellEmpty && target[c] < 0) fresh[c] = s.cells[c];
    for (int t = 0; t < n2; ++t) {
        if (cnt[t] == 0) continue;
        int w = head[t];
        if (cnt[t] > 1) {
            int k = s.rng.uniform_int(cnt[t]);
            while (k-- > 0) w = next[w];
        }
        for (int c = head[t]; c >= 0; c = next[c])
            if (c == w) fresh[t] = s.cells[c];
            else fresh[c] = s.cells[c];
    }
    s.cells.swap(fresh);
}

void step_random_sequential(LatticeState& s, const ModelParams& p) {
    const int n = s.n;
    std::vector<int> walkers;
    walkers.reserve(s.cells.size());
    for (int c = 0; c < n * n; ++c)
        if (s.cells[c] != CellEmpty) walkers.push_back(c);
    for (int i = static_cast<int>(walkers.size()) - 1; i > 0; --i)
        std::swap(walkers[i], walkers[s.rng.uniform_int(i + 1)]);
    // Each walker moves on the partially updated occupancy; a walker's
    // recorded cell is still its location when processed because every
    // walker moves at most once per sweep.
    for (int c : walkers) {
        const std::uint8_t sp = s.cells[c];
        const int i = c % n, j = c / n;
        const Frame f = frame_of(sp);
        const MoveProbs q = move_kernel(s, i, j, p, f.fx, f.fy, f.mx, f.my, f.px, f.py, f.other);
        const double u = s.rng.uniform();
        const int t = sample_move(q, u, i, j, n, f.fx, f.fy, f.mx, f.my, f.px, f.py);
        if (t >= 0) {
            s.cells[c] = CellEmpty;
            s.cells[t] = sp;
        }
    }
}

} // namespace

void lattice_step(LatticeState& s, const ModelParams& p, Scheduler sched) {
    require_rates(p);
    if (sched == Scheduler::Synchronous) step_synchronous(s, p);
    else step_random_sequential(s, p);
    ++s.step_count;
}

void populate_random(LatticeState& s, double rho_omega, double red_fraction) {
    if (rho_omega < 0 || rho_omega > 1 || red_fraction < 0 || red_fraction > 1)
        throw std::invalid_argument("populate_random: fractions must lie in [0,1]");
    const int n2 = s.n * s.n;
    const long total = std::lround(rho_omega * n2);
    const long reds = std::lround(red_fraction * static_cast<double>(total));
    std::vector<int> perm(n2);
    for (int c = 0; c < n2; ++c) perm[c] = c;
    // Partial Fisher-Yates: only the first `total` slots are needed.
    for (long i = 0; i < total; ++i) {
        const int k = static_cast<int>(i) + s.rng.uniform_int(n2 - static_cast<int>(i));
        std::swap(perm[i], perm[k]);
    }
    std::fill(s.cells.begin(), s.cells.end(), CellEmpty);
    for (long i = 0; i < total; ++i)
        s.cells[perm[i]] = i < reds ? CellRed : CellBlue;
}

long count_species(const LatticeState& s, std::uint8_t species) {
    long c = 0;
    for (std::uint8_t v : s.cells)
        if (v == species) ++c;
    return c;
}

Array2D coarse_grain(const LatticeState& s, int blocks, int species_mask) {
    if (blocks <= 0 || s.n % blocks != 0)
        throw std::invalid_argument("coarse_grain: block count must divide the lattice size");
    const int m = s.n / blocks;
    Array2D out(blocks, blocks, 0.0);
    for (int j = 0; j < s.n; ++j)
        for (int i = 0; i < s.n; ++i) {
            const std::uint8_t v = s.cells[static_cast<size_t>(j) * s.n + i];
            if (v != CellEmpty && (species_mask & v))
                out.at(i / m, j / m) += 1.0;
        }
    const double inv = 1.0 / (static_cast<double>(m) * m);
    for (double& x : out.v) x *= inv;
    return out;
}

} // namespace crossflow
