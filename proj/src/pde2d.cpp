#include "crossflow/pde2d.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "crossflow/stability.hpp"

namespace crossflow {

namespace {

// (n+2)^2 scratch with a one-cell ghost rim; G(i,j) = cell (i-1, j-1).
struct Ghosted {
    int n = 0;
    std::vector<double> v;
    explicit Ghosted(int n_) : n(n_), v(static_cast<size_t>(n_ + 2) * (n_ + 2)) {}
    double& at(int i, int j) { return v[static_cast<size_t>(j) * (n + 2) + i]; }
    double at(int i, int j) const { return v[static_cast<size_t>(j) * (n + 2) + i]; }
};

void fill_periodic(const Array2D& a, Ghosted& g) {
    const int n = a.nx;
    for (int j = 0; j <= n + 1; ++j)
        for (int i = 0; i <= n + 1; ++i)
            g.at(i, j) = a.at(Array2D::mod(i - 1, n), Array2D::mod(j - 1, n));
}

// Mixed-frame ghosts: the mover gets a Dirichlet inflow column at x=0 and
// zero-gradient extensions elsewhere; the crossing species is zero-gradient
// on every edge. Ghost corners inherit from the ghost columns, which only
// feeds transverse gradients at edge faces.
void fill_mixed(const Array2D& a, Ghosted& g, bool mover, double inflow) {
    const int n = a.nx;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            g.at(i + 1, j + 1) = a.at(i, j);
    for (int j = 1; j <= n; ++j) {
        g.at(0, j) = mover ? inflow : g.at(1, j);
        g.at(n + 1, j) = g.at(n, j);
    }
    for (int i = 0; i <= n + 1; ++i) {
        g.at(i, 0) = g.at(i, 1);
        g.at(i, n + 1) = g.at(i, n);
    }
}

// Tendency of the +x drifting species with density a and crossing density
// o. Returns the outflow integral through x=1 via *exit when non-null.
Array2D species_rhs_2d(const Array2D& a, const Array2D& o, const ModelParams& p,
                       PdeMode mode, const BoundaryDescriptor& bc, double* exit) {
    const int n = a.nx;
    const double h = 1.0 / n;
    const bool mixed = bc.kind == BoundaryKind::Mixed;
    const bool parab = mode == PdeMode::Parabolic;
    const double g0 = p.gamma0, g1 = p.gamma1, g2 = p.gamma2, eps = p.epsilon;

    Ghosted A(n), O(n);
    if (mixed) {
        fill_mixed(a, A, true, bc.inflow_value);
        fill_mixed(o, O, false, 0.0);
    } else {
        fill_periodic(a, A);
        fill_periodic(o, O);
    }

    // Fx(fi, j): flux through the x-face at x = fi*h in cell row j.
    std::vector<double> Fx(static_cast<size_t>(n + 1) * n);
    auto fx = [&](int fi, int j) -> double& { return Fx[static_cast<size_t>(fi) * n + j]; };
    for (int fi = 0; fi <= n; ++fi)
        for (int j = 0; j < n; ++j) {
            if (mixed && fi == n) {
                fx(fi, j) = bc.outflux_coeff * a.at(n - 1, j);
                continue;
            }
            const int il = fi, ir = fi + 1, jj = j + 1; // ghosted coords
            const double aL = A.at(il, jj), aR = A.at(ir, jj);
            const double oL = O.at(il, jj), oR = O.at(ir, jj);
            const double availL = 1.0 - aL - oL, availR = 1.0 - aR - oR;
            const double c = 0.5 * (availL + availR);
            double flux = c * (c >= 0.0 ? aL : aR);
            if (parab) {
                const double ga = (aR - aL) / h;
                const double grho = ((aR + oR) - (aL + oL)) / h;
                const double af = 0.5 * (aL + aR);
                flux -= eps * (c * ga + af * grho);
            }
            fx(fi, j) = flux;
        }

    // Fy(i, fj): flux through the y-face at y = fj*h in cell column i.
    std::vector<double> Fy(static_cast<size_t>(n) * (n + 1));
    auto fy = [&](int i, int fj) -> double& { return Fy[static_cast<size_t>(fj) * n + i]; };
    for (int fj = 0; fj <= n; ++fj)
        for (int i = 0; i < n; ++i) {
            if (mixed && (fj == 0 || fj == n)) {
                fy(i, fj) = 0.0; // no transverse leakage for the mover
                continue;
            }
            const int jd = fj, ju = fj + 1, ii = i + 1; // ghosted coords
            const double aD = A.at(ii, jd), aU = A.at(ii, ju);
            const double oD = O.at(ii, jd), oU = O.at(ii, ju);
            const double availD = 1.0 - aD - oD, availU = 1.0 - aU - oU;
            // side-step drift coefficient (g2-g1)(1-rho)o, per cell then
            // face-averaged
            const double c = (g2 - g1) * 0.5 * (availD * oD + availU * oU);
            double flux = c * (c >= 0.0 ? aD : aU);
            if (parab) {
                const double ga = (aU - aD) / h;
                const double grho = ((aU + oU) - (aD + oD)) / h;
                const double gao = (aU * oU - aD * oD) / h;
                const double availf = 0.5 * (availD + availU);
                const double af = 0.5 * (aD + aU);
                const double aof = 0.5 * (aD * oD + aU * oU);
                // transverse gradient of the crossing density: mean of the
                // two cells' central x-differences
                const double dxo = 0.5 * ((O.at(ii + 1, jd) - O.at(ii - 1, jd)) +
                                          (O.at(ii + 1, ju) - O.at(ii - 1, ju))) /
                                   (2.0 * h);
                flux -= eps * ((g1 + g2) * (availf * gao + aof * grho) +
                               2.0 * g0 * (availf * ga + af * grho) +
                               2.0 * (g1 - g2) * availf * af * dxo);
            }
            fy(i, fj) = flux;
        }

    if (exit) {
        KahanSum s;
        for (int j = 0; j < n; ++j) s.add(fx(n, j));
        *exit = s.value() * h;
    }

    Array2D da(n, n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            da.at(i, j) = -(fx(i + 1, j) - fx(i, j)) / h - (fy(i, j + 1) - fy(i, j)) / h;
    return da;
}

long enforce_box_2d(Field2D& f) {
    constexpr double tol = 1e-8;
    long clamped = 0;
    const int n = f.n();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double& r = f.r.at(i, j);
            double& b = f.b.at(i, j);
            if (!std::isfinite(r) || !std::isfinite(b))
                throw SolverAbort("2D solver produced a non-finite value");
            if (r < 0.0 || b < 0.0 || r + b > 1.0 + tol) {
                if (r < -tol || b < -tol || r + b > 1.0 + tol) {
                    char msg[160];
                    std::snprintf(msg, sizeof msg,
                                  "2D solver left the density box at cell (%d,%d): r=%.17g b=%.17g",
                                  i, j, r, b);
                    throw SolverAbort(msg);
                }
                if (r < 0.0) { r = 0.0; ++clamped; }
                if (b < 0.0) { b = 0.0; ++clamped; }
            }
        }
    return clamped;
}

} // namespace

double dt_stable_2d(const Field2D& f, const ModelParams& p, PdeMode mode) {
    const int n = f.n();
    const double h = f.h();
    double smax = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            smax = std::max(smax, max_wave_speed_2d(f.r.at(i, j), f.b.at(i, j), p));
    double dt = smax > 0.0 ? h / smax : HUGE_VAL;
    if (mode == PdeMode::Parabolic && p.epsilon > 0.0) {
        const double dmax = std::max(1.0, 2.0 * p.gamma0 + p.gamma1 + p.gamma2);
        dt = std::min(dt, h * h / (4.0 * p.epsilon * dmax));
    }
    if (!std::isfinite(dt)) throw SolverAbort("2D time step bound is degenerate");
    return 0.4 * dt;
}

void pde2d_rhs(const Field2D& f, const ModelParams& p, PdeMode mode,
               const BoundaryDescriptor& bc, Array2D& dr, Array2D& db,
               double* exit_r, double* exit_b) {
    require_rates(p);
    if (bc.kind == BoundaryKind::Mixed && mode != PdeMode::Parabolic)
        throw std::invalid_argument("mixed boundaries require the parabolic mode");
    dr = species_rhs_2d(f.r, f.b, p, mode, bc, exit_r);
    // b drifts toward +y: same kernel in the transposed frame.
    db = species_rhs_2d(f.b.transposed(), f.r.transposed(), p, mode, bc, exit_b).transposed();
}

StepResult2d pde2d_step(Field2D& f, const ModelParams& p, PdeMode mode,
                        const BoundaryDescriptor& bc, double dt) {
    const int n = f.n();
    StepResult2d res;
    Array2D dr(n, n), db(n, n);
    pde2d_rhs(f, p, mode, bc, dr, db);
    Field2D half = f;
    for (size_t c = 0; c < half.r.v.size(); ++c) {
        half.r.v[c] += 0.5 * dt * dr.v[c];
        half.b.v[c] += 0.5 * dt * db.v[c];
    }
    pde2d_rhs(half, p, mode, bc, dr, db, &res.exit_flux_r, &res.exit_flux_b);
    for (size_t c = 0; c < f.r.v.size(); ++c) {
        f.r.v[c] += dt * dr.v[c];
        f.b.v[c] += dt * db.v[c];
    }
    res.clamped = enforce_box_2d(f);
    return res;
}

void flux_point_2d(double r, double b, const ModelParams& p,
                   double& jrx, double& jry, double& jbx, double& jby) {
    const double avail = 1.0 - r - b;
    const double side = (p.gamma2 - p.gamma1) * avail * b * r;
    jrx = avail * r;
    jry = side;
    jbx = (p.gamma2 - p.gamma1) * avail * r * b;
    jby = avail * b;
}

} // namespace crossflow
