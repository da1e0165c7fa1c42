#include "crossflow/pde1d.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "crossflow/stability.hpp"

namespace crossflow {

namespace {

inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }

std::vector<double> mirrored(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<double> m(n);
    for (size_t i = 0; i < n; ++i) m[i] = v[n - 1 - i];
    return m;
}

// Face fluxes for the +x drifting species with density a and crossing
// density o; F[i] is the flux through the face between cells i and i+1.
void species_flux_1d(const std::vector<double>& a, const std::vector<double>& o,
                     const ModelParams& p, PdeMode mode, std::vector<double>& F) {
    const int n = static_cast<int>(a.size());
    const double h = 1.0 / n;
    F.resize(n);
    for (int i = 0; i < n; ++i) {
        const int ip = wrap(i + 1, n);
        const double c = 0.5 * ((1.0 - a[i] - o[i]) + (1.0 - a[ip] - o[ip]));
        double flux = c * (c >= 0.0 ? a[i] : a[ip]);
        if (mode == PdeMode::Parabolic) {
            const double ga = (a[ip] - a[i]) / h;
            const double go = (o[ip] - o[i]) / h;
            const double avail_o = 0.5 * ((1.0 - o[i]) + (1.0 - o[ip]));
            const double mean_a = 0.5 * (a[i] + a[ip]);
            flux -= p.epsilon * (avail_o * ga + mean_a * go);
        }
        F[i] = flux;
    }
}

void divergence_to_rhs(const std::vector<double>& F, std::vector<double>& rhs) {
    const int n = static_cast<int>(F.size());
    const double h = 1.0 / n;
    rhs.resize(n);
    for (int i = 0; i < n; ++i) rhs[i] = -(F[i] - F[wrap(i - 1, n)]) / h;
}

// Box guard shared by both 1D steppers: clamp negatives within tol back to
// zero, abort beyond, abort on NaN or total density above 1 + tol.
long enforce_box_1d(std::vector<double>& r, std::vector<double>& b) {
    constexpr double tol = 1e-8;
    long clamped = 0;
    const int n = static_cast<int>(r.size());
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(b[i]))
            throw SolverAbort("1D solver produced a non-finite value");
        if (r[i] < 0.0 || b[i] < 0.0 || r[i] + b[i] > 1.0 + tol) {
            if (r[i] < -tol || b[i] < -tol || r[i] + b[i] > 1.0 + tol) {
                char msg[128];
                std::snprintf(msg, sizeof msg,
                              "1D solver left the density box at cell %d: r=%.17g b=%.17g", i,
                              r[i], b[i]);
                throw SolverAbort(msg);
            }
            if (r[i] < 0.0) { r[i] = 0.0; ++clamped; }
            if (b[i] < 0.0) { b[i] = 0.0; ++clamped; }
        }
    }
    return clamped;
}

} // namespace

double dt_stable_1d(const Field1D& f, const ModelParams& p, PdeMode mode) {
    const int n = f.n();
    const double h = f.h();
    double smax = 0.0;
    for (int i = 0; i < n; ++i) {
        const EigPair e = eig_advection_1d(f.r[i], f.b[i]);
        smax = std::max(smax, std::max(std::abs(e.l1), std::abs(e.l2)));
    }
    double dt = smax > 0.0 ? h / smax : HUGE_VAL;
    if (mode == PdeMode::Parabolic && p.epsilon > 0.0) {
        const double dmax = std::max(1.0, 2.0 * p.gamma0 + p.gamma1 + p.gamma2);
        dt = std::min(dt, h * h / (4.0 * p.epsilon * dmax));
    }
    if (!std::isfinite(dt)) throw SolverAbort("1D time step bound is degenerate");
    return 0.4 * dt;
}

void pde1d_rhs(const Field1D& f, const ModelParams& p, PdeMode mode,
               std::vector<double>& dr, std::vector<double>& db) {
    std::vector<double> F;
    species_flux_1d(f.r, f.b, p, mode, F);
    divergence_to_rhs(F, dr);
    // b drifts toward -x: run the same kernel on mirrored fields with the
    // species swapped, then mirror the tendency back.
    const std::vector<double> mb = mirrored(f.b), mr = mirrored(f.r);
    species_flux_1d(mb, mr, p, mode, F);
    std::vector<double> dbm;
    divergence_to_rhs(F, dbm);
    db = mirrored(dbm);
}

long pde1d_step(Field1D& f, const ModelParams& p, PdeMode mode, double dt) {
    require_rates(p);
    const int n = f.n();
    std::vector<double> dr, db;
    pde1d_rhs(f, p, mode, dr, db);
    Field1D half = f;
    for (int i = 0; i < n; ++i) {
        half.r[i] += 0.5 * dt * dr[i];
        half.b[i] += 0.5 * dt * db[i];
    }
    pde1d_rhs(half, p, mode, dr, db);
    for (int i = 0; i < n; ++i) {
        f.r[i] += dt * dr[i];
        f.b[i] += dt * db[i];
    }
    return enforce_box_1d(f.r, f.b);
}

XiEtaField to_xi_eta(const Field1D& f) {
    const int n = f.n();
    XiEtaField x;
    x.xi.resize(n);
    x.eta.resize(n);
    for (int i = 0; i < n; ++i) {
        x.xi[i] = 1.0 - f.r[i] - f.b[i];
        x.eta[i] = f.r[i] - f.b[i];
    }
    return x;
}

Field1D from_xi_eta(const XiEtaField& x) {
    const int n = x.n();
    Field1D f;
    f.r.resize(n);
    f.b.resize(n);
    for (int i = 0; i < n; ++i) {
        if (x.xi[i] < -1e-12 || x.xi[i] > 1.0 + 1e-12 ||
            std::abs(x.eta[i]) > 1.0 - x.xi[i] + 1e-12)
            throw std::invalid_argument(
                "from_xi_eta: pair violates xi in [0,1], |eta| <= 1-xi");
        f.r[i] = 0.5 * (1.0 - x.xi[i] + x.eta[i]);
        f.b[i] = 0.5 * (1.0 - x.xi[i] - x.eta[i]);
    }
    return f;
}

double dt_stable_xieta(const XiEtaField& x, const ModelParams& p) {
    const int n = x.n();
    const double h = 1.0 / n;
    double smax = 0.0;
    for (int i = 0; i < n; ++i) {
        // same characteristic speeds as the (r,b) form of the system
        const double r = 0.5 * (1.0 - x.xi[i] + x.eta[i]);
        const double b = 0.5 * (1.0 - x.xi[i] - x.eta[i]);
        const EigPair e = eig_advection_1d(r, b);
        smax = std::max(smax, std::max(std::abs(e.l1), std::abs(e.l2)));
    }
    double dt = smax > 0.0 ? h / smax : HUGE_VAL;
    if (p.epsilon > 0.0) dt = std::min(dt, h * h / (4.0 * p.epsilon));
    if (!std::isfinite(dt)) throw SolverAbort("xi-eta time step bound is degenerate");
    return 0.4 * dt;
}

void xieta_rhs(const XiEtaField& x, const ModelParams& p,
               std::vector<double>& dxi, std::vector<double>& deta) {
    const int n = x.n();
    const double h = 1.0 / n;
    std::vector<double> Fxi(n), Feta(n);
    for (int i = 0; i < n; ++i) {
        const int ip = wrap(i + 1, n);
        const double xf = 0.5 * (x.xi[i] + x.xi[ip]);
        const double ef = 0.5 * (x.eta[i] + x.eta[ip]);
        const double gxi = (x.xi[ip] - x.xi[i]) / h;
        const double geta = (x.eta[ip] - x.eta[i]) / h;
        const double c = -ef;
        Fxi[i] = c * (c >= 0.0 ? x.xi[i] : x.xi[ip]) - p.epsilon * gxi;
        Feta[i] = xf * (1.0 - xf) - p.epsilon * (xf * geta - ef * gxi);
    }
    divergence_to_rhs(Fxi, dxi);
    divergence_to_rhs(Feta, deta);
}

long xieta_step(XiEtaField& x, const ModelParams& p, double dt) {
    require_rates(p);
    const int n = x.n();
    std::vector<double> dxi, deta;
    xieta_rhs(x, p, dxi, deta);
    XiEtaField half = x;
    for (int i = 0; i < n; ++i) {
        half.xi[i] += 0.5 * dt * dxi[i];
        half.eta[i] += 0.5 * dt * deta[i];
    }
    xieta_rhs(half, p, dxi, deta);
    long clamped = 0;
    for (int i = 0; i < n; ++i) {
        x.xi[i] += dt * dxi[i];
        x.eta[i] += dt * deta[i];
        if (!std::isfinite(x.xi[i]) || !std::isfinite(x.eta[i]))
            throw SolverAbort("xi-eta solver produced a non-finite value");
        if (x.xi[i] < 0.0) {
            if (x.xi[i] < -1e-8) throw SolverAbort("xi-eta solver left the admissible box");
            x.xi[i] = 0.0;
            ++clamped;
        }
        if (x.xi[i] > 1.0 + 1e-8 || std::abs(x.eta[i]) > 1.0 - x.xi[i] + 1e-8)
            throw SolverAbort("xi-eta solver left the admissible box");
    }
    return clamped;
}

void stationary_residual_1d(const Field1D& f, double epsilon,
                            std::vector<double>& res_r, std::vector<double>& res_b) {
    const int n = f.n();
    const double h = f.h();
    res_r.resize(n);
    res_b.resize(n);
    for (int i = 0; i < n; ++i) {
        const int ip = wrap(i + 1, n), im = wrap(i - 1, n);
        const double dxr = (f.r[ip] - f.r[im]) / (2.0 * h);
        const double dxb = (f.b[ip] - f.b[im]) / (2.0 * h);
        const double avail = 1.0 - f.r[i] - f.b[i];
        res_r[i] = -avail * f.r[i] + epsilon * ((1.0 - f.b[i]) * dxr + f.r[i] * dxb);
        res_b[i] = avail * f.b[i] + epsilon * ((1.0 - f.r[i]) * dxb + f.b[i] * dxr);
    }
}

} // namespace crossflow
