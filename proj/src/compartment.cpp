#include "crossflow/compartment.hpp"

#include <cstdio>

namespace crossflow {

Array2D compartment_kernel(const Array2D& a, const Array2D& b, const ModelParams& p) {
    const int n = a.nx;
    Array2D out = a;
    auto rho = [&](int i, int j) { return a.atp(i, j) + b.atp(i, j); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double src = a.atp(i, j);
            if (src == 0.0) continue;
            // Directed rates out of (i,j); each uses the availability of
            // the destination and, for side moves, the crossing density
            // ahead of the mover.
            const double cross = b.atp(i + 1, j);
            const double t_fwd = p.alpha * (1.0 - rho(i + 1, j));
            const double t_dn = p.alpha * (1.0 - rho(i, j - 1)) * (p.gamma0 + p.gamma1 * cross);
            const double t_up = p.alpha * (1.0 - rho(i, j + 1)) * (p.gamma0 + p.gamma2 * cross);
            const double f_fwd = t_fwd * src;
            const double f_dn = t_dn * src;
            const double f_up = t_up * src;
            out.at(i, j) -= f_fwd + f_dn + f_up;
            out.at(Array2D::mod(i + 1, n), j) += f_fwd;
            out.at(i, Array2D::mod(j - 1, n)) += f_dn;
            out.at(i, Array2D::mod(j + 1, n)) += f_up;
        }
    return out;
}

void compartment_step(CompartmentState& s, const ModelParams& p) {
    require_rates(p);
    Array2D new_r = compartment_kernel(s.f.r, s.f.b, p);
    Array2D new_b = compartment_kernel(s.f.b.transposed(), s.f.r.transposed(), p).transposed();
    const int n = s.f.n();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double r = new_r.at(i, j), b = new_b.at(i, j);
            if (r < -1e-12 || b < -1e-12 || r + b > 1.0 + 1e-12) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "compartment update left the density box at cell (%d,%d): r=%.17g b=%.17g",
                              i, j, r, b);
                throw SolverAbort(msg);
            }
        }
    s.f.r = std::move(new_r);
    s.f.b = std::move(new_b);
    ++s.step_count;
}

} // namespace crossflow
