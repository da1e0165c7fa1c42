#pragma once

#include <string>
#include <vector>

namespace crossflow {

// alpha: hop probability scale of the microscopic walk (equivalently the
// dt/h ratio of the compartment update). gamma0: base side-step rate.
// gamma1 / gamma2: extra side-step rate against / with the drift direction
// of the other group. epsilon: diffusion scale of the parabolic models.
struct ModelParams {
    double alpha = 0.5;
    double gamma0 = 0.2;
    double gamma1 = 0.15;
    double gamma2 = 0.1;
    double epsilon = 0.0;
};

// Cell-centered grid on the unit square / unit interval.
struct Grid {
    int n = 64;
    double h() const { return 1.0 / n; }
    double center(int i) const { return (i + 0.5) * h(); }
};

enum class PdeMode { Hyperbolic, Parabolic };
enum class BoundaryKind { Periodic, Mixed };

// Mixed: each species has a Dirichlet inflow side at the start of its drift
// axis, an outflux side (J.n = outflux_coeff * density) at the end, and zero
// normal flux on its two lateral sides.
struct BoundaryDescriptor {
    BoundaryKind kind = BoundaryKind::Periodic;
    double inflow_value = 0.1;
    double outflux_coeff = 0.8;
};

// Throws std::invalid_argument unless alpha and the gammas are finite and
// nonnegative; every stepper calls this before touching state.
void require_rates(const ModelParams& p);

// Stay-probability bound of the walk: alpha*max{1, 2*gamma0+gamma1+gamma2} <= 1.
bool validate_cfl(const ModelParams& p);

struct RegimeCheck {
    bool ok = true;
    std::vector<std::string> warnings;
};

// Regime where the 2D entropy functional has a provable dissipation bound:
// gamma0 in (1/8, 1) and |gamma1 - gamma2| < min{2*gamma0 - 1/4, (1 - gamma0)/2}/33.
RegimeCheck validate_entropy_regime(const ModelParams& p);

} // namespace crossflow
