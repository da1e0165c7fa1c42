#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "crossflow/params.hpp"
#include "crossflow/types.hpp"

namespace crossflow {

// Quadrature and floor choices for the entropy-type functionals. The floor
// is applied inside logarithms only; solver states are never clamped by it.
struct EntropyConfig {
    double epsilon = 0.05;
    double log_floor = 1e-12;
    double delta = 2.0;      // Young-inequality split; delta = 2 gives the
                             // weakest vacancy threshold xi >= 5/8
    double alpha_lyap = 1.0; // weight of the gradient term in the Lyapunov
                             // functional, any positive value admissible
};

// Free energy of the planar pair: midpoint quadrature of
// eps*[r(log r - 1) + b(log b - 1) + (1-rho)/2*(log(1-rho) - 1)] + r*V_r + b*V_b
// with ramp potentials V_r = -x, V_b = -y on the unit square.
double entropy_2d(const Field2D& f, const EntropyConfig& cfg);

// Variational derivatives of the free energy at a point.
double entropy_potential_u(double r, double rho, double x, const EntropyConfig& cfg);
double entropy_potential_v(double b, double rho, double y, const EntropyConfig& cfg);

struct EntropyVariables {
    Array2D u, v;
    int floored_cells = 0; // cells where r, b, or 1-rho sat below the floor
};
EntropyVariables entropy_variables(const Field2D& f, const EntropyConfig& cfg);

// Least-squares slope of a sampled functional plus its largest jump between
// consecutive samples; the at-most-linear-growth checks run on this.
struct GrowthMonitor {
    double slope = 0;
    double max_step_increase = 0;
};
GrowthMonitor monitor_entropy_growth(const std::vector<double>& t,
                                     const std::vector<double>& value);

// Vacancy/imbalance entropy: quadrature of
// (1/2)[eta^2 - 2(xi(log xi - 1) + 1) + 2(1-xi)^2], nonnegative on the
// admissible box.
double entropy_1d(const XiEtaField& f, const EntropyConfig& cfg);

// Relative Lyapunov functional around the uniform state (xi_inf, eta_inf):
// (1/2) integral of (eta-eta_inf)^2 + alpha_lyap*eps^2*(d_x(xi-xi_inf))^2
//   - 2*xi_inf*(s(log s - 1) + 1) + 2*(xi-xi_inf)^2,  s = xi/xi_inf,
// gradient term by face differences on the periodic grid. Pointwise
// nonnegative where xi >= 1/2 and xi_inf > 1/2.
double lyapunov_relative(const XiEtaField& f, double xi_inf, double eta_inf,
                         const EntropyConfig& cfg);

// Fraction of same-species pairs among occupied 4-neighbor pairs on the
// periodic n x n occupancy grid (0 empty, 1 red, 2 blue, row-major j*n+i).
// NaN when no pair has both cells occupied.
double segregation_index(const std::vector<std::uint8_t>& cells, int n);

// Signed balance of spectral power between the two diagonal mode families
// of the DFT: modes (m,m) sum to P_plus, modes (m,n-m) to P_minus, m != 0
// and the shared Nyquist bin excluded; returns (P_minus - P_plus)/(P_minus
// + P_plus), 0 when both sums are below 1e-14. Magnitude near 1 means
// strong diagonal banding; the sign identifies the orientation (+1 for
// patterns varying along x-y, -1 for x+y).
double diagonal_anisotropy(const Array2D& field);

// Complex DFT coefficient of one diagonal projection: family >= 0 projects
// onto lines i+j = const (the (m,m) modes), family < 0 onto i-j = const
// (the (m,n-m) modes); m is the mode index of the projected 1D signal. The
// coefficient's argument tracks the pattern's position along the diagonal,
// so a traveling wave shows up as a drifting phase.
std::complex<double> diagonal_mode_coefficient(const Array2D& field, int m, int family);

// Masses by compensated summation in a fixed order.
double mass_2d(const Array2D& a, double h);
double mass_1d(const std::vector<double>& v, double h);

// L2 distance of (r,b) from a uniform equilibrium.
double perturbation_l2_2d(const Field2D& f, double r_inf, double b_inf);
double perturbation_l2_1d(const Field1D& f, double r_inf, double b_inf);

// |DFT coefficient| of (f - mean) at integer mode m on cell centers,
// normalized by h; tracks single-mode growth against dispersion predictions.
double mode_amplitude(const std::vector<double>& f, double mean, int m);

// One diagnostics record per sample time; NaN marks columns a model does
// not produce.
struct DiagnosticsSeries {
    std::vector<double> t, M_r, M_b, entropy, lyapunov, segregation, anisotropy, pert_l2;
    void append(double t_, double mr, double mb, double ent, double lyap,
                double seg, double aniso, double pl2);
    size_t size() const { return t.size(); }
};

} // namespace crossflow
