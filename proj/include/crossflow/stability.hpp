#pragma once

#include <complex>
#include <vector>

#include "crossflow/params.hpp"

namespace crossflow {

using cplx = std::complex<double>;

struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
};

struct CMat2 {
    cplx a11, a12, a21, a22;
};

// l1 carries the principal (+sqrt) branch of the quadratic formula.
struct EigPair {
    cplx l1, l2;
    bool real = false;
};

EigPair eig_mat2(const Mat2& m);
void eig_cmat2(const CMat2& m, cplx& l1, cplx& l2);

// Quasi-linear matrix C of the 1D two-lane counterflow system,
// d_t (r,b)^T = C(r,b) d_x (r,b)^T:
//   C = [[2r+b-1, r], [-b, 1-r-2b]].
Mat2 advection_matrix_1d(double r, double b);

// Closed-form spectrum of C: (r-b)/2 +- sqrt((r-b)^2/4 + (1-rho)(1-2rho)).
EigPair eig_advection_1d(double r, double b);

// Value of the characteristic polynomial lambda^2 + lambda(b-r) - (1-2rho)(1-rho).
cplx charpoly_advection_1d(double r, double b, cplx lambda);

// True iff both eigenvalues of C are real; complex pairs with |Im| <= tol
// count as real (discriminant rounding noise).
bool classify_hyperbolic_1d(double r, double b, double tol = 1e-12);

// Quasi-linear matrices of the 2D first-order system,
// d_t U = A d_x U + B d_y U (g := gamma1 - gamma2):
//   A = [[2r+b-1, r], [g*b*(1-2r-b), g*r*(1-r-2b)]],
//   B = [[g*b*(1-2r-b), g*r*(1-r-2b)], [b, r+2b-1]].
Mat2 advection_matrix_2d_x(double r, double b, const ModelParams& p);
Mat2 advection_matrix_2d_y(double r, double b, const ModelParams& p);

// Largest eigenvalue modulus over both directional matrices at one state;
// feeds the advective time-step bound of the 2D solver.
double max_wave_speed_2d(double r, double b, const ModelParams& p);

// Fourier symbol of the linearized 1D system at wavenumber pi*k:
// C_F = i*pi*k*C (first order), D_F = i*pi*k*C - eps*(pi*k)^2*M with
// M = [[1-b, r], [b, 1-r]] (parabolic).
CMat2 dispersion_matrix_hyperbolic(double r, double b, double k);
CMat2 dispersion_matrix_parabolic(double r, double b, double k, double epsilon);

// Both symbol eigenvalues, principal branch first.
void dispersion_hyperbolic(double r, double b, double k, cplx& l1, cplx& l2);
void dispersion_parabolic(double r, double b, double k, double epsilon, cplx& l1, cplx& l2);

// Characteristic polynomial of D_F evaluated at lambda, written out as a
// closed form in (r, b, k, eps); used to bound eigenvalue residuals.
cplx charpoly_dispersion_parabolic(double r, double b, double k, double epsilon, cplx lambda);

// max(Re l1, Re l2) of the parabolic symbol.
double max_growth_rate(double r, double b, double k, double epsilon);

// Open b-interval of instability at fixed r predicted by the closed-form
// boundary curves b = (6-9r+4r^2)/(9-8r) +- 4*sqrt(r(1-r)^2(r+2))/(9-8r),
// upper branch clamped to the simplex edge b < 1-r.
struct CurveBand {
    bool defined = false;
    double lo = 0, hi = 0;
};
CurveBand instability_band(double r);
bool in_curve_band(double r, double b);

// Closed-form largest-unstable-wavenumber estimate
// sqrt((-4 + rho(12 - 8r^2 + rho(-9+8r)))/(-2+rho)^2)/(eps*pi).
// NaN when the radicand is negative (no unstable modes predicted). The
// radicand is r-asymmetric as written, so treat it as an estimate; the
// integer-k scan below is authoritative.
double critical_wavenumber_estimate(double r, double b, double epsilon);

// Integer-k sweep of max_growth_rate. Membership threshold defaults to
// 1e-12 rather than 0: on the simplex edge rho = 1 the symbol determinant
// cancels exactly in algebra but rounds to ~1e-16 in floating point.
// For epsilon = 0 growth scales linearly in k, so k = 1 decides membership.
struct ScanResult {
    bool unstable = false;
    double max_growth = 0;
    int argmax_k = 0;
    int k_last_unstable = 0;  // largest scanned k with growth above threshold
    int k_max_scanned = 0;
};
ScanResult scan_growth(double r, double b, double epsilon, double threshold = 1e-12);

enum class RegionMethod { Curve, Scan };

struct StabilityReport {
    double r = 0, b = 0;
    cplx eig1, eig2;           // spectrum of C, principal branch first
    bool hyperbolic_1d = false;
    bool in_region_D = false;  // per the requested method
    double max_growth = 0;     // scan, always
    int argmax_k = 0;
    int k_last_unstable = 0;
    double k_crit = 0;         // closed-form estimate, NaN when undefined
};

StabilityReport stability_report(double r, double b, double epsilon,
                                 RegionMethod method = RegionMethod::Scan);

// Uniform raster over the open simplex r+b < 1 at cell centers
// ((i+0.5)/res, (j+0.5)/res); row-major in j then i, matching the CSV
// emitter (columns r,b,hyperbolic,in_D,max_growth,argmax_k).
struct RegionMapRow {
    double r = 0, b = 0;
    bool hyperbolic = false;
    bool in_D = false;
    double max_growth = 0;
    int argmax_k = 0;
};
std::vector<RegionMapRow> raster_region_map(int resolution, double epsilon, RegionMethod method);

} // namespace crossflow
