#include "crossflow/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crossflow {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kHardScanCap = 16384;
}

EigPair eig_mat2(const Mat2& m) {
    EigPair e;
    double tr = m.a11 + m.a22;
    double det = m.a11 * m.a22 - m.a12 * m.a21;
    double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        e.l1 = cplx(0.5 * (tr + s), 0.0);
        e.l2 = cplx(0.5 * (tr - s), 0.0);
        e.real = true;
    } else {
        double s = std::sqrt(-disc);
        e.l1 = cplx(0.5 * tr, 0.5 * s);
        e.l2 = cplx(0.5 * tr, -0.5 * s);
        e.real = false;
    }
    return e;
}

void eig_cmat2(const CMat2& m, cplx& l1, cplx& l2) {
    cplx tr = m.a11 + m.a22;
    cplx det = m.a11 * m.a22 - m.a12 * m.a21;
    cplx s = std::sqrt(tr * tr - 4.0 * det);
    l1 = 0.5 * (tr + s);
    l2 = 0.5 * (tr - s);
}

Mat2 advection_matrix_1d(double r, double b) {
    return {2.0 * r + b - 1.0, r, -b, 1.0 - r - 2.0 * b};
}

EigPair eig_advection_1d(double r, double b) {
    EigPair e;
    double rho = r + b;
    double half = 0.5 * (r - b);
    double disc = half * half + (1.0 - rho) * (1.0 - 2.0 * rho);
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        e.l1 = cplx(half + s, 0.0);
        e.l2 = cplx(half - s, 0.0);
        e.real = true;
    } else {
        double s = std::sqrt(-disc);
        e.l1 = cplx(half, s);
        e.l2 = cplx(half, -s);
        e.real = false;
    }
    return e;
}

cplx charpoly_advection_1d(double r, double b, cplx lambda) {
    double rho = r + b;
    return lambda * lambda + lambda * (b - r) - (1.0 - 2.0 * rho) * (1.0 - rho);
}

bool classify_hyperbolic_1d(double r, double b, double tol) {
    double rho = r + b;
    double half = 0.5 * (r - b);
    double disc = half * half + (1.0 - rho) * (1.0 - 2.0 * rho);
    if (disc >= 0.0) return true;
    return std::sqrt(-disc) <= tol;
}

Mat2 advection_matrix_2d_x(double r, double b, const ModelParams& p) {
    double g = p.gamma1 - p.gamma2;
    return {2.0 * r + b - 1.0, r,
            g * b * (1.0 - 2.0 * r - b), g * r * (1.0 - r - 2.0 * b)};
}

Mat2 advection_matrix_2d_y(double r, double b, const ModelParams& p) {
    double g = p.gamma1 - p.gamma2;
    return {g * b * (1.0 - 2.0 * r - b), g * r * (1.0 - r - 2.0 * b),
            b, r + 2.0 * b - 1.0};
}

double max_wave_speed_2d(double r, double b, const ModelParams& p) {
    EigPair ex = eig_mat2(advection_matrix_2d_x(r, b, p));
    EigPair ey = eig_mat2(advection_matrix_2d_y(r, b, p));
    return std::max(std::max(std::abs(ex.l1), std::abs(ex.l2)),
                    std::max(std::abs(ey.l1), std::abs(ey.l2)));
}

CMat2 dispersion_matrix_hyperbolic(double r, double b, double k) {
    cplx ik(0.0, k * kPi);
    Mat2 c = advection_matrix_1d(r, b);
    return {ik * c.a11, ik * c.a12, ik * c.a21, ik * c.a22};
}

CMat2 dispersion_matrix_parabolic(double r, double b, double k, double epsilon) {
    cplx ik(0.0, k * kPi);
    double k2 = epsilon * k * k * kPi * kPi;
    Mat2 c = advection_matrix_1d(r, b);
    // diffusion part M = [[1-b, r], [b, 1-r]]
    return {ik * c.a11 - k2 * (1.0 - b), ik * c.a12 - k2 * r,
            ik * c.a21 - k2 * b,         ik * c.a22 - k2 * (1.0 - r)};
}

void dispersion_hyperbolic(double r, double b, double k, cplx& l1, cplx& l2) {
    eig_cmat2(dispersion_matrix_hyperbolic(r, b, k), l1, l2);
}

void dispersion_parabolic(double r, double b, double k, double epsilon, cplx& l1, cplx& l2) {
    eig_cmat2(dispersion_matrix_parabolic(r, b, k, epsilon), l1, l2);
}

cplx charpoly_dispersion_parabolic(double r, double b, double k, double epsilon, cplx lambda) {
    double rho = r + b;
    double kp = k * kPi;
    cplx i(0.0, 1.0);
    cplx lin = i * kp * (r - b) - epsilon * kp * kp * (2.0 - rho);
    cplx c0 = kp * kp * (1.0 - 2.0 * rho) * (1.0 - rho)
            - 2.0 * i * epsilon * kp * kp * kp * (1.0 - rho) * (r - b)
            + epsilon * epsilon * kp * kp * kp * kp * (1.0 - rho);
    return lambda * lambda - lambda * lin + c0;
}

double max_growth_rate(double r, double b, double k, double epsilon) {
    cplx l1, l2;
    dispersion_parabolic(r, b, k, epsilon, l1, l2);
    return std::max(l1.real(), l2.real());
}

CurveBand instability_band(double r) {
    CurveBand band;
    if (!(r >= 0.0 && r < 1.0)) return band;
    double den = 9.0 - 8.0 * r;
    double rad = r * (1.0 - r) * (1.0 - r) * (r + 2.0);
    double base = (6.0 - 9.0 * r + 4.0 * r * r) / den;
    double spread = 4.0 * std::sqrt(rad) / den;
    double lo = base - spread;
    double hi = std::min(base + spread, 1.0 - r);
    if (lo < hi) {
        band.defined = true;
        band.lo = lo;
        band.hi = hi;
    }
    return band;
}

bool in_curve_band(double r, double b) {
    CurveBand band = instability_band(r);
    return band.defined && b > band.lo && b < band.hi;
}

double critical_wavenumber_estimate(double r, double b, double epsilon) {
    double rho = r + b;
    double num = -4.0 + rho * (12.0 - 8.0 * r * r + rho * (-9.0 + 8.0 * r));
    double den = (-2.0 + rho) * (-2.0 + rho);
    double q = num / den;
    if (!(q > 0.0) || !(epsilon > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(q) / (epsilon * kPi);
}

ScanResult scan_growth(double r, double b, double epsilon, double threshold) {
    ScanResult res;
    if (epsilon <= 0.0) {
        // First-order symbol: growth is linear in k, so one mode decides.
        res.max_growth = [&] {
            cplx l1, l2;
            dispersion_hyperbolic(r, b, 1.0, l1, l2);
            return std::max(l1.real(), l2.real());
        }();
        res.argmax_k = 1;
        res.k_max_scanned = 1;
        res.unstable = res.max_growth > threshold;
        res.k_last_unstable = res.unstable ? 1 : 0;
        return res;
    }
    double kc = critical_wavenumber_estimate(r, b, epsilon);
    int kmax;
    if (std::isfinite(kc) && kc > 0.0)
        kmax = std::max(32, static_cast<int>(std::ceil(2.0 * kc)));
    else
        kmax = std::max(32, static_cast<int>(std::ceil(2.0 / (epsilon * kPi))));
    kmax = std::min(kmax, kHardScanCap);

    double best = -std::numeric_limits<double>::infinity();
    int argk = 0;
    int k = 1;
    for (;;) {
        for (; k <= kmax; ++k) {
            double g = max_growth_rate(r, b, static_cast<double>(k), epsilon);
            if (g > best) {
                best = g;
                argk = k;
            }
            if (g > threshold) res.k_last_unstable = k;
        }
        // Extend while the maximum sits on the scanned edge (bracket check).
        if (argk < kmax || kmax >= kHardScanCap) break;
        kmax = std::min(2 * kmax, kHardScanCap);
    }
    res.max_growth = best;
    res.argmax_k = argk;
    res.k_max_scanned = kmax;
    res.unstable = best > threshold;
    return res;
}

StabilityReport stability_report(double r, double b, double epsilon, RegionMethod method) {
    StabilityReport rep;
    rep.r = r;
    rep.b = b;
    EigPair e = eig_advection_1d(r, b);
    rep.eig1 = e.l1;
    rep.eig2 = e.l2;
    rep.hyperbolic_1d = classify_hyperbolic_1d(r, b);
    ScanResult sc = scan_growth(r, b, epsilon);
    rep.max_growth = sc.max_growth;
    rep.argmax_k = sc.argmax_k;
    rep.k_last_unstable = sc.k_last_unstable;
    rep.k_crit = critical_wavenumber_estimate(r, b, epsilon);
    rep.in_region_D = (method == RegionMethod::Curve) ? in_curve_band(r, b) : sc.unstable;
    return rep;
}

std::vector<RegionMapRow> raster_region_map(int resolution, double epsilon, RegionMethod method) {
    std::vector<RegionMapRow> rows;
    rows.reserve(static_cast<size_t>(resolution) * resolution / 2);
    for (int j = 0; j < resolution; ++j) {
        double b = (j + 0.5) / resolution;
        for (int i = 0; i < resolution; ++i) {
            double r = (i + 0.5) / resolution;
            if (r + b >= 1.0) continue;
            RegionMapRow row;
            row.r = r;
            row.b = b;
            row.hyperbolic = classify_hyperbolic_1d(r, b);
            ScanResult sc = scan_growth(r, b, epsilon);
            row.max_growth = sc.max_growth;
            row.argmax_k = sc.argmax_k;
            row.in_D = (method == RegionMethod::Curve) ? in_curve_band(r, b) : sc.unstable;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace crossflow
