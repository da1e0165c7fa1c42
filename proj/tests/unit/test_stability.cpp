#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "crossflow/stability.hpp"

using namespace crossflow;

namespace {

struct SimplexDraw {
    std::mt19937_64 rng{7};
    void next(double& r, double& b) {
        // uniform over the open simplex r, b > 0, r + b < 1
        double u = std::generate_canonical<double, 53>(rng);
        double v = std::generate_canonical<double, 53>(rng);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        r = u;
        b = v;
    }
};

} // namespace

TEST_SUITE("stability") {

TEST_CASE("eigenvalues of the counterflow matrix at pinned states") {
    EigPair e = eig_advection_1d(0.0, 0.0);
    CHECK(e.real);
    CHECK(e.l1.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.l2.real() == doctest::Approx(-1.0).epsilon(1e-14));

    e = eig_advection_1d(0.3, 0.3); // complex pair, +-0.28284i
    CHECK_FALSE(e.real);
    CHECK(e.l1.real() == doctest::Approx(0.0));
    CHECK(std::abs(e.l1.imag()) == doctest::Approx(0.28284271247461906).epsilon(1e-13));
    CHECK(e.l2 == std::conj(e.l1));

    e = eig_advection_1d(0.85, 0.1);
    CHECK(e.real);
    CHECK(e.l1.real() == doctest::Approx(0.6842329219213245).epsilon(1e-13));
    CHECK(e.l2.real() == doctest::Approx(0.06576707807867554).epsilon(1e-13));

    e = eig_advection_1d(0.1, 0.1);
    CHECK(e.real);
    CHECK(e.l1.real() == doctest::Approx(0.6928203230275509).epsilon(1e-13));
    CHECK(e.l2.real() == doctest::Approx(-0.6928203230275509).epsilon(1e-13));
}

TEST_CASE("characteristic polynomial residual stays at rounding level") {
    SimplexDraw draw;
    double worst = 0;
    for (int t = 0; t < 2000; ++t) {
        double r, b;
        draw.next(r, b);
        EigPair e = eig_advection_1d(r, b);
        worst = std::max(worst, std::abs(charpoly_advection_1d(r, b, e.l1)));
        worst = std::max(worst, std::abs(charpoly_advection_1d(r, b, e.l2)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("complex spectra come in conjugate pairs and mirror under species swap") {
    SimplexDraw draw;
    for (int t = 0; t < 500; ++t) {
        double r, b;
        draw.next(r, b);
        EigPair e = eig_advection_1d(r, b);
        if (!e.real) CHECK(e.l2 == std::conj(e.l1));
        // swapping species flips the drift axis: spectrum negates
        EigPair s = eig_advection_1d(b, r);
        CHECK(std::abs(s.l1 + e.l2) < 1e-12);
        CHECK(std::abs(s.l2 + e.l1) < 1e-12);
    }
}

TEST_CASE("states with one species absent are always hyperbolic") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        double r = std::generate_canonical<double, 53>(rng);
        CHECK(classify_hyperbolic_1d(r, 0.0));
        CHECK(classify_hyperbolic_1d(0.0, r));
    }
}

TEST_CASE("instability band matches the closed-form boundary curves") {
    CurveBand band = instability_band(0.3);
    REQUIRE(band.defined);
    CHECK(band.lo == doctest::Approx(0.2021432300580211).epsilon(1e-12));
    CHECK(band.hi == doctest::Approx(0.7).epsilon(1e-12)); // clamped to 1 - r

    band = instability_band(0.15);
    REQUIRE(band.defined);
    CHECK(band.lo == doctest::Approx(0.36014).epsilon(1e-4));
    CHECK(band.hi == doctest::Approx(0.85).epsilon(1e-12));

    CHECK(in_curve_band(0.3, 0.3));
    CHECK_FALSE(in_curve_band(0.85, 0.1));
    CHECK_FALSE(in_curve_band(0.1, 0.1));
}

TEST_CASE("largest-unstable-wavenumber estimate at the reference state") {
    double k = critical_wavenumber_estimate(0.3, 0.3, 0.005);
    CHECK(k == doctest::Approx(28.4706).epsilon(1e-3));
    // no unstable modes predicted at a deep stable state
    CHECK(std::isnan(critical_wavenumber_estimate(0.85, 0.1, 0.005)));
}

TEST_CASE("growth rates of the parabolic symbol at pinned states") {
    CHECK(max_growth_rate(0.3, 0.3, 2.0, 0.005) ==
          doctest::Approx(1.639971).epsilon(1e-5));
    CHECK(max_growth_rate(0.85, 0.1, 2.0, 0.005) ==
          doctest::Approx(-0.001825).epsilon(1e-3));
}

TEST_CASE("symbol eigenvalues satisfy their characteristic polynomial") {
    SimplexDraw draw;
    std::mt19937_64 rng(23);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        double r, b;
        draw.next(r, b);
        double k = 1.0 + std::floor(std::generate_canonical<double, 53>(rng) * 40.0);
        double eps = 0.001 + 0.05 * std::generate_canonical<double, 53>(rng);
        cplx l1, l2;
        dispersion_parabolic(r, b, k, eps, l1, l2);
        worst = std::max(worst, std::abs(charpoly_dispersion_parabolic(r, b, k, eps, l1)));
        worst = std::max(worst, std::abs(charpoly_dispersion_parabolic(r, b, k, eps, l2)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("hyperbolic symbol is the advection spectrum scaled by i pi k") {
    SimplexDraw draw;
    for (int t = 0; t < 200; ++t) {
        double r, b;
        draw.next(r, b);
        EigPair e = eig_advection_1d(r, b);
        cplx l1, l2;
        dispersion_hyperbolic(r, b, 3.0, l1, l2);
        cplx scale(0.0, M_PI * 3.0);
        // same unordered pair
        double d1 = std::min(std::abs(l1 - scale * e.l1) + std::abs(l2 - scale * e.l2),
                             std::abs(l1 - scale * e.l2) + std::abs(l2 - scale * e.l1));
        CHECK(d1 < 1e-10);
    }
}

TEST_CASE("integer-k scan classifies the two reference states") {
    ScanResult unstable = scan_growth(0.3, 0.3, 0.005);
    CHECK(unstable.unstable);
    CHECK(unstable.max_growth > 0.1);
    CHECK(unstable.k_last_unstable >= 26);
    CHECK(unstable.k_last_unstable <= 29);

    ScanResult stable = scan_growth(0.85, 0.1, 0.005);
    CHECK_FALSE(stable.unstable);
    CHECK(stable.max_growth <= 1e-12);
}

TEST_CASE("scan with epsilon zero decides membership from the k=1 symbol") {
    // complex advection spectrum at (0.3, 0.3) means growth at every k
    ScanResult s = scan_growth(0.3, 0.3, 0.0);
    CHECK(s.unstable);
    // real spectrum keeps the first-order symbol purely imaginary
    ScanResult h = scan_growth(0.85, 0.1, 0.0);
    CHECK_FALSE(h.unstable);
}

TEST_CASE("stability report classifies the two reference states under both methods") {
    for (RegionMethod m : {RegionMethod::Curve, RegionMethod::Scan}) {
        StabilityReport in = stability_report(0.3, 0.3, 0.005, m);
        CHECK(in.in_region_D);
        StabilityReport out = stability_report(0.85, 0.1, 0.005, m);
        CHECK_FALSE(out.in_region_D);
    }
    StabilityReport rep = stability_report(0.3, 0.3, 0.005, RegionMethod::Scan);
    CHECK_FALSE(rep.hyperbolic_1d);
    CHECK(rep.max_growth > 0.1);
    CHECK(rep.k_crit == doctest::Approx(28.4706).epsilon(1e-3));
}

TEST_CASE("region raster covers exactly the open simplex in row-major order") {
    int res = 16;
    std::vector<RegionMapRow> rows = raster_region_map(res, 0.005, RegionMethod::Scan);
    size_t expect = 0;
    double prev_key = -1;
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
            double r = (i + 0.5) / res, b = (j + 0.5) / res;
            if (r + b < 1.0) ++expect;
        }
    CHECK(rows.size() == expect);
    for (const RegionMapRow& row : rows) {
        CHECK(row.r + row.b < 1.0);
        double key = row.b * 1e6 + row.r; // j outer, i inner
        CHECK(key > prev_key);
        prev_key = key;
        if (row.in_D) CHECK(row.max_growth > 1e-12);
        // the elliptic set sits strictly inside the unstable band, so
        // hyperbolic rows may still be in D near the band edge; the reverse
        // implication is the one that holds at small epsilon
        if (!row.hyperbolic) CHECK(row.in_D);
    }
}

} // TEST_SUITE("stability")
