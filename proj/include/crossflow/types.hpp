#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace crossflow {

// Row-major 2D array of doubles; (i, j) = (x column, y row), offset j*nx + i.
struct Array2D {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    Array2D() = default;
    Array2D(int nx_, int ny_, double fill = 0.0)
        : nx(nx_), ny(ny_), v(static_cast<size_t>(nx_) * ny_, fill) {}

    double& at(int i, int j) { return v[static_cast<size_t>(j) * nx + i]; }
    double at(int i, int j) const { return v[static_cast<size_t>(j) * nx + i]; }

    static int mod(int a, int m) {
        int r = a % m;
        return r < 0 ? r + m : r;
    }

    // periodic accessor
    double atp(int i, int j) const { return at(mod(i, nx), mod(j, ny)); }

    Array2D transposed() const {
        Array2D t(ny, nx);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) t.at(j, i) = at(i, j);
        return t;
    }
};

// Paired density fields on an n x n cell-centered grid over the unit square.
struct Field2D {
    Array2D r, b;
    int n() const { return r.nx; }
    double h() const { return 1.0 / r.nx; }
};

// Same on the unit interval.
struct Field1D {
    std::vector<double> r, b;
    int n() const { return static_cast<int>(r.size()); }
    double h() const { return 1.0 / static_cast<double>(r.size()); }
};

// Vacancy/imbalance variables: xi = 1 - r - b, eta = r - b.
struct XiEtaField {
    std::vector<double> xi, eta;
    int n() const { return static_cast<int>(xi.size()); }
    double h() const { return 1.0 / static_cast<double>(xi.size()); }
};

// Compensated summation; keeps mass/entropy reductions at a few ulps
// regardless of grid size, with a fixed reduction order.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

inline double kahan_total(const std::vector<double>& xs) {
    KahanSum k;
    for (double x : xs) k.add(x);
    return k.value();
}

// Solver stopped on an invariant violation (negative density beyond
// tolerance, rho > 1, NaN) instead of propagating garbage.
struct SolverAbort : std::runtime_error {
    explicit SolverAbort(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration input; message carries file/line where known.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline const char* version_string() { return "0.1.0"; }

} // namespace crossflow
