#include "crossflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>

namespace crossflow {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_out(const std::string& path, const char* mode = "w") {
    File f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

} // namespace

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_density_csv_2d(const std::string& path, const Field2D& f) {
    File out = open_out(path);
    std::fprintf(out.get(), "x,y,r,b,rho\n");
    const int n = f.n();
    const double h = f.h();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double r = f.r.at(i, j), b = f.b.at(i, j);
            std::fprintf(out.get(), "%.17g,%.17g,%.17g,%.17g,%.17g\n", (i + 0.5) * h,
                         (j + 0.5) * h, r, b, r + b);
        }
}

void write_density_csv_1d(const std::string& path, const Field1D& f) {
    File out = open_out(path);
    std::fprintf(out.get(), "x,r,b,rho\n");
    const int n = f.n();
    const double h = f.h();
    for (int i = 0; i < n; ++i)
        std::fprintf(out.get(), "%.17g,%.17g,%.17g,%.17g\n", (i + 0.5) * h, f.r[i], f.b[i],
                     f.r[i] + f.b[i]);
}

void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& d) {
    File out = open_out(path);
    std::fprintf(out.get(), "t,M_r,M_b,entropy,lyapunov,segregation,anisotropy,pert_l2\n");
    for (size_t k = 0; k < d.size(); ++k)
        std::fprintf(out.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", d.t[k],
                     d.M_r[k], d.M_b[k], d.entropy[k], d.lyapunov[k], d.segregation[k],
                     d.anisotropy[k], d.pert_l2[k]);
}

void write_region_map_csv(const std::string& path, const std::vector<RegionMapRow>& rows) {
    File out = open_out(path);
    std::fprintf(out.get(), "r,b,hyperbolic,in_D,max_growth,argmax_k\n");
    for (const RegionMapRow& w : rows)
        std::fprintf(out.get(), "%.17g,%.17g,%d,%d,%.17g,%d\n", w.r, w.b, w.hyperbolic ? 1 : 0,
                     w.in_D ? 1 : 0, w.max_growth, w.argmax_k);
}

void write_exit_flux_csv(const std::string& path, const std::vector<double>& t,
                         const std::vector<double>& fr, const std::vector<double>& fb) {
    if (t.size() != fr.size() || t.size() != fb.size())
        throw std::invalid_argument("exit flux columns must have equal length");
    File out = open_out(path);
    std::fprintf(out.get(), "t,flux_r_exit,flux_b_exit\n");
    for (size_t k = 0; k < t.size(); ++k)
        std::fprintf(out.get(), "%.17g,%.17g,%.17g\n", t[k], fr[k], fb[k]);
}

void write_lattice_text(const std::string& path, const LatticeState& s) {
    File out = open_out(path);
    for (int j = s.n - 1; j >= 0; --j) {
        for (int i = 0; i < s.n; ++i) {
            const std::uint8_t c = s.cells[static_cast<size_t>(j) * s.n + i];
            std::fputc(c == CellRed ? 'R' : (c == CellBlue ? 'B' : '.'), out.get());
        }
        std::fputc('\n', out.get());
    }
}

void write_lattice_csv(const std::string& path, const LatticeState& s) {
    File out = open_out(path);
    std::fprintf(out.get(), "i,j,species\n");
    for (int j = 0; j < s.n; ++j)
        for (int i = 0; i < s.n; ++i) {
            const std::uint8_t c = s.cells[static_cast<size_t>(j) * s.n + i];
            if (c != CellEmpty)
                std::fprintf(out.get(), "%d,%d,%c\n", i, j, c == CellRed ? 'R' : 'B');
        }
}

void write_pgm_heatmap(const std::string& path, const Array2D& a) {
    File out = open_out(path, "wb");
    std::fprintf(out.get(), "P5\n%d %d\n255\n", a.nx, a.ny);
    // top row first, matching image conventions
    for (int j = a.ny - 1; j >= 0; --j)
        for (int i = 0; i < a.nx; ++i) {
            double v = a.at(i, j);
            v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
            std::fputc(static_cast<int>(v * 255.0 + 0.5), out.get());
        }
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
    File out = open_out(path);
    for (const auto& [k, v] : kv) std::fprintf(out.get(), "%s = %s\n", k.c_str(), v.c_str());
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

} // namespace crossflow
