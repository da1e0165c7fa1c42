#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crossflow/diagnostics.hpp"
#include "crossflow/lattice.hpp"
#include "crossflow/stability.hpp"
#include "crossflow/types.hpp"

namespace crossflow {

// Plot-ready emitters. All floating-point values are printed with %.17g so
// reruns with identical inputs produce byte-identical files. Every writer
// throws std::runtime_error when the file cannot be created.

// header x,y,r,b,rho; row-major over cell centers, j outer
void write_density_csv_2d(const std::string& path, const Field2D& f);

// header x,r,b,rho
void write_density_csv_1d(const std::string& path, const Field1D& f);

// header t,M_r,M_b,entropy,lyapunov,segregation,anisotropy,pert_l2
void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& d);

// header r,b,hyperbolic,in_D,max_growth,argmax_k
void write_region_map_csv(const std::string& path, const std::vector<RegionMapRow>& rows);

// header t,flux_r_exit,flux_b_exit
void write_exit_flux_csv(const std::string& path, const std::vector<double>& t,
                         const std::vector<double>& fr, const std::vector<double>& fb);

// one character per cell ('.', 'R', 'B'), rows printed top-down (j = n-1 first)
void write_lattice_text(const std::string& path, const LatticeState& s);

// header i,j,species; one row per occupied cell, row-major
void write_lattice_csv(const std::string& path, const LatticeState& s);

// 8-bit binary greyscale, values mapped linearly from [0,1] (clipped)
void write_pgm_heatmap(const std::string& path, const Array2D& a);

// key = value lines in the given order
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv);

std::string format_g17(double x);

// mkdir -p equivalent; throws std::runtime_error on failure
void ensure_directory(const std::string& path);

} // namespace crossflow
