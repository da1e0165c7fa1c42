#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crossflow/compartment.hpp"
#include "crossflow/diagnostics.hpp"
#include "crossflow/lattice.hpp"
#include "crossflow/params.hpp"
#include "crossflow/stability.hpp"
#include "crossflow/types.hpp"

namespace crossflow {

enum class ModelKind { Lattice, Compartment, Pde2d, Pde1d, StabilityMap };

// Shape of the initial condition around the uniform background:
//   Diag2d: r = r_inf + A cos(pi x) sin(pi y), b = b_inf + A sin(pi x) cos(pi y)
//   Sin1d:  r = r_inf + A sin(2 pi x),         b = b_inf - A sin(2 pi x)
//   Cos1d:  r = r_inf + A cos(2 pi x),         b = b_inf - A cos(2 pi x)
enum class PerturbKind { None, Diag2d, Sin1d, Cos1d };

// One fully described experiment. Defaults are only placeholders; presets
// and config files set every field they depend on.
struct Scenario {
    std::string name = "custom";
    ModelKind model = ModelKind::Pde2d;
    ModelParams params;
    PdeMode mode = PdeMode::Parabolic;
    BoundaryDescriptor boundary;
    int n = 64;                  // grid / lattice size
    double T = 0.0;              // duration for PDE / compartment models
    long steps = 0;              // step count for lattice models
    double r_inf = 0.0, b_inf = 0.0;
    PerturbKind perturbation = PerturbKind::None;
    double amplitude = 0.0;
    double rho_omega = 0.0;      // lattice fill fraction
    double red_fraction = 0.5;
    Scheduler scheduler = Scheduler::RandomSequential;
    std::uint64_t seed = 1;
    long sample_every = 1;       // diagnostics cadence in steps
    long snapshots_every = 0;    // 0: first and last snapshot only
    int resolution = 256;        // stability map raster
    RegionMethod method = RegionMethod::Scan;
    int refinements = 0;         // >= 2 turns a compartment run into a
                                 // grid-refinement study against a fine
                                 // PDE solution
    int oracle_n = 192;          // fine-grid size for that study
};

// Flat `key = value` text, one scenario per file; '#' starts a comment.
// Unknown keys, malformed values, and invariant violations throw
// ConfigError with file:line context.
Scenario parse_config(const std::string& path);
Scenario parse_config_text(const std::string& text, const std::string& origin);
std::string serialize_config(const Scenario& sc);

// Throws ConfigError when fields are inconsistent (negative rates, mixed
// boundaries in hyperbolic mode, lattice without steps, ...).
void validate_scenario(const Scenario& sc);

// Built-in experiments; make_preset throws ConfigError for unknown names.
std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
Scenario make_preset(const std::string& name);
bool is_preset_name(const std::string& name);

// Initial states used by the run loop, exposed for direct solver driving.
Field2D initial_field_2d(const Scenario& sc);
Field1D initial_field_1d(const Scenario& sc);
LatticeState initial_lattice(const Scenario& sc, std::uint64_t seed);

struct RunOptions {
    std::optional<std::uint64_t> seed;    // overrides Scenario::seed
    std::optional<long> snapshots_every;  // overrides Scenario cadence
    std::string out_dir = ".";
    bool write_files = true;
};

// Callbacks fired at every diagnostics sample (including the initial and
// final states) with the current model time.
struct SampleHooks {
    std::function<void(double, const Field2D&)> on_field2d;
    std::function<void(double, const Field1D&)> on_field1d;
    std::function<void(double, const LatticeState&)> on_lattice;
    std::function<void(double, const CompartmentState&)> on_compartment;
};

struct RunResult {
    DiagnosticsSeries series;
    double wall_seconds = 0;
    long total_steps = 0;
    long clamped_total = 0;
    double mass_drift_rel_r = 0, mass_drift_rel_b = 0;
    bool periodic_model = false;   // conservation flag applies
    bool conservation_ok = true;
    bool mixed_model = false;      // exit-flux columns apply
    bool deadlock = false;
    std::vector<double> exit_t, exit_flux_r, exit_flux_b;
    // refinement study results (refinements >= 2)
    std::vector<double> level_h, level_error;
    double convergence_order = 0;
    std::string manifest_path;
};

// Executes the scenario: builds the initial state from the seed, steps the
// chosen model, samples diagnostics, and (when write_files) emits
// snapshots, diagnostics.csv, exit_flux.csv / region_map.csv /
// convergence.csv as applicable, and manifest.txt into out_dir. Identical
// scenario + seed give byte-identical CSV files. For a refinement study the
// hooks and the diagnostics series follow the coarsest level.
RunResult run_scenario(const Scenario& sc, const RunOptions& opt,
                       const SampleHooks* hooks = nullptr);

} // namespace crossflow
