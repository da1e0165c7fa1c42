#include "crossflow/scenario.hpp"

namespace crossflow {

namespace {

struct PresetRow {
    const char* name;
    const char* summary;
    Scenario (*build)();
};

Scenario pde2d_base() {
    Scenario sc;
    sc.model = ModelKind::Pde2d;
    sc.mode = PdeMode::Parabolic;
    sc.perturbation = PerturbKind::Diag2d;
    return sc;
}

Scenario ex2d_periodic() {
    Scenario sc = pde2d_base();
    sc.name = "ex2d_periodic";
    sc.n = 64;
    sc.T = 20.0;
    sc.params.alpha = 0.5;
    sc.params.gamma0 = 0.2;
    sc.params.gamma1 = 0.15;
    sc.params.gamma2 = 0.1;
    sc.params.epsilon = 0.05;
    sc.r_inf = 0.4;
    sc.b_inf = 0.4;
    sc.amplitude = 0.02;
    sc.sample_every = 100;
    return sc;
}

Scenario ex2d_mixed_common() {
    Scenario sc = pde2d_base();
    sc.boundary.kind = BoundaryKind::Mixed;
    sc.boundary.inflow_value = 0.1;
    sc.boundary.outflux_coeff = 0.8;
    sc.n = 64;
    sc.T = 100.0;
    sc.params.alpha = 0.5;
    sc.params.gamma0 = 0.15;
    sc.params.epsilon = 0.0025;
    sc.r_inf = 0.1;
    sc.b_inf = 0.1;
    sc.amplitude = 0.02;
    sc.sample_every = 25;
    return sc;
}

Scenario ex2d_mixed_a() {
    Scenario sc = ex2d_mixed_common();
    sc.name = "ex2d_mixed_a";
    sc.params.gamma1 = 0.2;
    sc.params.gamma2 = 0.1;
    return sc;
}

Scenario ex2d_mixed_b() {
    Scenario sc = ex2d_mixed_common();
    sc.name = "ex2d_mixed_b";
    sc.params.gamma1 = 0.1;
    sc.params.gamma2 = 0.2;
    return sc;
}

Scenario lattice_base() {
    Scenario sc;
    sc.model = ModelKind::Lattice;
    sc.scheduler = Scheduler::RandomSequential;
    sc.n = 100;
    sc.steps = 500;
    sc.red_fraction = 0.5;
    sc.sample_every = 5;
    return sc;
}

Scenario particle_mixed() {
    Scenario sc = lattice_base();
    sc.name = "particle_mixed";
    sc.params.alpha = 0.6;
    sc.params.gamma0 = 0.15;
    sc.params.gamma1 = 0.2;
    sc.params.gamma2 = 0.1;
    sc.rho_omega = 0.2;
    return sc;
}

Scenario particle_segregate() {
    Scenario sc = particle_mixed();
    sc.name = "particle_segregate";
    sc.rho_omega = 0.5;
    return sc;
}

Scenario particle_waves() {
    Scenario sc = lattice_base();
    sc.name = "particle_waves";
    sc.params.alpha = 1.0;
    sc.params.gamma0 = 0.0;
    sc.params.gamma1 = 0.2;
    sc.params.gamma2 = 0.1;
    sc.rho_omega = 0.2;
    sc.snapshots_every = 25;
    return sc;
}

Scenario pde1d_base() {
    Scenario sc;
    sc.model = ModelKind::Pde1d;
    sc.mode = PdeMode::Parabolic;
    sc.n = 100;
    sc.params.alpha = 0.5;
    sc.params.gamma0 = 0.2;
    sc.params.gamma1 = 0.15;
    sc.params.gamma2 = 0.1;
    sc.params.epsilon = 0.005;
    return sc;
}

Scenario ex1d_unstable_sin() {
    Scenario sc = pde1d_base();
    sc.name = "ex1d_unstable_sin";
    sc.T = 100.0;
    sc.r_inf = 0.3;
    sc.b_inf = 0.3;
    sc.perturbation = PerturbKind::Sin1d;
    sc.amplitude = 0.02;
    sc.sample_every = 10;
    return sc;
}

Scenario ex1d_unstable_cos() {
    Scenario sc = ex1d_unstable_sin();
    sc.name = "ex1d_unstable_cos";
    sc.perturbation = PerturbKind::Cos1d;
    sc.amplitude = 0.01;
    return sc;
}

Scenario ex1d_stable() {
    Scenario sc = pde1d_base();
    sc.name = "ex1d_stable";
    sc.T = 1000.0;
    sc.r_inf = 0.85;
    sc.b_inf = 0.1;
    sc.perturbation = PerturbKind::Sin1d;
    sc.amplitude = 0.01;
    sc.sample_every = 100;
    return sc;
}

Scenario lyapunov_decay() {
    Scenario sc = pde1d_base();
    sc.name = "lyapunov_decay";
    sc.T = 50.0;
    sc.r_inf = 0.15;
    sc.b_inf = 0.15;
    sc.perturbation = PerturbKind::Sin1d;
    sc.amplitude = 0.01;
    sc.sample_every = 10;
    return sc;
}

Scenario stability_map() {
    Scenario sc;
    sc.name = "stability_map";
    sc.model = ModelKind::StabilityMap;
    sc.resolution = 256;
    sc.params.epsilon = 0.005;
    sc.method = RegionMethod::Scan;
    return sc;
}

Scenario compartment_convergence() {
    Scenario sc;
    sc.name = "compartment_convergence";
    sc.model = ModelKind::Compartment;
    sc.n = 16;
    sc.refinements = 3;
    sc.oracle_n = 256;
    sc.T = 0.25;
    sc.params.alpha = 0.5;
    sc.params.gamma0 = 0.2;
    sc.params.gamma1 = 0.15;
    sc.params.gamma2 = 0.1;
    sc.r_inf = 0.25;
    sc.b_inf = 0.25;
    sc.perturbation = PerturbKind::Diag2d;
    sc.amplitude = 0.05;
    sc.sample_every = 1;
    return sc;
}

const PresetRow kPresets[] = {
    {"ex2d_periodic",
     "2D periodic parabolic run at equal densities 0.4; diagonal bands emerge by T=20",
     ex2d_periodic},
    {"ex2d_mixed_a",
     "2D corridor with inflow 0.1 and exit flux 0.8, gamma1=0.2 > gamma2=0.1; flowing state",
     ex2d_mixed_a},
    {"ex2d_mixed_b",
     "corridor twin of ex2d_mixed_a with gamma1/gamma2 swapped; side steps favor the crossing path",
     ex2d_mixed_b},
    {"particle_mixed",
     "lattice walk at fill 0.2; side stepping keeps the crowd mixed",
     particle_mixed},
    {"particle_segregate",
     "lattice walk at fill 0.5; same-species lanes condense and segregation grows",
     particle_segregate},
    {"particle_waves",
     "lattice walk with no bare side noise (gamma0=0); diagonal density waves drift",
     particle_waves},
    {"ex1d_unstable_sin",
     "1D counterflow at (0.3,0.3) seeded with an antisymmetric sine; the mode grows",
     ex1d_unstable_sin},
    {"ex1d_unstable_cos",
     "1D counterflow at (0.3,0.3) seeded with an antisymmetric cosine; the mode grows",
     ex1d_unstable_cos},
    {"ex1d_stable",
     "1D counterflow at (0.85,0.1); the seeded mode decays toward the uniform state",
     ex1d_stable},
    {"lyapunov_decay",
     "1D run at (0.15,0.15) tracking the relative entropy functional, which decays",
     lyapunov_decay},
    {"stability_map",
     "rasterizes hyperbolicity and the linear-instability region over the density simplex",
     stability_map},
    {"compartment_convergence",
     "grid-refinement study of the compartment map against a fine parabolic solution",
     compartment_convergence},
};

const PresetRow* find_preset(const std::string& name) {
    for (const PresetRow& row : kPresets)
        if (name == row.name) return &row;
    return nullptr;
}

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const PresetRow& row : kPresets) out.emplace_back(row.name);
    return out;
}

std::string preset_description(const std::string& name) {
    const PresetRow* row = find_preset(name);
    if (!row) throw ConfigError("unknown preset: " + name);
    return row->summary;
}

bool is_preset_name(const std::string& name) { return find_preset(name) != nullptr; }

Scenario make_preset(const std::string& name) {
    const PresetRow* row = find_preset(name);
    if (!row) throw ConfigError("unknown preset: " + name);
    Scenario sc = row->build();
    validate_scenario(sc);
    return sc;
}

} // namespace crossflow
