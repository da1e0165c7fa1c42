#include "crossflow/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "crossflow/io.hpp"
#include "crossflow/pde1d.hpp"
#include "crossflow/pde2d.hpp"

namespace crossflow {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::Lattice: return "lattice";
        case ModelKind::Compartment: return "compartment";
        case ModelKind::Pde2d: return "pde2d";
        case ModelKind::Pde1d: return "pde1d";
        case ModelKind::StabilityMap: return "stability_map";
    }
    return "?";
}

const char* mode_name(PdeMode m) {
    return m == PdeMode::Hyperbolic ? "hyperbolic" : "parabolic";
}

const char* boundary_name(BoundaryKind k) {
    return k == BoundaryKind::Periodic ? "periodic" : "mixed";
}

const char* perturb_name(PerturbKind k) {
    switch (k) {
        case PerturbKind::None: return "none";
        case PerturbKind::Diag2d: return "diag2d";
        case PerturbKind::Sin1d: return "sin1d";
        case PerturbKind::Cos1d: return "cos1d";
    }
    return "?";
}

const char* scheduler_name(Scheduler s) {
    return s == Scheduler::Synchronous ? "synchronous" : "random_sequential";
}

const char* method_name(RegionMethod m) {
    return m == RegionMethod::Curve ? "curve" : "scan";
}

std::string fmt_long(long v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%ld", v);
    return buf;
}

std::string fmt_u64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return buf;
}

// Scenario as ordered key/value pairs; shared by the config serializer and
// the run manifest so the two never drift apart.
std::vector<std::pair<std::string, std::string>> scenario_kv(const Scenario& sc) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("name", sc.name);
    kv.emplace_back("model", model_name(sc.model));
    kv.emplace_back("mode", mode_name(sc.mode));
    kv.emplace_back("boundary", boundary_name(sc.boundary.kind));
    kv.emplace_back("inflow", format_g17(sc.boundary.inflow_value));
    kv.emplace_back("outflux", format_g17(sc.boundary.outflux_coeff));
    kv.emplace_back("n", fmt_long(sc.n));
    kv.emplace_back("T", format_g17(sc.T));
    kv.emplace_back("steps", fmt_long(sc.steps));
    kv.emplace_back("alpha", format_g17(sc.params.alpha));
    kv.emplace_back("gamma0", format_g17(sc.params.gamma0));
    kv.emplace_back("gamma1", format_g17(sc.params.gamma1));
    kv.emplace_back("gamma2", format_g17(sc.params.gamma2));
    kv.emplace_back("epsilon", format_g17(sc.params.epsilon));
    kv.emplace_back("r_inf", format_g17(sc.r_inf));
    kv.emplace_back("b_inf", format_g17(sc.b_inf));
    kv.emplace_back("perturbation", perturb_name(sc.perturbation));
    kv.emplace_back("amplitude", format_g17(sc.amplitude));
    kv.emplace_back("rho_omega", format_g17(sc.rho_omega));
    kv.emplace_back("red_fraction", format_g17(sc.red_fraction));
    kv.emplace_back("scheduler", scheduler_name(sc.scheduler));
    kv.emplace_back("seed", fmt_u64(sc.seed));
    kv.emplace_back("sample_every", fmt_long(sc.sample_every));
    kv.emplace_back("snapshots_every", fmt_long(sc.snapshots_every));
    kv.emplace_back("resolution", fmt_long(sc.resolution));
    kv.emplace_back("method", method_name(sc.method));
    kv.emplace_back("refinements", fmt_long(sc.refinements));
    kv.emplace_back("oracle_n", fmt_long(sc.oracle_n));
    return kv;
}

[[noreturn]] void bad_line(const std::string& origin, int line, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        bad_line(origin, line, "value for '" + key + "' is not a finite number: '" + v + "'");
    return x;
}

long parse_long(const std::string& origin, int line, const std::string& key,
                const std::string& v) {
    char* end = nullptr;
    long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        bad_line(origin, line, "value for '" + key + "' is not an integer: '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& origin, int line, const std::string& key,
                        const std::string& v) {
    char* end = nullptr;
    unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        bad_line(origin, line, "value for '" + key + "' is not an unsigned integer: '" + v + "'");
    return x;
}

} // namespace

Scenario parse_config_text(const std::string& text, const std::string& origin) {
    Scenario sc;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) bad_line(origin, lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) bad_line(origin, lineno, "empty key");
        if (val.empty()) bad_line(origin, lineno, "empty value for '" + key + "'");

        if (key == "name") sc.name = val;
        else if (key == "model") {
            if (val == "lattice") sc.model = ModelKind::Lattice;
            else if (val == "compartment") sc.model = ModelKind::Compartment;
            else if (val == "pde2d") sc.model = ModelKind::Pde2d;
            else if (val == "pde1d") sc.model = ModelKind::Pde1d;
            else if (val == "stability_map") sc.model = ModelKind::StabilityMap;
            else bad_line(origin, lineno, "unknown model '" + val + "'");
        } else if (key == "mode") {
            if (val == "hyperbolic") sc.mode = PdeMode::Hyperbolic;
            else if (val == "parabolic") sc.mode = PdeMode::Parabolic;
            else bad_line(origin, lineno, "unknown mode '" + val + "'");
        } else if (key == "boundary") {
            if (val == "periodic") sc.boundary.kind = BoundaryKind::Periodic;
            else if (val == "mixed") sc.boundary.kind = BoundaryKind::Mixed;
            else bad_line(origin, lineno, "unknown boundary '" + val + "'");
        } else if (key == "inflow") sc.boundary.inflow_value = parse_double(origin, lineno, key, val);
        else if (key == "outflux") sc.boundary.outflux_coeff = parse_double(origin, lineno, key, val);
        else if (key == "n") sc.n = static_cast<int>(parse_long(origin, lineno, key, val));
        else if (key == "T") sc.T = parse_double(origin, lineno, key, val);
        else if (key == "steps") sc.steps = parse_long(origin, lineno, key, val);
        else if (key == "alpha") sc.params.alpha = parse_double(origin, lineno, key, val);
        else if (key == "gamma0") sc.params.gamma0 = parse_double(origin, lineno, key, val);
        else if (key == "gamma1") sc.params.gamma1 = parse_double(origin, lineno, key, val);
        else if (key == "gamma2") sc.params.gamma2 = parse_double(origin, lineno, key, val);
        else if (key == "epsilon") sc.params.epsilon = parse_double(origin, lineno, key, val);
        else if (key == "r_inf") sc.r_inf = parse_double(origin, lineno, key, val);
        else if (key == "b_inf") sc.b_inf = parse_double(origin, lineno, key, val);
        else if (key == "perturbation") {
            if (val == "none") sc.perturbation = PerturbKind::None;
            else if (val == "diag2d") sc.perturbation = PerturbKind::Diag2d;
            else if (val == "sin1d") sc.perturbation = PerturbKind::Sin1d;
            else if (val == "cos1d") sc.perturbation = PerturbKind::Cos1d;
            else bad_line(origin, lineno, "unknown perturbation '" + val + "'");
        } else if (key == "amplitude") sc.amplitude = parse_double(origin, lineno, key, val);
        else if (key == "rho_omega") sc.rho_omega = parse_double(origin, lineno, key, val);
        else if (key == "red_fraction") sc.red_fraction = parse_double(origin, lineno, key, val);
        else if (key == "scheduler") {
            if (val == "synchronous") sc.scheduler = Scheduler::Synchronous;
            else if (val == "random_sequential") sc.scheduler = Scheduler::RandomSequential;
            else bad_line(origin, lineno, "unknown scheduler '" + val + "'");
        } else if (key == "seed") sc.seed = parse_u64(origin, lineno, key, val);
        else if (key == "sample_every") sc.sample_every = parse_long(origin, lineno, key, val);
        else if (key == "snapshots_every") sc.snapshots_every = parse_long(origin, lineno, key, val);
        else if (key == "resolution") sc.resolution = static_cast<int>(parse_long(origin, lineno, key, val));
        else if (key == "method") {
            if (val == "curve") sc.method = RegionMethod::Curve;
            else if (val == "scan") sc.method = RegionMethod::Scan;
            else bad_line(origin, lineno, "unknown method '" + val + "'");
        } else if (key == "refinements") sc.refinements = static_cast<int>(parse_long(origin, lineno, key, val));
        else if (key == "oracle_n") sc.oracle_n = static_cast<int>(parse_long(origin, lineno, key, val));
        else bad_line(origin, lineno, "unknown key '" + key + "'");
    }
    validate_scenario(sc);
    return sc;
}

Scenario parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string serialize_config(const Scenario& sc) {
    std::string out;
    for (const auto& [k, v] : scenario_kv(sc)) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

void validate_scenario(const Scenario& sc) {
    auto fail = [&](const std::string& msg) { throw ConfigError(sc.name + ": " + msg); };
    try {
        require_rates(sc.params);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (!std::isfinite(sc.params.epsilon) || sc.params.epsilon < 0)
        fail("epsilon must be finite and nonnegative");
    if (sc.n < 2) fail("n must be at least 2");
    if (sc.sample_every < 1) fail("sample_every must be at least 1");
    if (sc.snapshots_every < 0) fail("snapshots_every must be nonnegative");
    if (sc.r_inf < 0 || sc.b_inf < 0 || sc.r_inf + sc.b_inf > 1)
        fail("background densities must be nonnegative with r_inf + b_inf <= 1");
    if (sc.amplitude < 0) fail("amplitude must be nonnegative");

    const bool two_d = sc.model == ModelKind::Pde2d || sc.model == ModelKind::Compartment;
    switch (sc.perturbation) {
        case PerturbKind::None: break;
        case PerturbKind::Diag2d:
            if (!two_d) fail("perturbation diag2d applies to 2D models only");
            if (sc.r_inf - sc.amplitude < 0 || sc.b_inf - sc.amplitude < 0 ||
                sc.r_inf + sc.b_inf + 2 * sc.amplitude > 1)
                fail("diag2d amplitude drives the initial data out of the density box");
            break;
        case PerturbKind::Sin1d:
        case PerturbKind::Cos1d:
            if (sc.model != ModelKind::Pde1d) fail("1D perturbations apply to pde1d only");
            if (sc.r_inf - sc.amplitude < 0 || sc.b_inf - sc.amplitude < 0)
                fail("1D amplitude drives the initial data out of the density box");
            break;
    }

    switch (sc.model) {
        case ModelKind::Lattice:
            if (sc.steps < 1) fail("lattice runs need steps >= 1");
            if (sc.rho_omega < 0 || sc.rho_omega > 1) fail("rho_omega must lie in [0,1]");
            if (sc.red_fraction < 0 || sc.red_fraction > 1) fail("red_fraction must lie in [0,1]");
            if (!validate_cfl(sc.params))
                fail("step probabilities can exceed 1: alpha*max{1, 2*gamma0+gamma1+gamma2} > 1");
            break;
        case ModelKind::Compartment: {
            if (sc.T <= 0) fail("compartment runs need T > 0");
            if (sc.params.alpha <= 0) fail("compartment runs need alpha > 0");
            if (!validate_cfl(sc.params))
                fail("step probabilities can exceed 1: alpha*max{1, 2*gamma0+gamma1+gamma2} > 1");
            if (sc.refinements != 0) {
                if (sc.refinements < 2) fail("a refinement study needs refinements >= 2");
                const int finest = sc.n << (sc.refinements - 1);
                if (sc.oracle_n < 2 * finest || sc.oracle_n % (2 * finest) != 0)
                    fail("oracle_n must be a multiple of twice the finest study grid");
            }
            break;
        }
        case ModelKind::Pde2d:
            if (sc.T <= 0) fail("pde2d runs need T > 0");
            if (sc.boundary.kind == BoundaryKind::Mixed) {
                if (sc.mode != PdeMode::Parabolic) fail("mixed boundaries require the parabolic mode");
                if (sc.boundary.inflow_value < 0 || sc.boundary.inflow_value > 1)
                    fail("inflow must lie in [0,1]");
                if (sc.boundary.outflux_coeff < 0) fail("outflux must be nonnegative");
            }
            if (sc.mode == PdeMode::Parabolic && sc.params.epsilon <= 0)
                fail("parabolic mode needs epsilon > 0");
            break;
        case ModelKind::Pde1d:
            if (sc.T <= 0) fail("pde1d runs need T > 0");
            if (sc.mode == PdeMode::Parabolic && sc.params.epsilon <= 0)
                fail("parabolic mode needs epsilon > 0");
            break;
        case ModelKind::StabilityMap:
            if (sc.resolution < 2) fail("stability_map needs resolution >= 2");
            break;
    }
}

Field2D initial_field_2d(const Scenario& sc) {
    const int n = sc.n;
    Field2D f{Array2D(n, n, sc.r_inf), Array2D(n, n, sc.b_inf)};
    if (sc.perturbation == PerturbKind::Diag2d) {
        const double h = 1.0 / n, A = sc.amplitude;
        for (int j = 0; j < n; ++j) {
            const double y = (j + 0.5) * h;
            for (int i = 0; i < n; ++i) {
                const double x = (i + 0.5) * h;
                f.r.at(i, j) += A * std::cos(kPi * x) * std::sin(kPi * y);
                f.b.at(i, j) += A * std::sin(kPi * x) * std::cos(kPi * y);
            }
        }
    }
    return f;
}

Field1D initial_field_1d(const Scenario& sc) {
    const int n = sc.n;
    Field1D f;
    f.r.assign(n, sc.r_inf);
    f.b.assign(n, sc.b_inf);
    const double h = 1.0 / n, A = sc.amplitude;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * h;
        double p = 0.0;
        if (sc.perturbation == PerturbKind::Sin1d) p = A * std::sin(2.0 * kPi * x);
        else if (sc.perturbation == PerturbKind::Cos1d) p = A * std::cos(2.0 * kPi * x);
        f.r[i] += p;
        f.b[i] -= p;
    }
    return f;
}

LatticeState initial_lattice(const Scenario& sc, std::uint64_t seed) {
    LatticeState s(sc.n, seed);
    populate_random(s, sc.rho_omega, sc.red_fraction);
    return s;
}

namespace {

// Output plumbing for one run directory.
struct Emitter {
    bool on = false;
    std::string dir;

    std::string file(const std::string& base) const { return dir + "/" + base; }
    std::string numbered(const char* stem, long step, const char* ext) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s_%08ld.%s", stem, step, ext);
        return file(buf);
    }
};

double relative_drift(double initial, double final_) {
    const double denom = std::max(std::abs(initial), 1e-300);
    return std::abs(final_ - initial) / denom;
}

double fit_loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
    const size_t n = h.size();
    double sx = 0, sy = 0;
    std::vector<double> xs(n), ys(n);
    for (size_t i = 0; i < n; ++i) {
        xs[i] = std::log(h[i]);
        ys[i] = std::log(std::max(err[i], 1e-300));
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double num = 0, den = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
}

EntropyConfig entropy_cfg_for(const Scenario& sc) {
    EntropyConfig cfg;
    cfg.epsilon = sc.params.epsilon;
    return cfg;
}

void run_pde2d(const Scenario& sc, const RunOptions& opt, const SampleHooks* hooks,
               const Emitter& em, RunResult& rr) {
    Field2D f = initial_field_2d(sc);
    const double h = f.h();
    const EntropyConfig ecfg = entropy_cfg_for(sc);
    const bool mixed = sc.boundary.kind == BoundaryKind::Mixed;
    const long snaps = opt.snapshots_every.value_or(sc.snapshots_every);
    rr.periodic_model = !mixed;
    rr.mixed_model = mixed;

    long step = 0, last_sample = -1, last_snap = -1;
    double t = 0.0;
    StepResult2d last_res;

    auto sample = [&]() {
        if (step == last_sample) return;
        last_sample = step;
        rr.series.append(t, mass_2d(f.r, h), mass_2d(f.b, h), entropy_2d(f, ecfg), NAN, NAN,
                         diagonal_anisotropy(f.r), perturbation_l2_2d(f, sc.r_inf, sc.b_inf));
        if (mixed) {
            rr.exit_t.push_back(t);
            rr.exit_flux_r.push_back(last_res.exit_flux_r);
            rr.exit_flux_b.push_back(last_res.exit_flux_b);
        }
        if (hooks && hooks->on_field2d) hooks->on_field2d(t, f);
    };
    auto snapshot = [&]() {
        if (!em.on || step == last_snap) return;
        last_snap = step;
        write_density_csv_2d(em.numbered("field", step, "csv"), f);
    };

    sample();
    snapshot();
    const double t_end = sc.T;
    while (t_end - t > 1e-12 * t_end) {
        double dt = dt_stable_2d(f, sc.params, sc.mode);
        if (t + dt > t_end) dt = t_end - t;
        last_res = pde2d_step(f, sc.params, sc.mode, sc.boundary, dt);
        rr.clamped_total += last_res.clamped;
        ++step;
        t += dt;
        if (step % sc.sample_every == 0) sample();
        if (snaps > 0 && step % snaps == 0) snapshot();
    }
    sample();
    snapshot();
    rr.total_steps = step;

    if (mixed && !rr.exit_t.empty()) {
        double peak = 0.0;
        for (size_t k = 0; k < rr.exit_t.size(); ++k)
            peak = std::max(peak, rr.exit_flux_r[k] + rr.exit_flux_b[k]);
        const double final_flux = rr.exit_flux_r.back() + rr.exit_flux_b.back();
        rr.deadlock = peak > 0.0 && final_flux < 0.1 * peak;
    }
    if (em.on) {
        write_pgm_heatmap(em.file("r_final.pgm"), f.r);
        write_pgm_heatmap(em.file("b_final.pgm"), f.b);
        if (mixed) write_exit_flux_csv(em.file("exit_flux.csv"), rr.exit_t, rr.exit_flux_r,
                                       rr.exit_flux_b);
    }
}

void run_pde1d(const Scenario& sc, const RunOptions& opt, const SampleHooks* hooks,
               const Emitter& em, RunResult& rr) {
    Field1D f = initial_field_1d(sc);
    const double h = f.h();
    const EntropyConfig ecfg = entropy_cfg_for(sc);
    const double xi_inf = 1.0 - sc.r_inf - sc.b_inf;
    const double eta_inf = sc.r_inf - sc.b_inf;
    const long snaps = opt.snapshots_every.value_or(sc.snapshots_every);
    rr.periodic_model = true;

    long step = 0, last_sample = -1, last_snap = -1;
    double t = 0.0;

    auto sample = [&]() {
        if (step == last_sample) return;
        last_sample = step;
        const XiEtaField xe = to_xi_eta(f);
        const double lyap =
            xi_inf > 0.0 ? lyapunov_relative(xe, xi_inf, eta_inf, ecfg) : NAN;
        rr.series.append(t, mass_1d(f.r, h), mass_1d(f.b, h), entropy_1d(xe, ecfg), lyap, NAN,
                         NAN, perturbation_l2_1d(f, sc.r_inf, sc.b_inf));
        if (hooks && hooks->on_field1d) hooks->on_field1d(t, f);
    };
    auto snapshot = [&]() {
        if (!em.on || step == last_snap) return;
        last_snap = step;
        write_density_csv_1d(em.numbered("profile", step, "csv"), f);
    };

    sample();
    snapshot();
    const double t_end = sc.T;
    while (t_end - t > 1e-12 * t_end) {
        double dt = dt_stable_1d(f, sc.params, sc.mode);
        if (t + dt > t_end) dt = t_end - t;
        rr.clamped_total += pde1d_step(f, sc.params, sc.mode, dt);
        ++step;
        t += dt;
        if (step % sc.sample_every == 0) sample();
        if (snaps > 0 && step % snaps == 0) snapshot();
    }
    sample();
    snapshot();
    rr.total_steps = step;
}

void run_lattice(const Scenario& sc, const RunOptions& opt, const SampleHooks* hooks,
                 const Emitter& em, RunResult& rr, std::uint64_t seed) {
    LatticeState s = initial_lattice(sc, seed);
    const double cell_area = 1.0 / (static_cast<double>(sc.n) * sc.n);
    const long snaps = opt.snapshots_every.value_or(sc.snapshots_every);
    const int blocks = sc.n % 25 == 0 ? 25 : sc.n;
    rr.periodic_model = true;

    const long reds0 = count_species(s, CellRed);
    const long blues0 = count_species(s, CellBlue);

    long last_sample = -1, last_snap = -1;
    auto sample = [&]() {
        if (s.step_count == last_sample) return;
        last_sample = s.step_count;
        const Array2D red_density = coarse_grain(s, blocks, CellRed);
        rr.series.append(static_cast<double>(s.step_count),
                         static_cast<double>(count_species(s, CellRed)) * cell_area,
                         static_cast<double>(count_species(s, CellBlue)) * cell_area, NAN, NAN,
                         segregation_index(s.cells, s.n), diagonal_anisotropy(red_density), NAN);
        if (hooks && hooks->on_lattice) hooks->on_lattice(static_cast<double>(s.step_count), s);
    };
    auto snapshot = [&]() {
        if (!em.on || s.step_count == last_snap) return;
        last_snap = s.step_count;
        write_lattice_text(em.numbered("lattice", s.step_count, "txt"), s);
        write_lattice_csv(em.numbered("lattice", s.step_count, "csv"), s);
    };

    sample();
    snapshot();
    for (long k = 0; k < sc.steps; ++k) {
        lattice_step(s, sc.params, sc.scheduler);
        if (s.step_count % sc.sample_every == 0) sample();
        if (snaps > 0 && s.step_count % snaps == 0) snapshot();
    }
    sample();
    snapshot();
    rr.total_steps = sc.steps;
    rr.conservation_ok =
        count_species(s, CellRed) == reds0 && count_species(s, CellBlue) == blues0;
    rr.mass_drift_rel_r = rr.conservation_ok ? 0.0 : 1.0;
    rr.mass_drift_rel_b = rr.mass_drift_rel_r;
}

// One compartment trajectory at size n, shared by the single-run path and
// the refinement study.
void evolve_compartment(CompartmentState& cs, const Scenario& sc, long steps,
                        const std::function<void(long)>& on_step) {
    for (long k = 0; k < steps; ++k) {
        compartment_step(cs, sc.params);
        if (on_step) on_step(cs.step_count);
    }
}

void run_compartment_single(const Scenario& sc, const RunOptions& opt, const SampleHooks* hooks,
                            const Emitter& em, RunResult& rr) {
    Scenario base = sc;
    CompartmentState cs;
    cs.f = initial_field_2d(base);
    const double h = cs.f.h();
    // the discrete map advances physical time alpha*h per step
    const double dt_map = sc.params.alpha * h;
    const long steps = std::lround(sc.T / dt_map);
    EntropyConfig ecfg;
    ecfg.epsilon = 0.5 * h; // the map's intrinsic diffusion scale
    const long snaps = opt.snapshots_every.value_or(sc.snapshots_every);
    rr.periodic_model = true;

    long last_sample = -1, last_snap = -1;
    auto sample = [&]() {
        if (cs.step_count == last_sample) return;
        last_sample = cs.step_count;
        const double t = cs.step_count * dt_map;
        rr.series.append(t, mass_2d(cs.f.r, h), mass_2d(cs.f.b, h), entropy_2d(cs.f, ecfg), NAN,
                         NAN, diagonal_anisotropy(cs.f.r),
                         perturbation_l2_2d(cs.f, sc.r_inf, sc.b_inf));
        if (hooks && hooks->on_compartment) hooks->on_compartment(t, cs);
    };
    auto snapshot = [&]() {
        if (!em.on || cs.step_count == last_snap) return;
        last_snap = cs.step_count;
        write_density_csv_2d(em.numbered("field", cs.step_count, "csv"), cs.f);
    };

    sample();
    snapshot();
    evolve_compartment(cs, sc, steps, [&](long k) {
        if (k % sc.sample_every == 0) sample();
        if (snaps > 0 && k % snaps == 0) snapshot();
    });
    sample();
    snapshot();
    rr.total_steps = steps;
}

// Refinement study: compartment solutions on n, 2n, ... are compared at
// time T against block-averaged fine-grid parabolic PDE solutions computed
// with the matched diffusion scale eps = h/2 of each level. The reference
// grid scales with the level (oracle_n is the finest level's), keeping the
// reference bias a fixed small fraction of each level's error so the
// log-log fit sees the asymptotic order instead of a reference floor.
void run_compartment_study(const Scenario& sc, const SampleHooks* hooks, const Emitter& em,
                           RunResult& rr) {
    rr.periodic_model = true;
    double worst_drift_r = 0.0, worst_drift_b = 0.0;

    for (int level = 0; level < sc.refinements; ++level) {
        const int N = sc.n << level;
        Scenario lvl = sc;
        lvl.n = N;
        lvl.params.epsilon = 0.5 / N; // eps = h/2

        CompartmentState cs;
        cs.f = initial_field_2d(lvl);
        const double h = cs.f.h();
        const double dt_map = sc.params.alpha * h;
        const long steps = std::lround(sc.T / dt_map);
        const double mr0 = mass_2d(cs.f.r, h), mb0 = mass_2d(cs.f.b, h);

        if (level == 0) {
            EntropyConfig ecfg;
            ecfg.epsilon = 0.5 * h;
            long last_sample = -1;
            auto sample = [&]() {
                if (cs.step_count == last_sample) return;
                last_sample = cs.step_count;
                const double t = cs.step_count * dt_map;
                rr.series.append(t, mass_2d(cs.f.r, h), mass_2d(cs.f.b, h),
                                 entropy_2d(cs.f, ecfg), NAN, NAN, diagonal_anisotropy(cs.f.r),
                                 perturbation_l2_2d(cs.f, sc.r_inf, sc.b_inf));
                if (hooks && hooks->on_compartment) hooks->on_compartment(t, cs);
            };
            sample();
            evolve_compartment(cs, lvl, steps, [&](long k) {
                if (k % sc.sample_every == 0) sample();
            });
            sample();
            rr.total_steps = steps;
        } else {
            evolve_compartment(cs, lvl, steps, nullptr);
        }
        worst_drift_r = std::max(worst_drift_r, relative_drift(mr0, mass_2d(cs.f.r, h)));
        worst_drift_b = std::max(worst_drift_b, relative_drift(mb0, mass_2d(cs.f.b, h)));

        // Parabolic reference with the same eps, solved on two nested fine
        // grids and extrapolated (2*fine - coarse) to cancel the advection
        // scheme's leading O(h) error; the face speeds keep one sign on
        // this data, so that expansion is smooth and extrapolation is
        // clean. Each reference is block-averaged down to N x N first.
        const int fine_n = sc.oracle_n >> (sc.refinements - 1 - level);
        Field2D ref[2]; // block-averaged references, [0]=coarse, [1]=fine
        for (int which = 0; which < 2; ++which) {
            Scenario osc = lvl;
            osc.n = which == 0 ? fine_n / 2 : fine_n;
            Field2D of = initial_field_2d(osc);
            const double oh = of.h();
            const double omr0 = mass_2d(of.r, oh), omb0 = mass_2d(of.b, oh);
            double t = 0.0;
            BoundaryDescriptor periodic;
            while (sc.T - t > 1e-12 * sc.T) {
                double dt = dt_stable_2d(of, osc.params, PdeMode::Parabolic);
                if (t + dt > sc.T) dt = sc.T - t;
                pde2d_step(of, osc.params, PdeMode::Parabolic, periodic, dt);
                t += dt;
            }
            worst_drift_r = std::max(worst_drift_r, relative_drift(omr0, mass_2d(of.r, oh)));
            worst_drift_b = std::max(worst_drift_b, relative_drift(omb0, mass_2d(of.b, oh)));

            const int m = osc.n / N;
            const double inv = 1.0 / (static_cast<double>(m) * m);
            ref[which] = Field2D{Array2D(N, N, 0.0), Array2D(N, N, 0.0)};
            for (int J = 0; J < N; ++J)
                for (int I = 0; I < N; ++I) {
                    double ar = 0.0, ab = 0.0;
                    for (int v = 0; v < m; ++v)
                        for (int u = 0; u < m; ++u) {
                            ar += of.r.at(I * m + u, J * m + v);
                            ab += of.b.at(I * m + u, J * m + v);
                        }
                    ref[which].r.at(I, J) = ar * inv;
                    ref[which].b.at(I, J) = ab * inv;
                }
        }

        KahanSum err;
        for (int J = 0; J < N; ++J)
            for (int I = 0; I < N; ++I) {
                const double rr_ref = 2.0 * ref[1].r.at(I, J) - ref[0].r.at(I, J);
                const double rb_ref = 2.0 * ref[1].b.at(I, J) - ref[0].b.at(I, J);
                err.add(std::abs(cs.f.r.at(I, J) - rr_ref));
                err.add(std::abs(cs.f.b.at(I, J) - rb_ref));
            }
        rr.level_h.push_back(h);
        rr.level_error.push_back(err.value() * h * h);
    }

    rr.mass_drift_rel_r = worst_drift_r;
    rr.mass_drift_rel_b = worst_drift_b;
    rr.conservation_ok = worst_drift_r < 1e-10 && worst_drift_b < 1e-10;
    rr.convergence_order = fit_loglog_slope(rr.level_h, rr.level_error);

    if (em.on) {
        std::FILE* out = std::fopen(em.file("convergence.csv").c_str(), "w");
        if (!out) throw std::runtime_error("cannot open for writing: " + em.file("convergence.csv"));
        std::fprintf(out, "level,n,oracle_n,h,epsilon,l1_error\n");
        for (size_t l = 0; l < rr.level_h.size(); ++l)
            std::fprintf(out, "%zu,%d,%d,%.17g,%.17g,%.17g\n", l, sc.n << l,
                         sc.oracle_n >> (sc.refinements - 1 - static_cast<int>(l)),
                         rr.level_h[l], 0.5 * rr.level_h[l], rr.level_error[l]);
        std::fclose(out);
    }
}

void run_stability_map(const Scenario& sc, const Emitter& em, RunResult& rr) {
    const std::vector<RegionMapRow> rows =
        raster_region_map(sc.resolution, sc.params.epsilon, sc.method);
    rr.total_steps = static_cast<long>(rows.size());
    if (em.on) write_region_map_csv(em.file("region_map.csv"), rows);
}

} // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& opt, const SampleHooks* hooks) {
    validate_scenario(sc);
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = opt.seed.value_or(sc.seed);

    Emitter em;
    em.on = opt.write_files;
    em.dir = opt.out_dir.empty() ? "." : opt.out_dir;
    if (em.on) ensure_directory(em.dir);

    RunResult rr;
    switch (sc.model) {
        case ModelKind::Pde2d: run_pde2d(sc, opt, hooks, em, rr); break;
        case ModelKind::Pde1d: run_pde1d(sc, opt, hooks, em, rr); break;
        case ModelKind::Lattice: run_lattice(sc, opt, hooks, em, rr, seed); break;
        case ModelKind::Compartment:
            if (sc.refinements >= 2) run_compartment_study(sc, hooks, em, rr);
            else run_compartment_single(sc, opt, hooks, em, rr);
            break;
        case ModelKind::StabilityMap: run_stability_map(sc, em, rr); break;
    }

    // mass bookkeeping from the sampled series (lattice and the study set
    // their own flags above)
    if (sc.model != ModelKind::Lattice && sc.refinements < 2 && rr.series.size() >= 2) {
        rr.mass_drift_rel_r = relative_drift(rr.series.M_r.front(), rr.series.M_r.back());
        rr.mass_drift_rel_b = relative_drift(rr.series.M_b.front(), rr.series.M_b.back());
        if (rr.periodic_model)
            rr.conservation_ok = rr.mass_drift_rel_r < 1e-10 && rr.mass_drift_rel_b < 1e-10;
    }

    rr.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (em.on) {
        if (sc.model != ModelKind::StabilityMap)
            write_diagnostics_csv(em.file("diagnostics.csv"), rr.series);
        auto kv = scenario_kv(sc);
        kv.emplace_back("effective_seed", fmt_u64(seed));
        kv.emplace_back("version", version_string());
        kv.emplace_back("wall_seconds", format_g17(rr.wall_seconds));
        kv.emplace_back("total_steps", fmt_long(rr.total_steps));
        kv.emplace_back("clamped_cells", fmt_long(rr.clamped_total));
        if (rr.series.size() > 0 && sc.model != ModelKind::StabilityMap) {
            kv.emplace_back("M_r_initial", format_g17(rr.series.M_r.front()));
            kv.emplace_back("M_r_final", format_g17(rr.series.M_r.back()));
            kv.emplace_back("M_b_initial", format_g17(rr.series.M_b.front()));
            kv.emplace_back("M_b_final", format_g17(rr.series.M_b.back()));
            kv.emplace_back("mass_drift_rel_r", format_g17(rr.mass_drift_rel_r));
            kv.emplace_back("mass_drift_rel_b", format_g17(rr.mass_drift_rel_b));
        }
        if (rr.periodic_model)
            kv.emplace_back("conservation_ok", rr.conservation_ok ? "true" : "false");
        if (rr.mixed_model) {
            kv.emplace_back("deadlock", rr.deadlock ? "true" : "false");
            if (!rr.exit_t.empty()) {
                double peak = 0.0;
                for (size_t k = 0; k < rr.exit_t.size(); ++k)
                    peak = std::max(peak, rr.exit_flux_r[k] + rr.exit_flux_b[k]);
                kv.emplace_back("peak_exit_flux", format_g17(peak));
                kv.emplace_back("final_exit_flux",
                                format_g17(rr.exit_flux_r.back() + rr.exit_flux_b.back()));
            }
        }
        if (sc.refinements >= 2) {
            kv.emplace_back("convergence_order", format_g17(rr.convergence_order));
            for (size_t l = 0; l < rr.level_error.size(); ++l)
                kv.emplace_back("level_" + std::to_string(l) + "_l1_error",
                                format_g17(rr.level_error[l]));
        }
        rr.manifest_path = em.file("manifest.txt");
        write_manifest(rr.manifest_path, kv);
    }
    return rr;
}

} // namespace crossflow
