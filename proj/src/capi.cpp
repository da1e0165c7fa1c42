#include "crossflow/capi.h"

#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "crossflow/io.hpp"
#include "crossflow/scenario.hpp"
#include "crossflow/types.hpp"

struct cf_scenario {
    crossflow::Scenario sc;
};

namespace {

thread_local std::string g_error;

void set_error(const char* msg) { g_error = msg ? msg : ""; }

// Maps the library's exception taxonomy onto the C status codes.
template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const crossflow::ConfigError& e) {
        set_error(e.what());
        return CF_ERR_CONFIG;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return CF_ERR_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return CF_ERR_RUNTIME;
    } catch (...) {
        set_error("unknown failure");
        return CF_ERR_RUNTIME;
    }
}

int require(bool ok, const char* msg) {
    if (ok) return CF_OK;
    set_error(msg);
    return CF_ERR_ARGUMENT;
}

const std::vector<std::string>& preset_name_table() {
    static const std::vector<std::string> names = crossflow::preset_names();
    return names;
}

} // namespace

extern "C" {

const char* cf_version(void) { return crossflow::version_string(); }

const char* cf_last_error(void) { return g_error.c_str(); }

int cf_scenario_from_file(const char* path, cf_scenario** out) {
    if (int rc = require(path && out, "cf_scenario_from_file: NULL argument")) return rc;
    return guarded([&] {
        *out = new cf_scenario{crossflow::parse_config(path)};
        return CF_OK;
    });
}

int cf_scenario_from_text(const char* text, const char* origin, cf_scenario** out) {
    if (int rc = require(text && out, "cf_scenario_from_text: NULL argument")) return rc;
    return guarded([&] {
        *out = new cf_scenario{
            crossflow::parse_config_text(text, origin ? origin : "<text>")};
        return CF_OK;
    });
}

int cf_scenario_from_preset(const char* name, cf_scenario** out) {
    if (int rc = require(name && out, "cf_scenario_from_preset: NULL argument")) return rc;
    return guarded([&] {
        *out = new cf_scenario{crossflow::make_preset(name)};
        return CF_OK;
    });
}

void cf_scenario_free(cf_scenario* sc) { delete sc; }

int cf_scenario_serialize(const cf_scenario* sc, char* buf, size_t cap, size_t* needed) {
    if (int rc = require(sc != nullptr, "cf_scenario_serialize: NULL scenario")) return rc;
    return guarded([&] {
        const std::string text = crossflow::serialize_config(sc->sc);
        if (needed) *needed = text.size() + 1;
        if (buf && cap > 0) {
            const size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
        return CF_OK;
    });
}

const char* cf_scenario_name(const cf_scenario* sc) {
    return sc ? sc->sc.name.c_str() : nullptr;
}

int cf_preset_count(void) { return static_cast<int>(preset_name_table().size()); }

const char* cf_preset_name(int index) {
    const auto& names = preset_name_table();
    if (index < 0 || static_cast<size_t>(index) >= names.size()) return nullptr;
    return names[static_cast<size_t>(index)].c_str();
}

const char* cf_preset_summary(const char* name) {
    if (!name || !crossflow::is_preset_name(name)) return nullptr;
    thread_local std::string summary;
    summary = crossflow::preset_description(name);
    return summary.c_str();
}

int cf_run(const cf_scenario* sc, const cf_run_options* opt, cf_run_summary* summary) {
    if (int rc = require(sc != nullptr, "cf_run: NULL scenario")) return rc;
    return guarded([&] {
        crossflow::RunOptions ro;
        if (opt) {
            if (opt->out_dir) ro.out_dir = opt->out_dir;
            if (opt->has_seed) ro.seed = opt->seed;
            if (opt->has_snapshots_every) ro.snapshots_every = opt->snapshots_every;
            ro.write_files = opt->write_files != 0;
        }
        const crossflow::RunResult rr = crossflow::run_scenario(sc->sc, ro);
        if (summary) {
            summary->wall_seconds = rr.wall_seconds;
            summary->total_steps = rr.total_steps;
            summary->clamped_cells = rr.clamped_total;
            summary->mass_drift_rel_r = rr.mass_drift_rel_r;
            summary->mass_drift_rel_b = rr.mass_drift_rel_b;
            summary->periodic_model = rr.periodic_model ? 1 : 0;
            summary->conservation_ok = rr.conservation_ok ? 1 : 0;
            summary->mixed_model = rr.mixed_model ? 1 : 0;
            summary->deadlock = rr.deadlock ? 1 : 0;
            summary->convergence_order = rr.convergence_order;
        }
        return CF_OK;
    });
}

int cf_region_map_csv(const char* path, int resolution, double epsilon, const char* method) {
    if (int rc = require(path != nullptr, "cf_region_map_csv: NULL path")) return rc;
    if (int rc = require(resolution >= 2, "cf_region_map_csv: resolution must be >= 2"))
        return rc;
    if (int rc = require(epsilon >= 0.0 && epsilon == epsilon,
                         "cf_region_map_csv: epsilon must be finite and nonnegative"))
        return rc;
    crossflow::RegionMethod m = crossflow::RegionMethod::Scan;
    if (method) {
        if (std::strcmp(method, "curve") == 0) m = crossflow::RegionMethod::Curve;
        else if (std::strcmp(method, "scan") == 0) m = crossflow::RegionMethod::Scan;
        else return require(false, "cf_region_map_csv: method must be 'curve' or 'scan'");
    }
    return guarded([&] {
        crossflow::write_region_map_csv(path,
                                        crossflow::raster_region_map(resolution, epsilon, m));
        return CF_OK;
    });
}

int cf_validate_file(const char* path) {
    if (int rc = require(path != nullptr, "cf_validate_file: NULL path")) return rc;
    return guarded([&] {
        crossflow::parse_config(path);
        return CF_OK;
    });
}

} // extern "C"
