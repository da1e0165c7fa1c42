// Command-line front end. Talks to the library exclusively through the C
// API so the CLI doubles as a smoke test of the shared-library surface.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "crossflow/capi.h"

namespace {

void print_usage(std::FILE* to) {
    std::fprintf(to,
                 "usage: crossflow <command> [options]\n"
                 "\n"
                 "commands:\n"
                 "  run <config-file|preset>   run an experiment and write its outputs\n"
                 "      [--seed N] [--out-dir DIR] [--snapshots-every N]\n"
                 "  list                       list the built-in presets\n"
                 "  validate <config-file>     parse and check a config without running\n"
                 "  map                        rasterize the stability classification\n"
                 "      [--resolution N] [--epsilon X] [--method curve|scan] [--out FILE]\n"
                 "\n"
                 "Without --out-dir, run outputs go to $CROSSFLOW_OUT/<name> when\n"
                 "CROSSFLOW_OUT is set and to out/<name> otherwise.\n"
                 "\n"
                 "  --help      show this message\n"
                 "  --version   print the library version\n"
                 "\n"
                 "exit codes: 0 success, 2 invalid usage or config, 3 solver or I/O failure\n");
}

int exit_code_for(int rc) {
    if (rc == CF_OK) return 0;
    return rc == CF_ERR_RUNTIME ? 3 : 2;
}

int report_error(int rc) {
    std::fprintf(stderr, "crossflow: error: %s\n", cf_last_error());
    return exit_code_for(rc);
}

int usage_error(const char* msg) {
    std::fprintf(stderr, "crossflow: %s\n", msg);
    print_usage(stderr);
    return 2;
}

// Accepts "--flag VALUE" and "--flag=VALUE"; advances i past the value.
bool take_value(int argc, char** argv, int& i, const char* flag, std::string& out) {
    const size_t len = std::strlen(flag);
    if (std::strncmp(argv[i], flag, len) != 0) return false;
    if (argv[i][len] == '=') {
        out = argv[i] + len + 1;
        return true;
    }
    if (argv[i][len] != '\0') return false;
    if (i + 1 >= argc) {
        out.clear();
        return true; // caller rejects the empty value
    }
    out = argv[++i];
    return true;
}

bool parse_long_arg(const std::string& s, long& out) {
    char* end = nullptr;
    out = std::strtol(s.c_str(), &end, 10);
    return end != s.c_str() && *end == '\0';
}

bool parse_u64_arg(const std::string& s, uint64_t& out) {
    char* end = nullptr;
    out = std::strtoull(s.c_str(), &end, 10);
    return end != s.c_str() && *end == '\0';
}

bool parse_double_arg(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end != s.c_str() && *end == '\0';
}

std::string default_out_base() {
    const char* env = std::getenv("CROSSFLOW_OUT");
    return env && *env ? env : "out";
}

int cmd_run(int argc, char** argv) {
    std::string target, out_dir, value;
    cf_run_options opt = {};
    opt.write_files = 1;
    for (int i = 0; i < argc; ++i) {
        if (take_value(argc, argv, i, "--seed", value)) {
            uint64_t seed = 0;
            if (!parse_u64_arg(value, seed)) return usage_error("--seed needs an unsigned integer");
            opt.has_seed = 1;
            opt.seed = seed;
        } else if (take_value(argc, argv, i, "--out-dir", value)) {
            if (value.empty()) return usage_error("--out-dir needs a path");
            out_dir = value;
        } else if (take_value(argc, argv, i, "--snapshots-every", value)) {
            long every = 0;
            if (!parse_long_arg(value, every) || every < 0)
                return usage_error("--snapshots-every needs a nonnegative integer");
            opt.has_snapshots_every = 1;
            opt.snapshots_every = every;
        } else if (argv[i][0] == '-') {
            return usage_error(("unknown option for run: " + std::string(argv[i])).c_str());
        } else if (target.empty()) {
            target = argv[i];
        } else {
            return usage_error("run takes exactly one config file or preset name");
        }
    }
    if (target.empty()) return usage_error("run needs a config file or preset name");

    cf_scenario* sc = nullptr;
    int rc = cf_preset_summary(target.c_str()) != nullptr
                 ? cf_scenario_from_preset(target.c_str(), &sc)
                 : cf_scenario_from_file(target.c_str(), &sc);
    if (rc != CF_OK) return report_error(rc);

    if (out_dir.empty()) out_dir = default_out_base() + "/" + cf_scenario_name(sc);
    opt.out_dir = out_dir.c_str();

    cf_run_summary summary = {};
    rc = cf_run(sc, &opt, &summary);
    if (rc != CF_OK) {
        cf_scenario_free(sc);
        return report_error(rc);
    }
    std::printf("run %s: ok\n", cf_scenario_name(sc));
    std::printf("  out           %s\n", out_dir.c_str());
    std::printf("  steps         %ld\n", summary.total_steps);
    std::printf("  wall_seconds  %.3f\n", summary.wall_seconds);
    if (summary.periodic_model)
        std::printf("  conservation  %s\n", summary.conservation_ok ? "ok" : "VIOLATED");
    if (summary.mixed_model)
        std::printf("  deadlock      %s\n", summary.deadlock ? "yes" : "no");
    if (summary.convergence_order != 0.0)
        std::printf("  order         %.3f\n", summary.convergence_order);
    cf_scenario_free(sc);
    return 0;
}

int cmd_list() {
    const int count = cf_preset_count();
    for (int i = 0; i < count; ++i) {
        const char* name = cf_preset_name(i);
        std::printf("%-24s %s\n", name, cf_preset_summary(name));
    }
    return 0;
}

int cmd_validate(int argc, char** argv) {
    if (argc != 1 || argv[0][0] == '-') return usage_error("validate needs exactly one config file");
    const int rc = cf_validate_file(argv[0]);
    if (rc != CF_OK) return report_error(rc);
    std::printf("ok: %s\n", argv[0]);
    return 0;
}

int cmd_map(int argc, char** argv) {
    long resolution = 256;
    double epsilon = 0.005;
    std::string method = "scan", out_path, value;
    for (int i = 0; i < argc; ++i) {
        if (take_value(argc, argv, i, "--resolution", value)) {
            if (!parse_long_arg(value, resolution) || resolution < 2)
                return usage_error("--resolution needs an integer >= 2");
        } else if (take_value(argc, argv, i, "--epsilon", value)) {
            if (!parse_double_arg(value, epsilon) || epsilon < 0)
                return usage_error("--epsilon needs a nonnegative number");
        } else if (take_value(argc, argv, i, "--method", value)) {
            if (value != "curve" && value != "scan")
                return usage_error("--method must be curve or scan");
            method = value;
        } else if (take_value(argc, argv, i, "--out", value)) {
            if (value.empty()) return usage_error("--out needs a path");
            out_path = value;
        } else {
            return usage_error(("unknown option for map: " + std::string(argv[i])).c_str());
        }
    }
    if (out_path.empty()) {
        const char* env = std::getenv("CROSSFLOW_OUT");
        out_path = env && *env ? std::string(env) + "/region_map.csv" : "region_map.csv";
    }
    const int rc = cf_region_map_csv(out_path.c_str(), static_cast<int>(resolution), epsilon,
                                     method.c_str());
    if (rc != CF_OK) return report_error(rc);
    std::printf("wrote %s (%ld x %ld, epsilon %g, %s)\n", out_path.c_str(), resolution,
                resolution, epsilon, method.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage_error("missing command");
    const std::string cmd = argv[1];
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
        print_usage(stdout);
        return 0;
    }
    if (cmd == "--version" || cmd == "version") {
        std::printf("crossflow %s\n", cf_version());
        return 0;
    }
    if (cmd == "run") return cmd_run(argc - 2, argv + 2);
    if (cmd == "list") return cmd_list();
    if (cmd == "validate") return cmd_validate(argc - 2, argv + 2);
    if (cmd == "map") return cmd_map(argc - 2, argv + 2);
    return usage_error(("unknown command: " + cmd).c_str());
}
