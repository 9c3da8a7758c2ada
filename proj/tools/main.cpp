// crossim command line front end. Links only the public C API.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/stat.h>

#include <CLI11.hpp>

#include "crossim.h"

namespace {

bool file_exists(const std::string& path) {
    struct stat st{};
    return ::stat(path.c_str(), &st) == 0;
}

std::string default_out_root() {
    const char* env = std::getenv("CROSSIM_OUT_ROOT");
    return env && *env ? env : "results";
}

[[noreturn]] void die(const std::string& context) {
    std::fprintf(stderr, "crossim: %s: %s\n", context.c_str(), crossim_last_error());
    std::exit(1);
}

// A scenario argument may be a file path or a preset name.
crossim_scenario* open_scenario(const std::string& source) {
    crossim_scenario* sc = nullptr;
    if (file_exists(source)) {
        if (crossim_scenario_load(source.c_str(), &sc) != CROSSIM_OK) die(source);
    } else {
        if (crossim_scenario_preset(source.c_str(), &sc) != CROSSIM_OK) die(source);
    }
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crossim: RLC-buffer AQM / transport / adaptive-streaming simulator"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string out_root = default_out_root();
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto* run = app.add_subcommand("run", "Run one scenario (file path or preset name)");
    run->add_option("scenario", scenario_arg, "Scenario file or preset name")->required();
    run->add_option("--seed", seed, "Override the scenario seed")
        ->each([&](const std::string&) { seed_given = true; });
    run->add_option("--out", out_root, "Output root directory");

    std::string sweep_arg;
    int jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep (file or sweep preset)");
    sweep->add_option("sweep", sweep_arg, "Sweep file or sweep preset name")->required();
    sweep->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_root, "Output root directory");

    std::string results_dir, plot_out;
    auto* plotdata = app.add_subcommand("plotdata", "Emit plot-ready CSVs from run outputs");
    plotdata->add_option("results", results_dir, "Directory containing run outputs")->required();
    plotdata->add_option("--out", plot_out, "Output directory (default <results>/plotdata)");

    auto* presets = app.add_subcommand("presets", "List or show built-in presets");
    std::string presets_verb, preset_name;
    presets->add_option("verb", presets_verb, "list | show")->required();
    presets->add_option("name", preset_name, "Preset name (for show)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        crossim_scenario* sc = open_scenario(scenario_arg);
        if (seed_given && crossim_scenario_set_seed(sc, seed) != CROSSIM_OK) die("set seed");
        crossim_result* result = nullptr;
        if (crossim_run(sc, &result) != CROSSIM_OK) die("run");
        char* dir = nullptr;
        if (crossim_result_write(result, out_root.c_str(), &dir) != CROSSIM_OK) die("write");
        std::printf("%s\n", dir);
        crossim_free_string(dir);
        crossim_result_free(result);
        crossim_scenario_free(sc);
        return 0;
    }

    if (sweep->parsed()) {
        char* summary = nullptr;
        if (crossim_sweep(sweep_arg.c_str(), out_root.c_str(), jobs, &summary) != CROSSIM_OK)
            die(sweep_arg);
        std::printf("%s\n", summary);
        crossim_free_string(summary);
        return 0;
    }

    if (plotdata->parsed()) {
        if (plot_out.empty()) plot_out = results_dir + "/plotdata";
        if (crossim_plotdata(results_dir.c_str(), plot_out.c_str()) != CROSSIM_OK)
            die(results_dir);
        std::printf("%s\n", plot_out.c_str());
        return 0;
    }

    if (presets->parsed()) {
        if (presets_verb == "list") {
            for (int i = 0; i < crossim_preset_count(); ++i) {
                const char* name = crossim_preset_name(i);
                std::printf("%-22s %s\n", name,
                            crossim_preset_is_sweep(name) ? "(sweep)" : "(scenario)");
            }
            return 0;
        }
        if (presets_verb == "show") {
            if (preset_name.empty()) {
                std::fprintf(stderr, "crossim: presets show requires a name\n");
                return 1;
            }
            char* text = nullptr;
            if (crossim_preset_json(preset_name.c_str(), &text) != CROSSIM_OK) die(preset_name);
            std::printf("%s\n", text);
            crossim_free_string(text);
            return 0;
        }
        std::fprintf(stderr, "crossim: unknown presets verb '%s'\n", presets_verb.c_str());
        return 1;
    }
    return 1;
}
