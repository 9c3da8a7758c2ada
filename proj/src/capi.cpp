#include "crossim.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "plotdata.hpp"
#include "runner.hpp"
#include "scenario.hpp"
#include "sweep.hpp"

using namespace crossim;

struct crossim_scenario {
    json raw;  // unresolved; re-validated after every mutation
};

struct crossim_result {
    RunResult result;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

crossim_status fail(crossim_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
crossim_status guarded(crossim_status failure_code, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return fail(failure_code, e.what());
    } catch (...) {
        return fail(CROSSIM_ERR_RUNTIME, "unknown error");
    }
}

}  // namespace

extern "C" {

const char* crossim_version(void) { return "0.1.0"; }

const char* crossim_last_error(void) { return g_last_error.c_str(); }

void crossim_free_string(char* s) { std::free(s); }

crossim_status crossim_scenario_load(const char* path, crossim_scenario** out) {
    if (!path || !out) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_PARSE, [&] {
        std::ifstream in(path);
        if (!in) return fail(CROSSIM_ERR_IO, std::string("cannot open ") + path);
        json j;
        in >> j;
        (void)Scenario::from_json(j);  // validate now
        *out = new crossim_scenario{std::move(j)};
        return CROSSIM_OK;
    });
}

crossim_status crossim_scenario_parse(const char* json_text, crossim_scenario** out) {
    if (!json_text || !out) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_PARSE, [&] {
        json j = json::parse(json_text);
        (void)Scenario::from_json(j);
        *out = new crossim_scenario{std::move(j)};
        return CROSSIM_OK;
    });
}

crossim_status crossim_scenario_preset(const char* name, crossim_scenario** out) {
    if (!name || !out) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_NOT_FOUND, [&] {
        if (is_sweep_preset(name))
            return fail(CROSSIM_ERR_INVALID_ARG,
                        std::string(name) + " is a sweep preset; use crossim_sweep");
        json j = preset_json(name);
        *out = new crossim_scenario{std::move(j)};
        return CROSSIM_OK;
    });
}

crossim_status crossim_scenario_set_seed(crossim_scenario* sc, uint64_t seed) {
    if (!sc) return fail(CROSSIM_ERR_INVALID_ARG, "null scenario");
    sc->raw["seed"] = seed;
    return CROSSIM_OK;
}

crossim_status crossim_scenario_set(crossim_scenario* sc, const char* dot_path,
                                    const char* json_value) {
    if (!sc || !dot_path || !json_value) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_PARSE, [&] {
        json v = json::parse(json_value);
        json candidate = sc->raw;
        json_set_path(candidate, dot_path, v);
        (void)Scenario::from_json(candidate);  // keep the handle always valid
        sc->raw = std::move(candidate);
        return CROSSIM_OK;
    });
}

crossim_status crossim_scenario_json(const crossim_scenario* sc, char** out_text) {
    if (!sc || !out_text) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_PARSE, [&] {
        Scenario s = Scenario::from_json(sc->raw);
        *out_text = dup_string(s.resolved.dump(2));
        return CROSSIM_OK;
    });
}

void crossim_scenario_free(crossim_scenario* sc) { delete sc; }

crossim_status crossim_run(const crossim_scenario* sc, crossim_result** out) {
    if (!sc || !out) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_RUNTIME, [&] {
        Scenario s = Scenario::from_json(sc->raw);
        auto* r = new crossim_result{run_scenario(s)};
        *out = r;
        return CROSSIM_OK;
    });
}

crossim_status crossim_result_json(const crossim_result* r, char** out_text) {
    if (!r || !out_text) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_RUNTIME, [&] {
        *out_text = dup_string(r->result.to_results_json().dump(2));
        return CROSSIM_OK;
    });
}

crossim_status crossim_result_write(const crossim_result* r, const char* out_root,
                                    char** out_dir) {
    if (!r || !out_root) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_IO, [&] {
        std::string dir = r->result.write(out_root);
        if (out_dir) *out_dir = dup_string(dir);
        return CROSSIM_OK;
    });
}

void crossim_result_free(crossim_result* r) { delete r; }

crossim_status crossim_sweep(const char* source, const char* out_root, int jobs,
                             char** out_summary) {
    if (!source || !out_root) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_RUNTIME, [&] {
        Sweep sw;
        std::string src = source;
        if (!src.empty() && src.front() == '{') {
            sw = Sweep::from_json(json::parse(src));
        } else if (is_sweep_preset(src)) {
            sw = preset_sweep(src);
        } else if (std::filesystem::exists(src)) {
            sw = Sweep::from_file(src);
        } else {
            return fail(CROSSIM_ERR_NOT_FOUND, "no sweep file or preset named " + src);
        }
        SweepOutcome outcome = run_sweep(sw, out_root, jobs);
        if (out_summary) *out_summary = dup_string(outcome.summary_csv_path);
        return CROSSIM_OK;
    });
}

crossim_status crossim_plotdata(const char* results_root, const char* out_dir) {
    if (!results_root || !out_dir) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_IO, [&] {
        emit_plotdata(results_root, out_dir);
        return CROSSIM_OK;
    });
}

int crossim_preset_count(void) { return static_cast<int>(preset_names().size()); }

const char* crossim_preset_name(int index) {
    static thread_local std::string name;
    auto names = preset_names();
    if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
    name = names[static_cast<std::size_t>(index)];
    return name.c_str();
}

int crossim_preset_is_sweep(const char* name) {
    return name && is_sweep_preset(name) ? 1 : 0;
}

crossim_status crossim_preset_json(const char* name, char** out_text) {
    if (!name || !out_text) return fail(CROSSIM_ERR_INVALID_ARG, "null argument");
    return guarded(CROSSIM_ERR_NOT_FOUND, [&] {
        *out_text = dup_string(preset_json(name).dump(2));
        return CROSSIM_OK;
    });
}

}  // extern "C"
