#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "crossim.h"

namespace fs = std::filesystem;

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    crossim_free_string(s);
    return out;
}

const char* kTiny = R"({
  "name": "capi-tiny",
  "horizon_s": 1.0,
  "seed": 2,
  "channel": {"synth": {"los_capacity_bps": 10e6, "nlos_capacity_bps": 10e6,
                         "los_duration_s": 1.0, "nlos_duration_s": 1.0}},
  "flow_count": 1,
  "flow_defaults": {"app": "bulk", "cc": "reno"}
})";

}  // namespace

TEST_CASE("version and presets enumerate") {
    CHECK(std::strlen(crossim_version()) > 0);
    REQUIRE(crossim_preset_count() > 0);
    bool found = false;
    for (int i = 0; i < crossim_preset_count(); ++i) {
        std::string name = crossim_preset_name(i);
        if (name == "table5-A") found = true;
    }
    CHECK(found);
    CHECK(crossim_preset_name(-1) == nullptr);
    CHECK(crossim_preset_name(10000) == nullptr);
    CHECK(crossim_preset_is_sweep("fig6-grid") == 1);
    CHECK(crossim_preset_is_sweep("table5-A") == 0);
}

TEST_CASE("scenario parse, mutate, resolve") {
    crossim_scenario* sc = nullptr;
    REQUIRE(crossim_scenario_parse(kTiny, &sc) == CROSSIM_OK);
    CHECK(crossim_scenario_set_seed(sc, 77) == CROSSIM_OK);
    CHECK(crossim_scenario_set(sc, "horizon_s", "0.5") == CROSSIM_OK);
    // A bad mutation leaves the handle usable.
    CHECK(crossim_scenario_set(sc, "nonsense_key", "1") != CROSSIM_OK);
    CHECK(std::string(crossim_last_error()).find("nonsense_key") != std::string::npos);
    char* text = nullptr;
    REQUIRE(crossim_scenario_json(sc, &text) == CROSSIM_OK);
    std::string resolved = take(text);
    CHECK(resolved.find("\"seed\": 77") != std::string::npos);
    crossim_scenario_free(sc);
}

TEST_CASE("parse errors carry a message") {
    crossim_scenario* sc = nullptr;
    CHECK(crossim_scenario_parse("{not json", &sc) == CROSSIM_ERR_PARSE);
    CHECK(std::strlen(crossim_last_error()) > 0);
    CHECK(crossim_scenario_preset("no-such-preset", &sc) == CROSSIM_ERR_NOT_FOUND);
    CHECK(crossim_scenario_load("/no/such/file.json", &sc) != CROSSIM_OK);
}

TEST_CASE("scenario round trip through a file") {
    fs::path path = fs::temp_directory_path() / "crossim-capi-scenario.json";
    {
        std::ofstream out(path);
        out << kTiny;
    }
    crossim_scenario* sc = nullptr;
    REQUIRE(crossim_scenario_load(path.string().c_str(), &sc) == CROSSIM_OK);
    char* text = nullptr;
    REQUIRE(crossim_scenario_json(sc, &text) == CROSSIM_OK);
    CHECK(take(text).find("capi-tiny") != std::string::npos);
    crossim_scenario_free(sc);
    fs::remove(path);
}

TEST_CASE("run, fetch json, write files") {
    crossim_scenario* sc = nullptr;
    REQUIRE(crossim_scenario_parse(kTiny, &sc) == CROSSIM_OK);
    crossim_result* result = nullptr;
    REQUIRE(crossim_run(sc, &result) == CROSSIM_OK);

    char* text = nullptr;
    REQUIRE(crossim_result_json(result, &text) == CROSSIM_OK);
    std::string json_text = take(text);
    CHECK(json_text.find("\"config_hash\"") != std::string::npos);
    CHECK(json_text.find("\"goodput_bps\"") != std::string::npos);

    fs::path root = fs::temp_directory_path() / "crossim-capi-test";
    fs::remove_all(root);
    char* dir = nullptr;
    REQUIRE(crossim_result_write(result, root.string().c_str(), &dir) == CROSSIM_OK);
    std::string out_dir = take(dir);
    CHECK(fs::exists(fs::path(out_dir) / "results.json"));
    CHECK(fs::exists(fs::path(out_dir) / "flow_0_transport.csv"));

    crossim_result_free(result);
    crossim_scenario_free(sc);

    // plotdata over the run directory root
    fs::path plots = root / "plotdata";
    REQUIRE(crossim_plotdata(root.string().c_str(), plots.string().c_str()) == CROSSIM_OK);
    CHECK(fs::exists(plots / "scatter.csv"));
    CHECK(fs::exists(plots / "timeline.csv"));
    CHECK(fs::exists(plots / "qoe.csv"));
    fs::remove_all(root);
}

TEST_CASE("sweep from inline json writes a summary") {
    std::string sweep = std::string("{\"name\":\"capi-sweep\",\"base\":") + kTiny +
                        ",\"axis\":\"seed\",\"values\":[1,2]}";
    fs::path root = fs::temp_directory_path() / "crossim-capi-sweep";
    fs::remove_all(root);
    char* summary = nullptr;
    REQUIRE(crossim_sweep(sweep.c_str(), root.string().c_str(), 2, &summary) == CROSSIM_OK);
    std::string path = take(summary);
    REQUIRE(fs::exists(path));
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header.find("mean_srtt_us") != std::string::npos);
    CHECK(header.find("best") != std::string::npos);
    int lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 2);
    fs::remove_all(root);
}

TEST_CASE("null arguments are rejected, not crashed on") {
    CHECK(crossim_scenario_load(nullptr, nullptr) == CROSSIM_ERR_INVALID_ARG);
    CHECK(crossim_run(nullptr, nullptr) == CROSSIM_ERR_INVALID_ARG);
    CHECK(crossim_plotdata(nullptr, nullptr) == CROSSIM_ERR_INVALID_ARG);
}
