#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aqm.hpp"
#include "app.hpp"
#include "cc.hpp"
#include "channel.hpp"
#include "sim_time.hpp"

namespace crossim {

using json = nlohmann::json;

struct AqmSpec {
    AqmKind kind = AqmKind::DropTail;
    ActionMode mode = ActionMode::Drop;
    // RED/ARED thresholds, percent of buffer capacity unless *_bytes given.
    double min_th_pct = 90.0;
    double max_th_pct = 100.0;
    std::optional<double> min_th_bytes;
    std::optional<double> max_th_bytes;
    double p_max = 0.1;
    double w_q = 0.002;
    double ared_interval_s = 0.5;
    std::optional<double> alpha_inc;
    double beta_dec = 0.9;
    std::optional<double> target_low_pct;
    std::optional<double> target_high_pct;
    double codel_target_ms = 10.0;
    double codel_interval_ms = 100.0;
    double l4s_low_ms = 10.0;
    double l4s_high_ms = 25.0;
    double l4s_alpha = 0.25;
    double l4s_dt_ms = 1.0;

    // Resolve percentages against the flow's buffer capacity.
    AqmSetup resolve(std::uint64_t capacity_bytes) const;
};

enum class AppMode : std::uint8_t { Vbr, Has, Bulk };

struct FlowSpec {
    AppMode app = AppMode::Vbr;
    CcAlgo cc = CcAlgo::Cubic;
    bool ecn = false;
    bool rto_only = false;
    bool hystart = true;
    AqmSpec aqm;
    double vbr_datarate_bps = 25e6;
    double vbr_fps = 60.0;
    HasClient::Config has;
    std::string ladder_file;  // empty: built-in default ladder
};

struct ChannelSpec {
    std::string trace_file;  // exclusive with synth
    bool synthetic = true;
    LosNlosParams synth;
};

struct BufferSpec {
    double nominal_bw_bps = 500e6;
    SimTime one_way_delay = 4 * kMillisecond;
    double fraction_pct = 200.0;
    std::optional<std::uint64_t> capacity_bytes;  // overrides the BDP sizing

    std::uint64_t resolve_bytes() const;
};

struct Scenario {
    std::string name;
    double horizon_s = 100.0;
    std::uint64_t seed = 1;
    std::uint32_t mss = 1200;
    ChannelSpec channel;
    BufferSpec buffer;
    std::vector<FlowSpec> flows;
    SimTime metrics_window = 100 * kMillisecond;

    json resolved;  // canonical resolved form; input for hashing and output

    SimTime horizon() const { return from_s(horizon_s); }
    std::string config_hash() const;

    // Parses, applies defaults, rejects unknown keys, checks invariants.
    static Scenario from_json(const json& j);
    static Scenario from_file(const std::string& path);
};

struct Sweep {
    std::string name;
    Scenario base;
    json base_raw;     // unresolved form the axis values are applied to
    std::string axis;  // dot path; "" applies values as whole-document merge patches
    std::vector<json> values;

    static Sweep from_json(const json& j);
    static Sweep from_file(const std::string& path);

    // Scenario for one axis value, with the run seed derived from
    // (base seed, value index).
    Scenario materialize(std::size_t index) const;
};

// Built-in scenario and sweep presets.
std::vector<std::string> preset_names();
bool is_sweep_preset(const std::string& name);
json preset_json(const std::string& name);  // throws on unknown name
Scenario preset_scenario(const std::string& name);
Sweep preset_sweep(const std::string& name);

// Dot-path helpers shared by sweeps and the C API parameter override.
void json_set_path(json& doc, const std::string& path, const json& value);

}  // namespace crossim
