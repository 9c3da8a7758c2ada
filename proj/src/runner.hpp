#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "scenario.hpp"

namespace crossim {

struct FlowResult {
    int id = 0;
    std::string cc_name;
    bool ecn = false;
    std::string aqm_name;
    std::string aqm_mode;

    std::vector<TransportLogEntry> transport_log;
    std::vector<SrttSample> srtt_samples;
    std::vector<Receiver::Arrival> arrivals;
    std::vector<QueueEvent> queue_log;
    QueueCounters queue_counters;

    double throughput_bps = 0.0;  // all transmitted bytes over the horizon
    double goodput_bps = 0.0;     // unique in-order bytes over the horizon
    DistSummary srtt_us;
    JitterStats jitter;
    DistSummary qdelay_us;

    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_retransmitted = 0;
    std::uint64_t bytes_acked = 0;
    std::uint64_t mac_losses = 0;
    std::uint64_t rto_count = 0;
    double final_cwnd = 0.0;

    // BBR sampled 10x per second (empty for other algorithms).
    std::vector<std::pair<SimTime, double>> btl_bw_series;
    std::vector<std::pair<SimTime, SimTime>> rt_prop_series;

    bool has_session = false;
    SessionQoe qoe;
    std::vector<QoeSegment> qoe_log;
    double downloaded_s = 0.0;
    double played_s = 0.0;
    double buffer_end_s = 0.0;
};

struct RunResult {
    json resolved_scenario;
    std::string config_hash;
    std::uint64_t seed = 0;
    RunSummary summary;
    SimTime horizon = 0;
    SimTime metrics_window = 0;
    std::vector<FlowResult> flows;

    json to_results_json() const;
    // Visits every output file (name, contents) one at a time in a fixed
    // order, so large runs never hold all renderings at once.
    void for_each_file(const std::function<void(const std::string&, const std::string&)>& fn) const;
    // filename -> contents; convenient for small runs and tests
    std::map<std::string, std::string> render_files() const;
    // filename -> FNV-1a hash of the contents, streaming
    std::map<std::string, std::uint64_t> file_hashes() const;
    // Writes all output files under out_root/<run dir>; returns the dir used.
    std::string write(const std::string& out_root) const;
    std::string run_dir_name() const;
};

RunResult run_scenario(const Scenario& sc);

}  // namespace crossim
