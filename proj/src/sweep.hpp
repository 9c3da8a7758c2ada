#pragma once

#include <string>
#include <vector>

#include "runner.hpp"
#include "scenario.hpp"

namespace crossim {

struct SweepRow {
    std::size_t index = 0;
    std::string name;
    json value;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string out_dir;
    bool failed = false;
    std::string error;

    double mean_srtt_us = 0.0;
    double mean_goodput_bps = 0.0;
    double mean_throughput_bps = 0.0;
    std::uint64_t drops_aqm = 0;
    std::uint64_t drops_overflow = 0;
    std::uint64_t marks = 0;
    bool any_session = false;
    double mean_vmaf = 0.0;
    double rebuffer_s = 0.0;
    bool best = false;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::string summary_csv;       // also written to <out_root>/<name>-summary.csv
    std::string summary_csv_path;
};

// One isolated run per axis value, up to `jobs` in parallel. Failures are
// recorded in their row and the sweep continues. The "best" row minimizes
// mean sRTT among rows whose goodput is within 5% of the sweep maximum.
SweepOutcome run_sweep(const Sweep& sweep, const std::string& out_root, int jobs,
                       bool write_files = true);

}  // namespace crossim
