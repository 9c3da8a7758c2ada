#include "sweep.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace crossim {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

SweepOutcome run_sweep(const Sweep& sweep, const std::string& out_root, int jobs,
                       bool write_files) {
    const std::size_t n = sweep.values.size();
    std::vector<SweepRow> rows(n);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            SweepRow& row = rows[i];
            row.index = i;
            row.value = sweep.values[i];
            try {
                Scenario sc = sweep.materialize(i);
                row.name = sc.name;
                row.seed = sc.seed;
                row.config_hash = sc.config_hash();
                RunResult rr = run_scenario(sc);
                if (write_files) row.out_dir = rr.write(out_root);

                double srtt_sum = 0.0;
                int srtt_flows = 0;
                double vmaf_sum = 0.0;
                int sessions = 0;
                for (const auto& f : rr.flows) {
                    row.mean_goodput_bps += f.goodput_bps;
                    row.mean_throughput_bps += f.throughput_bps;
                    row.drops_aqm += f.queue_counters.dropped_aqm;
                    row.drops_overflow += f.queue_counters.dropped_overflow;
                    row.marks += f.queue_counters.marked;
                    if (f.srtt_us.count > 0) {
                        srtt_sum += f.srtt_us.mean;
                        ++srtt_flows;
                    }
                    if (f.has_session && f.qoe.segments > 0) {
                        vmaf_sum += f.qoe.mean_vmaf;
                        row.rebuffer_s += f.qoe.rebuffer_duration_s;
                        ++sessions;
                    }
                }
                if (srtt_flows > 0) row.mean_srtt_us = srtt_sum / srtt_flows;
                if (sessions > 0) {
                    row.any_session = true;
                    row.mean_vmaf = vmaf_sum / sessions;
                }
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };

    int workers = std::max(1, jobs);
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // Flag the best row: lowest mean sRTT subject to goodput within 5% of max.
    double max_goodput = 0.0;
    for (const auto& r : rows)
        if (!r.failed) max_goodput = std::max(max_goodput, r.mean_goodput_bps);
    double best_srtt = std::numeric_limits<double>::max();
    std::size_t best_idx = n;
    for (const auto& r : rows) {
        if (r.failed || r.mean_goodput_bps < 0.95 * max_goodput) continue;
        if (r.mean_srtt_us < best_srtt) {
            best_srtt = r.mean_srtt_us;
            best_idx = r.index;
        }
    }
    if (best_idx < n) rows[best_idx].best = true;

    std::ostringstream os;
    os << "index,name,value,seed,config_hash,out_dir,mean_srtt_us,mean_goodput_bps,"
          "mean_throughput_bps,drops_aqm,drops_overflow,marks,mean_vmaf,rebuffer_s,best,error\n";
    for (const auto& r : rows) {
        os << r.index << ',' << csv_escape(r.name) << ',' << csv_escape(r.value.dump()) << ','
           << r.seed << ',' << r.config_hash << ',' << csv_escape(r.out_dir) << ','
           << r.mean_srtt_us << ',' << r.mean_goodput_bps << ',' << r.mean_throughput_bps << ','
           << r.drops_aqm << ',' << r.drops_overflow << ',' << r.marks << ','
           << (r.any_session ? std::to_string(r.mean_vmaf) : "") << ','
           << (r.any_session ? std::to_string(r.rebuffer_s) : "") << ',' << (r.best ? 1 : 0)
           << ',' << csv_escape(r.error) << '\n';
    }

    SweepOutcome out;
    out.rows = std::move(rows);
    out.summary_csv = os.str();
    if (write_files) {
        namespace fs = std::filesystem;
        fs::create_directories(out_root);
        fs::path p = fs::path(out_root) / (sweep.name + "-summary.csv");
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << out.summary_csv;
        out.summary_csv_path = p.string();
    }
    return out;
}

}  // namespace crossim
