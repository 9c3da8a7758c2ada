#include "plotdata.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace crossim {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

// transport rows: t_us,event,seq,cwnd_bytes,bytes_in_flight,srtt_us,detail
// queue rows:     t_us,event,seq,size,occupancy_bytes,sojourn_us
// Both remap onto the shared timeline schema.
void append_events(std::ostream& out, const fs::path& csv, const std::string& scenario,
                   const std::string& flow, const std::string& source) {
    std::ifstream in(csv);
    if (!in) return;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (line.empty()) continue;
        auto f = split_csv(line);
        out << scenario << ',' << flow << ',' << source << ',';
        if (source == "transport" && f.size() >= 6) {
            out << f[0] << ',' << f[1] << ',' << f[2] << ',' << f[3] << ',' << f[4] << ',' << f[5]
                << ',' << (f.size() > 6 ? f[6] : "") << ",,,\n";
        } else if (f.size() >= 6) {
            out << f[0] << ',' << f[1] << ',' << f[2] << ",,,,," << f[3] << ',' << f[4] << ','
                << f[5] << '\n';
        }
    }
}

}  // namespace

void emit_plotdata(const std::string& results_root, const std::string& out_dir) {
    std::vector<fs::path> run_dirs;
    if (!fs::is_directory(results_root))
        throw std::runtime_error("plotdata: no such directory: " + results_root);
    for (const auto& entry : fs::directory_iterator(results_root)) {
        if (entry.is_directory() && fs::exists(entry.path() / "results.json"))
            run_dirs.push_back(entry.path());
    }
    // The root itself may be a single run directory.
    if (run_dirs.empty() && fs::exists(fs::path(results_root) / "results.json"))
        run_dirs.push_back(results_root);
    if (run_dirs.empty()) throw std::runtime_error("plotdata: no runs under " + results_root);
    std::sort(run_dirs.begin(), run_dirs.end());

    fs::create_directories(out_dir);
    std::ofstream scatter(fs::path(out_dir) / "scatter.csv", std::ios::binary);
    std::ofstream qoe(fs::path(out_dir) / "qoe.csv", std::ios::binary);
    std::ofstream timeline(fs::path(out_dir) / "timeline.csv", std::ios::binary);
    if (!scatter || !qoe || !timeline) throw std::runtime_error("plotdata: cannot write output");

    scatter << "scenario,aqm,mode,mean_goodput_bps,mean_srtt_us\n";
    qoe << "scenario,aqm,mode,cc,ecn,flow,mean_vmaf,rebuffer_duration_s,rebuffer_count,"
           "startup_delay_s,mean_level,level_switch_count\n";
    timeline << "scenario,flow,source,t_us,event,seq,cwnd_bytes,bytes_in_flight,srtt_us,detail,"
                "size,occupancy_bytes,sojourn_us\n";

    for (const auto& dir : run_dirs) {
        json r;
        {
            std::ifstream in(dir / "results.json");
            if (!in) continue;
            in >> r;
        }
        std::string scenario = r.at("scenario").value("name", dir.filename().string());
        const json& flows = r.at("flows");

        double goodput = 0.0, srtt = 0.0;
        int srtt_n = 0;
        std::string aqm = "?", mode = "?";
        for (const auto& f : flows) {
            goodput += f.at("goodput_bps").get<double>();
            if (f.at("srtt_us").at("count").get<std::uint64_t>() > 0) {
                srtt += f.at("srtt_us").at("mean").get<double>();
                ++srtt_n;
            }
            aqm = f.at("aqm").get<std::string>();
            mode = f.at("aqm_mode").get<std::string>();
        }
        goodput /= std::max<std::size_t>(flows.size(), 1);
        if (srtt_n > 0) srtt /= srtt_n;
        scatter << scenario << ',' << aqm << ',' << mode << ',' << goodput << ',' << srtt << '\n';

        for (const auto& s : r.at("sessions")) {
            int flow = s.at("flow").get<int>();
            const json& f = flows.at(flow);
            qoe << scenario << ',' << f.at("aqm").get<std::string>() << ','
                << f.at("aqm_mode").get<std::string>() << ',' << f.at("cc").get<std::string>()
                << ',' << (f.at("ecn").get<bool>() ? 1 : 0) << ',' << flow << ','
                << s.at("mean_vmaf").get<double>() << ','
                << s.at("rebuffer_duration_s").get<double>() << ','
                << s.at("rebuffer_count").get<int>() << ','
                << s.at("startup_delay_s").get<double>() << ',' << s.at("mean_level").get<double>()
                << ',' << s.at("level_switch_count").get<int>() << '\n';
        }

        for (std::size_t i = 0; i < flows.size(); ++i) {
            std::string flow = std::to_string(i);
            append_events(timeline, dir / ("flow_" + flow + "_transport.csv"), scenario, flow,
                          "transport");
            append_events(timeline, dir / ("flow_" + flow + "_queue.csv"), scenario, flow,
                          "queue");
        }
    }
}

}  // namespace crossim
